#pragma once

// Reference computations for tests. Nothing here shares code with the
// library: windows are z-normalized explicitly and distances are summed
// element by element, O(n^2 m).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

struct WindowMoments {
  long double mean = 0;
  long double centered_ss = 0;
};

inline WindowMoments moments(std::span<const double> w) {
  WindowMoments r;
  for (double x : w) r.mean += x;
  r.mean /= static_cast<long double>(w.size());
  for (double x : w) r.centered_ss += (x - r.mean) * (x - r.mean);
  return r;
}

inline bool flat(const WindowMoments& mo, std::size_t m) {
  const long double scale = mo.mean * mo.mean > 1 ? mo.mean * mo.mean : 1;
  return mo.centered_ss <= 1e-13L * static_cast<long double>(m) * scale;
}

/// z-scores (x - mean) / sigma with population sigma, so a window's squared
/// norm is m.
struct ZWindows {
  std::size_t m = 0;
  std::vector<std::vector<double>> z;
  std::vector<bool> is_flat;
};

inline ZWindows znormalize(std::span<const double> t, std::size_t m) {
  ZWindows out;
  out.m = m;
  const std::size_t n_sub = t.size() - m + 1;
  out.z.resize(n_sub);
  out.is_flat.resize(n_sub);
  for (std::size_t i = 0; i < n_sub; ++i) {
    const auto mo = moments(t.subspan(i, m));
    out.is_flat[i] = flat(mo, m);
    auto& z = out.z[i];
    z.assign(m, 0.0);
    if (out.is_flat[i]) continue;
    const long double sigma =
        std::sqrt(mo.centered_ss / static_cast<long double>(m));
    for (std::size_t k = 0; k < m; ++k) {
      z[k] = static_cast<double>((t[i + k] - mo.mean) / sigma);
    }
  }
  return out;
}

inline double distance(const ZWindows& zw, std::size_t i, std::size_t j) {
  const bool fi = zw.is_flat[i];
  const bool fj = zw.is_flat[j];
  if (fi && fj) return 0.0;
  if (fi || fj) return std::sqrt(2.0 * static_cast<double>(zw.m));
  long double ss = 0;
  for (std::size_t k = 0; k < zw.m; ++k) {
    const long double d = static_cast<long double>(zw.z[i][k]) - zw.z[j][k];
    ss += d * d;
  }
  return static_cast<double>(std::sqrt(ss));
}

struct Profile {
  std::vector<double> dist;
  std::vector<std::int64_t> nn;  // -1 when no admissible neighbor
  /// Best distance to any neighbor other than nn, for uniqueness checks.
  std::vector<double> runner_up;
};

/// Nearest neighbor of every subsequence over |i - j| > ez; ties go to the
/// lower j.
inline Profile profile(std::span<const double> t, std::size_t m,
                       std::size_t ez) {
  const auto zw = znormalize(t, m);
  const std::size_t n_sub = zw.z.size();
  const double inf = std::numeric_limits<double>::infinity();
  Profile p{std::vector<double>(n_sub, inf), std::vector<std::int64_t>(n_sub, -1),
            std::vector<double>(n_sub, inf)};
  auto consider = [&](std::size_t row, std::size_t col, double d) {
    if (d < p.dist[row] ||
        (d == p.dist[row] && static_cast<std::int64_t>(col) < p.nn[row])) {
      p.runner_up[row] = p.dist[row];
      p.dist[row] = d;
      p.nn[row] = static_cast<std::int64_t>(col);
    } else if (d < p.runner_up[row]) {
      p.runner_up[row] = d;
    }
  };
  for (std::size_t i = 0; i < n_sub; ++i) {
    for (std::size_t j = i + ez + 1; j < n_sub; ++j) {
      const double d = distance(zw, i, j);
      consider(i, j, d);
      consider(j, i, d);
    }
  }
  return p;
}

/// Row-wise minima restricted to one diagonal offset.
inline Profile diagonal_minima(std::span<const double> t, std::size_t m,
                               std::size_t diagonal) {
  const auto zw = znormalize(t, m);
  const std::size_t n_sub = zw.z.size();
  const double inf = std::numeric_limits<double>::infinity();
  Profile p{std::vector<double>(n_sub, inf), std::vector<std::int64_t>(n_sub, -1),
            std::vector<double>(n_sub, inf)};
  auto keep = [&](std::size_t row, std::size_t col, double d) {
    if (d < p.dist[row] ||
        (d == p.dist[row] && static_cast<std::int64_t>(col) < p.nn[row])) {
      p.dist[row] = d;
      p.nn[row] = static_cast<std::int64_t>(col);
    }
  };
  for (std::size_t i = 0; i + diagonal < n_sub; ++i) {
    const double d = distance(zw, i, i + diagonal);
    keep(i, i + diagonal, d);
    keep(i + diagonal, i, d);
  }
  return p;
}

struct RowNearest {
  double dist = std::numeric_limits<double>::infinity();
  std::int64_t nn = -1;
  double runner_up = std::numeric_limits<double>::infinity();
};

/// Nearest neighbor of one subsequence, without materializing every
/// z-normalized window. For spot checks on long series.
inline RowNearest row_nearest(std::span<const double> t, std::size_t m,
                              std::size_t ez, std::size_t row) {
  auto zwindow = [&](std::size_t i, std::vector<double>& z) {
    const auto mo = moments(t.subspan(i, m));
    z.assign(m, 0.0);
    if (flat(mo, m)) return false;
    const long double sigma =
        std::sqrt(mo.centered_ss / static_cast<long double>(m));
    for (std::size_t k = 0; k < m; ++k) {
      z[k] = static_cast<double>((t[i + k] - mo.mean) / sigma);
    }
    return true;
  };
  std::vector<double> zi;
  std::vector<double> zj;
  const bool live_i = zwindow(row, zi);
  RowNearest r;
  const std::size_t n_sub = t.size() - m + 1;
  for (std::size_t j = 0; j < n_sub; ++j) {
    if ((j > row ? j - row : row - j) <= ez) continue;
    const bool live_j = zwindow(j, zj);
    double d = 0.0;
    if (live_i && live_j) {
      long double ss = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const long double diff = static_cast<long double>(zi[k]) - zj[k];
        ss += diff * diff;
      }
      d = static_cast<double>(std::sqrt(ss));
    } else if (live_i || live_j) {
      d = std::sqrt(2.0 * static_cast<double>(m));
    }
    if (d < r.dist) {
      r.runner_up = r.dist;
      r.dist = d;
      r.nn = static_cast<std::int64_t>(j);
    } else if (d < r.runner_up) {
      r.runner_up = d;
    }
  }
  return r;
}

}  // namespace oracle
