#include "mprofile/window_stats.hpp"

#include <cmath>
#include <string>

#include "mprofile/error.hpp"

namespace mprofile {
namespace {

void validate_window(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) {
    throw ConfigError("window length m=" + std::to_string(m) +
                      " outside [1, n] for n=" + std::to_string(n));
  }
}

WindowStats allocate(std::size_t n_sub, std::size_t m) {
  WindowStats st;
  st.window = m;
  st.mu.resize(n_sub);
  st.inv_norm.resize(n_sub);
  st.flat.resize(n_sub);
  st.df.assign(n_sub, 0.0);
  st.dg.assign(n_sub, 0.0);
  return st;
}

void fill_differences(WindowStats& st, std::span<const double> t) {
  const std::size_t m = st.window;
  for (std::size_t i = 0; i + 1 < st.size(); ++i) {
    st.df[i] = (t[i + m] - t[i]) / 2.0;
    st.dg[i] = (t[i + m] - st.mu[i + 1]) + (t[i] - st.mu[i]);
  }
}

void store(WindowStats& st, std::size_t i, double mean, double centered_ss) {
  st.mu[i] = mean;
  if (is_flat_window(centered_ss, mean, st.window)) {
    st.flat[i] = 1;
    st.inv_norm[i] = 0.0;
    st.any_flat = true;
  } else {
    st.flat[i] = 0;
    st.inv_norm[i] = 1.0 / std::sqrt(centered_ss);
  }
}

/// Mean and centered sum of squares of one window, both by direct passes.
void two_pass(std::span<const double> w, double& mean, double& ss) {
  double sum = 0.0;
  for (double x : w) sum += x;
  mean = sum / static_cast<double>(w.size());
  ss = 0.0;
  for (double x : w) ss += (x - mean) * (x - mean);
}

/// Kahan-compensated accumulator.
struct Compensated {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) noexcept {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// Rolling state is re-anchored with an exact two-pass every this many
// windows to bound drift on very long series.
constexpr std::size_t kReanchorEvery = 4096;

}  // namespace

WindowStats compute_stats(const TimeSeries& ts, std::size_t m) {
  validate_window(ts.size(), m);
  if (ts.size() > kTwoPassLimit) return compute_stats_rolling(ts.values(), m);

  const auto t = ts.values();
  const std::size_t n_sub = ts.size() - m + 1;
  WindowStats st = allocate(n_sub, m);
  for (std::size_t i = 0; i < n_sub; ++i) {
    double mean = 0.0;
    double ss = 0.0;
    two_pass(t.subspan(i, m), mean, ss);
    store(st, i, mean, ss);
  }
  fill_differences(st, t);
  return st;
}

WindowStats compute_stats_rolling(std::span<const double> t, std::size_t m) {
  validate_window(t.size(), m);
  const std::size_t n_sub = t.size() - m + 1;
  const double dm = static_cast<double>(m);
  WindowStats st = allocate(n_sub, m);

  Compensated sum;
  Compensated m2;  // centered sum of squares, updated Welford-style
  double mean = 0.0;
  for (std::size_t i = 0; i < n_sub; ++i) {
    if (i % kReanchorEvery == 0) {
      double ss = 0.0;
      two_pass(t.subspan(i, m), mean, ss);
      sum = {};
      for (std::size_t k = 0; k < m; ++k) sum.add(t[i + k]);
      m2 = {};
      m2.add(ss);
    } else {
      const double out = t[i - 1];
      const double in = t[i + m - 1];
      const double old_mean = mean;
      sum.add(in);
      sum.add(-out);
      mean = sum.sum / dm;
      m2.add((in - out) * (in - mean + out - old_mean));
    }
    store(st, i, mean, m2.sum > 0.0 ? m2.sum : 0.0);
  }
  fill_differences(st, t);
  return st;
}

}  // namespace mprofile
