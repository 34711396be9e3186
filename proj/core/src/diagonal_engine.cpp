#include "mprofile/diagonal_engine.hpp"

namespace mprofile {
namespace {

// Branch-free form of LocalProfile::offer on raw arrays.
inline void keep_min(double* dist2, std::uint64_t* nn, std::size_t row,
                     double d2, std::uint64_t neighbor) noexcept {
  const double cur = dist2[row];
  const std::uint64_t cur_nn = nn[row];
  const bool take = d2 < cur || (d2 == cur && neighbor < cur_nn);
  dist2[row] = take ? d2 : cur;
  nn[row] = take ? neighbor : cur_nn;
}

template <bool kHasFlat>
void walk(const DiagonalSegment& seg, std::span<const double> series,
          const WindowStats& st, LocalProfile& lp) {
  // Local copies keep the compiler from reloading through lp's stores.
  const double* inv = st.inv_norm.data();
  const double* df = st.df.data();
  const double* dg = st.dg.data();
  const std::uint8_t* flat = st.flat.data();
  const double two_m = 2.0 * static_cast<double>(st.window);
  double* dist2 = lp.dist2.data();
  std::uint64_t* nn = lp.nn.data();

  std::size_t i = seg.start_row;
  std::size_t j = seg.start_row + seg.diagonal;
  double cov = init_cov(series, st, i, j);
  for (std::size_t k = 0;;) {
    const double rho = std::min(1.0, std::max(-1.0, cov * inv[i] * inv[j]));
    double d2 = two_m * (1.0 - rho);
    d2 = d2 < kSquaredDistanceFloor ? 0.0 : d2;
    if constexpr (kHasFlat) d2 = (flat[i] & flat[j]) ? 0.0 : d2;
    keep_min(dist2, nn, i, d2, j);
    keep_min(dist2, nn, j, d2, i);
    if (++k == seg.length) break;
    cov += df[i] * dg[j] + df[j] * dg[i];
    ++i;
    ++j;
  }
}

}  // namespace

std::size_t traverse_segment(const DiagonalSegment& seg,
                             std::span<const double> t, const WindowStats& st,
                             LocalProfile& lp) {
  if (st.any_flat) {
    walk<true>(seg, t, st, lp);
  } else {
    walk<false>(seg, t, st, lp);
  }
  return seg.length;
}

}  // namespace mprofile
