#include "pws/interpolate.hpp"

#include <cmath>
#include <string>

namespace pws {

CubicStencil cubic_stencil(const GridSpec& g, int axis, double x) {
  const double half = 0.5 * g.length[axis];
  if (!(x >= -half && x < half)) {
    throw InvalidArgument("interpolation point " + std::to_string(x) + " outside box on axis " +
                          std::to_string(axis));
  }
  const double dx = g.spacing(axis);
  const auto n = static_cast<long>(g.n[axis]);
  const double u = (x + half) / dx;
  long j = static_cast<long>(std::floor(u));
  if (j >= n) j = n - 1;
  const double s = u - static_cast<double>(j);

  // Hermite basis on [x_j, x_j+1]; node slopes (times dx) from sixth-order
  // central differences c_k (f_{i+k} - f_{i-k}).
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0, h01 = -2.0 * s3 + 3.0 * s2;
  const double h10 = s3 - 2.0 * s2 + s, h11 = s3 - s2;
  constexpr double c[4] = {0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  CubicStencil st;
  st.weight.fill(0.0);
  auto w = [&](long off) -> double& { return st.weight[static_cast<std::size_t>(off + 3)]; };
  w(0) += h00;
  w(1) += h01;
  for (long k = 1; k <= 3; ++k) {
    w(k) += h10 * c[k];
    w(-k) -= h10 * c[k];
    w(1 + k) += h11 * c[k];
    w(1 - k) -= h11 * c[k];
  }
  for (long m = 0; m < kStencilWidth; ++m) {
    long idx = (j - 3 + m) % n;
    if (idx < 0) idx += n;
    st.index[static_cast<std::size_t>(m)] = static_cast<std::size_t>(idx);
  }
  return st;
}

namespace {

template <class T>
T interp_impl(const Field<T>& f, Vec x) {
  const GridSpec& g = f.grid;
  const CubicStencil s0 = cubic_stencil(g, 0, x[0]);
  if (g.dim == 1) {
    T acc{};
    for (long m = 0; m < kStencilWidth; ++m) acc += s0.weight[m] * f.data[s0.index[m]];
    return acc;
  }
  const CubicStencil s1 = cubic_stencil(g, 1, x[1]);
  const std::size_t n1 = g.n[1];
  T acc{};
  for (long a = 0; a < kStencilWidth; ++a) {
    T row{};
    const std::size_t base = s0.index[a] * n1;
    for (long b = 0; b < kStencilWidth; ++b) row += s1.weight[b] * f.data[base + s1.index[b]];
    acc += s0.weight[a] * row;
  }
  return acc;
}

template <class T>
T interp_time(const Field<T>& a, const Field<T>& b, double t, Vec x) {
  if (a.grid != b.grid) throw InvalidArgument("snapshot grids differ");
  if (!(t >= a.time && t <= b.time)) throw InvalidArgument("query time not bracketed by snapshots");
  const T va = interp_impl(a, x);
  if (b.time == a.time || t == a.time) return va;
  const T vb = interp_impl(b, x);
  if (t == b.time) return vb;
  const double th = (t - a.time) / (b.time - a.time);
  return (1.0 - th) * va + th * vb;
}

}  // namespace

double interpolate(const RealField& f, Vec x) { return interp_impl(f, x); }
cplx interpolate(const ComplexField& f, Vec x) { return interp_impl(f, x); }
double interpolate(const RealField& a, const RealField& b, double t, Vec x) { return interp_time(a, b, t, x); }
cplx interpolate(const ComplexField& a, const ComplexField& b, double t, Vec x) {
  return interp_time(a, b, t, x);
}

}  // namespace pws
