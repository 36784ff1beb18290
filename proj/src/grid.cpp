#include "pws/grid.hpp"

#include <cmath>
#include <string>

#include "pws/kernels.hpp"

namespace pws {

GridSpec GridSpec::line(std::size_t n, double length) {
  GridSpec g;
  g.dim = 1;
  g.n = {n, 1};
  g.length = {length, 1.0};
  g.validate();
  return g;
}

GridSpec GridSpec::plane(std::size_t n0, double length0, std::size_t n1, double length1) {
  GridSpec g;
  g.dim = 2;
  g.n = {n0, n1};
  g.length = {length0, length1};
  g.validate();
  return g;
}

Vec GridSpec::position(std::size_t idx) const {
  if (dim == 1) return {coordinate(0, idx), 0.0};
  return {coordinate(0, idx / n[1]), coordinate(1, idx % n[1])};
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dim must be 1 or 2, got " + std::to_string(dim));
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4) throw InvalidArgument("grid needs at least 4 points per axis");
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw InvalidArgument("grid length must be positive and finite");
    }
    if (total > kMaxGridSamples / n[a]) throw InvalidArgument("grid exceeds the memory budget");
    total *= n[a];
  }
  if (total > kMaxGridSamples) throw InvalidArgument("grid exceeds the memory budget");
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (dim != o.dim) return false;
  for (int a = 0; a < dim; ++a) {
    if (n[a] != o.n[a] || length[a] != o.length[a]) return false;
  }
  return true;
}

double wrap_coordinate(const GridSpec& g, int axis, double x) {
  const double L = g.length[axis];
  double y = x + 0.5 * L;
  y -= L * std::floor(y / L);
  if (y >= L) y -= L;  // floor rounding at the seam
  return y - 0.5 * L;
}

double wrap_displacement(const GridSpec& g, int axis, double x, double ref) {
  const double L = g.length[axis];
  double d = x - ref;
  d -= L * std::floor(d / L + 0.5);
  return d;
}

bool inside_box(const GridSpec& g, Vec x) {
  for (int a = 0; a < g.dim; ++a) {
    if (!(x[a] >= -0.5 * g.length[a] && x[a] < 0.5 * g.length[a])) return false;
  }
  return true;
}

bool all_finite(const ComplexField& f) {
  for (const auto& v : f.data) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

bool all_finite(const RealField& f) {
  for (double v : f.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const ComplexField& f, const char* what, long step) {
  if (!all_finite(f)) throw NumericalError(std::string("non-finite values in ") + what, step);
}

void require_finite(const RealField& f, const char* what, long step) {
  if (!all_finite(f)) throw NumericalError(std::string("non-finite values in ") + what, step);
}

RealField abs2(const ComplexField& f) {
  RealField out(f.grid, f.time);
  kernels::active().abs2(out.data.data(), f.data.data(), f.size());
  return out;
}

double integrate(const RealField& f) {
  return kernels::active().sum(f.data.data(), f.size()) * f.grid.cell_volume();
}

RealField abs(const ComplexField& f) {
  RealField out = abs2(f);
  for (double& v : out.data) v = std::sqrt(v);
  return out;
}

}  // namespace pws
