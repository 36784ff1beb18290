#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "pws/error.hpp"

namespace pws {

using cplx = std::complex<double>;
// Position / vector quantity. Only the first `dim` entries are meaningful.
using Vec = std::array<double, 2>;

// Largest total sample count a grid may hold (2^24 complex samples = 256 MiB).
inline constexpr std::size_t kMaxGridSamples = std::size_t{1} << 24;

// Periodic Cartesian grid centred on the origin: x_j = -L/2 + j*dx.
struct GridSpec {
  int dim = 1;
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> length{1.0, 1.0};

  static GridSpec line(std::size_t n, double length);
  static GridSpec plane(std::size_t n0, double length0, std::size_t n1, double length1);

  double spacing(int axis) const { return length[axis] / static_cast<double>(n[axis]); }
  double coordinate(int axis, std::size_t j) const {
    return -0.5 * length[axis] + static_cast<double>(j) * spacing(axis);
  }
  std::size_t size() const { return dim == 1 ? n[0] : n[0] * n[1]; }
  double cell_volume() const { return dim == 1 ? spacing(0) : spacing(0) * spacing(1); }
  // Sample position of flat index `idx` (row-major, axis 0 slowest).
  Vec position(std::size_t idx) const;
  // The 1D grid of a single axis.
  GridSpec axis_grid(int axis) const { return line(n[axis], length[axis]); }

  // Throws InvalidArgument on any violated invariant.
  void validate() const;

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Map x into [-L/2, L/2) on the given axis.
double wrap_coordinate(const GridSpec& g, int axis, double x);
// Minimum-image displacement x - ref on the given axis.
double wrap_displacement(const GridSpec& g, int axis, double x, double ref);
bool inside_box(const GridSpec& g, Vec x);

template <class T>
struct Field {
  GridSpec grid;
  std::vector<T> data;
  double time = 0.0;

  Field() = default;
  explicit Field(const GridSpec& g, double t = 0.0) : grid(g), data(g.size(), T{}), time(t) {}

  std::size_t size() const { return data.size(); }
  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  T& operator()(std::size_t i, std::size_t j) { return data[i * grid.n[1] + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * grid.n[1] + j]; }
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

// One field per spatial axis.
template <class T>
struct VectorFieldT {
  std::vector<Field<T>> components;

  VectorFieldT() = default;
  explicit VectorFieldT(const GridSpec& g, double t = 0.0)
      : components(static_cast<std::size_t>(g.dim), Field<T>(g, t)) {}

  int dim() const { return static_cast<int>(components.size()); }
  Field<T>& operator[](int axis) { return components[static_cast<std::size_t>(axis)]; }
  const Field<T>& operator[](int axis) const { return components[static_cast<std::size_t>(axis)]; }
  // Vector value at a flat sample index.
  std::array<T, 2> at(std::size_t idx) const {
    std::array<T, 2> v{};
    for (std::size_t a = 0; a < components.size(); ++a) v[a] = components[a].data[idx];
    return v;
  }
};

using VectorField = VectorFieldT<double>;
using ComplexVectorField = VectorFieldT<cplx>;

bool all_finite(const ComplexField& f);
bool all_finite(const RealField& f);
// Throws NumericalError naming `what` if any sample is NaN/Inf.
void require_finite(const ComplexField& f, const char* what, long step = -1);
void require_finite(const RealField& f, const char* what, long step = -1);

RealField abs2(const ComplexField& f);
// Rectangle rule: sum of samples times the cell volume.
double integrate(const RealField& f);
RealField abs(const ComplexField& f);

// Build a field by evaluating fn(position) at every sample.
template <class T, class Fn>
Field<T> make_field(const GridSpec& g, Fn&& fn, double t = 0.0) {
  Field<T> f(g, t);
  for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = fn(g.position(i));
  return f;
}

}  // namespace pws
