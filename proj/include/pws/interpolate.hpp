#pragma once

// Off-grid evaluation of sampled fields with periodic wrap: cubic Hermite in
// each spatial axis, linear between two time snapshots. The Hermite node
// slopes are sixth-order central differences, so one axis reads 8 samples.
// Exact at nodes and for linear data; C1 across cells.

#include "pws/grid.hpp"

namespace pws {

inline constexpr long kStencilWidth = 8;

// Interpolation weights on one axis.
struct CubicStencil {
  std::array<std::size_t, kStencilWidth> index;  // nodes j-3 .. j+4 (wrapped)
  std::array<double, kStencilWidth> weight;
};

// Throws InvalidArgument if x is outside [-L/2, L/2).
CubicStencil cubic_stencil(const GridSpec& g, int axis, double x);

double interpolate(const RealField& f, Vec x);
cplx interpolate(const ComplexField& f, Vec x);

// Linear blend between snapshots a (time ta) and b (time tb >= ta); t must
// lie in [a.time, b.time].
double interpolate(const RealField& a, const RealField& b, double t, Vec x);
cplx interpolate(const ComplexField& a, const ComplexField& b, double t, Vec x);

}  // namespace pws
