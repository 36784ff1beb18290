#pragma once

#include <functional>

#include "pws/grid.hpp"

namespace pws {

struct PhysicalParams {
  double omega0 = 1.0;  // rest mass (inverse length, hbar = c = 1)
  double charge = 1.0;  // e
  void validate() const;
};

// External electromagnetic potentials restricted to a scalar potential V(t, x)
// and a spatially uniform vector potential A(t). Hence div A = 0 and B = 0;
// the only force is e E with E = -dA/dt - grad V.
class PotentialSpec {
 public:
  using ScalarFn = std::function<double(double, Vec)>;
  using VectorFn = std::function<Vec(double)>;
  using FieldFn = std::function<Vec(double, Vec)>;

  PotentialSpec() = default;

  static PotentialSpec none();
  // V = 1/2 sum_a k_a (x_a - c_a)^2
  static PotentialSpec harmonic(Vec k, Vec center = {0.0, 0.0});
  // Uniform field E in the scalar gauge: V = -E.x (discontinuous at the periodic seam).
  static PotentialSpec uniform_field_scalar(Vec E);
  // Uniform field E in the vector gauge: A = -E t, V = 0 (periodic-safe).
  static PotentialSpec uniform_field_vector(Vec E);
  // Arbitrary potentials. `electric` must equal -dA/dt - grad V. Set
  // `static_scalar` when V does not depend on time.
  static PotentialSpec custom(ScalarFn scalar, VectorFn vector, FieldFn electric, bool static_scalar);

  double scalar(double t, Vec x) const { return scalar_ ? scalar_(t, x) : 0.0; }
  Vec vector(double t) const { return vector_ ? vector_(t) : Vec{0.0, 0.0}; }
  Vec electric(double t, Vec x) const { return electric_ ? electric_(t, x) : Vec{0.0, 0.0}; }

  bool has_scalar() const { return static_cast<bool>(scalar_); }
  bool has_vector() const { return static_cast<bool>(vector_); }
  bool scalar_is_static() const { return static_scalar_; }

  // Sample V(t, .) on the grid.
  RealField scalar_field(const GridSpec& g, double t) const;

 private:
  ScalarFn scalar_;
  VectorFn vector_;
  FieldFn electric_;
  bool static_scalar_ = true;
};

// Lorentz force with B = 0: F = e E(t, x).
Vec em_force(const PotentialSpec& pot, const PhysicalParams& p, double t, Vec x);

}  // namespace pws
