#include "pws/potential.hpp"

#include <cmath>

namespace pws {

void PhysicalParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidArgument("omega0 must be > 0");
  if (!std::isfinite(charge)) throw InvalidArgument("charge must be finite");
}

PotentialSpec PotentialSpec::none() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::harmonic(Vec k, Vec c) {
  PotentialSpec p;
  p.scalar_ = [k, c](double, Vec x) {
    return 0.5 * k[0] * (x[0] - c[0]) * (x[0] - c[0]) + 0.5 * k[1] * (x[1] - c[1]) * (x[1] - c[1]);
  };
  p.electric_ = [k, c](double, Vec x) { return Vec{-k[0] * (x[0] - c[0]), -k[1] * (x[1] - c[1])}; };
  p.static_scalar_ = true;
  return p;
}

PotentialSpec PotentialSpec::uniform_field_scalar(Vec E) {
  PotentialSpec p;
  p.scalar_ = [E](double, Vec x) { return -(E[0] * x[0] + E[1] * x[1]); };
  p.electric_ = [E](double, Vec) { return E; };
  p.static_scalar_ = true;
  return p;
}

PotentialSpec PotentialSpec::uniform_field_vector(Vec E) {
  PotentialSpec p;
  p.vector_ = [E](double t) { return Vec{-E[0] * t, -E[1] * t}; };
  p.electric_ = [E](double, Vec) { return E; };
  return p;
}

PotentialSpec PotentialSpec::custom(ScalarFn scalar, VectorFn vector, FieldFn electric, bool static_scalar) {
  PotentialSpec p;
  p.scalar_ = std::move(scalar);
  p.vector_ = std::move(vector);
  p.electric_ = std::move(electric);
  p.static_scalar_ = static_scalar;
  return p;
}

RealField PotentialSpec::scalar_field(const GridSpec& g, double t) const {
  RealField v(g, t);
  if (!scalar_) return v;
  for (std::size_t i = 0; i < v.size(); ++i) v.data[i] = scalar_(t, g.position(i));
  return v;
}

Vec em_force(const PotentialSpec& pot, const PhysicalParams& p, double t, Vec x) {
  const Vec E = pot.electric(t, x);
  return {p.charge * E[0], p.charge * E[1]};
}

}  // namespace pws
