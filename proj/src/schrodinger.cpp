#include "pws/schrodinger.hpp"

#include <cmath>

namespace pws {

SchrodingerSolver::SchrodingerSolver(const GridSpec& grid, PhysicalParams params, PotentialSpec potential)
    : params_(params),
      stepper_(grid, {params.omega0, params.omega0}, params.charge, params.omega0, std::move(potential)) {
  params_.validate();
}

void SchrodingerSolver::step(ComplexField& psi, double dt) {
  stepper_.step(psi, dt, {}, {}, steps_);
  ++steps_;
}

ComplexField ls_step(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential,
                     double dt) {
  SchrodingerSolver solver(psi.grid, params, potential);
  ComplexField out = psi;
  solver.step(out, dt);
  return out;
}

ComplexField gaussian_packet(const GridSpec& grid, Vec center, double sigma, Vec k, double t) {
  if (!(sigma > 0.0)) throw InvalidArgument("packet width must be positive");
  ComplexField psi(grid, t);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Vec x = grid.position(i);
    double r2 = 0.0, phase = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double d = wrap_displacement(grid, a, x[a], center[a]);
      r2 += d * d;
      phase += k[a] * d;
    }
    psi.data[i] = std::polar(std::exp(-r2 / (4.0 * sigma * sigma)), phase);
  }
  normalize(psi);
  return psi;
}

void normalize(ComplexField& psi) {
  const double n = integrate(abs2(psi));
  if (!(n > 0.0)) throw InvalidArgument("cannot normalise a zero field");
  const double s = 1.0 / std::sqrt(n);
  for (auto& v : psi.data) v *= s;
}

}  // namespace pws
