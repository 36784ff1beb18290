#pragma once

// Strang splitting for
//   i d(psi)/dt = sum_a (-i d_a - e A_a(t))^2 / (2 m_a) psi + W(t, x) psi,
//   W = rest_energy + e V(t, x) + (optional extra terms).
// Half potential phase at t, full kinetic step with A(t + dt/2), half
// potential phase at t + dt. Every sub-step is a pure phase, so the norm is
// preserved to round-off. The kinetic transforms run in long double and
// round back to double once per step.

#include <complex>
#include <functional>
#include <vector>

#include "pws/potential.hpp"
#include "pws/spectral.hpp"

namespace pws {

class SplitStepper {
 public:
  // Adds extra potential-energy terms to w (which already holds
  // rest_energy + eV) given the field at the start of the phase sub-step.
  using ExtraPotential = std::function<void(const ComplexField& psi, std::vector<double>& w)>;

  SplitStepper(const GridSpec& grid, Vec masses, double charge, double rest_energy, PotentialSpec potential);

  // Advance psi by dt in place (psi.time += dt). `step_index` is only used in
  // error messages.
  void step(ComplexField& psi, double dt, const ExtraPotential& extra_start = {},
            const ExtraPotential& extra_end = {}, long step_index = -1);

  const SpectralOps& ops() const { return ops_; }
  const PotentialSpec& potential() const { return potential_; }

 private:
  void potential_phase(ComplexField& psi, double t, double half_dt, const ExtraPotential& extra);
  void kinetic(ComplexField& psi, double dt, double t_mid);

  SpectralOps ops_;
  Vec masses_;
  double charge_;
  double rest_energy_;
  PotentialSpec potential_;

  std::vector<double> w_;
  std::vector<cplx> phase_;
  // Caches valid while dt (and, for the kinetic part, A) is unchanged.
  std::vector<cplx> static_phase_;
  double static_phase_dt_ = 0.0;
  std::vector<std::complex<long double>> kinetic_;
  std::vector<std::complex<long double>> work_;
  double kinetic_dt_ = 0.0;
};

}  // namespace pws
