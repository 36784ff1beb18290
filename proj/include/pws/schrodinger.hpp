#pragma once

#include "pws/split_step.hpp"

namespace pws {

// Linear pilot-wave evolution
//   i dPsi/dt = (-i grad - e A)^2/(2 omega0) Psi + (omega0 + e V) Psi.
class SchrodingerSolver {
 public:
  SchrodingerSolver(const GridSpec& grid, PhysicalParams params, PotentialSpec potential);

  void step(ComplexField& psi, double dt);
  long steps_taken() const { return steps_; }
  const PhysicalParams& params() const { return params_; }
  const PotentialSpec& potential() const { return stepper_.potential(); }
  const SpectralOps& ops() const { return stepper_.ops(); }

 private:
  PhysicalParams params_;
  SplitStepper stepper_;
  long steps_ = 0;
};

// One Strang step of the linear equation (stateless convenience form).
ComplexField ls_step(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential,
                     double dt);

// Normalised Gaussian packet with position standard deviation sigma (per
// axis), centred at `center` (minimum image) and carrying wavevector k.
ComplexField gaussian_packet(const GridSpec& grid, Vec center, double sigma, Vec k, double t = 0.0);

// Normalise in place so that integrate(|psi|^2) = 1. Throws on a zero field.
void normalize(ComplexField& psi);

}  // namespace pws
