#pragma once

#include <memory>

#include "pws/madelung.hpp"
#include "pws/nonlinearity.hpp"
#include "pws/split_step.hpp"
#include "pws/trajectory.hpp"

namespace pws {

struct GaussonParams {
  double b = 1.0;   // inverse squared width
  double f0 = 1.0;  // reference amplitude
  Vec center{0.0, 0.0};
  Vec velocity{0.0, 0.0};
  double global_phase = 0.0;
};

// Peak amplitude f0 e^{(d-1)/2}: substituting A e^{-b r^2/2} into
// lap F = N(F^2) F gives (b^2 r^2 - d b) = (b^2 r^2 - b - 2b ln(A/f0)).
double gausson_amplitude(double f0, int dim);

// u = A e^{-b|x-c|^2/2} e^{i(omega0 v.(x-c) + phase)} with minimum-image
// displacements. Requires every box side >= 10/sqrt(b).
ComplexField gausson_init(const GaussonParams& p, const GridSpec& grid, double omega0);

enum class CouplingMode { classical, dbb };

struct SolitonState {
  ComplexField u;
  CouplingMode mode = CouplingMode::classical;
  std::shared_ptr<const Nonlinearity> nonlinearity;
  PhysicalParams params;
  TrajectoryRecord center_history;
};

// i du/dt = (-i grad - eA)^2/(2 omega0) u + (omega0 + eV + q + N(|u|^2)/(2 omega0)) u
// where q is the external quantum potential (dBB mode only).
class NlsSolver {
 public:
  NlsSolver(const GridSpec& grid, PhysicalParams params, std::shared_ptr<const Nonlinearity> nl,
            PotentialSpec potential);

  // q_start / q_end: external potential at the start and end of the step.
  // Both must be given in dBB mode and both omitted in classical mode.
  void step(SolitonState& s, double dt, const RealField* q_start = nullptr, const RealField* q_end = nullptr);
  const SpectralOps& ops() const { return stepper_.ops(); }
  long steps_taken() const { return steps_; }

 private:
  PhysicalParams params_;
  std::shared_ptr<const Nonlinearity> nl_;
  SplitStepper stepper_;
  long steps_ = 0;
};

// Stateless single step.
void nls_step(SolitonState& s, const PotentialSpec& potential, const RealField* q_start, const RealField* q_end,
              double dt);

struct CenterEstimate {
  Vec center{0.0, 0.0};
  double norm = 0.0;  // C = integral |u|^2
};

// First moment of |u|^2 with displacements taken relative to `reference`
// (minimum image), so a soliton crossing the periodic seam stays continuous.
CenterEstimate soliton_center(const ComplexField& u, Vec reference = {0.0, 0.0});

// f^2-weighted RMS over |x - z| < radius of |Im[grad u/u](x) - omega0 v(z) - eA|,
// divided by omega0 |v(z)| + sqrt(b). Throws if the window leaves the box.
double phase_harmony_residual(const ComplexField& u, const MadelungBundle& madelung, const PhysicalParams& params,
                              Vec vector_potential, Vec z, double radius, double b);

}  // namespace pws
