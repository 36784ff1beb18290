#pragma once

// One-way coupled evolution: the pilot wave Psi is advanced independently;
// its quantum potential drives the soliton u (dBB mode). Psi never sees u.

#include <functional>
#include <optional>
#include <string>

#include "pws/bohm.hpp"
#include "pws/diagnostics.hpp"
#include "pws/schrodinger.hpp"

namespace pws {

struct CoupledOptions {
  double T = 1.0;
  double dt = 1e-3;
  // Keep every k-th field in the result (0 keeps none).
  std::size_t keep_every = 0;
  // Ehrenfest and conservation samples every k steps.
  std::size_t diagnostic_every = 1;
  // Phase-harmony residual every k steps (0 disables); window radius in
  // units of 1/sqrt(b).
  std::size_t phase_harmony_every = 0;
  double phase_harmony_radius = 4.0;
  // Called after every step (and once for the initial state, step 0).
  std::function<void(long step, const ComplexField& psi, const ComplexField& u)> observer;
};

struct CoupledResult {
  std::vector<ComplexField> psi_history, u_history;
  TrajectoryRecord soliton_track;  // x_bar(t) with the pilot forces at x_bar
  TrajectoryRecord bohm;           // reference Bohmian trajectory from x_bar(0)
  TrajectoryRecord classical;      // omega0 z'' = F_em from the same start (F_Q omitted)
  std::optional<std::string> bohm_error;
  std::vector<EhrenfestSample> ehrenfest;
  ConservationReport conservation;
  std::vector<double> phase_harmony_times, phase_harmony;
  double max_tracking_error = 0.0;   // max |x_bar - z_Bohm|
  double max_classical_error = 0.0;  // max |x_bar - z_classical|
};

// dBB-mode Gausson centred at `center` whose phase gradient matches the
// pilot's guidance velocity there, so x_bar and z_Bohm start together.
SolitonState dbb_gausson(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential,
                         double b, double f0, Vec center);

CoupledResult run_coupled(const ComplexField& psi0, const SolitonState& soliton0, const PotentialSpec& potential,
                          const CoupledOptions& options);

// Classical point particle omega0 z'' = e E(t, z), RK4 with step dt.
class ClassicalIntegrator {
 public:
  ClassicalIntegrator(Vec z0, Vec v0, double t0, PhysicalParams params, PotentialSpec potential, int dim);
  void advance(double dt);
  const TrajectoryRecord& record() const { return record_; }

 private:
  Vec accel(double t, Vec z) const;
  PhysicalParams params_;
  PotentialSpec potential_;
  int dim_;
  double t_;
  Vec z_, v_;
  TrajectoryRecord record_;
};

}  // namespace pws
