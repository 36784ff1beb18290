#pragma once

// 1+1D Klein-Gordon pilot wave (D_t)^2 Psi = d_x^2 Psi - omega0^2 Psi with
// D_t = d_t + ieV, leapfrog in time and spectral in space. Only a scalar
// potential is supported in this sector.
//
// Gauge-covariant leapfrog with link phases Phi_pm = V(t +- dt/2, x) dt:
//   Psi+ = e^{-ie Phi+} [2 Psi - e^{-ie Phi-} Psi- + dt^2 (d_x^2 Psi - omega0^2 Psi)]

#include <cstdint>
#include <memory>

#include "pws/potential.hpp"
#include "pws/spectral.hpp"
#include "pws/trajectory.hpp"

namespace pws {

struct KGState {
  double dt = 0.0;
  ComplexField prev, current, next;  // times t - dt, t, t + dt
  long steps = 0;
  double time() const { return current.time; }
};

enum class KGInit {
  positive_energy,  // every Fourier mode on its discrete positive-frequency branch
  rest_frequency,   // (d_t + ieV) Psi = -i omega0 Psi, i.e. d_t Psi = -i omega0 Psi when V = 0
};

class KGSolver {
 public:
  // Throws InvalidArgument unless 0 < dt <= 0.5 dx.
  KGSolver(const GridSpec& grid, double dt, PhysicalParams params, PotentialSpec potential);

  KGState init(const ComplexField& psi0, KGInit mode) const;
  // Second-order Taylor start from an explicit time derivative.
  KGState init(const ComplexField& psi0, const ComplexField& dpsi_dt) const;
  // prev <- current <- next, then a new next level.
  void step(KGState& s) const;

  double dt() const { return dt_; }
  const SpectralOps& ops() const { return ops_; }
  const PhysicalParams& params() const { return params_; }
  const PotentialSpec& potential() const { return potential_; }

  // Discrete leapfrog frequency for continuum frequency E: cos(W dt) = 1 - E^2 dt^2/2.
  static double discrete_frequency(double E, double dt);

 private:
  void compute_next(KGState& s) const;
  std::vector<cplx> link(double t, double sign) const;

  SpectralOps ops_;
  double dt_;
  PhysicalParams params_;
  PotentialSpec potential_;
};

KGState lkg_step(const KGState& state, const PotentialSpec& potential, const PhysicalParams& params);

struct KGMadelung {
  double time = 0.0;
  RealField amplitude;
  RealField mass_sq;     // omega0^2 + box(a)/a, box = d_t^2 - d_x^2
  RealField mass;        // sqrt(max(M^2, 0))
  RealField mass_grad;   // d_x M (masked samples use M = omega0)
  RealField current_t;   // J^0 = -Im(Psi* D_t Psi)/omega0
  RealField current_x;   // J^1 = Im(Psi* d_x Psi)/omega0
  std::vector<std::uint8_t> node_mask, tachyon_mask, past_oriented_mask;
  double max_amplitude = 0.0;

  bool masked(std::size_t i) const { return node_mask[i] || tachyon_mask[i] || past_oriented_mask[i]; }
};

KGMadelung kg_madelung(const KGState& state, const PhysicalParams& params, const PotentialSpec& potential);

struct KGTrajectory {
  TrajectoryRecord path;  // quantum_force = -d_x M, em_force = e E
  std::vector<double> mass;
};

// RK4 on dz/dt = J^1/J^0 between consecutive Madelung snapshots (velocities
// blended linearly in time). Aborts on M^2 <= 0 or |v| >= 1 (tachyonic
// region), J^0 <= 0 (past-oriented current), nodes, or the box edge.
class KGBohmIntegrator {
 public:
  KGBohmIntegrator(double z0, std::shared_ptr<const KGMadelung> start, PhysicalParams params,
                   PotentialSpec potential, double boundary_cells = 3.0);
  void advance(std::shared_ptr<const KGMadelung> next);
  double position() const { return z_; }
  const KGTrajectory& trajectory() const { return traj_; }

 private:
  double velocity(const KGMadelung& m, double x, double t) const;
  void annotate(const KGMadelung& m);

  std::shared_ptr<const KGMadelung> current_;
  PhysicalParams params_;
  PotentialSpec potential_;
  double boundary_cells_;
  double z_;
  KGTrajectory traj_;
};

KGTrajectory kg_bohm_trajectory(double z0, const std::vector<std::shared_ptr<const KGMadelung>>& history,
                                const PhysicalParams& params, const PotentialSpec& potential);

struct KGNewtonResidual {
  std::vector<double> times;
  std::vector<double> spatial;   // gamma d/dt(M gamma v) + d_x M - e E gamma
  std::vector<double> temporal;  // gamma d/dt(M gamma) - dM/dt + v d_x M - e E gamma v
  double force_scale = 0.0;
  double rms = 0.0, relative_rms = 0.0;
  double temporal_rms = 0.0;
};

KGNewtonResidual kg_newton_residual(const KGTrajectory& traj);

}  // namespace pws
