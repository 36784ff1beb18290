#pragma once

// Bohmian guidance dz/dt = (Im[grad Psi / Psi] - e A) / m integrated with RK4
// through a sequence of pilot-wave snapshots. Psi and grad Psi are
// interpolated in space (cubic); the velocities computed at the two bracketing
// snapshots are blended linearly in time.

#include <memory>
#include <vector>

#include "pws/madelung.hpp"
#include "pws/trajectory.hpp"

namespace pws {

struct PilotSnapshot {
  double time = 0.0;
  ComplexField psi;
  ComplexVectorField grad;
  VectorField quantum_force;
  double max_amplitude = 0.0;
  Vec vector_potential{0.0, 0.0};
};

// Snapshot from a field and its Madelung bundle (the bundle supplies grad Psi
// and F_Q).
PilotSnapshot make_snapshot(const ComplexField& psi, const MadelungBundle& mb, Vec vector_potential);
PilotSnapshot make_snapshot(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential);

struct Guidance {
  Vec masses{1.0, 1.0};
  double charge = 1.0;
  PotentialSpec potential;
  // Trajectories must stay this many cells away from the box edge.
  double boundary_cells = 3.0;
  // Steps where |Psi| < near_node_fraction * max|Psi| are flagged.
  double near_node_fraction = 1e-3;

  static Guidance from(const PhysicalParams& p, const PotentialSpec& pot) {
    return Guidance{{p.omega0, p.omega0}, p.charge, pot};
  }
};

class BohmIntegrator {
 public:
  BohmIntegrator(Vec z0, std::shared_ptr<const PilotSnapshot> start, Guidance guidance);

  // Integrate from the current snapshot time to next->time (one RK4 step).
  // Throws TrajectoryError, carrying the record so far.
  void advance(std::shared_ptr<const PilotSnapshot> next);

  Vec position() const { return z_; }
  double time() const { return current_->time; }
  const TrajectoryRecord& record() const { return record_; }

 private:
  Vec velocity(const PilotSnapshot& s, Vec x, double t) const;
  void check_inside(Vec x, double t) const;
  void annotate(const PilotSnapshot& s);

  std::shared_ptr<const PilotSnapshot> current_;
  Guidance guidance_;
  Vec z_;
  TrajectoryRecord record_;
};

// Trajectory over a stored snapshot history.
TrajectoryRecord integrate_bohm(Vec z0, const std::vector<std::shared_ptr<const PilotSnapshot>>& history,
                                const Guidance& guidance);

struct NewtonResidual {
  std::vector<double> times;
  std::vector<Vec> residual;
  double rms = 0.0;
  double force_scale = 0.0;   // max |F_Q + F_em| along the path
  double relative_rms = 0.0;  // rms / force_scale, or rms if the scale is 0
};

// r = m z'' - F_Q - F_em using the forces recorded along the trajectory.
NewtonResidual newton_bohm_residual(const TrajectoryRecord& traj, Vec masses);

// max |d_t a^2 + div(a^2 v)| over interior, unmasked samples; d_t by centred
// differences across consecutive fields.
double continuity_residual(const std::vector<ComplexField>& history, const Guidance& guidance);

}  // namespace pws
