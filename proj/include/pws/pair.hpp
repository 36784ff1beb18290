#pragma once

// Two particles, one dimension each, on a shared clock. The configuration-
// space pilot wave lives on a 2D grid (axis 0 = x1, axis 1 = x2). A product
// state is kept as its two factors, which the separable Hamiltonian evolves
// independently, so product runs reproduce single-particle runs exactly.

#include <array>
#include <memory>
#include <optional>
#include <variant>

#include "pws/bohm.hpp"
#include "pws/schrodinger.hpp"
#include "pws/soliton.hpp"

namespace pws {

struct PairParams {
  Vec masses{1.0, 1.0};
  double charge = 1.0;
  std::array<PotentialSpec, 2> potentials;  // 1D potentials acting on x1 and x2

  PhysicalParams particle(int k) const { return {masses[k], charge}; }
};

struct PairWave {
  struct Product {
    ComplexField psi1, psi2;
  };
  struct Dense {
    ComplexField psi;
  };

  GridSpec grid;  // 2D configuration grid
  PairParams params;
  std::variant<Product, Dense> state;

  static PairWave product(const ComplexField& psi1, const ComplexField& psi2, PairParams params);
  static PairWave dense(const ComplexField& psi, PairParams params);

  bool is_product() const { return std::holds_alternative<Product>(state); }
  double time() const;
  // The full 2D field (materialised for product states).
  ComplexField to_dense() const;
};

// 2D potential V1(x1) + V2(x2), A = (A1, A2), E = (E1, E2).
PotentialSpec combined_potential(const PairParams& params);

class PairStepper {
 public:
  explicit PairStepper(const PairWave& wave);
  void step(PairWave& wave, double dt);

 private:
  std::optional<SchrodingerSolver> s1_, s2_;
  std::optional<SplitStepper> dense_;
  long steps_ = 0;
};

// One Strang step with kinetic energy k1^2/(2 m1) + k2^2/(2 m2).
void ls2_step(PairWave& wave, double dt);

// Quantum potential of particle `which` (0 or 1) on the slice where the
// partner sits at partner_pos: -(own-axis curvature of |Psi|)/(2 m |Psi|),
// computed from the complex slice. Throws if the slice is empty.
RealField conditional_q(const PairWave& wave, int which, double partner_pos);

// 1 - s1^2 / sum s_k^2 for the Schmidt coefficients s_k of a 2D field
// (0 for a product state).
double schmidt_residual(const ComplexField& psi2d);

// Marginal density of one particle.
RealField reduced_density(const PairWave& wave, int which);

// Guidance velocity (v1, v2) at configuration point z.
Vec pair_guidance_velocity(const PairWave& wave, Vec z);

// dBB Gaussons on the two axis grids, centred at z and moving with the
// guidance velocity there.
std::array<SolitonState, 2> pair_gaussons(const PairWave& wave, Vec z, double b, double f0);

struct PairOptions {
  bool evolve_solitons = true;
  // Drive the solitons with q = 0 instead of the conditional potential.
  bool zero_coupling = false;
};

class PairSimulation {
 public:
  // Solitons are dBB-mode states on the axis grids of the configuration grid.
  PairSimulation(PairWave wave, Vec z0, std::optional<std::array<SolitonState, 2>> solitons, PairOptions options = {});

  void step(double dt);
  void run(double T, double dt);

  const PairWave& wave() const { return wave_; }
  double time() const { return wave_.time(); }
  const TrajectoryRecord& trajectory(int k) const { return z_[k]; }
  const TrajectoryRecord& soliton_track(int k) const { return xbar_[k]; }
  const SolitonState& soliton(int k) const { return solitons_->at(k); }
  bool has_solitons() const { return solitons_.has_value(); }
  // Per particle max |x_bar_k - z_k| over the run so far.
  std::array<double, 2> tracking_residual() const;

 private:
  void record_trajectories();
  std::array<RealField, 2> conditional_potentials() const;
  Vec positions() const;

  PairWave wave_;
  PairOptions options_;
  PairStepper stepper_;
  std::optional<std::array<SolitonState, 2>> solitons_;
  std::vector<NlsSolver> nls_;
  std::array<RealField, 2> q_prev_;
  // Product: one integrator per particle. Dense: one configuration-space integrator.
  std::vector<BohmIntegrator> integrators_;
  std::array<TrajectoryRecord, 2> z_, xbar_;
};

}  // namespace pws
