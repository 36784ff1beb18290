#pragma once

#include <vector>

#include "pws/madelung.hpp"
#include "pws/nonlinearity.hpp"
#include "pws/soliton.hpp"

namespace pws {

// P_t = 2 omega0 integral |u|^2.
double norm_pt(const ComplexField& u, double omega0);

struct EnergyTerms {
  double total = 0.0;          // E_t
  double static_energy = 0.0;  // E_s = integral (U - N rho)
};

// E_t = 2 omega0 H with
//   H = integral [ |(grad - ieA)u|^2/(2 omega0) + (omega0 + eV + q)|u|^2 + U(|u|^2)/(2 omega0) ].
// The 2 omega0 factor matches the normalisation of P_t, so that a resting
// Gausson has E_t/P_t = omega0 + b/(2 omega0), i.e. E_t/P_t - b/(2 omega0)
// equals its phase rotation rate.
EnergyTerms energy_nls(const ComplexField& u, const PotentialSpec& potential, const RealField* external_q,
                       const PhysicalParams& params, const Nonlinearity& nl);

// Fraction of the norm within `cells` cells of any box face.
double boundary_mass(const ComplexField& u, double cells = 3.0);

// Watchdog threshold on boundary_mass.
inline constexpr double kBoundaryMassLimit = 1e-8;

struct ConservationReport {
  std::vector<double> times, norm, energy, static_energy, energy_ratio, boundary_mass;
  double max_norm_drift = 0.0;    // max |P_t - P_0| / P_0
  double max_energy_drift = 0.0;  // max |E_t - E_0| / |E_0|
  double max_static_identity_error = 0.0;  // max |E_s - b C| / (b C), log nonlinearity only
  bool boundary_flag = false;

  void record(double t, const ComplexField& u, const PotentialSpec& potential, const RealField* external_q,
              const PhysicalParams& params, const Nonlinearity& nl);
};

struct EhrenfestSample {
  double t = 0.0;
  Vec center{};
  double norm = 0.0;                 // C
  Vec mean_em_force{};               // <F_em>/C
  Vec quantum_force_at_center{};     // F_Q(x_bar), zero without a pilot wave
  Vec mean_quantum_force{};          // <F_Q>/C
  Vec grad_response_integral{};      // integral rho N'(rho) grad rho
  Vec grad_curvature_integral{};     // integral (f grad lap f - lap f grad f), f = |u|
  double response_scale = 0.0;       // integral |rho N'(rho)| |grad rho|
  double curvature_scale = 0.0;      // integral |f grad lap f| + |lap f grad f|
};

EhrenfestSample ehrenfest_sample(const ComplexField& u, const SpectralOps& ops, const PotentialSpec& potential,
                                 const PhysicalParams& params, const Nonlinearity& nl, const MadelungBundle* pilot,
                                 Vec reference);

struct EhrenfestReport {
  std::vector<double> times;
  std::vector<Vec> center, acceleration, mean_em_force, quantum_force, residual, residual_without_fq;
  double force_scale = 0.0;  // max |<F_em>/C + F_Q(x_bar)|
  double rms = 0.0, relative_rms = 0.0;
  double max_abs = 0.0;
  double rms_without_fq = 0.0, max_abs_without_fq = 0.0;
  // max over samples of |integral| / scale for the two mean-value cancellations
  double grad_response_ratio = 0.0, grad_curvature_ratio = 0.0;
};

// residual = omega0 x_bar'' - <F_em>/C - [F_Q(x_bar) in dBB mode]; needs >= 7 samples.
EhrenfestReport ehrenfest_report(const std::vector<EhrenfestSample>& samples, double omega0, CouplingMode mode);

// Bins for comparing positions with a density: 64 bins over mean +- 4 std in
// 1D, 8 x 8 in 2D (same total count).
struct HistogramBins {
  int dim = 1;
  std::array<std::size_t, 2> count{64, 1};
  std::array<double, 2> lo{}, hi{};
  Vec width() const { return {(hi[0] - lo[0]) / count[0], (hi[1] - lo[1]) / count[1]}; }
};

HistogramBins density_bins(const RealField& density, double nsigma = 4.0);

// L1 distance between the normalised position histogram and the normalised
// density binned on the same cells (grid cells spread uniformly, mass
// outside the bin range pooled into one extra bin). Lies in [0, 2].
double histogram_l1(const std::vector<Vec>& positions, const RealField& density, const HistogramBins& bins);

struct EquivarianceReport {
  std::size_t ensemble_size = 0;
  std::size_t bins = 0;
  std::vector<Vec> bin_width;
  std::vector<double> times, l1;
};

// One entry per requested time: positions_at[k] are the ensemble positions at
// density_at[k].time.
EquivarianceReport equivariance_distance(const std::vector<ComplexField>& psi_at,
                                         const std::vector<std::vector<Vec>>& positions_at);

}  // namespace pws
