#include "pws/split_step.hpp"

#include <cmath>

#include "fft.hpp"
#include "pws/kernels.hpp"

namespace pws {

SplitStepper::SplitStepper(const GridSpec& grid, Vec masses, double charge, double rest_energy,
                           PotentialSpec potential)
    : ops_(grid), masses_(masses), charge_(charge), rest_energy_(rest_energy), potential_(std::move(potential)) {
  for (int a = 0; a < grid.dim; ++a) {
    if (!(masses_[a] > 0.0)) throw InvalidArgument("split-step masses must be positive");
  }
  w_.resize(grid.size());
  phase_.resize(grid.size());
}

void SplitStepper::potential_phase(ComplexField& psi, double t, double half_dt, const ExtraPotential& extra) {
  const GridSpec& g = psi.grid;
  const bool cacheable = !extra && potential_.scalar_is_static();
  if (cacheable && !static_phase_.empty() && static_phase_dt_ == half_dt) {
    kernels::active().cmul(psi.data.data(), static_phase_.data(), psi.size());
    return;
  }
  if (potential_.has_scalar()) {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      w_[i] = rest_energy_ + charge_ * potential_.scalar(t, g.position(i));
    }
  } else {
    std::fill(w_.begin(), w_.end(), rest_energy_);
  }
  if (extra) extra(psi, w_);
  for (std::size_t i = 0; i < w_.size(); ++i) {
    const double theta = -w_[i] * half_dt;
    phase_[i] = {std::cos(theta), std::sin(theta)};
  }
  kernels::active().cmul(psi.data.data(), phase_.data(), psi.size());
  if (cacheable) {
    static_phase_ = phase_;
    static_phase_dt_ = half_dt;
  }
}

void SplitStepper::kinetic(ComplexField& psi, double dt, double t_mid) {
  using lcplx = std::complex<long double>;
  const GridSpec& g = psi.grid;
  const bool cacheable = !potential_.has_vector();
  if (!(cacheable && !kinetic_.empty() && kinetic_dt_ == dt)) {
    const Vec A = potential_.vector(t_mid);
    const long double norm = 1.0L / static_cast<long double>(g.size());
    auto multiplier = [&](long double energy) {
      const long double theta = -energy * static_cast<long double>(dt);
      return lcplx{std::cos(theta), std::sin(theta)} * norm;
    };
    kinetic_.resize(g.size());
    const auto& k0 = ops_.wavenumbers(0);
    if (g.dim == 1) {
      for (std::size_t j = 0; j < g.n[0]; ++j) {
        const long double p = static_cast<long double>(k0[j]) - charge_ * A[0];
        kinetic_[j] = multiplier(p * p / (2.0L * masses_[0]));
      }
    } else {
      const auto& k1 = ops_.wavenumbers(1);
      const std::size_t n1 = g.n[1];
      for (std::size_t i = 0; i < g.n[0]; ++i) {
        const long double p0 = static_cast<long double>(k0[i]) - charge_ * A[0];
        const long double e0 = p0 * p0 / (2.0L * masses_[0]);
        for (std::size_t j = 0; j < n1; ++j) {
          const long double p1 = static_cast<long double>(k1[j]) - charge_ * A[1];
          kinetic_[i * n1 + j] = multiplier(e0 + p1 * p1 / (2.0L * masses_[1]));
        }
      }
    }
    kinetic_dt_ = cacheable ? dt : 0.0;
  }
  const auto& plan = detail::extended_plan_for(g);
  work_.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) work_[i] = {psi[i].real(), psi[i].imag()};
  plan.forward(work_.data());
  for (std::size_t i = 0; i < work_.size(); ++i) work_[i] *= kinetic_[i];
  plan.backward(work_.data());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] = {static_cast<double>(work_[i].real()), static_cast<double>(work_[i].imag())};
  }
}

void SplitStepper::step(ComplexField& psi, double dt, const ExtraPotential& extra_start,
                        const ExtraPotential& extra_end, long step_index) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (psi.grid != ops_.grid()) throw InvalidArgument("field grid does not match stepper grid");
  const double t0 = psi.time;
  potential_phase(psi, t0, 0.5 * dt, extra_start);
  kinetic(psi, dt, t0 + 0.5 * dt);
  potential_phase(psi, t0 + dt, 0.5 * dt, extra_end);
  psi.time = t0 + dt;
  require_finite(psi, "split-step output", step_index);
}

}  // namespace pws
