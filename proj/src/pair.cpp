#include "pws/pair.hpp"

#include <cmath>

#include "pws/interpolate.hpp"

namespace pws {

PairWave PairWave::product(const ComplexField& psi1, const ComplexField& psi2, PairParams params) {
  if (psi1.grid.dim != 1 || psi2.grid.dim != 1) throw InvalidArgument("product factors must be 1D fields");
  if (psi1.time != psi2.time) throw InvalidArgument("product factors must share a time");
  PairWave w;
  w.grid = GridSpec::plane(psi1.grid.n[0], psi1.grid.length[0], psi2.grid.n[0], psi2.grid.length[0]);
  w.params = std::move(params);
  w.state = Product{psi1, psi2};
  return w;
}

PairWave PairWave::dense(const ComplexField& psi, PairParams params) {
  if (psi.grid.dim != 2) throw InvalidArgument("a dense pair wave needs a 2D field");
  PairWave w;
  w.grid = psi.grid;
  w.params = std::move(params);
  w.state = Dense{psi};
  return w;
}

double PairWave::time() const {
  if (const auto* p = std::get_if<Product>(&state)) return p->psi1.time;
  return std::get<Dense>(state).psi.time;
}

ComplexField PairWave::to_dense() const {
  if (const auto* d = std::get_if<Dense>(&state)) return d->psi;
  const auto& p = std::get<Product>(state);
  ComplexField out(grid, p.psi1.time);
  const std::size_t n1 = grid.n[1];
  for (std::size_t i = 0; i < grid.n[0]; ++i) {
    for (std::size_t j = 0; j < n1; ++j) out.data[i * n1 + j] = p.psi1.data[i] * p.psi2.data[j];
  }
  return out;
}

PotentialSpec combined_potential(const PairParams& params) {
  const PotentialSpec p1 = params.potentials[0], p2 = params.potentials[1];
  PotentialSpec::ScalarFn V;
  if (p1.has_scalar() || p2.has_scalar()) {
    V = [p1, p2](double t, Vec x) { return p1.scalar(t, {x[0], 0.0}) + p2.scalar(t, {x[1], 0.0}); };
  }
  PotentialSpec::VectorFn A;
  if (p1.has_vector() || p2.has_vector()) {
    A = [p1, p2](double t) { return Vec{p1.vector(t)[0], p2.vector(t)[0]}; };
  }
  auto E = [p1, p2](double t, Vec x) {
    return Vec{p1.electric(t, {x[0], 0.0})[0], p2.electric(t, {x[1], 0.0})[0]};
  };
  return PotentialSpec::custom(V, A, E, p1.scalar_is_static() && p2.scalar_is_static());
}

PairStepper::PairStepper(const PairWave& wave) {
  const PairParams& pp = wave.params;
  if (wave.is_product()) {
    const auto& p = std::get<PairWave::Product>(wave.state);
    s1_.emplace(p.psi1.grid, pp.particle(0), pp.potentials[0]);
    s2_.emplace(p.psi2.grid, pp.particle(1), pp.potentials[1]);
  } else {
    dense_.emplace(wave.grid, pp.masses, pp.charge, pp.masses[0] + pp.masses[1], combined_potential(pp));
  }
}

void PairStepper::step(PairWave& wave, double dt) {
  if (auto* p = std::get_if<PairWave::Product>(&wave.state)) {
    if (!s1_) throw InvalidArgument("stepper was built for a dense pair wave");
    s1_->step(p->psi1, dt);
    s2_->step(p->psi2, dt);
  } else {
    if (!dense_) throw InvalidArgument("stepper was built for a product pair wave");
    dense_->step(std::get<PairWave::Dense>(wave.state).psi, dt, {}, {}, steps_);
  }
  ++steps_;
}

void ls2_step(PairWave& wave, double dt) {
  PairStepper stepper(wave);
  stepper.step(wave, dt);
}

namespace {

double max_modulus(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.data) m = std::max(m, std::abs(v));
  return m;
}

// Guidance on the dense grid only reads interior values near the trajectory.
MadelungBundle dense_madelung(const ComplexField& psi, const PairParams& pp, const PotentialSpec& pot) {
  return madelung_extract(psi, pp.masses, pp.charge, pot.vector(psi.time), SpectralOps(psi.grid),
                          DerivPrecision::standard);
}

}  // namespace

RealField conditional_q(const PairWave& wave, int which, double partner_pos) {
  if (which != 0 && which != 1) throw InvalidArgument("particle index must be 0 or 1");
  const int partner = 1 - which;
  const GridSpec own_grid = wave.grid.axis_grid(which);
  const GridSpec partner_grid = wave.grid.axis_grid(partner);
  const Vec masses{wave.params.masses[which], wave.params.masses[which]};
  ComplexField slice(own_grid, wave.time());
  double reference = 0.0;

  if (const auto* p = std::get_if<PairWave::Product>(&wave.state)) {
    const ComplexField& own = which == 0 ? p->psi1 : p->psi2;
    const ComplexField& other = which == 0 ? p->psi2 : p->psi1;
    const cplx c = interpolate(other, Vec{partner_pos, 0.0});
    reference = max_modulus(own) * max_modulus(other);
    for (std::size_t i = 0; i < slice.size(); ++i) slice.data[i] = c * own.data[i];
  } else {
    const ComplexField& psi = std::get<PairWave::Dense>(wave.state).psi;
    const CubicStencil st = cubic_stencil(partner_grid, 0, partner_pos);
    const std::size_t n1 = wave.grid.n[1];
    reference = max_modulus(psi);
    for (std::size_t i = 0; i < slice.size(); ++i) {
      cplx acc{};
      for (long b = 0; b < kStencilWidth; ++b) {
        const std::size_t idx = which == 0 ? i * n1 + st.index[b] : st.index[b] * n1 + i;
        acc += st.weight[b] * psi.data[idx];
      }
      slice.data[i] = acc;
    }
  }
  if (!(max_modulus(slice) >= kNodeFloor * reference)) {
    throw InvalidArgument("conditional slice at partner position " + std::to_string(partner_pos) +
                          " lies below the node floor");
  }
  return quantum_potential(slice, masses, SpectralOps(own_grid));
}

double schmidt_residual(const ComplexField& psi) {
  if (psi.grid.dim != 2) throw InvalidArgument("Schmidt decomposition needs a 2D field");
  const std::size_t n0 = psi.grid.n[0], n1 = psi.grid.n[1];
  double total = 0.0;
  for (const auto& v : psi.data) total += std::norm(v);
  if (!(total > 0.0)) throw InvalidArgument("zero field");
  // Power iteration on M^H M for the leading singular value of M = psi(i, j).
  std::vector<cplx> x(n1, cplx{1.0, 0.0}), y(n0), z(n1);
  double sigma2 = 0.0;
  for (int it = 0; it < 500; ++it) {
    double xn = 0.0;
    for (const auto& v : x) xn += std::norm(v);
    xn = std::sqrt(xn);
    for (auto& v : x) v /= xn;
    for (std::size_t i = 0; i < n0; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < n1; ++j) acc += psi.data[i * n1 + j] * x[j];
      y[i] = acc;
    }
    std::fill(z.begin(), z.end(), cplx{});
    for (std::size_t i = 0; i < n0; ++i) {
      for (std::size_t j = 0; j < n1; ++j) z[j] += std::conj(psi.data[i * n1 + j]) * y[i];
    }
    double next = 0.0;
    for (std::size_t j = 0; j < n1; ++j) next += (std::conj(x[j]) * z[j]).real();
    x.swap(z);
    if (std::abs(next - sigma2) <= 1e-15 * next) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::max(0.0, 1.0 - sigma2 / total);
}

RealField reduced_density(const PairWave& wave, int which) {
  if (which != 0 && which != 1) throw InvalidArgument("particle index must be 0 or 1");
  const ComplexField psi = wave.to_dense();
  const std::size_t n0 = wave.grid.n[0], n1 = wave.grid.n[1];
  RealField out(wave.grid.axis_grid(which), psi.time);
  const double dx_other = wave.grid.spacing(1 - which);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) out.data[which == 0 ? i : j] += std::norm(psi.data[i * n1 + j]);
  }
  for (double& v : out.data) v *= dx_other;
  return out;
}

Vec pair_guidance_velocity(const PairWave& wave, Vec z) {
  const PairParams& pp = wave.params;
  Vec v{};
  if (wave.is_product()) {
    const auto& p = std::get<PairWave::Product>(wave.state);
    for (int k = 0; k < 2; ++k) {
      const ComplexField& f = k == 0 ? p.psi1 : p.psi2;
      const MadelungBundle m = madelung_extract(f, pp.particle(k), pp.potentials[k]);
      v[k] = interpolate(m.velocity[0], Vec{z[k], 0.0});
    }
    return v;
  }
  const ComplexField& psi = std::get<PairWave::Dense>(wave.state).psi;
  const PotentialSpec pot = combined_potential(pp);
  const MadelungBundle m = dense_madelung(psi, pp, pot);
  for (int k = 0; k < 2; ++k) v[k] = interpolate(m.velocity[k], z);
  return v;
}

std::array<SolitonState, 2> pair_gaussons(const PairWave& wave, Vec z, double b, double f0) {
  const Vec v = pair_guidance_velocity(wave, z);
  auto nl = std::make_shared<const LogNonlinearity>(b, f0);
  std::array<SolitonState, 2> out;
  for (int k = 0; k < 2; ++k) {
    const PhysicalParams par = wave.params.particle(k);
    GaussonParams gp;
    gp.b = b;
    gp.f0 = f0;
    gp.center = {z[k], 0.0};
    gp.velocity = {v[k] + par.charge * wave.params.potentials[k].vector(wave.time())[0] / par.omega0, 0.0};
    out[k].u = gausson_init(gp, wave.grid.axis_grid(k), par.omega0);
    out[k].u.time = wave.time();
    out[k].mode = CouplingMode::dbb;
    out[k].nonlinearity = nl;
    out[k].params = par;
  }
  return out;
}

PairSimulation::PairSimulation(PairWave wave, Vec z0, std::optional<std::array<SolitonState, 2>> solitons,
                               PairOptions options)
    : wave_(std::move(wave)), options_(options), stepper_(wave_), solitons_(std::move(solitons)) {
  const PairParams& pp = wave_.params;
  if (wave_.is_product()) {
    const auto& p = std::get<PairWave::Product>(wave_.state);
    for (int k = 0; k < 2; ++k) {
      const ComplexField& f = k == 0 ? p.psi1 : p.psi2;
      const PhysicalParams par = pp.particle(k);
      auto snap = std::make_shared<const PilotSnapshot>(make_snapshot(f, par, pp.potentials[k]));
      integrators_.emplace_back(Vec{z0[k], 0.0}, snap, Guidance::from(par, pp.potentials[k]));
    }
  } else {
    const PotentialSpec pot = combined_potential(pp);
    const ComplexField& psi = std::get<PairWave::Dense>(wave_.state).psi;
    const MadelungBundle mb = dense_madelung(psi, pp, pot);
    auto snap = std::make_shared<const PilotSnapshot>(make_snapshot(psi, mb, pot.vector(psi.time)));
    integrators_.emplace_back(z0, snap, Guidance{pp.masses, pp.charge, pot});
  }
  if (solitons_ && options_.evolve_solitons) {
    for (int k = 0; k < 2; ++k) {
      SolitonState& s = solitons_->at(k);
      if (s.u.grid != wave_.grid.axis_grid(k)) throw InvalidArgument("soliton grid must be the particle's axis grid");
      s.mode = CouplingMode::dbb;
      s.u.time = wave_.time();
      nls_.emplace_back(s.u.grid, pp.particle(k), s.nonlinearity, pp.potentials[k]);
    }
    q_prev_ = conditional_potentials();
  }
  record_trajectories();
}

Vec PairSimulation::positions() const {
  if (integrators_.size() == 2) return {integrators_[0].position()[0], integrators_[1].position()[0]};
  return integrators_[0].position();
}

std::array<RealField, 2> PairSimulation::conditional_potentials() const {
  std::array<RealField, 2> q;
  const Vec z = positions();
  for (int k = 0; k < 2; ++k) {
    q[k] = options_.zero_coupling ? RealField(wave_.grid.axis_grid(k), wave_.time())
                                  : conditional_q(wave_, k, z[1 - k]);
  }
  return q;
}

void PairSimulation::record_trajectories() {
  for (int k = 0; k < 2; ++k) {
    z_[k].dim = 1;
    const bool product = integrators_.size() == 2;
    const TrajectoryRecord& r = integrators_[product ? k : 0].record();
    const std::size_t i = r.size() - 1;
    const int c = product ? 0 : k;
    z_[k].push(r.times[i], {r.positions[i][c], 0.0}, {r.velocities[i][c], 0.0}, {r.quantum_force[i][c], 0.0},
               {r.em_force[i][c], 0.0}, r.near_node[i] != 0);
    if (solitons_) {
      const SolitonState& s = solitons_->at(k);
      const Vec ref = xbar_[k].empty() ? Vec{z_[k].positions.front()[0], 0.0} : xbar_[k].positions.back();
      const CenterEstimate ce = soliton_center(s.u, ref);
      xbar_[k].dim = 1;
      xbar_[k].push(s.u.time, ce.center, {}, {}, {}, false);
    }
  }
}

void PairSimulation::step(double dt) {
  stepper_.step(wave_, dt);
  const PairParams& pp = wave_.params;
  if (wave_.is_product()) {
    const auto& p = std::get<PairWave::Product>(wave_.state);
    for (int k = 0; k < 2; ++k) {
      const ComplexField& f = k == 0 ? p.psi1 : p.psi2;
      integrators_[k].advance(
          std::make_shared<const PilotSnapshot>(make_snapshot(f, pp.particle(k), pp.potentials[k])));
    }
  } else {
    const PotentialSpec pot = combined_potential(pp);
    const ComplexField& psi = std::get<PairWave::Dense>(wave_.state).psi;
    const MadelungBundle mb = dense_madelung(psi, pp, pot);
    integrators_[0].advance(std::make_shared<const PilotSnapshot>(make_snapshot(psi, mb, pot.vector(psi.time))));
  }
  if (solitons_ && options_.evolve_solitons) {
    auto q_next = conditional_potentials();
    for (int k = 0; k < 2; ++k) nls_[k].step(solitons_->at(k), dt, &q_prev_[k], &q_next[k]);
    q_prev_ = std::move(q_next);
  }
  record_trajectories();
}

void PairSimulation::run(double T, double dt) {
  const auto steps = static_cast<long>(std::llround(T / dt));
  for (long n = 0; n < steps; ++n) step(dt);
}

std::array<double, 2> PairSimulation::tracking_residual() const {
  std::array<double, 2> r{0.0, 0.0};
  if (!solitons_) return r;
  for (int k = 0; k < 2; ++k) {
    const std::size_t n = std::min(z_[k].size(), xbar_[k].size());
    for (std::size_t i = 0; i < n; ++i) {
      r[k] = std::max(r[k], std::abs(xbar_[k].positions[i][0] - z_[k].positions[i][0]));
    }
  }
  return r;
}

}  // namespace pws
