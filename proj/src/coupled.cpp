#include "pws/coupled.hpp"

#include <cmath>

#include "pws/interpolate.hpp"

namespace pws {

ClassicalIntegrator::ClassicalIntegrator(Vec z0, Vec v0, double t0, PhysicalParams params, PotentialSpec potential,
                                         int dim)
    : params_(params), potential_(std::move(potential)), dim_(dim), t_(t0), z_(z0), v_(v0) {
  record_.dim = dim;
  record_.push(t_, z_, v_, {}, em_force(potential_, params_, t_, z_), false);
}

Vec ClassicalIntegrator::accel(double t, Vec z) const {
  const Vec f = em_force(potential_, params_, t, z);
  return {f[0] / params_.omega0, f[1] / params_.omega0};
}

void ClassicalIntegrator::advance(double h) {
  auto add = [&](Vec a, Vec b, double s) {
    Vec r{};
    for (int d = 0; d < dim_; ++d) r[d] = a[d] + s * b[d];
    return r;
  };
  const Vec a1 = accel(t_, z_);
  const Vec z2 = add(z_, v_, 0.5 * h), v2 = add(v_, a1, 0.5 * h);
  const Vec a2 = accel(t_ + 0.5 * h, z2);
  const Vec z3 = add(z_, v2, 0.5 * h), v3 = add(v_, a2, 0.5 * h);
  const Vec a3 = accel(t_ + 0.5 * h, z3);
  const Vec z4 = add(z_, v3, h), v4 = add(v_, a3, h);
  const Vec a4 = accel(t_ + h, z4);
  for (int d = 0; d < dim_; ++d) {
    z_[d] += h / 6.0 * (v_[d] + 2.0 * v2[d] + 2.0 * v3[d] + v4[d]);
    v_[d] += h / 6.0 * (a1[d] + 2.0 * a2[d] + 2.0 * a3[d] + a4[d]);
  }
  t_ += h;
  record_.push(t_, z_, v_, {}, em_force(potential_, params_, t_, z_), false);
}

SolitonState dbb_gausson(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential,
                         double b, double f0, Vec center) {
  const GridSpec& g = psi.grid;
  const Vec A = potential.vector(psi.time);
  const MadelungBundle m = madelung_extract(psi, params, potential);
  GaussonParams gp;
  gp.b = b;
  gp.f0 = f0;
  gp.center = center;
  // gausson_init sets grad(phase) = omega0 v; the physical velocity is
  // (grad(phase) - eA)/omega0.
  for (int a = 0; a < g.dim; ++a) {
    gp.velocity[a] = interpolate(m.velocity[a], center) + params.charge * A[a] / params.omega0;
  }
  SolitonState s;
  s.u = gausson_init(gp, g, params.omega0);
  s.u.time = psi.time;
  s.mode = CouplingMode::dbb;
  s.nonlinearity = std::make_shared<const LogNonlinearity>(b, f0);
  s.params = params;
  return s;
}

CoupledResult run_coupled(const ComplexField& psi0, const SolitonState& soliton0, const PotentialSpec& potential,
                          const CoupledOptions& opt) {
  if (psi0.grid != soliton0.u.grid) throw InvalidArgument("pilot and soliton fields must share a grid");
  if (!(opt.dt > 0.0) || !(opt.T > 0.0)) throw InvalidArgument("T and dt must be positive");
  if (opt.diagnostic_every == 0) throw InvalidArgument("diagnostic_every must be >= 1");
  const GridSpec& g = psi0.grid;
  const PhysicalParams& params = soliton0.params;
  const bool dbb = soliton0.mode == CouplingMode::dbb;
  const auto* log = dynamic_cast<const LogNonlinearity*>(soliton0.nonlinearity.get());
  const double b = log ? log->b() : 1.0;
  const auto steps = static_cast<long>(std::llround(opt.T / opt.dt));

  SchrodingerSolver pilot(g, params, potential);
  NlsSolver nls(g, params, soliton0.nonlinearity, potential);
  const Guidance guidance = Guidance::from(params, potential);
  const SpectralOps& ops = pilot.ops();

  CoupledResult res;
  ComplexField psi = psi0;
  SolitonState sol = soliton0;
  sol.u.time = psi.time;

  MadelungBundle m0 = madelung_extract(psi, {params.omega0, params.omega0}, params.charge,
                                       potential.vector(psi.time), ops);
  auto snap0 = std::make_shared<const PilotSnapshot>(make_snapshot(psi, m0, potential.vector(psi.time)));

  CenterEstimate ce = soliton_center(sol.u, soliton0.center_history.empty()
                                                ? Vec{0.0, 0.0}
                                                : soliton0.center_history.positions.back());
  ce = soliton_center(sol.u, ce.center);
  const Vec z0 = ce.center;

  std::optional<BohmIntegrator> bohm;
  try {
    bohm.emplace(z0, snap0, guidance);
  } catch (const TrajectoryError& e) {
    res.bohm_error = e.what();
  }
  Vec v0{};
  for (int a = 0; a < g.dim; ++a) v0[a] = interpolate(m0.velocity[a], z0);
  ClassicalIntegrator classical(z0, v0, psi.time, params, potential, g.dim);

  auto record_track = [&](const MadelungBundle& m, double t) {
    Vec fq{};
    if (dbb) {
      for (int a = 0; a < g.dim; ++a) fq[a] = interpolate(m.quantum_force[a], ce.center);
    }
    Vec vel{};
    if (!res.soliton_track.empty()) {
      const double dtp = t - res.soliton_track.times.back();
      for (int a = 0; a < g.dim; ++a) vel[a] = (ce.center[a] - res.soliton_track.positions.back()[a]) / dtp;
    }
    res.soliton_track.push(t, ce.center, vel, fq, em_force(potential, params, t, ce.center), false);
  };
  auto diagnostics = [&](const MadelungBundle& m) {
    res.ehrenfest.push_back(
        ehrenfest_sample(sol.u, ops, potential, params, *sol.nonlinearity, dbb ? &m : nullptr, ce.center));
    res.conservation.record(sol.u.time, sol.u, potential, dbb ? &m.quantum_potential : nullptr, params,
                            *sol.nonlinearity);
  };
  auto phase_harmony = [&](const MadelungBundle& m) {
    res.phase_harmony_times.push_back(sol.u.time);
    res.phase_harmony.push_back(phase_harmony_residual(sol.u, m, params, potential.vector(sol.u.time), ce.center,
                                                       opt.phase_harmony_radius / std::sqrt(b), b));
  };
  auto keep = [&]() {
    res.psi_history.push_back(psi);
    res.u_history.push_back(sol.u);
  };

  res.soliton_track.dim = g.dim;
  record_track(m0, psi.time);
  diagnostics(m0);
  if (opt.phase_harmony_every > 0) phase_harmony(m0);
  if (opt.keep_every > 0) keep();
  if (opt.observer) opt.observer(0, psi, sol.u);

  for (long n = 1; n <= steps; ++n) {
    pilot.step(psi, opt.dt);
    MadelungBundle m1 = madelung_extract(psi, {params.omega0, params.omega0}, params.charge,
                                         potential.vector(psi.time), ops);
    if (dbb) {
      nls.step(sol, opt.dt, &m0.quantum_potential, &m1.quantum_potential);
    } else {
      nls.step(sol, opt.dt);
    }
    ce = soliton_center(sol.u, ce.center);
    record_track(m1, psi.time);

    if (bohm && !res.bohm_error) {
      try {
        bohm->advance(std::make_shared<const PilotSnapshot>(make_snapshot(psi, m1, potential.vector(psi.time))));
      } catch (const TrajectoryError& e) {
        res.bohm_error = e.what();
      }
    }
    classical.advance(opt.dt);

    if (n % static_cast<long>(opt.diagnostic_every) == 0) diagnostics(m1);
    if (opt.phase_harmony_every > 0 && n % static_cast<long>(opt.phase_harmony_every) == 0) phase_harmony(m1);
    if (opt.keep_every > 0 && n % static_cast<long>(opt.keep_every) == 0) keep();
    if (opt.observer) opt.observer(n, psi, sol.u);
    m0 = std::move(m1);
  }

  if (bohm) res.bohm = bohm->record();
  res.classical = classical.record();
  auto max_gap = [&](const TrajectoryRecord& ref) {
    double worst = 0.0;
    const std::size_t n = std::min(ref.size(), res.soliton_track.size());
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double d = res.soliton_track.positions[i][a] - ref.positions[i][a];
        d2 += d * d;
      }
      worst = std::max(worst, std::sqrt(d2));
    }
    return worst;
  };
  res.max_tracking_error = max_gap(res.bohm);
  res.max_classical_error = max_gap(res.classical);
  return res;
}

}  // namespace pws
