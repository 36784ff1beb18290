#include "pws/kg.hpp"

#include <algorithm>
#include <cmath>

#include "pws/interpolate.hpp"
#include "pws/kernels.hpp"
#include "pws/madelung.hpp"

namespace pws {

KGSolver::KGSolver(const GridSpec& grid, double dt, PhysicalParams params, PotentialSpec potential)
    : ops_(grid), dt_(dt), params_(params), potential_(std::move(potential)) {
  params_.validate();
  if (grid.dim != 1) throw InvalidArgument("the Klein-Gordon sector is 1+1 dimensional");
  if (potential_.has_vector()) throw InvalidArgument("the Klein-Gordon sector supports only a scalar potential");
  const double limit = 0.5 * grid.spacing(0);
  if (!(dt > 0.0) || dt > limit) {
    throw InvalidArgument("KG time step " + std::to_string(dt) + " violates CFL dt <= 0.5 dx = " +
                          std::to_string(limit));
  }
}

double KGSolver::discrete_frequency(double E, double dt) {
  const double c = 1.0 - 0.5 * E * E * dt * dt;
  if (c < -1.0) throw InvalidArgument("mode frequency beyond the leapfrog stability limit");
  return std::acos(c) / dt;
}

std::vector<cplx> KGSolver::link(double t, double sign) const {
  // e^{sign * i e V(t, x) dt}
  const GridSpec& g = ops_.grid();
  std::vector<cplx> l(g.size(), cplx{1.0, 0.0});
  if (!potential_.has_scalar()) return l;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double th = sign * params_.charge * potential_.scalar(t, g.position(i)) * dt_;
    l[i] = {std::cos(th), std::sin(th)};
  }
  return l;
}

void KGSolver::compute_next(KGState& s) const {
  const GridSpec& g = ops_.grid();
  const std::size_t n = g.size();
  const double t = s.current.time, dt = dt_;
  const ComplexField lap = ops_.derivative(s.current, {2, 0});
  ComplexField next(g, t + dt);
  const auto back = link(t - 0.5 * dt, -1.0);
  const auto fwd = link(t + 0.5 * dt, -1.0);
  const double w2 = params_.omega0 * params_.omega0, dt2 = dt * dt;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx rhs = lap.data[i] - w2 * s.current.data[i];
    next.data[i] = fwd[i] * (2.0 * s.current.data[i] - back[i] * s.prev.data[i] + dt2 * rhs);
  }
  require_finite(next, "Klein-Gordon step", s.steps);
  s.next = std::move(next);
}

KGState KGSolver::init(const ComplexField& psi0, KGInit mode) const {
  if (psi0.grid != ops_.grid()) throw InvalidArgument("initial field grid differs from solver grid");
  require_finite(psi0, "Klein-Gordon initial field");
  KGState s;
  s.dt = dt_;
  s.current = psi0;
  s.prev = psi0;
  s.prev.time = psi0.time - dt_;
  if (mode == KGInit::rest_frequency) {
    // Covariant rest condition: back-link * prev = e^{i omega0 dt} psi.
    const cplx ph = std::polar(1.0, params_.omega0 * dt_);
    const auto undo = link(psi0.time - 0.5 * dt_, 1.0);
    for (std::size_t i = 0; i < s.prev.size(); ++i) s.prev.data[i] *= ph * undo[i];
  } else {
    const auto& k = ops_.wavenumbers(0);
    const double norm = 1.0 / static_cast<double>(k.size());
    std::vector<cplx> m(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double E = std::sqrt(k[j] * k[j] + params_.omega0 * params_.omega0);
      m[j] = std::polar(norm, discrete_frequency(E, dt_) * dt_);
    }
    ops_.apply_multiplier(s.prev, m);
  }
  compute_next(s);
  return s;
}

KGState KGSolver::init(const ComplexField& psi0, const ComplexField& dpsi) const {
  if (psi0.grid != ops_.grid() || dpsi.grid != ops_.grid()) throw InvalidArgument("initial field grid mismatch");
  const GridSpec& g = ops_.grid();
  const ComplexField lap = ops_.derivative(psi0, {2, 0});
  KGState s;
  s.dt = dt_;
  s.current = psi0;
  s.prev = ComplexField(g, psi0.time - dt_);
  const double w2 = params_.omega0 * params_.omega0, e = params_.charge;
  for (std::size_t i = 0; i < psi0.size(); ++i) {
    const double V = potential_.scalar(psi0.time, g.position(i));
    // (d_t + ieV)^2 Psi = lap - w^2 Psi, neglecting dV/dt.
    const cplx ptt = lap.data[i] - w2 * psi0.data[i] - cplx{0.0, 2.0 * e * V} * dpsi.data[i] +
                     e * e * V * V * psi0.data[i];
    s.prev.data[i] = psi0.data[i] - dt_ * dpsi.data[i] + 0.5 * dt_ * dt_ * ptt;
  }
  compute_next(s);
  return s;
}

void KGSolver::step(KGState& s) const {
  s.prev = std::move(s.current);
  s.current = std::move(s.next);
  ++s.steps;
  compute_next(s);
}

KGState lkg_step(const KGState& state, const PotentialSpec& potential, const PhysicalParams& params) {
  KGSolver solver(state.current.grid, state.dt, params, potential);
  KGState s = state;
  solver.step(s);
  return s;
}

KGMadelung kg_madelung(const KGState& s, const PhysicalParams& params, const PotentialSpec& potential) {
  const ComplexField& psi = s.current;
  const GridSpec& g = psi.grid;
  const std::size_t n = g.size();
  const double dt = s.dt, t = psi.time, w0 = params.omega0, e = params.charge;
  require_finite(psi, "Klein-Gordon Madelung input");
  const SpectralOps ops(g);
  const DerivOrder orders[2] = {{1, 0}, {2, 0}};
  const auto d = ops.derivatives(psi, orders);

  KGMadelung m;
  m.time = t;
  m.amplitude = abs(psi);
  m.max_amplitude = *std::max_element(m.amplitude.data.begin(), m.amplitude.data.end());
  if (!(m.max_amplitude > 0.0)) throw InvalidArgument("Klein-Gordon field is identically zero");
  const RealField a_prev = abs(s.prev), a_next = abs(s.next);
  m.mass_sq = RealField(g, t);
  m.mass = RealField(g, t);
  m.current_t = RealField(g, t);
  m.current_x = RealField(g, t);
  m.node_mask.assign(n, 0);
  m.tachyon_mask.assign(n, 0);
  m.past_oriented_mask.assign(n, 0);
  RealField msq_smooth(g, t);

  const double floor = kNodeFloor * m.max_amplitude;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = m.amplitude.data[i];
    const double V_p = potential.scalar(t + 0.5 * dt, g.position(i));
    const double V_m = potential.scalar(t - 0.5 * dt, g.position(i));
    const cplx up = std::polar(1.0, e * V_p * dt), um = std::polar(1.0, -e * V_m * dt);
    const cplx dtpsi = (up * s.next.data[i] - um * s.prev.data[i]) / (2.0 * dt);
    m.current_t.data[i] = -(std::conj(psi.data[i]) * dtpsi).imag() / w0;
    m.current_x.data[i] = (std::conj(psi.data[i]) * d[0].data[i]).imag() / w0;
    if (a < floor) {
      m.node_mask[i] = 1;
      m.mass_sq.data[i] = w0 * w0;
      msq_smooth.data[i] = w0 * w0;
      m.mass.data[i] = w0;
      continue;
    }
    const cplx inv = 1.0 / psi.data[i];
    const cplx R = d[0].data[i] * inv, P = d[1].data[i] * inv;
    const double axx_over_a = P.real() + R.imag() * R.imag();
    const double att_over_a = (a_next.data[i] - 2.0 * a + a_prev.data[i]) / (dt * dt * a);
    const double msq = w0 * w0 + att_over_a - axx_over_a;
    m.mass_sq.data[i] = msq;
    m.mass.data[i] = std::sqrt(std::max(msq, 0.0));
    m.tachyon_mask[i] = msq <= 0.0 ? 1 : 0;
    m.past_oriented_mask[i] = m.current_t.data[i] <= 0.0 ? 1 : 0;
    msq_smooth.data[i] = msq > 0.0 ? msq : w0 * w0;
    if (!m.masked(i)) ++usable;
  }
  if (usable == 0) throw InvalidArgument("every Klein-Gordon sample is masked");
  // d_x M = d_x(M^2) / (2M). Fourth-order central differences rather than a
  // spectral derivative: M^2 is not band limited (masked samples are
  // substituted), and spectral ringing from one bad region would reach the
  // whole box.
  m.mass_grad = RealField(g, t);
  const double h = g.spacing(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto at = [&](long off) { return msq_smooth.data[static_cast<std::size_t>(static_cast<long>(i + n) + off) % n]; };
    const double d1 = (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h);
    m.mass_grad.data[i] = d1 / (2.0 * std::sqrt(msq_smooth.data[i]));
  }
  return m;
}

KGBohmIntegrator::KGBohmIntegrator(double z0, std::shared_ptr<const KGMadelung> start, PhysicalParams params,
                                   PotentialSpec potential, double boundary_cells)
    : current_(std::move(start)), params_(params), potential_(std::move(potential)),
      boundary_cells_(boundary_cells), z_(z0) {
  if (!current_) throw InvalidArgument("trajectory needs an initial snapshot");
  traj_.path.dim = 1;
  annotate(*current_);
}

double KGBohmIntegrator::velocity(const KGMadelung& m, double x, double t) const {
  using Kind = TrajectoryError::Kind;
  const GridSpec& g = m.amplitude.grid;
  const double lim = 0.5 * g.length[0] - boundary_cells_ * g.spacing(0);
  const double last = current_->time;
  if (!std::isfinite(x) || std::abs(x) > lim) {
    throw TrajectoryError(Kind::boundary_exit, last, traj_.path, "position " + std::to_string(x));
  }
  const Vec p{x, 0.0};
  if (interpolate(m.amplitude, p) < kNodeFloor * m.max_amplitude) {
    throw TrajectoryError(Kind::node_encounter, last, traj_.path, "t=" + std::to_string(t));
  }
  const double msq = interpolate(m.mass_sq, p);
  if (!(msq > 0.0)) {
    throw TrajectoryError(Kind::tachyonic_region, last, traj_.path,
                          "M^2=" + std::to_string(msq) + " at x=" + std::to_string(x));
  }
  const double j0 = interpolate(m.current_t, p);
  if (!(j0 > 0.0)) {
    throw TrajectoryError(Kind::past_oriented_current, last, traj_.path, "J0=" + std::to_string(j0));
  }
  const double v = interpolate(m.current_x, p) / j0;
  if (!(std::abs(v) < 1.0)) {
    throw TrajectoryError(Kind::tachyonic_region, last, traj_.path, "|v|=" + std::to_string(std::abs(v)));
  }
  return v;
}

void KGBohmIntegrator::annotate(const KGMadelung& m) {
  const Vec p{z_, 0.0};
  const double v = velocity(m, z_, m.time);
  const double E = potential_.electric(m.time, p)[0];
  traj_.path.push(m.time, p, {v, 0.0}, {-interpolate(m.mass_grad, p), 0.0}, {params_.charge * E, 0.0}, false);
  traj_.mass.push_back(interpolate(m.mass, p));
}

void KGBohmIntegrator::advance(std::shared_ptr<const KGMadelung> next) {
  if (!next || !(next->time > current_->time)) throw InvalidArgument("snapshots must advance in time");
  const KGMadelung& s0 = *current_;
  const KGMadelung& s1 = *next;
  const double h = s1.time - s0.time, tm = s0.time + 0.5 * h;
  auto mid = [&](double x) { return 0.5 * velocity(s0, x, tm) + 0.5 * velocity(s1, x, tm); };
  const double k1 = velocity(s0, z_, s0.time);
  const double k2 = mid(z_ + 0.5 * h * k1);
  const double k3 = mid(z_ + 0.5 * h * k2);
  const double k4 = velocity(s1, z_ + h * k3, s1.time);
  const double z = z_ + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  velocity(s1, z, s1.time);  // validates the landing point before committing
  z_ = z;
  current_ = std::move(next);
  annotate(*current_);
}

KGTrajectory kg_bohm_trajectory(double z0, const std::vector<std::shared_ptr<const KGMadelung>>& history,
                                const PhysicalParams& params, const PotentialSpec& potential) {
  if (history.empty()) throw InvalidArgument("empty Klein-Gordon history");
  KGBohmIntegrator integ(z0, history.front(), params, potential);
  for (std::size_t i = 1; i < history.size(); ++i) integ.advance(history[i]);
  return integ.trajectory();
}

KGNewtonResidual kg_newton_residual(const KGTrajectory& traj) {
  const auto& path = traj.path;
  const std::size_t n = path.size();
  if (n < 5) throw InvalidArgument("Newton residual needs at least 5 trajectory points");
  std::vector<double> p(n), e(n), gam(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = path.velocities[i][0];
    gam[i] = 1.0 / std::sqrt(1.0 - v * v);
    p[i] = traj.mass[i] * gam[i] * v;
    e[i] = traj.mass[i] * gam[i];
  }
  KGNewtonResidual r;
  double s2 = 0.0, t2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h = path.times[i + 1] - path.times[i - 1];
    const double v = path.velocities[i][0];
    const double dM = -path.quantum_force[i][0];  // d_x M
    const double fem = path.em_force[i][0];
    const double dpdt = (p[i + 1] - p[i - 1]) / h;
    const double dedt = (e[i + 1] - e[i - 1]) / h;
    const double dMdt = (traj.mass[i + 1] - traj.mass[i - 1]) / h;
    const double rs = gam[i] * dpdt + dM - fem * gam[i];
    const double rt = gam[i] * dedt - dMdt + v * dM - fem * gam[i] * v;
    r.times.push_back(path.times[i]);
    r.spatial.push_back(rs);
    r.temporal.push_back(rt);
    r.force_scale = std::max({r.force_scale, std::abs(gam[i] * dpdt), std::abs(dM), std::abs(fem * gam[i])});
    s2 += rs * rs;
    t2 += rt * rt;
  }
  const double m = static_cast<double>(r.spatial.size());
  r.rms = std::sqrt(s2 / m);
  r.temporal_rms = std::sqrt(t2 / m);
  r.relative_rms = r.force_scale > 0.0 ? r.rms / r.force_scale : r.rms;
  return r;
}

}  // namespace pws
