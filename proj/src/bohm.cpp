#include "pws/bohm.hpp"

#include <algorithm>
#include <cmath>

#include "pws/interpolate.hpp"

namespace pws {

std::vector<Vec> path_acceleration(const std::vector<double>& t, const std::vector<Vec>& z) {
  std::vector<Vec> acc;
  if (t.size() < 3) return acc;
  acc.reserve(t.size() - 2);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double hm = t[i] - t[i - 1], hp = t[i + 1] - t[i];
    Vec a{};
    for (int d = 0; d < 2; ++d) {
      a[d] = 2.0 * ((z[i + 1][d] - z[i][d]) / hp - (z[i][d] - z[i - 1][d]) / hm) / (hp + hm);
    }
    acc.push_back(a);
  }
  return acc;
}

PilotSnapshot make_snapshot(const ComplexField& psi, const MadelungBundle& mb, Vec A) {
  PilotSnapshot s;
  s.time = psi.time;
  s.psi = psi;
  s.grad = mb.psi_gradient;
  s.quantum_force = mb.quantum_force;
  s.max_amplitude = mb.max_amplitude;
  s.vector_potential = A;
  return s;
}

PilotSnapshot make_snapshot(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& pot) {
  return make_snapshot(psi, madelung_extract(psi, params, pot), pot.vector(psi.time));
}

BohmIntegrator::BohmIntegrator(Vec z0, std::shared_ptr<const PilotSnapshot> start, Guidance guidance)
    : current_(std::move(start)), guidance_(std::move(guidance)), z_(z0) {
  if (!current_) throw InvalidArgument("trajectory needs an initial snapshot");
  record_.dim = current_->psi.grid.dim;
  check_inside(z_, current_->time);
  annotate(*current_);
}

void BohmIntegrator::check_inside(Vec x, double t) const {
  const GridSpec& g = current_->psi.grid;
  for (int a = 0; a < g.dim; ++a) {
    const double lim = 0.5 * g.length[a] - guidance_.boundary_cells * g.spacing(a);
    if (!std::isfinite(x[a]) || std::abs(x[a]) > lim) {
      throw TrajectoryError(TrajectoryError::Kind::boundary_exit, t, record_,
                            "position " + std::to_string(x[a]) + " on axis " + std::to_string(a));
    }
  }
}

Vec BohmIntegrator::velocity(const PilotSnapshot& s, Vec x, double t) const {
  check_inside(x, t);
  const cplx psi = interpolate(s.psi, x);
  const double a2 = std::norm(psi);
  const double floor = kNodeFloor * s.max_amplitude;
  if (!(a2 >= floor * floor)) {
    throw TrajectoryError(TrajectoryError::Kind::node_encounter, current_->time, record_,
                          "|Psi| below the node floor at t=" + std::to_string(t));
  }
  Vec v{};
  for (int a = 0; a < s.psi.grid.dim; ++a) {
    const cplx dpsi = interpolate(s.grad[a], x);
    const double im = (std::conj(psi) * dpsi).imag() / a2;
    v[a] = (im - guidance_.charge * s.vector_potential[a]) / guidance_.masses[a];
  }
  return v;
}

void BohmIntegrator::annotate(const PilotSnapshot& s) {
  const int dim = s.psi.grid.dim;
  const Vec v = velocity(s, z_, s.time);
  Vec fq{};
  for (int a = 0; a < dim; ++a) fq[a] = interpolate(s.quantum_force[a], z_);
  const Vec E = guidance_.potential.electric(s.time, z_);
  Vec fem{};
  for (int a = 0; a < dim; ++a) fem[a] = guidance_.charge * E[a];
  const bool near = std::abs(interpolate(s.psi, z_)) < guidance_.near_node_fraction * s.max_amplitude;
  record_.push(s.time, z_, v, fq, fem, near);
}

void BohmIntegrator::advance(std::shared_ptr<const PilotSnapshot> next) {
  if (!next || !(next->time > current_->time)) throw InvalidArgument("snapshots must advance in time");
  if (next->psi.grid != current_->psi.grid) throw InvalidArgument("snapshot grid changed");
  const PilotSnapshot& s0 = *current_;
  const PilotSnapshot& s1 = *next;
  const double t0 = s0.time, h = s1.time - s0.time, tm = t0 + 0.5 * h;
  const int dim = s0.psi.grid.dim;

  auto mid = [&](Vec x) {
    const Vec a = velocity(s0, x, tm), b = velocity(s1, x, tm);
    Vec v{};
    for (int d = 0; d < dim; ++d) v[d] = 0.5 * a[d] + 0.5 * b[d];
    return v;
  };
  auto shifted = [&](Vec k, double f) {
    Vec x = z_;
    for (int d = 0; d < dim; ++d) x[d] += f * k[d];
    return x;
  };

  const Vec k1 = velocity(s0, z_, t0);
  const Vec k2 = mid(shifted(k1, 0.5 * h));
  const Vec k3 = mid(shifted(k2, 0.5 * h));
  const Vec k4 = velocity(s1, shifted(k3, h), s1.time);
  Vec z = z_;
  for (int d = 0; d < dim; ++d) z[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
  check_inside(z, s1.time);
  z_ = z;
  current_ = std::move(next);
  annotate(*current_);
}

TrajectoryRecord integrate_bohm(Vec z0, const std::vector<std::shared_ptr<const PilotSnapshot>>& history,
                                const Guidance& guidance) {
  if (history.empty()) throw InvalidArgument("empty snapshot history");
  BohmIntegrator integ(z0, history.front(), guidance);
  for (std::size_t i = 1; i < history.size(); ++i) integ.advance(history[i]);
  return integ.record();
}

NewtonResidual newton_bohm_residual(const TrajectoryRecord& traj, Vec masses) {
  if (traj.size() < 5) throw InvalidArgument("Newton residual needs at least 5 trajectory points");
  const auto acc = path_acceleration(traj.times, traj.positions);
  NewtonResidual out;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const std::size_t k = i + 1;
    Vec r{};
    double f2 = 0.0, r2 = 0.0;
    for (int d = 0; d < traj.dim; ++d) {
      const double f = traj.quantum_force[k][d] + traj.em_force[k][d];
      r[d] = masses[d] * acc[i][d] - f;
      f2 += f * f;
      r2 += r[d] * r[d];
    }
    out.times.push_back(traj.times[k]);
    out.residual.push_back(r);
    out.force_scale = std::max(out.force_scale, std::sqrt(f2));
    sum2 += r2;
  }
  out.rms = std::sqrt(sum2 / static_cast<double>(acc.size()));
  out.relative_rms = out.force_scale > 0.0 ? out.rms / out.force_scale : out.rms;
  return out;
}

double continuity_residual(const std::vector<ComplexField>& history, const Guidance& guidance) {
  if (history.size() < 3) throw InvalidArgument("continuity residual needs at least 3 fields");
  const GridSpec& g = history.front().grid;
  const SpectralOps ops(g);
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < history.size(); ++k) {
    const ComplexField& psi = history[k];
    const RealField rho_m = abs2(history[k - 1]), rho_p = abs2(history[k + 1]), rho = abs2(psi);
    const double dt = history[k + 1].time - history[k - 1].time;
    const Vec A = guidance.potential.vector(psi.time);
    const auto grad = ops.gradient(psi);
    VectorField J(g, psi.time);
    for (int a = 0; a < g.dim; ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        const double im = (std::conj(psi.data[i]) * grad[a].data[i]).imag();
        J[a].data[i] = (im - guidance.charge * A[a] * rho.data[i]) / guidance.masses[a];
      }
    }
    const RealField div = ops.divergence(J);
    double amax = 0.0;
    for (double v : rho.data) amax = std::max(amax, v);
    const double floor2 = kNodeFloor * kNodeFloor * amax;
    for (std::size_t i = 0; i < n; ++i) {
      if (rho.data[i] < floor2) continue;
      const Vec x = g.position(i);
      bool interior = true;
      for (int a = 0; a < g.dim; ++a) {
        interior = interior && std::abs(x[a]) <= 0.5 * g.length[a] - guidance.boundary_cells * g.spacing(a);
      }
      if (!interior) continue;
      const double r = (rho_p.data[i] - rho_m.data[i]) / dt + div.data[i];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace pws
