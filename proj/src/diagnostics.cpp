#include "pws/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "pws/interpolate.hpp"
#include "pws/kernels.hpp"
#include "pws/trajectory.hpp"

namespace pws {

double norm_pt(const ComplexField& u, double omega0) { return 2.0 * omega0 * integrate(abs2(u)); }

EnergyTerms energy_nls(const ComplexField& u, const PotentialSpec& potential, const RealField* q,
                       const PhysicalParams& params, const Nonlinearity& nl) {
  const GridSpec& g = u.grid;
  if (q && q->grid != g) throw InvalidArgument("external potential grid differs from field grid");
  const SpectralOps ops(g);
  const auto grad = ops.gradient(u);
  const Vec A = potential.vector(u.time);
  const double w0 = params.omega0, e = params.charge;
  RealField h(g, u.time), s(g, u.time);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = std::norm(u.data[i]);
    double kin = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      kin += std::norm(grad[a].data[i] - cplx{0.0, e * A[a]} * u.data[i]);
    }
    double pot = w0 + e * potential.scalar(u.time, g.position(i));
    if (q) pot += q->data[i];
    const double U = nl.energy_density(rho);
    h.data[i] = kin / (2.0 * w0) + pot * rho + U / (2.0 * w0);
    s.data[i] = U - nl.response(rho) * rho;
  }
  return {2.0 * w0 * integrate(h), integrate(s)};
}

double boundary_mass(const ComplexField& u, double cells) {
  const GridSpec& g = u.grid;
  double edge = 0.0, total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = std::norm(u.data[i]);
    total += rho;
    const Vec x = g.position(i);
    for (int a = 0; a < g.dim; ++a) {
      if (std::abs(x[a]) >= 0.5 * g.length[a] - cells * g.spacing(a)) {
        edge += rho;
        break;
      }
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

void ConservationReport::record(double t, const ComplexField& u, const PotentialSpec& potential,
                                const RealField* q, const PhysicalParams& params, const Nonlinearity& nl) {
  const double p = norm_pt(u, params.omega0);
  const EnergyTerms en = energy_nls(u, potential, q, params, nl);
  const double bm = pws::boundary_mass(u);
  times.push_back(t);
  norm.push_back(p);
  energy.push_back(en.total);
  static_energy.push_back(en.static_energy);
  energy_ratio.push_back(p > 0.0 ? en.total / p : 0.0);
  boundary_mass.push_back(bm);
  max_norm_drift = std::max(max_norm_drift, std::abs(p - norm.front()) / norm.front());
  max_energy_drift = std::max(max_energy_drift, std::abs(en.total - energy.front()) / std::abs(energy.front()));
  if (const auto* log = dynamic_cast<const LogNonlinearity*>(&nl)) {
    const double expected = log->b() * p / (2.0 * params.omega0);
    max_static_identity_error =
        std::max(max_static_identity_error, std::abs(en.static_energy - expected) / std::abs(expected));
  }
  boundary_flag = boundary_flag || bm > kBoundaryMassLimit;
}

EhrenfestSample ehrenfest_sample(const ComplexField& u, const SpectralOps& ops, const PotentialSpec& potential,
                                 const PhysicalParams& params, const Nonlinearity& nl, const MadelungBundle* pilot,
                                 Vec reference) {
  const GridSpec& g = u.grid;
  const std::size_t n = g.size();
  EhrenfestSample s;
  s.t = u.time;
  const CenterEstimate ce = soliton_center(u, reference);
  s.center = ce.center;
  s.norm = ce.norm;

  const RealField rho = abs2(u);
  RealField f = rho;
  for (double& v : f.data) v = std::sqrt(v);
  const VectorField grad_rho = ops.gradient(rho);
  const VectorField grad_f = ops.gradient(f);
  const RealField lap_f = ops.laplacian(f);
  const VectorField grad_lap_f = ops.gradient(lap_f);

  const double dv = g.cell_volume();
  Vec em{}, fq{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec x = g.position(i);
    const Vec E = potential.electric(u.time, x);
    const double slope = nl.response_slope(rho.data[i]);
    for (int a = 0; a < g.dim; ++a) {
      em[a] += rho.data[i] * params.charge * E[a];
      if (pilot) fq[a] += rho.data[i] * pilot->quantum_force[a].data[i];
      s.grad_response_integral[a] += slope * grad_rho[a].data[i];
      const double t1 = f.data[i] * grad_lap_f[a].data[i], t2 = lap_f.data[i] * grad_f[a].data[i];
      s.grad_curvature_integral[a] += t1 - t2;
      s.response_scale += std::abs(slope) * std::abs(grad_rho[a].data[i]);
      s.curvature_scale += std::abs(t1) + std::abs(t2);
    }
  }
  for (int a = 0; a < g.dim; ++a) {
    s.mean_em_force[a] = em[a] * dv / s.norm;
    s.mean_quantum_force[a] = fq[a] * dv / s.norm;
    s.grad_response_integral[a] *= dv;
    s.grad_curvature_integral[a] *= dv;
  }
  s.response_scale *= dv;
  s.curvature_scale *= dv;
  if (pilot) {
    for (int a = 0; a < g.dim; ++a) s.quantum_force_at_center[a] = interpolate(pilot->quantum_force[a], s.center);
  }
  return s;
}

EhrenfestReport ehrenfest_report(const std::vector<EhrenfestSample>& samples, double omega0, CouplingMode mode) {
  if (samples.size() < 7) throw InvalidArgument("Ehrenfest report needs at least 7 samples");
  std::vector<double> t;
  std::vector<Vec> x;
  for (const auto& s : samples) {
    t.push_back(s.t);
    x.push_back(s.center);
  }
  const auto acc = path_acceleration(t, x);
  EhrenfestReport r;
  double sum2 = 0.0, sum2_wo = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const EhrenfestSample& s = samples[i + 1];
    Vec res{}, res_wo{};
    double f2 = 0.0, r2 = 0.0, r2_wo = 0.0;
    for (int a = 0; a < 2; ++a) {
      const double fq = mode == CouplingMode::dbb ? s.quantum_force_at_center[a] : 0.0;
      res_wo[a] = omega0 * acc[i][a] - s.mean_em_force[a];
      res[a] = res_wo[a] - fq;
      const double f = s.mean_em_force[a] + fq;
      f2 += f * f;
      r2 += res[a] * res[a];
      r2_wo += res_wo[a] * res_wo[a];
    }
    r.times.push_back(s.t);
    r.center.push_back(s.center);
    r.acceleration.push_back(acc[i]);
    r.mean_em_force.push_back(s.mean_em_force);
    r.quantum_force.push_back(s.quantum_force_at_center);
    r.residual.push_back(res);
    r.residual_without_fq.push_back(res_wo);
    r.force_scale = std::max(r.force_scale, std::sqrt(f2));
    r.max_abs = std::max(r.max_abs, std::sqrt(r2));
    r.max_abs_without_fq = std::max(r.max_abs_without_fq, std::sqrt(r2_wo));
    sum2 += r2;
    sum2_wo += r2_wo;
  }
  const double m = static_cast<double>(acc.size());
  r.rms = std::sqrt(sum2 / m);
  r.rms_without_fq = std::sqrt(sum2_wo / m);
  r.relative_rms = r.force_scale > 0.0 ? r.rms / r.force_scale : r.rms;
  for (const auto& s : samples) {
    const double gn = std::hypot(s.grad_response_integral[0], s.grad_response_integral[1]);
    const double gc = std::hypot(s.grad_curvature_integral[0], s.grad_curvature_integral[1]);
    if (s.response_scale > 0.0) r.grad_response_ratio = std::max(r.grad_response_ratio, gn / s.response_scale);
    if (s.curvature_scale > 0.0) r.grad_curvature_ratio = std::max(r.grad_curvature_ratio, gc / s.curvature_scale);
  }
  return r;
}

HistogramBins density_bins(const RealField& density, double nsigma) {
  const GridSpec& g = density.grid;
  double total = 0.0;
  Vec mean{}, m2{};
  for (std::size_t i = 0; i < density.size(); ++i) {
    const Vec x = g.position(i);
    total += density.data[i];
    for (int a = 0; a < g.dim; ++a) mean[a] += density.data[i] * x[a];
  }
  if (!(total > 0.0)) throw InvalidArgument("density integrates to zero");
  for (int a = 0; a < g.dim; ++a) mean[a] /= total;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const Vec x = g.position(i);
    for (int a = 0; a < g.dim; ++a) m2[a] += density.data[i] * (x[a] - mean[a]) * (x[a] - mean[a]);
  }
  HistogramBins b;
  b.dim = g.dim;
  b.count = g.dim == 1 ? std::array<std::size_t, 2>{64, 1} : std::array<std::size_t, 2>{8, 8};
  for (int a = 0; a < g.dim; ++a) {
    const double sd = std::sqrt(m2[a] / total);
    b.lo[a] = mean[a] - nsigma * sd;
    b.hi[a] = mean[a] + nsigma * sd;
  }
  if (g.dim == 1) {
    b.lo[1] = -1.0;
    b.hi[1] = 1.0;
  }
  return b;
}

namespace {

// Fraction of cell j (on one axis) falling into each bin; returns bin
// overlaps as (bin, weight) pairs, remaining weight belongs outside.
void cell_overlaps(const GridSpec& g, int axis, std::size_t j, const HistogramBins& b,
                   std::vector<std::pair<std::size_t, double>>& out) {
  out.clear();
  const double dx = g.spacing(axis);
  const double c0 = g.coordinate(axis, j) - 0.5 * dx, c1 = c0 + dx;
  const double w = (b.hi[axis] - b.lo[axis]) / static_cast<double>(b.count[axis]);
  const double lo = std::max(c0, b.lo[axis]), hi = std::min(c1, b.hi[axis]);
  if (!(hi > lo)) return;
  auto first = static_cast<std::size_t>(std::floor((lo - b.lo[axis]) / w));
  for (std::size_t k = first; k < b.count[axis]; ++k) {
    const double b0 = b.lo[axis] + static_cast<double>(k) * w, b1 = b0 + w;
    if (b0 >= hi) break;
    const double ov = std::min(hi, b1) - std::max(lo, b0);
    if (ov > 0.0) out.emplace_back(k, ov / dx);
  }
}

long bin_of(double x, double lo, double hi, std::size_t count) {
  if (!(x >= lo && x < hi)) return -1;
  auto k = static_cast<long>(std::floor((x - lo) / (hi - lo) * static_cast<double>(count)));
  return std::min<long>(k, static_cast<long>(count) - 1);
}

}  // namespace

double histogram_l1(const std::vector<Vec>& positions, const RealField& density, const HistogramBins& b) {
  const GridSpec& g = density.grid;
  if (positions.empty()) throw InvalidArgument("empty ensemble");
  const std::size_t nb = b.count[0] * (g.dim == 2 ? b.count[1] : 1);
  std::vector<double> p(nb + 1, 0.0), q(nb + 1, 0.0);  // last entry: outside

  double total = 0.0;
  std::vector<std::pair<std::size_t, double>> o0, o1;
  if (g.dim == 1) {
    for (std::size_t j = 0; j < g.n[0]; ++j) {
      const double m = density.data[j];
      total += m;
      cell_overlaps(g, 0, j, b, o0);
      double inside = 0.0;
      for (auto [k, w] : o0) {
        q[k] += m * w;
        inside += w;
      }
      q[nb] += m * (1.0 - inside);
    }
  } else {
    const std::size_t n1 = g.n[1];
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(n1);
    for (std::size_t j = 0; j < n1; ++j) cell_overlaps(g, 1, j, b, cols[j]);
    for (std::size_t i = 0; i < g.n[0]; ++i) {
      cell_overlaps(g, 0, i, b, o0);
      for (std::size_t j = 0; j < n1; ++j) {
        const double m = density.data[i * n1 + j];
        total += m;
        double inside = 0.0;
        for (auto [k0, w0] : o0) {
          for (auto [k1, w1] : cols[j]) {
            q[k0 * b.count[1] + k1] += m * w0 * w1;
            inside += w0 * w1;
          }
        }
        q[nb] += m * (1.0 - inside);
      }
    }
  }
  if (!(total > 0.0)) throw InvalidArgument("density integrates to zero");
  for (double& v : q) v /= total;

  for (const Vec& x : positions) {
    const long k0 = bin_of(x[0], b.lo[0], b.hi[0], b.count[0]);
    long k = k0;
    if (g.dim == 2) {
      const long k1 = bin_of(x[1], b.lo[1], b.hi[1], b.count[1]);
      k = (k0 < 0 || k1 < 0) ? -1 : k0 * static_cast<long>(b.count[1]) + k1;
    }
    p[k < 0 ? nb : static_cast<std::size_t>(k)] += 1.0;
  }
  double l1 = 0.0;
  for (std::size_t k = 0; k <= nb; ++k) l1 += std::abs(p[k] / static_cast<double>(positions.size()) - q[k]);
  return l1;
}

EquivarianceReport equivariance_distance(const std::vector<ComplexField>& psi_at,
                                         const std::vector<std::vector<Vec>>& positions_at) {
  if (psi_at.size() != positions_at.size()) throw InvalidArgument("one ensemble snapshot per field required");
  EquivarianceReport r;
  for (std::size_t k = 0; k < psi_at.size(); ++k) {
    const RealField rho = abs2(psi_at[k]);
    const HistogramBins b = density_bins(rho);
    r.ensemble_size = positions_at[k].size();
    r.bins = b.count[0] * (b.dim == 2 ? b.count[1] : 1);
    r.bin_width.push_back(b.width());
    r.times.push_back(psi_at[k].time);
    r.l1.push_back(histogram_l1(positions_at[k], rho, b));
  }
  return r;
}

}  // namespace pws
