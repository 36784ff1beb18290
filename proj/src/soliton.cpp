#include "pws/soliton.hpp"

#include <cmath>

#include "pws/interpolate.hpp"

namespace pws {

double gausson_amplitude(double f0, int dim) { return f0 * std::exp(0.5 * static_cast<double>(dim - 1)); }

ComplexField gausson_init(const GaussonParams& p, const GridSpec& grid, double omega0) {
  if (!(p.b > 0.0) || !(p.f0 > 0.0)) throw InvalidArgument("Gausson requires b > 0 and f0 > 0");
  const double min_side = 10.0 / std::sqrt(p.b);
  for (int a = 0; a < grid.dim; ++a) {
    if (grid.length[a] < min_side) {
      throw InvalidArgument("box side " + std::to_string(grid.length[a]) + " is narrower than 10/sqrt(b) = " +
                            std::to_string(min_side));
    }
  }
  const double amp = gausson_amplitude(p.f0, grid.dim);
  ComplexField u(grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec x = grid.position(i);
    double r2 = 0.0, phase = p.global_phase;
    for (int a = 0; a < grid.dim; ++a) {
      const double d = wrap_displacement(grid, a, x[a], p.center[a]);
      r2 += d * d;
      phase += omega0 * p.velocity[a] * d;
    }
    u.data[i] = std::polar(amp * std::exp(-0.5 * p.b * r2), phase);
  }
  return u;
}

NlsSolver::NlsSolver(const GridSpec& grid, PhysicalParams params, std::shared_ptr<const Nonlinearity> nl,
                     PotentialSpec potential)
    : params_(params),
      nl_(std::move(nl)),
      stepper_(grid, {params.omega0, params.omega0}, params.charge, params.omega0, std::move(potential)) {
  params_.validate();
  if (!nl_) throw InvalidArgument("NLS solver needs a nonlinearity");
}

void NlsSolver::step(SolitonState& s, double dt, const RealField* q_start, const RealField* q_end) {
  const bool dbb = s.mode == CouplingMode::dbb;
  if (dbb != (q_start != nullptr) || dbb != (q_end != nullptr)) {
    throw InvalidArgument(dbb ? "dBB mode requires the external quantum potential"
                              : "classical mode takes no external quantum potential");
  }
  for (const RealField* q : {q_start, q_end}) {
    if (q && q->grid != s.u.grid) throw InvalidArgument("external potential grid differs from soliton grid");
  }
  const double inv2m = 1.0 / (2.0 * params_.omega0);
  const Nonlinearity& nl = *nl_;
  auto extra = [&](const RealField* q) {
    return [&nl, inv2m, q](const ComplexField& u, std::vector<double>& w) {
      if (q) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += q->data[i];
      }
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += nl.response(std::norm(u.data[i])) * inv2m;
    };
  };
  stepper_.step(s.u, dt, extra(q_start), extra(q_end), steps_);
  ++steps_;
}

void nls_step(SolitonState& s, const PotentialSpec& potential, const RealField* q_start, const RealField* q_end,
              double dt) {
  NlsSolver solver(s.u.grid, s.params, s.nonlinearity, potential);
  solver.step(s, dt, q_start, q_end);
}

CenterEstimate soliton_center(const ComplexField& u, Vec reference) {
  const GridSpec& g = u.grid;
  const RealField rho = abs2(u);
  double c = 0.0;
  Vec m{0.0, 0.0};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const Vec x = g.position(i);
    c += rho.data[i];
    for (int a = 0; a < g.dim; ++a) m[a] += rho.data[i] * wrap_displacement(g, a, x[a], reference[a]);
  }
  if (!(c > 0.0)) throw InvalidArgument("soliton norm is zero");
  CenterEstimate out;
  out.norm = c * g.cell_volume();
  for (int a = 0; a < g.dim; ++a) out.center[a] = reference[a] + m[a] / c;
  return out;
}

double phase_harmony_residual(const ComplexField& u, const MadelungBundle& madelung, const PhysicalParams& params,
                              Vec A, Vec z, double radius, double b) {
  const GridSpec& g = u.grid;
  for (int a = 0; a < g.dim; ++a) {
    if (std::abs(z[a]) + radius >= 0.5 * g.length[a]) {
      throw InvalidArgument("phase-harmony window clipped by the box boundary");
    }
  }
  Vec vz{};
  double vnorm2 = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    vz[a] = interpolate(madelung.velocity[a], z);
    vnorm2 += vz[a] * vz[a];
  }
  const SpectralOps ops(g);
  const auto grad = ops.gradient(u);
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec x = g.position(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += (x[a] - z[a]) * (x[a] - z[a]);
    if (r2 >= radius * radius) continue;
    const double rho = std::norm(u.data[i]);
    if (!(rho > 0.0)) continue;
    double d2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double k = (std::conj(u.data[i]) * grad[a].data[i]).imag() / rho;
      const double d = k - params.omega0 * vz[a] - params.charge * A[a];
      d2 += d * d;
    }
    wsum += rho;
    acc += rho * d2;
  }
  if (!(wsum > 0.0)) throw InvalidArgument("soliton has no weight inside the phase-harmony window");
  return std::sqrt(acc / wsum) / (params.omega0 * std::sqrt(vnorm2) + std::sqrt(b));
}

}  // namespace pws
