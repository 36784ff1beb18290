#include "pws/madelung.hpp"

#include <algorithm>
#include <cmath>

#include "pws/kernels.hpp"

namespace pws {
namespace {

constexpr DerivOrder d0{1, 0}, d1{0, 1}, d00{2, 0}, d11{0, 2}, d01{1, 1};
constexpr DerivOrder d000{3, 0}, d001{2, 1}, d011{1, 2}, d111{0, 3};

double max_abs(const ComplexField& psi, RealField& a) {
  a = abs(psi);
  double m = 0.0;
  for (double v : a.data) m = std::max(m, v);
  if (!(m > 0.0)) throw InvalidArgument("wavefunction is identically zero");
  return m;
}

}  // namespace

MadelungBundle madelung_extract(const ComplexField& psi, const PhysicalParams& params,
                                const PotentialSpec& potential) {
  params.validate();
  return madelung_extract(psi, {params.omega0, params.omega0}, params.charge, potential.vector(psi.time),
                          SpectralOps(psi.grid));
}

MadelungBundle madelung_extract(const ComplexField& psi, Vec masses, double charge, Vec A,
                                const SpectralOps& ops, DerivPrecision precision) {
  const GridSpec& g = psi.grid;
  require_finite(psi, "Madelung input");
  MadelungBundle mb;
  mb.max_amplitude = max_abs(psi, mb.amplitude);
  const double floor = kNodeFloor * mb.max_amplitude;
  const std::size_t n = g.size();
  mb.node_mask.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) mb.node_mask[i] = mb.amplitude.data[i] < floor ? 1 : 0;

  mb.velocity = VectorField(g, psi.time);
  mb.quantum_force = VectorField(g, psi.time);
  mb.quantum_potential = RealField(g, psi.time);

  auto derivs = [&](std::span<const DerivOrder> orders) {
    return precision == DerivPrecision::extended ? ops.derivatives_extended(psi, orders)
                                                 : ops.derivatives(psi, orders);
  };
  if (g.dim == 1) {
    const DerivOrder orders[3] = {d0, d00, d000};
    const auto d = derivs(orders);
    const double m = masses[0];
    mb.psi_gradient.components = {d[0]};
    for (std::size_t i = 0; i < n; ++i) {
      if (mb.node_mask[i]) continue;
      const cplx inv = 1.0 / psi.data[i];
      const cplx R = d[0].data[i] * inv, P = d[1].data[i] * inv, T = d[2].data[i] * inv;
      const double curv = P.real() + R.imag() * R.imag();
      mb.quantum_potential.data[i] = -curv / (2.0 * m);
      const cplx PmRR = P - R * R;
      mb.quantum_force[0].data[i] = ((T - P * R).real() + 2.0 * R.imag() * PmRR.imag()) / (2.0 * m);
      mb.velocity[0].data[i] = (R.imag() - charge * A[0]) / m;
    }
    return mb;
  }

  const DerivOrder orders[9] = {d0, d1, d00, d11, d01, d000, d001, d011, d111};
  const auto d = derivs(orders);
  mb.psi_gradient.components = {d[0], d[1]};
  for (std::size_t i = 0; i < n; ++i) {
    if (mb.node_mask[i]) continue;
    const cplx inv = 1.0 / psi.data[i];
    const cplx R[2] = {d[0].data[i] * inv, d[1].data[i] * inv};
    const cplx P00 = d[2].data[i] * inv, P11 = d[3].data[i] * inv, P01 = d[4].data[i] * inv;
    const cplx T000 = d[5].data[i] * inv, T001 = d[6].data[i] * inv, T011 = d[7].data[i] * inv,
               T111 = d[8].data[i] * inv;
    const cplx P[2][2] = {{P00, P01}, {P01, P11}};
    // T[i][j] = d_i d_i d_j Psi / Psi
    const cplx T[2][2] = {{T000, T001}, {T011, T111}};
    double q = 0.0;
    for (int a = 0; a < 2; ++a) q -= (P[a][a].real() + R[a].imag() * R[a].imag()) / (2.0 * masses[a]);
    mb.quantum_potential.data[i] = q;
    for (int j = 0; j < 2; ++j) {
      double f = 0.0;
      for (int a = 0; a < 2; ++a) {
        const cplx dR = P[a][j] - R[a] * R[j];
        f += ((T[a][j] - P[a][a] * R[j]).real() + 2.0 * R[a].imag() * dR.imag()) / (2.0 * masses[a]);
      }
      mb.quantum_force[j].data[i] = f;
      mb.velocity[j].data[i] = (R[j].imag() - charge * A[j]) / masses[j];
    }
  }
  return mb;
}

RealField quantum_potential(const ComplexField& psi, Vec masses, const SpectralOps& ops) {
  const GridSpec& g = psi.grid;
  RealField a;
  const double floor = kNodeFloor * max_abs(psi, a);
  RealField q(g, psi.time);
  std::vector<DerivOrder> orders{d0, d00};
  if (g.dim == 2) orders = {d0, d00, d1, d11};
  const auto d = ops.derivatives_extended(psi, orders);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (a.data[i] < floor) continue;
    const cplx inv = 1.0 / psi.data[i];
    double acc = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
      const cplx R = d[2 * ax].data[i] * inv, P = d[2 * ax + 1].data[i] * inv;
      acc -= (P.real() + R.imag() * R.imag()) / (2.0 * masses[ax]);
    }
    q.data[i] = acc;
  }
  return q;
}

}  // namespace pws
