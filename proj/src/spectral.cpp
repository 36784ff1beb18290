#include "pws/spectral.hpp"

#include <numbers>

#include "fft.hpp"
#include "pws/kernels.hpp"

namespace pws {
namespace {

cplx ipow(double k, int order) {
  // (i k)^order
  cplx r{1.0, 0.0};
  for (int p = 0; p < order; ++p) r *= cplx{0.0, k};
  return r;
}

RealField real_part(const ComplexField& c) {
  RealField r(c.grid, c.time);
  for (std::size_t i = 0; i < c.size(); ++i) r.data[i] = c.data[i].real();
  return r;
}

ComplexField to_complex(const RealField& f) {
  ComplexField c(f.grid, f.time);
  for (std::size_t i = 0; i < f.size(); ++i) c.data[i] = f.data[i];
  return c;
}

}  // namespace

SpectralOps::SpectralOps(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  for (int a = 0; a < grid_.dim; ++a) {
    const std::size_t n = grid_.n[a];
    const double dk = 2.0 * std::numbers::pi / grid_.length[a];
    const long double dk_ext = 2.0L * std::numbers::pi_v<long double> / grid_.length[a];
    k_[a].resize(n);
    k_ext_[a].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const long m = j < (n + 1) / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
      k_[a][j] = dk * static_cast<double>(m);
      k_ext_[a][j] = dk_ext * static_cast<long double>(m);
    }
  }
}

std::vector<cplx> SpectralOps::derivative_multiplier(DerivOrder order) const {
  const double norm = 1.0 / static_cast<double>(grid_.size());
  std::vector<cplx> m(grid_.size());
  if (grid_.dim == 1) {
    const std::size_t n = grid_.n[0];
    for (std::size_t j = 0; j < n; ++j) {
      const bool nyq = (n % 2 == 0) && j == n / 2;
      m[j] = (nyq && order[0] % 2 == 1) ? cplx{} : ipow(k_[0][j], order[0]) * norm;
    }
    return m;
  }
  const std::size_t n0 = grid_.n[0], n1 = grid_.n[1];
  for (std::size_t i = 0; i < n0; ++i) {
    const bool nyq0 = (n0 % 2 == 0) && i == n0 / 2 && order[0] % 2 == 1;
    const cplx f0 = ipow(k_[0][i], order[0]);
    for (std::size_t j = 0; j < n1; ++j) {
      const bool nyq1 = (n1 % 2 == 0) && j == n1 / 2 && order[1] % 2 == 1;
      m[i * n1 + j] = (nyq0 || nyq1) ? cplx{} : f0 * ipow(k_[1][j], order[1]) * norm;
    }
  }
  return m;
}

std::vector<ComplexField> SpectralOps::derivatives(const ComplexField& f,
                                                   std::span<const DerivOrder> orders) const {
  if (f.grid != grid_) throw InvalidArgument("field grid does not match SpectralOps grid");
  require_finite(f, "spectral derivative input");
  const auto& plan = detail::plan_for(grid_);
  std::vector<cplx> hat = f.data;
  plan.forward(hat.data());
  std::vector<ComplexField> out;
  out.reserve(orders.size());
  for (const DerivOrder& o : orders) {
    ComplexField d(grid_, f.time);
    const auto m = derivative_multiplier(o);
    kernels::active().cmul_to(d.data.data(), hat.data(), m.data(), hat.size());
    plan.backward(d.data.data());
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ComplexField> SpectralOps::derivatives_extended(const ComplexField& f,
                                                            std::span<const DerivOrder> orders) const {
  using lcplx = detail::lcplx;
  if (f.grid != grid_) throw InvalidArgument("field grid does not match SpectralOps grid");
  require_finite(f, "spectral derivative input");
  const auto& plan = detail::extended_plan_for(grid_);
  const std::size_t n = f.size();
  std::vector<lcplx> hat(n), work(n);
  for (std::size_t i = 0; i < n; ++i) hat[i] = {f.data[i].real(), f.data[i].imag()};
  plan.forward(hat.data());
  const long double norm = 1.0L / static_cast<long double>(n);
  // (i k)^order along one axis, zero on the Nyquist mode for odd orders.
  auto factors = [&](int axis, int order) {
    const std::size_t na = grid_.n[axis];
    std::vector<lcplx> r(na, lcplx{1.0L, 0.0L});
    for (std::size_t j = 0; j < na; ++j) {
      if (order % 2 == 1 && na % 2 == 0 && j == na / 2) {
        r[j] = {};
        continue;
      }
      for (int p = 0; p < order; ++p) r[j] *= lcplx{0.0L, k_ext_[axis][j]};
    }
    return r;
  };
  std::vector<ComplexField> out;
  out.reserve(orders.size());
  for (const DerivOrder& o : orders) {
    const auto f0 = factors(0, o[0]);
    if (grid_.dim == 1) {
      for (std::size_t j = 0; j < n; ++j) work[j] = hat[j] * (f0[j] * norm);
    } else {
      const auto f1 = factors(1, o[1]);
      const std::size_t n0 = grid_.n[0], n1 = grid_.n[1];
      for (std::size_t i = 0; i < n0; ++i) {
        const lcplx a = f0[i] * norm;
        for (std::size_t j = 0; j < n1; ++j) work[i * n1 + j] = hat[i * n1 + j] * (a * f1[j]);
      }
    }
    plan.backward(work.data());
    ComplexField d(grid_, f.time);
    for (std::size_t i = 0; i < n; ++i) {
      d.data[i] = {static_cast<double>(work[i].real()), static_cast<double>(work[i].imag())};
    }
    out.push_back(std::move(d));
  }
  return out;
}

ComplexField SpectralOps::derivative(const ComplexField& f, DerivOrder order) const {
  const DerivOrder o[1] = {order};
  return std::move(derivatives(f, o)[0]);
}

RealField SpectralOps::derivative(const RealField& f, DerivOrder order) const {
  return real_part(derivative(to_complex(f), order));
}

ComplexVectorField SpectralOps::gradient(const ComplexField& f) const {
  std::vector<DerivOrder> orders;
  for (int a = 0; a < grid_.dim; ++a) orders.push_back(a == 0 ? DerivOrder{1, 0} : DerivOrder{0, 1});
  ComplexVectorField g;
  g.components = derivatives(f, orders);
  return g;
}

VectorField SpectralOps::gradient(const RealField& f) const {
  const ComplexVectorField c = gradient(to_complex(f));
  VectorField g;
  for (const auto& comp : c.components) g.components.push_back(real_part(comp));
  return g;
}

ComplexField SpectralOps::laplacian(const ComplexField& f) const {
  if (grid_.dim == 1) return derivative(f, {2, 0});
  const DerivOrder orders[2] = {{2, 0}, {0, 2}};
  auto d = derivatives(f, orders);
  for (std::size_t i = 0; i < d[0].size(); ++i) d[0].data[i] += d[1].data[i];
  return std::move(d[0]);
}

RealField SpectralOps::laplacian(const RealField& f) const { return real_part(laplacian(to_complex(f))); }

RealField SpectralOps::divergence(const VectorField& v) const {
  if (v.dim() != grid_.dim) throw InvalidArgument("vector field dimension does not match grid");
  RealField out(grid_, v[0].time);
  for (int a = 0; a < grid_.dim; ++a) {
    const RealField d = derivative(v[a], a == 0 ? DerivOrder{1, 0} : DerivOrder{0, 1});
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += d.data[i];
  }
  return out;
}

void SpectralOps::apply_multiplier(ComplexField& f, const std::vector<cplx>& m) const {
  if (f.grid != grid_ || m.size() != f.size()) throw InvalidArgument("multiplier size mismatch");
  const auto& plan = detail::plan_for(grid_);
  plan.forward(f.data.data());
  kernels::active().cmul(f.data.data(), m.data(), m.size());
  plan.backward(f.data.data());
}

VectorField spectral_gradient(const RealField& f) { return SpectralOps(f.grid).gradient(f); }
ComplexVectorField spectral_gradient(const ComplexField& f) { return SpectralOps(f.grid).gradient(f); }
RealField spectral_laplacian(const RealField& f) { return SpectralOps(f.grid).laplacian(f); }
ComplexField spectral_laplacian(const ComplexField& f) { return SpectralOps(f.grid).laplacian(f); }

}  // namespace pws
