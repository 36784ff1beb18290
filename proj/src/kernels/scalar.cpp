#include "pws/kernels.hpp"

#include "kernel_tables.hpp"

namespace pws::kernels {
namespace {

void cmul(cplx* x, const cplx* m, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const auto* md = reinterpret_cast<const double*>(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = xd[2 * i], ai = xd[2 * i + 1];
    const double br = md[2 * i], bi = md[2 * i + 1];
    xd[2 * i] = ar * br - ai * bi;
    xd[2 * i + 1] = ai * br + ar * bi;
  }
}

void cmul_to(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  auto* od = reinterpret_cast<double*>(out);
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = ad[2 * i], ai = ad[2 * i + 1];
    const double br = bd[2 * i], bi = bd[2 * i + 1];
    od[2 * i] = ar * br - ai * bi;
    od[2 * i + 1] = ai * br + ar * bi;
  }
}

void cmul_real(cplx* x, const double* r, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    xd[2 * i] *= r[i];
    xd[2 * i + 1] *= r[i];
  }
}

void abs2(double* out, const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = xd[2 * i] * xd[2 * i] + xd[2 * i + 1] * xd[2 * i + 1];
  }
}

void im_conj_mul(double* out, const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ad[2 * i] * bd[2 * i + 1] - ad[2 * i + 1] * bd[2 * i];
  }
}

void re_conj_mul(double* out, const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ad[2 * i] * bd[2 * i] + ad[2 * i + 1] * bd[2 * i + 1];
  }
}

void lincomb3(double* out, double a, const double* x, double b, const double* y, double c,
              const double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (a * x[i] + b * y[i]) + c * z[i];
  }
}

double sum(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t k = 0; i < n; ++i, ++k) acc[k] += x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (std::size_t k = 0; i < n; ++i, ++k) acc[k] += x[i] * y[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar", cmul, cmul_to, cmul_real, abs2, im_conj_mul, re_conj_mul, lincomb3, sum, dot,
  };
  return table;
}

}  // namespace pws::kernels
