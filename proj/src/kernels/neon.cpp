#include <arm_neon.h>

#include "kernel_tables.hpp"

namespace pws::kernels {
namespace {

// One complex number per float64x2_t register.
inline float64x2_t complex_mul(float64x2_t a, float64x2_t b) {
  const float64x2_t b_re = vdupq_laneq_f64(b, 0);
  const float64x2_t b_im = vdupq_laneq_f64(b, 1);
  const float64x2_t a_sw = vextq_f64(a, a, 1);  // [ai, ar]
  const float64x2_t t1 = vmulq_f64(a, b_re);    // [ar*br, ai*br]
  const float64x2_t t2 = vmulq_f64(a_sw, b_im); // [ai*bi, ar*bi]
  const float64x2_t sign = {-1.0, 1.0};
  return vaddq_f64(t1, vmulq_f64(t2, sign));
}

void cmul(cplx* x, const cplx* m, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const auto* md = reinterpret_cast<const double*>(m);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(xd + 2 * i, complex_mul(vld1q_f64(xd + 2 * i), vld1q_f64(md + 2 * i)));
  }
}

void cmul_to(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  auto* od = reinterpret_cast<double*>(out);
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(od + 2 * i, complex_mul(vld1q_f64(ad + 2 * i), vld1q_f64(bd + 2 * i)));
  }
}

void cmul_real(cplx* x, const double* r, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(xd + 2 * i, vmulq_f64(vld1q_f64(xd + 2 * i), vdupq_n_f64(r[i])));
  }
}

void abs2(double* out, const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(xd + 2 * i);
    const float64x2_t b = vld1q_f64(xd + 2 * i + 2);
    vst1q_f64(out + i, vpaddq_f64(vmulq_f64(a, a), vmulq_f64(b, b)));
  }
  for (; i < n; ++i) out[i] = xd[2 * i] * xd[2 * i] + xd[2 * i + 1] * xd[2 * i + 1];
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
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p0 = vmulq_f64(vld1q_f64(ad + 2 * i), vld1q_f64(bd + 2 * i));
    const float64x2_t p1 = vmulq_f64(vld1q_f64(ad + 2 * i + 2), vld1q_f64(bd + 2 * i + 2));
    vst1q_f64(out + i, vpaddq_f64(p0, p1));
  }
  for (; i < n; ++i) out[i] = ad[2 * i] * bd[2 * i] + ad[2 * i + 1] * bd[2 * i + 1];
}

void lincomb3(double* out, double a, const double* x, double b, const double* y, double c,
              const double* z, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a), vb = vdupq_n_f64(b), vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ax = vmulq_f64(va, vld1q_f64(x + i));
    const float64x2_t by = vmulq_f64(vb, vld1q_f64(y + i));
    const float64x2_t cz = vmulq_f64(vc, vld1q_f64(z + i));
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(ax, by), cz));
  }
  for (; i < n; ++i) out[i] = (a * x[i] + b * y[i]) + c * z[i];
}

// Two registers emulate the four-lane accumulation order of the other backends.
double reduce(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t a = vld1q_f64(x + i), b = vld1q_f64(x + i + 2);
    if (y != nullptr) {
      a = vmulq_f64(a, vld1q_f64(y + i));
      b = vmulq_f64(b, vld1q_f64(y + i + 2));
    }
    lo = vaddq_f64(lo, a);
    hi = vaddq_f64(hi, b);
  }
  double acc[4] = {vgetq_lane_f64(lo, 0), vgetq_lane_f64(lo, 1), vgetq_lane_f64(hi, 0),
                   vgetq_lane_f64(hi, 1)};
  for (std::size_t k = 0; i < n; ++i, ++k) acc[k] += y ? x[i] * y[i] : x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum(const double* x, std::size_t n) { return reduce(x, nullptr, n); }
double dot(const double* x, const double* y, std::size_t n) { return reduce(x, y, n); }

}  // namespace

namespace detail {

const KernelTable& neon_table_unchecked() {
  static const KernelTable table{
      "neon", cmul, cmul_to, cmul_real, abs2, im_conj_mul, re_conj_mul, lincomb3, sum, dot,
  };
  return table;
}

}  // namespace detail
}  // namespace pws::kernels
