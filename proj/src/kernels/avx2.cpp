#include <immintrin.h>

#include "kernel_tables.hpp"

#ifndef __AVX2__
#error "avx2.cpp must be compiled with -mavx2"
#endif

namespace pws::kernels {
namespace {

// (a * b) for two interleaved complex numbers per register.
inline __m256d complex_mul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

// hadd/hsub interleave their outputs as [c0, c2, c1, c3].
inline __m256d restore_order(__m256d h) { return _mm256_permute4x64_pd(h, 0xD8); }

void cmul(cplx* x, const cplx* m, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const auto* md = reinterpret_cast<const double*>(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(xd + 2 * i);
    const __m256d b = _mm256_loadu_pd(md + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, complex_mul(a, b));
  }
  for (; i < n; ++i) {
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
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(od + 2 * i,
                     complex_mul(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(bd + 2 * i)));
  }
  for (; i < n; ++i) {
    const double ar = ad[2 * i], ai = ad[2 * i + 1];
    const double br = bd[2 * i], bi = bd[2 * i + 1];
    od[2 * i] = ar * br - ai * bi;
    od[2 * i + 1] = ai * br + ar * bi;
  }
}

void cmul_real(cplx* x, const double* r, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // [r0, r0, r1, r1]
    const __m128d rr = _mm_loadu_pd(r + i);
    const __m256d scale = _mm256_permute4x64_pd(_mm256_castpd128_pd256(rr), 0x50);
    _mm256_storeu_pd(xd + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(xd + 2 * i), scale));
  }
  for (; i < n; ++i) {
    xd[2 * i] *= r[i];
    xd[2 * i + 1] *= r[i];
  }
}

void abs2(double* out, const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xd + 2 * i);
    const __m256d b = _mm256_loadu_pd(xd + 2 * i + 4);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, restore_order(h));
  }
  for (; i < n; ++i) out[i] = xd[2 * i] * xd[2 * i] + xd[2 * i + 1] * xd[2 * i + 1];
}

void im_conj_mul(double* out, const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // [ar*bi, ai*br] per complex, then horizontal difference.
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(ad + 2 * i),
                                     _mm256_permute_pd(_mm256_loadu_pd(bd + 2 * i), 0x5));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(ad + 2 * i + 4),
                                     _mm256_permute_pd(_mm256_loadu_pd(bd + 2 * i + 4), 0x5));
    _mm256_storeu_pd(out + i, restore_order(_mm256_hsub_pd(p0, p1)));
  }
  for (; i < n; ++i) out[i] = ad[2 * i] * bd[2 * i + 1] - ad[2 * i + 1] * bd[2 * i];
}

void re_conj_mul(double* out, const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(bd + 2 * i));
    const __m256d p1 =
        _mm256_mul_pd(_mm256_loadu_pd(ad + 2 * i + 4), _mm256_loadu_pd(bd + 2 * i + 4));
    _mm256_storeu_pd(out + i, restore_order(_mm256_hadd_pd(p0, p1)));
  }
  for (; i < n; ++i) out[i] = ad[2 * i] * bd[2 * i] + ad[2 * i + 1] * bd[2 * i + 1];
}

void lincomb3(double* out, double a, const double* x, double b, const double* y, double c,
              const double* z, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    const __m256d cz = _mm256_mul_pd(vc, _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(ax, by), cz));
  }
  for (; i < n; ++i) out[i] = (a * x[i] + b * y[i]) + c * z[i];
}

double finish(__m256d v, const double* x, const double* y, std::size_t i, std::size_t n) {
  alignas(32) double acc[4];
  _mm256_store_pd(acc, v);
  for (std::size_t k = 0; i < n; ++i, ++k) acc[k] += y ? x[i] * y[i] : x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return finish(acc, x, nullptr, i, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  return finish(acc, x, y, i, n);
}

}  // namespace

namespace detail {

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{
      "avx2", cmul, cmul_to, cmul_real, abs2, im_conj_mul, re_conj_mul, lincomb3, sum, dot,
  };
  return table;
}

}  // namespace detail
}  // namespace pws::kernels
