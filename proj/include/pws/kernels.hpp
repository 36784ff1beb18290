#pragma once

// Data-parallel inner loops shared by every solver.
//
// Each backend implements the same table. Element-wise kernels use only
// IEEE add/sub/mul (no FMA contraction) and reductions accumulate in four
// interleaved partial sums combined as ((s0 + s1) + (s2 + s3)), so every
// backend produces bit-identical results. The scalar table is the reference.

#include <complex>
#include <cstddef>
#include <string_view>

namespace pws::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  // x[i] *= m[i]
  void (*cmul)(cplx* x, const cplx* m, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*cmul_to)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
  // x[i] *= r[i]
  void (*cmul_real)(cplx* x, const double* r, std::size_t n);
  // out[i] = |x[i]|^2
  void (*abs2)(double* out, const cplx* x, std::size_t n);
  // out[i] = Im(conj(a[i]) * b[i])
  void (*im_conj_mul)(double* out, const cplx* a, const cplx* b, std::size_t n);
  // out[i] = Re(conj(a[i]) * b[i])
  void (*re_conj_mul)(double* out, const cplx* a, const cplx* b, std::size_t n);
  // out[i] = a*x[i] + b*y[i] + c*z[i]  (plain doubles; complex arrays pass 2n)
  void (*lincomb3)(double* out, double a, const double* x, double b, const double* y, double c,
                   const double* z, std::size_t n);
  // sum x[i]
  double (*sum)(const double* x, std::size_t n);
  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
};

enum class Backend { automatic, scalar, avx2, neon };

const KernelTable& scalar_table();
// nullptr when the backend was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Chosen once from CPU features; tests may
// pin a backend with select_backend().
const KernelTable& active();

// Returns false (and leaves the selection unchanged) if the backend is unavailable.
bool select_backend(Backend backend);

}  // namespace pws::kernels
