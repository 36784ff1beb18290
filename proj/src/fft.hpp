#pragma once

// Cached in-place FFTW plans. Execution is thread-safe; planning is
// serialised by a mutex inside plan_for().

#include <complex>

#include <fftw3.h>

#include "pws/grid.hpp"

namespace pws::detail {

class FftPlan {
 public:
  explicit FftPlan(const GridSpec& g);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  // Unnormalised transforms; backward(forward(x)) = N x.
  void forward(cplx* data) const;
  void backward(cplx* data) const;

 private:
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

const FftPlan& plan_for(const GridSpec& g);

using lcplx = std::complex<long double>;

// Same transforms in extended precision. Double-precision FFTW round-trips
// add a small norm bias of the same sign every call, which accumulates
// coherently over long unitary runs; the split-step kinetic sub-step goes
// through these plans and rounds back to double once.
class ExtendedFftPlan {
 public:
  explicit ExtendedFftPlan(const GridSpec& g);
  ~ExtendedFftPlan();
  ExtendedFftPlan(const ExtendedFftPlan&) = delete;
  ExtendedFftPlan& operator=(const ExtendedFftPlan&) = delete;

  void forward(lcplx* data) const;
  void backward(lcplx* data) const;

 private:
  fftwl_plan fwd_ = nullptr;
  fftwl_plan bwd_ = nullptr;
};

const ExtendedFftPlan& extended_plan_for(const GridSpec& g);

}  // namespace pws::detail
