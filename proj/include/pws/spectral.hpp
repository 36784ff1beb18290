#pragma once

// Fourier-space differentiation on periodic grids.

#include <array>
#include <span>
#include <vector>

#include "pws/grid.hpp"

namespace pws {

// Derivative order per axis, e.g. {2, 1} = d^3/dx0^2 dx1.
using DerivOrder = std::array<int, 2>;

class SpectralOps {
 public:
  explicit SpectralOps(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  // Angular wavenumbers in FFT order; the Nyquist entry is -pi/dx.
  const std::vector<double>& wavenumbers(int axis) const { return k_[axis]; }

  // Several derivatives sharing one forward transform. Odd orders drop the
  // Nyquist mode so real input gives real output.
  std::vector<ComplexField> derivatives(const ComplexField& f, std::span<const DerivOrder> orders) const;
  ComplexField derivative(const ComplexField& f, DerivOrder order) const;
  // Same, with the transforms and multipliers in long double. Round-off is
  // then relative to each output value instead of to max|f|, which matters
  // where derivatives are divided by a small local amplitude.
  std::vector<ComplexField> derivatives_extended(const ComplexField& f, std::span<const DerivOrder> orders) const;
  RealField derivative(const RealField& f, DerivOrder order) const;

  ComplexVectorField gradient(const ComplexField& f) const;
  VectorField gradient(const RealField& f) const;
  ComplexField laplacian(const ComplexField& f) const;
  RealField laplacian(const RealField& f) const;
  RealField divergence(const VectorField& v) const;

  // Forward transform, multiply mode-wise by m, backward transform (normalised).
  void apply_multiplier(ComplexField& f, const std::vector<cplx>& m) const;
  // Fourier multiplier of a derivative, with the 1/N normalisation folded in.
  std::vector<cplx> derivative_multiplier(DerivOrder order) const;

 private:
  GridSpec grid_;
  std::array<std::vector<double>, 2> k_;
  std::array<std::vector<long double>, 2> k_ext_;
};

// Convenience wrappers. Non-finite input throws NumericalError.
VectorField spectral_gradient(const RealField& f);
ComplexVectorField spectral_gradient(const ComplexField& f);
RealField spectral_laplacian(const RealField& f);
ComplexField spectral_laplacian(const ComplexField& f);

}  // namespace pws
