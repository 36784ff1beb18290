#pragma once

// Polar (hydrodynamic) decomposition Psi = a e^{iS}.
//
// All fields are built from spectral derivatives of Psi itself rather than of
// a = |Psi|, which has a derivative kink wherever Psi has a node:
//   R_i = d_i Psi / Psi,   P_ij = d_i d_j Psi / Psi,   T_iij = d_i d_i d_j Psi / Psi
//   (d_i d_i a)/a = Re P_ii + (Im R_i)^2
//   q = -sum_i (d_i d_i a)/(2 m_i a)
//   F_Q,j = -d_j q = sum_i [Re(T_iij - P_ii R_j) + 2 Im R_i Im(P_ij - R_i R_j)] / (2 m_i)
//   v_i = (Im R_i - e A_i) / m_i

#include <cstdint>
#include <vector>

#include "pws/potential.hpp"
#include "pws/spectral.hpp"

namespace pws {

// Relative amplitude below which a sample counts as a node.
inline constexpr double kNodeFloor = 1e-8;

struct MadelungBundle {
  RealField amplitude;
  VectorField velocity;
  RealField quantum_potential;
  VectorField quantum_force;
  std::vector<std::uint8_t> node_mask;  // 1 where a < kNodeFloor * max a
  double max_amplitude = 0.0;
  ComplexVectorField psi_gradient;  // grad Psi, a by-product reused by trajectory code
};

// Uses omega0 for every axis.
MadelungBundle madelung_extract(const ComplexField& psi, const PhysicalParams& params, const PotentialSpec& potential);
// Derivative arithmetic. Extended keeps q and F_Q accurate out to the node
// floor; standard is about five times cheaper and is enough when only
// interior values are read.
enum class DerivPrecision { standard, extended };

// Per-axis masses (configuration space of several particles).
MadelungBundle madelung_extract(const ComplexField& psi, Vec masses, double charge, Vec vector_potential,
                                const SpectralOps& ops, DerivPrecision precision = DerivPrecision::extended);

// Quantum potential alone, q = -sum_i (d_i d_i a)/(2 m_i a), zero on nodes.
RealField quantum_potential(const ComplexField& psi, Vec masses, const SpectralOps& ops);

}  // namespace pws
