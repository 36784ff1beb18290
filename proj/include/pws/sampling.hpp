#pragma once

#include <cstdint>
#include <vector>

#include "pws/grid.hpp"

namespace pws {

// Draw `count` positions distributed as the (unnormalised, non-negative)
// grid density. Cell j covers [x_j - dx/2, x_j + dx/2) and carries mass
// density[j]; positions inside a cell are uniform.
//
// 1D uses stratified uniforms u_i = (i + U_i)/count pushed through the
// inverse CDF. 2D uses a randomly shifted R2 low-discrepancy sequence
// through the marginal (axis 0) and conditional (axis 1) inverse CDFs.
// Both give per-cell counts much closer to expectation than i.i.d. draws,
// which keeps histogram comparisons at small ensemble sizes meaningful.
// Deterministic for a given seed.
std::vector<Vec> sample_density(const RealField& density, std::size_t count, std::uint64_t seed);

}  // namespace pws
