#include "pws/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pws {
namespace {

// Inverse of a piecewise-uniform CDF given cumulative masses cdf[0..n]
// (cdf[0] = 0). Returns the cell index and the fractional position in it.
std::pair<std::size_t, double> invert(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), target);
  std::size_t j = static_cast<std::size_t>(it - cdf.begin()) - 1;
  const std::size_t n = cdf.size() - 1;
  if (j >= n) j = n - 1;
  // Skip empty cells (possible only when target sits exactly on a boundary).
  while (cdf[j + 1] - cdf[j] <= 0.0 && j + 1 < n) ++j;
  while (cdf[j + 1] - cdf[j] <= 0.0 && j > 0) --j;
  const double mass = cdf[j + 1] - cdf[j];
  double frac = mass > 0.0 ? (target - cdf[j]) / mass : 0.5;
  frac = std::clamp(frac, 0.0, std::nextafter(1.0, 0.0));
  return {j, frac};
}

std::vector<double> cumulative(const double* w, std::size_t n) {
  std::vector<double> cdf(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) cdf[j + 1] = cdf[j] + w[j];
  return cdf;
}

double cell_position(const GridSpec& g, int axis, std::size_t j, double frac) {
  const double x = g.coordinate(axis, j) + (frac - 0.5) * g.spacing(axis);
  return wrap_coordinate(g, axis, x);
}

}  // namespace

std::vector<Vec> sample_density(const RealField& density, std::size_t count, std::uint64_t seed) {
  const GridSpec& g = density.grid;
  double total = 0.0;
  for (double v : density.data) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("density must be finite and non-negative");
    total += v;
  }
  if (!(total > 0.0)) throw InvalidArgument("density integrates to zero");
  if (count == 0) return {};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);

  if (g.dim == 1) {
    const auto cdf = cumulative(density.data.data(), g.n[0]);
    for (std::size_t i = 0; i < count; ++i) {
      const double u = (static_cast<double>(i) + uni(rng)) / static_cast<double>(count);
      const auto [j, frac] = invert(cdf, std::min(u, std::nextafter(1.0, 0.0)));
      out.push_back({cell_position(g, 0, j, frac), 0.0});
    }
    return out;
  }

  const std::size_t n0 = g.n[0], n1 = g.n[1];
  std::vector<double> marginal(n0, 0.0);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) marginal[i] += density.data[i * n1 + j];
  }
  const auto cdf0 = cumulative(marginal.data(), n0);
  std::vector<std::vector<double>> cdf1(n0);

  // R2 sequence: additive recurrence with the inverse powers of the plastic number.
  constexpr double plastic = 1.32471795724474602596;
  const double a0 = 1.0 / plastic, a1 = 1.0 / (plastic * plastic);
  const double s0 = uni(rng), s1 = uni(rng);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i + 1);
    double u0 = s0 + a0 * k, u1 = s1 + a1 * k;
    u0 -= std::floor(u0);
    u1 -= std::floor(u1);
    const auto [r, fr] = invert(cdf0, u0);
    if (cdf1[r].empty()) cdf1[r] = cumulative(density.data.data() + r * n1, n1);
    const auto [c, fc] = invert(cdf1[r], u1);
    out.push_back({cell_position(g, 0, r, fr), cell_position(g, 1, c, fc)});
  }
  return out;
}

}  // namespace pws
