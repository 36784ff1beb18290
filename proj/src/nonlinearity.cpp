#include "pws/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "pws/error.hpp"

namespace pws {

LogNonlinearity::LogNonlinearity(double b, double f0) : b_(b), f0_(f0), f0sq_(f0 * f0), floor_(1e-30 * f0 * f0) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("nonlinearity requires b > 0");
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw InvalidArgument("nonlinearity requires f0 > 0");
}

double LogNonlinearity::response(double rho) const {
  if (rho < 0.0) throw InvalidArgument("density must be non-negative");
  return -b_ * (1.0 + std::log(std::max(rho, floor_) / f0sq_));
}

// U = -b rho ln(rho/f0^2), so U - N rho = b rho exactly.
double LogNonlinearity::energy_density(double rho) const {
  if (rho < 0.0) throw InvalidArgument("density must be non-negative");
  return -b_ * rho * std::log(std::max(rho, floor_) / f0sq_);
}

double LogNonlinearity::response_slope(double rho) const { return rho > floor_ ? -b_ : 0.0; }

double log_nonlinearity(double rho, double b, double f0) { return LogNonlinearity(b, f0).response(rho); }

}  // namespace pws
