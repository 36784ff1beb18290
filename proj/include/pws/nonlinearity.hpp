#pragma once

#include <memory>

namespace pws {

// Bulk nonlinear response of the soliton field, as a function of rho = |u|^2.
class Nonlinearity {
 public:
  virtual ~Nonlinearity() = default;
  // N(rho), entering the wave equation as N(|u|^2)/(2 omega0) * u.
  virtual double response(double rho) const = 0;
  // U(rho) with dU/drho = N(rho).
  virtual double energy_density(double rho) const = 0;
  // rho * dN/drho.
  virtual double response_slope(double rho) const = 0;
};

// N(rho) = -b [1 + ln(max(rho, floor) / f0^2)], floor = 1e-30 f0^2.
class LogNonlinearity final : public Nonlinearity {
 public:
  LogNonlinearity(double b, double f0);

  double response(double rho) const override;
  double energy_density(double rho) const override;
  double response_slope(double rho) const override;

  double b() const { return b_; }
  double f0() const { return f0_; }
  double floor() const { return floor_; }

 private:
  double b_, f0_, f0sq_, floor_;
};

double log_nonlinearity(double rho, double b, double f0);

}  // namespace pws
