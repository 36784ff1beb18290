#include <catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include "pws/coupled.hpp"
#include "pws/madelung.hpp"
#include "pws/nonlinearity.hpp"
#include "pws/schrodinger.hpp"
#include "pws/soliton.hpp"
#include "pws/spectral.hpp"

using namespace pws;
using std::numbers::pi;

namespace {

std::shared_ptr<const Nonlinearity> log_nl(double b = 1.0, double f0 = 1.0) {
  return std::make_shared<const LogNonlinearity>(b, f0);
}

SolitonState classical_state(const ComplexField& u, double b = 1.0, double f0 = 1.0, PhysicalParams p = {}) {
  SolitonState s;
  s.u = u;
  s.nonlinearity = log_nl(b, f0);
  s.params = p;
  return s;
}

// max |lap F - N(F^2) F| over samples where F is not negligible.
double stationary_residual(const ComplexField& u, double b, double f0) {
  const auto lap = spectral_laplacian(u);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = std::norm(u[i]);
    if (rho < 1e-20) continue;
    worst = std::max(worst, std::abs(lap[i] - log_nonlinearity(rho, b, f0) * u[i]));
  }
  return worst;
}

double relative_l2(const ComplexField& a, const ComplexField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i]) - std::abs(b[i]);
    num += d * d;
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("logarithmic nonlinearity values") {
  const double b = 1.7, f0 = 0.6;
  CHECK(log_nonlinearity(f0 * f0, b, f0) == Catch::Approx(-b).epsilon(1e-15));
  CHECK(log_nonlinearity(f0 * f0 * std::numbers::e, b, f0) == Catch::Approx(-2 * b).epsilon(1e-15));
  for (double r : {0.0, 0.5, 1.3, 2.9}) {
    const double rho = f0 * f0 * std::exp(-b * r * r);
    CHECK(log_nonlinearity(rho, b, f0) == Catch::Approx(-b * (1 - b * r * r)).epsilon(1e-13));
  }
  // The density floor keeps vacuum finite.
  CHECK(std::isfinite(log_nonlinearity(0.0, b, f0)));
  CHECK(log_nonlinearity(0.0, b, f0) == Catch::Approx(-b * (1 + std::log(1e-30))));
}

TEST_CASE("logarithmic energy density is consistent with the response") {
  const LogNonlinearity nl(1.3, 0.8);
  for (double rho : {1e-6, 0.1, 0.64, 2.0}) {
    const double h = 1e-6 * rho;
    const double dU = (nl.energy_density(rho + h) - nl.energy_density(rho - h)) / (2 * h);
    CHECK(dU == Catch::Approx(nl.response(rho)).epsilon(1e-7));
    // U - N rho = b rho for this family.
    CHECK(nl.energy_density(rho) - nl.response(rho) * rho == Catch::Approx(1.3 * rho).epsilon(1e-12));
  }
  CHECK_THROWS_AS(LogNonlinearity(-1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(LogNonlinearity(1.0, 0.0), InvalidArgument);
}

TEST_CASE("Gausson in one dimension is an exact stationary profile") {
  const GridSpec g = GridSpec::line(256, 20.0);
  GaussonParams gp;
  const auto u = gausson_init(gp, g, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.position(i)[0];
    CHECK(std::abs(u[i] - cplx(std::exp(-x * x / 2))) < 1e-15);
  }
  CHECK(stationary_residual(u, 1.0, 1.0) < 1e-10);
}

TEST_CASE("Gausson in two dimensions carries the corrected amplitude") {
  const GridSpec g = GridSpec::plane(64, 16.0, 64, 16.0);
  GaussonParams gp;
  gp.f0 = 0.7;
  const auto u = gausson_init(gp, g, 1.0);
  CHECK(gausson_amplitude(0.7, 2) == Catch::Approx(0.7 * std::exp(0.5)));
  CHECK(std::abs(u(32, 32)) == Catch::Approx(0.7 * std::exp(0.5)).epsilon(1e-14));
  CHECK(stationary_residual(u, 1.0, 0.7) < 1e-10);
}

TEST_CASE("boosted Gausson has the same modulus and a uniform wavevector") {
  const GridSpec g = GridSpec::line(256, 20.0);
  GaussonParams rest, moving;
  moving.velocity = {0.5, 0.0};
  const double omega0 = 1.4;
  const auto u0 = gausson_init(rest, g, omega0), u1 = gausson_init(moving, g, omega0);
  const auto grad = spectral_gradient(u1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(std::abs(u1[i]) - std::abs(u0[i])) < 1e-15);
    if (std::abs(g.position(i)[0]) < 5.0) {
      CHECK((grad[0][i] / u1[i]).imag() == Catch::Approx(omega0 * 0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("Gausson construction rejects a box that is too small") {
  GaussonParams gp;
  gp.b = 0.25;  // needs a box of at least 20
  CHECK_THROWS_AS(gausson_init(gp, GridSpec::line(64, 15.0), 1.0), InvalidArgument);
}

TEST_CASE("resting Gausson stays stationary and conserves its norm") {
  const GridSpec g = GridSpec::line(256, 20.0);
  const auto u0 = gausson_init({}, g, 1.0);
  SolitonState s = classical_state(u0);
  NlsSolver solver(g, {}, s.nonlinearity, PotentialSpec::none());
  const double c0 = integrate(abs2(u0));
  double worst = 0.0;
  for (int n = 1; n <= 10000; ++n) {
    solver.step(s, 1e-3);
    if (n % 100 == 0) worst = std::max(worst, relative_l2(s.u, u0));
  }
  CHECK(worst < 1e-6);
  CHECK(std::abs(integrate(abs2(s.u)) - c0) / c0 < 1e-10);
}

TEST_CASE("Gausson in a uniform field follows the classical parabola") {
  const double E = 0.1, omega0 = 1.0, charge = 1.0, T = 5.0, dt = 1e-3;
  const GridSpec g = GridSpec::line(512, 40.0);
  const PhysicalParams p{omega0, charge};
  SolitonState s = classical_state(gausson_init({}, g, omega0), 1.0, 1.0, p);
  NlsSolver solver(g, p, s.nonlinearity, PotentialSpec::uniform_field_vector({E, 0.0}));
  Vec c{0.0, 0.0};
  double worst = 0.0;
  for (long n = 1; n <= std::lround(T / dt); ++n) {
    solver.step(s, dt);
    c = soliton_center(s.u, c).center;
    const double t = static_cast<double>(n) * dt;
    if (t >= 1.0) worst = std::max(worst, std::abs(c[0] / (charge * E * t * t / (2 * omega0)) - 1.0));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("dBB mode with a zero quantum potential is bit-identical to classical mode") {
  const GridSpec g = GridSpec::line(128, 20.0);
  GaussonParams gp;
  gp.velocity = {0.3, 0.0};
  SolitonState a = classical_state(gausson_init(gp, g, 1.0));
  SolitonState b = a;
  b.mode = CouplingMode::dbb;
  const RealField zero(g);
  NlsSolver sa(g, {}, a.nonlinearity, PotentialSpec::none()), sb(g, {}, b.nonlinearity, PotentialSpec::none());
  for (int n = 0; n < 200; ++n) {
    sa.step(a, 1e-3);
    sb.step(b, 1e-3, &zero, &zero);
  }
  CHECK(std::memcmp(a.u.data.data(), b.u.data.data(), a.u.size() * sizeof(cplx)) == 0);
}

TEST_CASE("NLS step requires the external potential exactly in dBB mode") {
  const GridSpec g = GridSpec::line(64, 20.0);
  SolitonState s = classical_state(gausson_init({}, g, 1.0));
  NlsSolver solver(g, {}, s.nonlinearity, PotentialSpec::none());
  const RealField q(g);
  CHECK_THROWS_AS(solver.step(s, 1e-3, &q, &q), InvalidArgument);
  s.mode = CouplingMode::dbb;
  CHECK_THROWS_AS(solver.step(s, 1e-3), InvalidArgument);
}

TEST_CASE("soliton center estimates") {
  const GridSpec g = GridSpec::line(256, 20.0);
  SECTION("symmetric at the origin") {
    const auto est = soliton_center(gausson_init({}, g, 1.0));
    CHECK(std::abs(est.center[0]) < 1e-12);
    CHECK(est.norm == Catch::Approx(std::sqrt(pi)).epsilon(1e-12));
  }
  SECTION("displaced Gausson") {
    GaussonParams gp;
    gp.center = {1.3, 0.0};
    CHECK(std::abs(soliton_center(gausson_init(gp, g, 1.0)).center[0] - 1.3) < 1e-10);
  }
  SECTION("across the periodic seam") {
    GaussonParams gp;
    gp.center = {9.5, 0.0};
    const auto est = soliton_center(gausson_init(gp, g, 1.0), {9.0, 0.0});
    CHECK(wrap_displacement(g, 0, est.center[0], 9.5) == Catch::Approx(0.0).margin(1e-10));
  }
  SECTION("boosted Gausson after free flight") {
    GaussonParams gp;
    gp.velocity = {0.5, 0.0};
    SolitonState s = classical_state(gausson_init(gp, g, 1.0));
    NlsSolver solver(g, {}, s.nonlinearity, PotentialSpec::none());
    for (int n = 0; n < 2000; ++n) solver.step(s, 1e-3);
    CHECK(std::abs(soliton_center(s.u).center[0] - 1.0) < 1e-4);
  }
  SECTION("empty field") { CHECK_THROWS_AS(soliton_center(ComplexField(g)), InvalidArgument); }
}

TEST_CASE("phase harmony residual") {
  const double L = 20.0;
  const GridSpec g = GridSpec::line(256, L);
  const PhysicalParams p;
  SECTION("both phases flat") {
    const auto psi = make_field<cplx>(g, [](Vec) { return cplx(1.0, 0.0); });
    const auto mb = madelung_extract(psi, p, PotentialSpec::none());
    const auto u = gausson_init({}, g, 1.0);
    CHECK(phase_harmony_residual(u, mb, p, {0.0, 0.0}, {0.0, 0.0}, 3.0, 1.0) < 1e-8);
  }
  SECTION("boost matched to the pilot wavevector") {
    const double k = 2 * pi * 8 / L;
    const auto psi = make_field<cplx>(g, [&](Vec x) { return std::exp(cplx(0.0, k * x[0])); });
    const auto mb = madelung_extract(psi, p, PotentialSpec::none());
    GaussonParams gp;
    gp.velocity = {k / p.omega0, 0.0};
    const auto u = gausson_init(gp, g, 1.0);
    CHECK(phase_harmony_residual(u, mb, p, {0.0, 0.0}, {0.0, 0.0}, 3.0, 1.0) < 1e-6);
    GaussonParams off = gp;
    off.velocity = {0.0, 0.0};
    CHECK(phase_harmony_residual(gausson_init(off, g, 1.0), mb, p, {0.0, 0.0}, {0.0, 0.0}, 3.0, 1.0) > 0.5);
  }
  SECTION("window clipped by the boundary") {
    const auto psi = make_field<cplx>(g, [](Vec) { return cplx(1.0, 0.0); });
    const auto mb = madelung_extract(psi, p, PotentialSpec::none());
    CHECK_THROWS_AS(phase_harmony_residual(gausson_init({}, g, 1.0), mb, p, {0.0, 0.0}, {8.5, 0.0}, 3.0, 1.0),
                    InvalidArgument);
  }
}

TEST_CASE("coupled run on a plane wave is free motion") {
  const double L = 20.0, k = 2 * pi * 2 / L;
  const GridSpec g = GridSpec::line(512, L);
  const PhysicalParams p;
  const auto psi = make_field<cplx>(g, [&](Vec x) { return std::exp(cplx(0.0, k * x[0])) / std::sqrt(L); });
  const SolitonState sol = dbb_gausson(psi, p, PotentialSpec::none(), 16.0, 1.0, {-2.0, 0.0});
  CoupledOptions opt;
  opt.T = 2.0;
  opt.dt = 1e-3;
  const auto res = run_coupled(psi, sol, PotentialSpec::none(), opt);
  REQUIRE_FALSE(res.bohm_error);
  CHECK(res.max_tracking_error < 1e-6);
  CHECK(res.soliton_track.positions.back()[0] == Catch::Approx(-2.0 + k * 2.0).margin(1e-6));
}

TEST_CASE("coupled run on a spreading Gaussian tracks the Bohmian path") {
  const double sigma = 1.0, omega0 = 1.0;
  const GridSpec g = GridSpec::line(2048, 20.0);
  const PhysicalParams p{omega0, 1.0};
  const auto psi = gaussian_packet(g, {0.0, 0.0}, sigma, {0.0, 0.0});
  // Soliton much narrower than the pilot: sqrt(b) = 20/sigma.
  const double b = 400.0;
  const SolitonState sol = dbb_gausson(psi, p, PotentialSpec::none(), b, 1.0, {0.6744897501960817 * sigma, 0.0});
  CoupledOptions opt;
  opt.T = 4 * omega0 * sigma * sigma;
  opt.dt = 1e-3;
  opt.diagnostic_every = 10;
  const auto res = run_coupled(psi, sol, PotentialSpec::none(), opt);
  REQUIRE_FALSE(res.bohm_error);
  const double dx = g.spacing(0);
  CHECK(res.max_tracking_error < 3 * dx);
  // The path bends away from the straight classical one by far more than that.
  CHECK(res.max_classical_error > 3 * dx);
  CHECK(res.conservation.max_norm_drift < 1e-10);
}
