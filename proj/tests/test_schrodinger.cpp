#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <numbers>

#include "pws/bohm.hpp"
#include "pws/madelung.hpp"
#include "pws/schrodinger.hpp"

using namespace pws;
using std::numbers::pi;

namespace {

using History = std::vector<std::shared_ptr<const PilotSnapshot>>;

// Evolve psi for `steps` steps of size dt, keeping a snapshot every `every` steps.
History evolve(ComplexField psi, const PhysicalParams& p, const PotentialSpec& pot, double dt, long steps,
               long every = 1, std::vector<ComplexField>* fields = nullptr) {
  SchrodingerSolver s(psi.grid, p, pot);
  History h;
  auto keep = [&] {
    h.push_back(std::make_shared<const PilotSnapshot>(make_snapshot(psi, p, pot)));
    if (fields) fields->push_back(psi);
  };
  keep();
  for (long n = 1; n <= steps; ++n) {
    s.step(psi, dt);
    if (n % every == 0) keep();
  }
  return h;
}

double mean_x(const ComplexField& psi) {
  const auto rho = abs2(psi);
  double m = 0.0, w = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    m += rho[i] * psi.grid.position(i)[0];
    w += rho[i];
  }
  return m / w;
}

double width(const ComplexField& psi) {
  const auto rho = abs2(psi);
  const double mu = mean_x(psi);
  double m2 = 0.0, w = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double d = psi.grid.position(i)[0] - mu;
    m2 += rho[i] * d * d;
    w += rho[i];
  }
  return std::sqrt(m2 / w);
}

// Real Gaussian ground state of V = k x^2/2: a = exp(-x^2 sqrt(k omega0)/2).
ComplexField harmonic_ground(const GridSpec& g, double k, double omega0, double center = 0.0) {
  const double sigma = 1.0 / std::sqrt(2.0 * std::sqrt(k * omega0));
  return gaussian_packet(g, {center, 0.0}, sigma, {0.0, 0.0});
}

ComplexField plane_wave(const GridSpec& g, double k) {
  return make_field<cplx>(g, [&](Vec x) { return std::exp(cplx(0.0, k * x[0])); });
}

}  // namespace

TEST_CASE("plane wave acquires the exact kinetic phase") {
  const double L = 20.0, k = 2 * pi * 4 / L, dt = 0.37;
  const GridSpec g = GridSpec::line(64, L);
  PhysicalParams p;
  p.omega0 = 1.3;
  const auto out = ls_step(plane_wave(g, k), p, PotentialSpec::none(), dt);
  const cplx phase = std::exp(cplx(0.0, -(p.omega0 + k * k / (2 * p.omega0)) * dt));
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(out[i] - std::exp(cplx(0.0, k * g.position(i)[0])) * phase));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("free Gaussian spreads at the analytic rate") {
  const GridSpec g = GridSpec::line(512, 40.0);
  ComplexField psi = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0});
  SchrodingerSolver s(g, {}, PotentialSpec::none());
  for (int n = 0; n < 2000; ++n) s.step(psi, 1e-3);
  const double t = 2.0, expect = std::sqrt(1.0 + t * t / 4.0);
  CHECK(std::abs(width(psi) - expect) < 1e-6);
}

TEST_CASE("coherent state oscillates with the classical period") {
  const double k = 1.0, omega0 = 1.0, dt = 1e-3;
  const GridSpec g = GridSpec::line(256, 20.0);
  ComplexField psi = harmonic_ground(g, k, omega0, 1.0);
  SchrodingerSolver s(g, {omega0, 1.0}, PotentialSpec::harmonic({k, 0.0}));
  // Downward zero crossings of <x>, located by linear interpolation.
  std::vector<double> crossings;
  double prev = mean_x(psi);
  for (long n = 1; n <= 15000; ++n) {
    s.step(psi, dt);
    const double m = mean_x(psi);
    if (prev > 0.0 && m <= 0.0) crossings.push_back((n - 1 + prev / (prev - m)) * dt);
    prev = m;
  }
  REQUIRE(crossings.size() >= 2);
  const double period = crossings[1] - crossings[0];
  CHECK(std::abs(period / (2 * pi * std::sqrt(omega0 / k)) - 1.0) < 1e-3);
}

TEST_CASE("split-step evolution is unitary") {
  const GridSpec g = GridSpec::line(256, 20.0);
  ComplexField psi = gaussian_packet(g, {1.0, 0.0}, 1.0, {0.8, 0.0});
  SchrodingerSolver s(g, {}, PotentialSpec::harmonic({0.5, 0.0}));
  const double n0 = integrate(abs2(psi));
  for (int n = 0; n < 10000; ++n) s.step(psi, 1e-3);
  CHECK(std::abs(integrate(abs2(psi)) - n0) < 1e-12);
}

TEST_CASE("non-finite wavefunctions abort the step") {
  const GridSpec g = GridSpec::line(32, 4.0);
  ComplexField psi = gaussian_packet(g, {0.0, 0.0}, 0.5, {0.0, 0.0});
  psi[4] = cplx(std::nan(""), 0.0);
  SchrodingerSolver s(g, {}, PotentialSpec::none());
  CHECK_THROWS_AS(s.step(psi, 1e-3), NumericalError);
}

TEST_CASE("Madelung fields of a plane wave") {
  const double L = 10.0, k = 2 * pi * 3 / L;
  const GridSpec g = GridSpec::line(64, L);
  PhysicalParams p;
  p.omega0 = 2.0;
  const auto mb = madelung_extract(plane_wave(g, k), p, PotentialSpec::none());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(mb.velocity[0][i] == Catch::Approx(k / p.omega0).epsilon(1e-12));
    CHECK(std::abs(mb.quantum_potential[i]) < 1e-12);
  }
}

TEST_CASE("Madelung fields of the harmonic ground state") {
  const double k = 1.0;
  const GridSpec g = GridSpec::line(256, 20.0);
  const auto pot = PotentialSpec::harmonic({k, 0.0});
  const auto mb = madelung_extract(harmonic_ground(g, k, 1.0), {}, pot);
  const auto V = pot.scalar_field(g, 0.0);
  const std::size_t mid = g.size() / 2;
  const double level = mb.quantum_potential[mid] + V[mid];
  CHECK(level == Catch::Approx(0.5 * std::sqrt(k)).epsilon(1e-10));
  double worst_v = 0.0, worst_q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mb.node_mask[i]) continue;
    worst_v = std::max(worst_v, std::abs(mb.velocity[0][i]));
    worst_q = std::max(worst_q, std::abs(mb.quantum_potential[i] + V[i] - level));
  }
  // Round-off in Im(psi'/psi) is amplified by up to 1/kNodeFloor at the mask edge.
  CHECK(worst_v < 1e-10);
  CHECK(worst_q < 1e-6);
}

TEST_CASE("quantum potential of a Gaussian amplitude") {
  const double sigma = 1.2;
  PhysicalParams p;
  p.omega0 = 1.5;
  const GridSpec g = GridSpec::line(512, 40.0);
  const auto psi = make_field<cplx>(g, [&](Vec x) { return cplx(std::exp(-x[0] * x[0] / (4 * sigma * sigma))); });
  const auto mb = madelung_extract(psi, p, PotentialSpec::none());
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mb.node_mask[i]) continue;
    const double x = g.position(i)[0];
    const double q = 1.0 / (4 * p.omega0 * sigma * sigma) - x * x / (8 * p.omega0 * std::pow(sigma, 4));
    worst = std::max(worst, std::abs(mb.quantum_potential[i] - q));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Madelung extraction rejects a zero field") {
  const GridSpec g = GridSpec::line(16, 2.0);
  CHECK_THROWS_AS(madelung_extract(ComplexField(g), {}, PotentialSpec::none()), InvalidArgument);
}

TEST_CASE("Bohm trajectory in a plane wave is a straight line") {
  const double L = 20.0, k = 2 * pi * 3 / L, dt = 1e-2;
  const GridSpec g = GridSpec::line(64, L);
  const PhysicalParams p;
  const auto h = evolve(plane_wave(g, k), p, PotentialSpec::none(), dt, 200);
  const auto tr = integrate_bohm({-3.0, 0.0}, h, Guidance::from(p, PotentialSpec::none()));
  REQUIRE(tr.size() == h.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.positions[i][0] == Catch::Approx(-3.0 + k * tr.times[i]).margin(1e-10));
  }
  const auto res = newton_bohm_residual(tr, {1.0, 1.0});
  CHECK(res.rms < 1e-8);
}

TEST_CASE("Bohm trajectory in the ground state is stationary") {
  // The split-step propagator's own stationary state differs from the
  // continuum Gaussian at O(dt^2), so the drift must vanish like dt^2.
  const GridSpec g = GridSpec::line(256, 20.0);
  const PhysicalParams p;
  const auto pot = PotentialSpec::harmonic({1.0, 0.0});
  auto drift = [&](double dt) {
    const auto h = evolve(harmonic_ground(g, 1.0, 1.0), p, pot, dt, std::lround(3.0 / dt));
    const auto tr = integrate_bohm({0.83, 0.0}, h, Guidance::from(p, pot));
    double worst = 0.0;
    for (const Vec& z : tr.positions) worst = std::max(worst, std::abs(z[0] - 0.83));
    return worst;
  };
  const double coarse = drift(1e-2), fine = drift(5e-3);
  CHECK(coarse < 0.2 * 1e-4);
  CHECK(coarse / fine == Catch::Approx(4.0).margin(0.2));
}

TEST_CASE("trajectories never cross the symmetry axis of a two-packet state") {
  const GridSpec g = GridSpec::line(512, 40.0);
  const PhysicalParams p;
  ComplexField psi = gaussian_packet(g, {-3.0, 0.0}, 1.0, {0.0, 0.0});
  const ComplexField right = gaussian_packet(g, {3.0, 0.0}, 1.0, {0.0, 0.0});
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += right[i];
  normalize(psi);
  const auto h = evolve(psi, p, PotentialSpec::none(), 2e-3, 2500, 5);
  int checked = 0;
  for (double z0 = 0.1; z0 < 5.0; z0 += 0.2) {
    for (double sign : {1.0, -1.0}) {
      try {
        const auto tr = integrate_bohm({sign * z0, 0.0}, h, Guidance::from(p, PotentialSpec::none()));
        for (const Vec& z : tr.positions) REQUIRE(sign * z[0] > 0.0);
        ++checked;
      } catch (const TrajectoryError& e) {
        // A path that runs into a node stops there; what it did before still counts.
        REQUIRE(e.kind() == TrajectoryError::Kind::node_encounter);
        for (const Vec& z : e.partial().positions) REQUIRE(sign * z[0] > 0.0);
      }
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("Newton residual of a spreading Gaussian from a quartile start") {
  const GridSpec g = GridSpec::line(512, 40.0);
  const PhysicalParams p;
  const auto h = evolve(gaussian_packet(g, {0.0, 0.0}, 1.0, {0.5, 0.0}), p, PotentialSpec::none(), 1e-3, 2000);
  // Upper quartile of a unit normal.
  const auto tr = integrate_bohm({0.6744897501960817, 0.0}, h, Guidance::from(p, PotentialSpec::none()));
  const auto res = newton_bohm_residual(tr, {1.0, 1.0});
  CHECK(res.force_scale > 0.0);
  CHECK(res.relative_rms < 0.02);
}

TEST_CASE("coherent-state trajectory from the centre obeys Hooke's law") {
  const double k = 1.0;
  const GridSpec g = GridSpec::line(256, 20.0);
  const PhysicalParams p;
  const auto pot = PotentialSpec::harmonic({k, 0.0});
  const auto h = evolve(harmonic_ground(g, k, 1.0, 1.0), p, pot, 1e-3, 4000, 10);
  const auto tr = integrate_bohm({1.0, 0.0}, h, Guidance::from(p, pot));
  const auto acc = path_acceleration(tr.times, tr.positions);
  double worst = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    worst = std::max(worst, std::abs(p.omega0 * acc[i][0] + k * tr.positions[i + 1][0]));
  }
  CHECK(worst < 0.01 * k * 1.0);
}

TEST_CASE("continuity residual examples") {
  const PhysicalParams p;
  SECTION("stationary state") {
    const GridSpec g = GridSpec::line(256, 20.0);
    const auto pot = PotentialSpec::harmonic({1.0, 0.0});
    std::vector<ComplexField> f;
    evolve(harmonic_ground(g, 1.0, 1.0), p, pot, 1e-2, 20, 1, &f);
    CHECK(continuity_residual(f, Guidance::from(p, pot)) < 1e-8);
  }
  SECTION("plane wave") {
    const double L = 20.0;
    const GridSpec g = GridSpec::line(64, L);
    std::vector<ComplexField> f;
    evolve(plane_wave(g, 2 * pi * 3 / L), p, PotentialSpec::none(), 1e-2, 20, 1, &f);
    CHECK(continuity_residual(f, Guidance::from(p, PotentialSpec::none())) < 1e-10);
  }
  SECTION("free Gaussian converges under snapshot refinement") {
    const GridSpec g = GridSpec::line(512, 40.0);
    const auto psi = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.5, 0.0});
    const double rho_max = 1.0 / std::sqrt(2 * pi);
    std::vector<double> r;
    for (double dts : {2e-2, 1e-2}) {
      std::vector<ComplexField> f;
      evolve(psi, p, PotentialSpec::none(), dts / 10, 100 * std::lround(2e-2 / dts), 10, &f);
      r.push_back(continuity_residual(f, Guidance::from(p, PotentialSpec::none())));
      CHECK(r.back() < 1e-4 * rho_max / dts);
    }
    // Centred time differences: second order in the snapshot spacing.
    CHECK(r[0] / r[1] == Catch::Approx(4.0).margin(0.5));
  }
}
