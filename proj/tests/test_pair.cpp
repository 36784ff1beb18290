#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "pws/bohm.hpp"
#include "pws/pair.hpp"
#include "pws/schrodinger.hpp"

using namespace pws;
using std::numbers::pi;

namespace {

// psi_A(x1) psi_B(x2), or the symmetrised (psi_A psi_B + psi_B psi_A)/norm.
ComplexField two_packets(const GridSpec& g2, double d, double sigma, double k, bool entangled) {
  const GridSpec g1 = g2.axis_grid(0);
  const auto A = gaussian_packet(g1, {-d, 0.0}, sigma, {-k, 0.0});
  const auto B = gaussian_packet(g1, {d, 0.0}, sigma, {k, 0.0});
  ComplexField psi(g2);
  for (std::size_t i = 0; i < g2.n[0]; ++i) {
    for (std::size_t j = 0; j < g2.n[1]; ++j) psi(i, j) = A[i] * B[j] + (entangled ? B[i] * A[j] : cplx{});
  }
  normalize(psi);
  return psi;
}

ComplexField outer(const ComplexField& a, const ComplexField& b) {
  const GridSpec g2 = GridSpec::plane(a.grid.n[0], a.grid.length[0], b.grid.n[0], b.grid.length[0]);
  ComplexField psi(g2);
  for (std::size_t i = 0; i < g2.n[0]; ++i) {
    for (std::size_t j = 0; j < g2.n[1]; ++j) psi(i, j) = a[i] * b[j];
  }
  return psi;
}

const GridSpec kGrid = GridSpec::plane(128, 16.0, 128, 16.0);

}  // namespace

TEST_CASE("product state stays a product under the dense stepper") {
  PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.5, false), {});
  CHECK(schmidt_residual(std::get<PairWave::Dense>(w.state).psi) < 1e-12);
  for (int n = 0; n < 200; ++n) ls2_step(w, 5e-3);
  CHECK(schmidt_residual(std::get<PairWave::Dense>(w.state).psi) < 1e-8);
}

TEST_CASE("entangled pair evolution is unitary") {
  PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.5, true), {});
  CHECK(schmidt_residual(std::get<PairWave::Dense>(w.state).psi) > 0.1);
  PairStepper stepper(w);
  for (int n = 0; n < 1000; ++n) stepper.step(w, 5e-3);
  CHECK(std::abs(integrate(abs2(w.to_dense())) - 1.0) < 1e-12);
}

TEST_CASE("a trap on particle 1 leaves particle 2 alone in a product state") {
  const ComplexField psi = two_packets(kGrid, 2.0, 1.0, 0.5, false);
  PairParams trapped;
  trapped.potentials[0] = PotentialSpec::harmonic({0.5, 0.0});
  PairWave free = PairWave::dense(psi, {}), trap = PairWave::dense(psi, trapped);
  for (int n = 0; n < 200; ++n) {
    ls2_step(free, 5e-3);
    ls2_step(trap, 5e-3);
  }
  const auto r_free = reduced_density(free, 1), r_trap = reduced_density(trap, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < r_free.size(); ++i) worst = std::max(worst, std::abs(r_free[i] - r_trap[i]));
  CHECK(worst < 1e-10);
  // Particle 1 itself does feel the trap.
  const auto q_free = reduced_density(free, 0), q_trap = reduced_density(trap, 0);
  double moved = 0.0;
  for (std::size_t i = 0; i < q_free.size(); ++i) moved = std::max(moved, std::abs(q_free[i] - q_trap[i]));
  CHECK(moved > 1e-3);
}

TEST_CASE("conditional quantum potential of a product state ignores the partner") {
  const PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.5, false), {});
  const auto q_ref = conditional_q(w, 0, 2.0);
  for (double partner : {1.0, 2.5, 3.3}) {
    const auto q = conditional_q(w, 0, partner);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (std::abs(q.grid.position(i)[0] + 2.0) < 4.0) worst = std::max(worst, std::abs(q[i] - q_ref[i]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("conditional quantum potential of a plane wave in x1 vanishes") {
  const GridSpec g1 = kGrid.axis_grid(0);
  const auto pw = make_field<cplx>(g1, [&](Vec x) { return std::exp(cplx(0.0, 2 * pi * 3 / 16.0 * x[0])); });
  const auto psi2 = gaussian_packet(kGrid.axis_grid(1), {0.5, 0.0}, 1.0, {0.0, 0.0});
  const PairWave w = PairWave::dense(outer(pw, psi2), {});
  const auto q = conditional_q(w, 0, 0.3);
  for (double v : q.data) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("conditional quantum potential of an entangled state depends on the partner") {
  const PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.0, true), {});
  const auto qa = conditional_q(w, 0, -2.0), qb = conditional_q(w, 0, 0.5);
  const std::size_t probe = 64 - 10;  // x1 = -1.25
  CHECK(std::abs(qa[probe] - qb[probe]) > 10 * kNodeFloor);
  CHECK(std::abs(qa[probe] - qb[probe]) > 1e-2);
  CHECK_THROWS_AS(conditional_q(w, 2, 0.0), InvalidArgument);
}

TEST_CASE("factored product run reproduces the single-particle trajectory bit for bit") {
  const GridSpec g1 = kGrid.axis_grid(0);
  const auto A = gaussian_packet(g1, {-2.0, 0.0}, 1.0, {-0.5, 0.0});
  const auto B = gaussian_packet(kGrid.axis_grid(1), {2.0, 0.0}, 1.0, {0.5, 0.0});
  const PairParams pp;
  PairSimulation sim(PairWave::product(A, B, pp), {-2.3, 2.0}, std::nullopt);
  sim.run(1.0, 5e-3);

  const PhysicalParams par = pp.particle(0);
  SchrodingerSolver single(g1, par, PotentialSpec::none());
  ComplexField psi = A;
  BohmIntegrator z({-2.3, 0.0}, std::make_shared<const PilotSnapshot>(make_snapshot(psi, par, PotentialSpec::none())),
                   Guidance::from(par, PotentialSpec::none()));
  for (int n = 0; n < 200; ++n) {
    single.step(psi, 5e-3);
    z.advance(std::make_shared<const PilotSnapshot>(make_snapshot(psi, par, PotentialSpec::none())));
  }
  const auto& a = sim.trajectory(0);
  const auto& b = z.record();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.positions[i][0] == b.positions[i][0]);
    CHECK(a.times[i] == b.times[i]);
  }
}

TEST_CASE("partner displacement moves particle 1 only when entangled") {
  const double dx = kGrid.spacing(0);
  auto final_z1 = [](bool entangled, double partner) {
    const PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 1.0, entangled), {});
    const Vec z0{entangled ? 0.0 : -2.0, partner};
    PairSimulation sim(w, z0, pair_gaussons(w, z0, 16.0, 1.0));
    sim.run(2.0, 5e-3);
    return std::pair{sim.trajectory(0).positions.back()[0], sim.tracking_residual()};
  };
  const auto [p_plus, pt_plus] = final_z1(false, 2.0);
  const auto [p_minus, pt_minus] = final_z1(false, 3.0);
  CHECK(std::abs(p_plus - p_minus) < dx / 10);
  CHECK(std::max(pt_plus[0], pt_minus[0]) < 3 * dx);
  CHECK(std::max(pt_plus[1], pt_minus[1]) < 3 * dx);

  const auto [e_plus, et_plus] = final_z1(true, 3.0);
  const auto [e_minus, et_minus] = final_z1(true, -3.0);
  CHECK(std::abs(e_plus - e_minus) > 10 * dx);
  CHECK(std::max(et_plus[0], et_minus[0]) < 5 * dx);
  CHECK(std::max(et_plus[1], et_minus[1]) < 5 * dx);
}

TEST_CASE("solitons without coupling fly straight") {
  const PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.0, true), {});
  const Vec z0{-1.0, 2.5};
  PairOptions opt;
  opt.zero_coupling = true;
  const auto sol = pair_gaussons(w, z0, 16.0, 1.0);
  const Vec v0 = pair_guidance_velocity(w, z0);
  PairSimulation sim(w, z0, sol, opt);
  sim.run(1.0, 5e-3);
  for (int k = 0; k < 2; ++k) {
    const auto& tr = sim.soliton_track(k);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      CHECK(tr.positions[i][0] == Catch::Approx(z0[k] + v0[k] * tr.times[i]).margin(1e-6));
    }
  }
}

TEST_CASE("configuration-space continuity") {
  PairWave w = PairWave::dense(two_packets(kGrid, 2.0, 1.0, 0.5, true), {});
  PairStepper stepper(w);
  std::vector<ComplexField> hist{w.to_dense()};
  for (int n = 1; n <= 100; ++n) {
    stepper.step(w, 1e-3);
    if (n % 10 == 0) hist.push_back(w.to_dense());
  }
  const double rho_max = [&] {
    double m = 0.0;
    for (double v : abs2(hist.front()).data) m = std::max(m, v);
    return m;
  }();
  Guidance g;
  CHECK(continuity_residual(hist, g) < 1e-4 * rho_max / 1e-2);
}
