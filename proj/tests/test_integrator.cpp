#include <catch2/catch_amalgamated.hpp>

#include "hnls/integrator.hpp"
#include "test_helpers.hpp"

using namespace hnls;
using hnls::testing::max_abs_diff;
using hnls::testing::random_smooth_field;

namespace {

Field soliton(const Grid& g, double k, double shift = 0.0) {
  return Field::sample(g, [&](double x) -> cplx {
    return {std::sqrt(6.0) * k / std::cosh(k * (x - shift)), 0.0};
  });
}

Field final_state(const Field& u0, const EquationParams& p, double dt, double T) {
  SolverConfig sc;
  sc.dt = dt;
  sc.t_end = T;
  sc.record_every = 1 << 30;
  return evolve(u0, p, sc).frames.back();
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig sc;
  sc.dt = 0.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.dt = 2.0;
  sc.t_end = 1.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // dt > |t_end|
  sc.dt = 0.1;
  sc.record_every = 0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.record_every = 1;
  sc.t_end = 0.55;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // not a multiple of dt
  sc.t_end = 0.5;
  CHECK_NOTHROW(sc.validate());
}

TEST_CASE("free flow: step equals the exact group") {
  const Grid g(256, 40.0);
  const EquationParams p{1.0, -0.7, 0.0, 0.0, 0.0};
  std::mt19937_64 rng(7);
  const Field u = random_smooth_field(g, rng, 2.0);
  const Field one = step(u, 0.0, 0.05, p);
  const Field exact = apply_group(u, 0.05, p);
  CHECK(max_abs_diff(one, exact) < 1e-13);

  // a whole run reduces to one group application
  const Field run = final_state(u, p, 1e-2, 0.5);
  CHECK(max_abs_diff(run, apply_group(u, 0.5, p)) < 1e-12);
}

TEST_CASE("focusing NLS standing soliton") {
  // nls preset gives i u_t + u_xx + |u|^2 u = 0, whose soliton
  // sqrt(2) sech(x) e^{it} keeps its profile and rotates in phase
  const Grid g(256, 40.0);
  const EquationParams p{-1.0, 0.0, -1.0, 0.0, 0.0};
  const Field u0 = Field::sample(g, [](double x) -> cplx {
    return {std::sqrt(2.0) / std::cosh(x), 0.0};
  });
  const double T = 0.5;
  const Field uT = final_state(u0, p, 1e-3, T);
  Field exact = u0;
  for (cplx& z : exact.values) z *= std::polar(1.0, T);
  Field diff = uT;
  for (std::size_t j = 0; j < g.n(); ++j) diff.values[j] -= exact.values[j];
  CHECK(norm_l2(diff) < 1e-8);
}

TEST_CASE("plane wave evolves with the derived frequency") {
  const Grid g(256, 40.0);
  const EquationParams p{1.0, 0.5, 1.0, 1.0, 0.3};
  const double kappa = 0.8;
  const double k = 3.0 * g.dxi();
  const double omega = -p.a * k * k - p.b * std::pow(k, 3) + p.c * kappa * kappa +
                       (p.d - p.e) * kappa * kappa * k;
  const Field u0 =
      Field::sample(g, [&](double x) { return std::polar(kappa, k * x); });
  const Field uT = final_state(u0, p, 1e-3, 1.0);
  const Field exact = Field::sample(
      g, [&](double x) { return std::polar(kappa, k * x - omega); });
  Field diff = uT;
  for (std::size_t j = 0; j < g.n(); ++j) diff.values[j] -= exact.values[j];
  CHECK(norm_l2(diff) < 1e-10);
}

TEST_CASE("mKdV soliton translates with speed k^2") {
  const Grid g(512, 40.0);
  const EquationParams p{0.0, 1.0, 0.0, 1.0, 0.0};
  const double k = 1.0;
  const Field uT = final_state(soliton(g, k), p, 2e-4, 0.25);
  const Field exact = soliton(g, k, k * k * 0.25);
  Field diff = uT;
  for (std::size_t j = 0; j < g.n(); ++j) diff.values[j] -= exact.values[j];
  CHECK(norm_l2(diff) < 1e-6);
}

TEST_CASE("evolve bookkeeping") {
  const Grid g(128, 40.0);
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};

  SECTION("t_end = 0 gives a single frame equal to u0") {
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.0;
    const Field u0 = soliton(g, 1.0);
    const Trajectory traj = evolve(u0, p, sc);
    REQUIRE(traj.frames.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(max_abs_diff(traj.frames[0], u0) == 0.0);
  }

  SECTION("times are strictly monotone and frames share the grid") {
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.1;
    sc.record_every = 3;
    const Trajectory traj = evolve(soliton(g, 1.0), p, sc);
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
      CHECK(traj.times[i] > traj.times[i - 1]);
      CHECK(traj.frames[i].grid == g);
    }
    CHECK(traj.times.back() == Catch::Approx(0.1));
  }

  SECTION("negative t_end runs backward") {
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = -0.1;
    const Trajectory traj = evolve(soliton(g, 1.0), p, sc);
    CHECK(traj.times.back() == Catch::Approx(-0.1));
    for (std::size_t i = 1; i < traj.times.size(); ++i)
      CHECK(traj.times[i] < traj.times[i - 1]);
  }

  SECTION("diagnostics carry requested thetas") {
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.05;
    const Trajectory traj = evolve(soliton(g, 1.0), p, sc, {0.25, 1.0});
    REQUIRE(traj.diagnostics.front().weighted_mu_dot.size() == 2);
    REQUIRE(traj.diagnostics.front().x2theta.size() == 2);
    CHECK(traj.diagnostics.front().I2.has_value());
    CHECK(traj.diagnostics.front().I1 ==
          Catch::Approx(traj.diagnostics.front().l2 * traj.diagnostics.front().l2));
  }
}

TEST_CASE("forward-backward evolution returns to the initial state") {
  const Grid g(256, 40.0);
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};
  const Field u0 = soliton(g, 2.0);
  const double T = 0.5, dt = 5e-3;
  const Field fwd = final_state(u0, p, dt, T);
  const Field back = final_state(fwd, p, dt, -T);
  // one-way error oracle: compare against the exact translated soliton
  const Field exact = soliton(g, 2.0, 4.0 * T);
  Field oneway = fwd;
  for (std::size_t j = 0; j < g.n(); ++j) oneway.values[j] -= exact.values[j];
  const double e1 = norm_l2(oneway);
  Field ret = back;
  for (std::size_t j = 0; j < g.n(); ++j) ret.values[j] -= u0.values[j];
  INFO("one-way " << e1 << " return " << norm_l2(ret));
  CHECK(norm_l2(ret) <= 10.0 * e1);
}

TEST_CASE("dt-halving study shows 4th order") {
  const Grid g(256, 40.0);
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};
  const Field u0 = soliton(g, 2.0);
  const double T = 0.1;
  const Field ref = final_state(u0, p, 2.5e-5, T);
  std::vector<double> errs;
  for (double dt : {8e-4, 4e-4, 2e-4}) {
    Field diff = final_state(u0, p, dt, T);
    for (std::size_t j = 0; j < g.n(); ++j) diff.values[j] -= ref.values[j];
    errs.push_back(norm_l2(diff));
  }
  // least-squares slope of log err vs log dt
  const double l1 = std::log(errs[0] / errs[1]) / std::log(2.0);
  const double l2_ = std::log(errs[1] / errs[2]) / std::log(2.0);
  INFO("errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(0.5 * (l1 + l2_) >= 3.8);
}

TEST_CASE("spectral accuracy in n") {
  // halving the resolution from a resolved grid multiplies the error far
  // beyond any fixed-order factor
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};
  const double T = 0.1, dt = 1e-4;
  auto err_at = [&](std::size_t n) {
    const Grid g(n, 40.0);
    const Field uT = final_state(soliton(g, 1.0), p, dt, T);
    const Field exact = soliton(g, 1.0, T);
    Field diff = uT;
    for (std::size_t j = 0; j < g.n(); ++j) diff.values[j] -= exact.values[j];
    return norm_l2(diff);
  };
  const double e128 = err_at(128);
  const double e256 = err_at(256);
  INFO("e128 " << e128 << " e256 " << e256);
  CHECK(e256 < e128 / 256.0);  // beats order 8 under one doubling
}

TEST_CASE("conserved quantities drift within tolerance on a short run") {
  const Grid g(512, 40.0);
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};
  SolverConfig sc;
  sc.dt = 2e-4;
  sc.t_end = 0.2;
  sc.record_every = 100;
  const Trajectory traj = evolve(soliton(g, 1.0), p, sc);
  const double i1_0 = traj.diagnostics.front().I1;
  const double i2_0 = *traj.diagnostics.front().I2;
  for (const auto& d : traj.diagnostics) {
    CHECK(std::abs(d.I1 - i1_0) / i1_0 <= 1e-10);
    CHECK(std::abs(*d.I2 - i2_0) / std::abs(i2_0) <= 1e-8);
  }
}

TEST_CASE("blow-up halts with the last valid frame") {
  const Grid g(128, 10.0);
  // absurdly large data and step force divergence
  const Field u0 = Field::sample(g, [](double x) -> cplx {
    return {1e6 * std::exp(-x * x), 0.0};
  });
  const EquationParams p{0.0, 1.0, 5.0, 5.0, 5.0};
  SolverConfig sc;
  sc.dt = 0.05;
  sc.t_end = 10.0;
  sc.record_every = 1;
  const Trajectory traj = evolve(u0, p, sc);
  CHECK(traj.blew_up);
  CHECK(traj.blow_up_time > 0.0);
  REQUIRE_FALSE(traj.frames.empty());
  for (const Field& f : traj.frames) CHECK(f.finite());
  REQUIRE_FALSE(traj.warnings.empty());

  SECTION("the state just before the failing step is recorded") {
    SolverConfig sparse = sc;
    sparse.record_every = 7;
    const Trajectory t2 = evolve(u0, p, sparse);
    REQUIRE(t2.blew_up);
    CHECK(t2.times.back() == Catch::Approx(t2.blow_up_time - sc.dt));
    CHECK(t2.frames.back().finite());
  }

  CHECK_THROWS_AS(step(traj.frames.back(), 0.0, 1e10, p), BlowUpError);
}

TEST_CASE("edge-mass warning fires when mass reaches the boundary") {
  const Grid g(128, 20.0);
  const EquationParams p{0.0, 1.0, 0.0, 0.5, 0.5};
  SolverConfig sc;
  sc.dt = 1e-3;
  sc.t_end = 0.01;
  sc.boundary_guard = 1e-12;
  // soliton parked near the box edge
  const Trajectory traj = evolve(soliton(g, 1.0, 8.5), p, sc);
  bool warned = false;
  for (const auto& w : traj.warnings)
    if (w.find("edge mass") != std::string::npos) warned = true;
  CHECK(warned);
}
