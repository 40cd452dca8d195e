#include <catch2/catch_amalgamated.hpp>

#include "hnls/lemma.hpp"
#include "test_helpers.hpp"

using namespace hnls;

namespace {

const Grid& family_grid() {
  static const Grid g(2048, 8.0);
  return g;
}

std::vector<double> theta_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(0.1 * i);
  return out;
}

}  // namespace

TEST_CASE("witness validation") {
  LemmaWitness w;
  CHECK_NOTHROW(w.validate());
  w.C0 = 0.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w = LemmaWitness{};
  w.gamma1 = 1.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w = LemmaWitness{};
  w.s = 0.5;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("lemma constants") {
  SECTION("worked example at theta = 1/2") {
    LemmaWitness w;
    w.C0 = 1.0;
    w.C0t = 1.0;
    w.C1t = 0.0;
    w.Theta = 4.0;
    w.R = 1.0;
    w.gamma2 = 0.5;
    const LemmaConstants lc = lemma_constants(w, 0.5);
    CHECK(lc.rho == Catch::Approx(1.0));
    CHECK(lc.K0 == Catch::Approx(1.0));
    CHECK(lc.K1 == Catch::Approx(2.0));
    CHECK(lc.K2 == 0.0);
  }

  SECTION("endpoints are rejected") {
    CHECK_THROWS_AS(lemma_constants(LemmaWitness{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma_constants(LemmaWitness{}, 1.0), std::invalid_argument);
  }

  SECTION("C1t = 0 forces K2 = 0 for every theta") {
    LemmaWitness w;
    w.C1t = 0.0;
    for (double th : theta_grid()) CHECK(lemma_constants(w, th).K2 == 0.0);
  }

  SECTION("K-formula identities on a theta grid") {
    LemmaWitness w;
    w.R = 1.7;
    for (double th : theta_grid()) {
      const LemmaConstants lc = lemma_constants(w, th);
      CHECK(std::abs((lc.rho + 1.0) - 1.0 / th) <= 1e-12 / th);
      CHECK(std::abs(1.0 / lc.rho - th / (1.0 - th)) <= 1e-12);
      const double lhs = std::pow(w.R, 2.0 * th * lc.rho);
      const double rhs = std::pow(w.R, 2.0 * (1.0 - th));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
      // proof-step exponent: (2/theta) - 2 = 2 rho
      CHECK(std::abs((2.0 / th - 2.0) - 2.0 * lc.rho) <= 1e-12 * (1.0 + 2.0 * lc.rho));
    }
  }
}

TEST_CASE("taper width solver") {
  // closed form for R0 = 1: b(theta) = (1 + 1/(2(T+1)^2))^{1/(2 theta + 1)} - 1,
  // minimized at theta = 1
  for (double T : {0.0, 1.0, 2.5}) {
    const double expect = std::cbrt(1.0 + 0.5 / ((T + 1.0) * (T + 1.0))) - 1.0;
    CHECK(std::abs(find_taper_width(1.0, T) - expect) < 1e-6);
  }
  CHECK(find_taper_width(1.0, 0.0) == Catch::Approx(std::cbrt(1.5) - 1.0).margin(1e-6));
}

TEST_CASE("plateau family passes its own conditions") {
  const auto built = build_example_family(family_grid(), 1.0, 1.0, 1.0, 21);
  CHECK(built.witness.C0 == Catch::Approx(4.0));
  CHECK(built.witness.Theta == Catch::Approx(1.0));
  CHECK(built.witness.R == Catch::Approx(1.0 + built.taper_width));
  REQUIRE(built.member.frames.size() == 21);
  REQUIRE(built.member.times[10] == Catch::Approx(0.0).margin(1e-15));

  const ConditionReport rep = check_conditions(built.member, built.witness, theta_grid());
  CHECK(rep.overall_pass);

  SECTION("condition (iv) has a null left-hand side") {
    for (const auto& e : rep.entries)
      if (e.condition == "initial_tail") CHECK(e.lhs == 0.0);
  }

  SECTION("interpolation inequality holds with corrected slack >= 0") {
    for (double th : theta_grid()) {
      const InequalityReport ineq =
          verify_inequality(built.member, built.witness, th, rep);
      CHECK(ineq.pass);
      for (const auto& s : ineq.slacks) CHECK(s.slack_corrected >= 0.0);
    }
  }

  SECTION("constant-in-time member: RHS varies only through the H^s factor") {
    FamilyMember constant{built.member.times, {}, built.member.initial};
    for (std::size_t i = 0; i < built.member.times.size(); ++i)
      constant.frames.push_back(built.member.initial);
    const ConditionReport crep = check_conditions(constant, built.witness, {0.5});
    REQUIRE(crep.overall_pass);
    const InequalityReport ineq = verify_inequality(constant, built.witness, 0.5, crep);
    for (const auto& s : ineq.slacks) {
      CHECK(s.rhs_literal == Catch::Approx(ineq.slacks[0].rhs_literal));
      CHECK(s.slack_corrected == Catch::Approx(ineq.slacks[0].slack_corrected));
    }
  }

  SECTION("proof step 1: I2 < I1 strictly on the super-level set") {
    for (const Field& f : built.member.frames) {
      for (double th : {0.3, 0.7}) {
        double i1 = 0.0, i2 = 0.0, measure = 0.0;
        const auto& x = f.grid.x();
        for (std::size_t j = 0; j < f.values.size(); ++j) {
          const double q = std::norm(f.values[j]);
          if (q > built.witness.Theta) {
            const double w = std::pow(std::abs(x[j]), 2.0 * th);
            i1 += w * q;
            i2 += w * built.witness.Theta;
            measure += w;
          }
        }
        if (measure > 0.0) CHECK(i2 < i1);
      }
    }
  }
}

TEST_CASE("condition failures are detected") {
  const auto built = build_example_family(family_grid(), 1.0, 1.0, 1.0, 5);

  SECTION("zero member fails condition (i)") {
    FamilyMember zero{{0.0}, {Field(family_grid())}, Field(family_grid())};
    const ConditionReport rep = check_conditions(zero, built.witness, {0.5});
    CHECK_FALSE(rep.overall_pass);
    bool found = false;
    for (const auto& e : rep.entries)
      if (e.condition == "support" && !e.pass) found = true;
    CHECK(found);
  }

  SECTION("overscaled frame fails the L2 growth bound with negative slack") {
    FamilyMember bad = built.member;
    const double T = built.witness.T;
    for (cplx& z : bad.frames[2].values) z *= 2.0 * (1.0 + T) / (1.0 + std::abs(bad.times[2]));
    const ConditionReport rep = check_conditions(bad, built.witness, {0.5});
    CHECK_FALSE(rep.overall_pass);
    bool negative_slack = false;
    for (const auto& e : rep.entries)
      if (e.condition == "l2_growth" && !e.pass && e.slack < 0.0) negative_slack = true;
    CHECK(negative_slack);
  }

  SECTION("verify_inequality rejects a failed report") {
    FamilyMember zero{{0.0}, {Field(family_grid())}, Field(family_grid())};
    const ConditionReport rep = check_conditions(zero, built.witness, {0.5});
    CHECK_THROWS_AS(verify_inequality(zero, built.witness, 0.5, rep),
                    std::invalid_argument);
  }

  SECTION("empty member is rejected") {
    FamilyMember empty{{}, {}, Field(family_grid())};
    CHECK_THROWS_AS(check_conditions(empty, built.witness, {0.5}),
                    std::invalid_argument);
  }
}

TEST_CASE("witness estimation") {
  const Grid g(512, 40.0);

  SECTION("constant frames give the pure headroom constants") {
    const Field f = Field::sample(g, [](double x) -> cplx {
      return {std::exp(-0.5 * x * x), 0.0};
    });
    FamilyMember member{{-1.0, 0.0, 1.0}, {f, f, f}, f};
    const LemmaWitness w = estimate_witness(member, {0.25, 0.5});
    CHECK(w.C0 == Catch::Approx(1.1));
    CHECK(w.C0t == Catch::Approx(1.1));
    CHECK(w.C1t == 0.0);
    const ConditionReport rep = check_conditions(member, w, {0.25, 0.5});
    CHECK(rep.overall_pass);
  }

  SECTION("plateau family slices recover Theta near A^2 and R within R0+b") {
    const auto built = build_example_family(family_grid(), 1.0, 1.0, 1.0, 9);
    const LemmaWitness w = estimate_witness(built.member, theta_grid());
    CHECK(w.Theta >= 0.5);
    CHECK(w.Theta <= 2.0);
    CHECK(w.R <= 1.0 + built.taper_width + family_grid().dx());
  }

  SECTION("compactly supported initial slice bounds R by the support radius") {
    const Field f = Field::sample(g, [](double x) -> cplx {
      return std::abs(x) <= 3.0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    });
    FamilyMember member{{0.0}, {f}, f};
    const LemmaWitness w = estimate_witness(member, {0.5});
    CHECK(w.R <= 3.0 + g.dx());
  }

  SECTION("zero frames are rejected naming condition (i)") {
    FamilyMember zero{{0.0}, {Field(g)}, Field(g)};
    CHECK_THROWS_WITH(estimate_witness(zero, {0.5}),
                      Catch::Matchers::ContainsSubstring("(i)"));
  }
}
