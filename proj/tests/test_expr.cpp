/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "gpcmix/expr.hpp"

using namespace gpcmix;

namespace {

// random expression trees over the full grammar, for property tests
TimeExpr random_expr(std::mt19937& rng, int depth) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> rate(0.05, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 6);
  switch (pick(rng)) {
    case 0:
      return TimeExpr::constant(coeff(rng));
    case 1:
      return TimeExpr::exp_decay(rate(rng));
    case 2:
      return TimeExpr::cosine(rate(rng), phase(rng));
    case 3:
      return TimeExpr::scaled(coeff(rng), TimeExpr::exp_decay(rate(rng)));
    case 4: {
      std::vector<TimeExpr> kids;
      for (int i = 0; i < 2 + static_cast<int>(rng() % 2); ++i)
        kids.push_back(random_expr(rng, depth - 1));
      return TimeExpr::sum(std::move(kids));
    }
    case 5: {
      std::vector<TimeExpr> kids;
      for (int i = 0; i < 2; ++i) kids.push_back(random_expr(rng, depth - 1));
      return TimeExpr::product(std::move(kids));
    }
    default:
      return TimeExpr::scaled(coeff(rng), random_expr(rng, depth - 1));
  }
}

double central_difference(const TimeExpr& e, double t, double h) {
  return (e.eval(t + h) - e.eval(t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("parsing the cosine channel component") {
  TimeExpr e = parse_expr("(cos(1*t+pi)+1)*0.25");
  CHECK(e.eval(0.0) == Approx(0.0).margin(1e-15));
  CHECK(e.eval(kPi) == Approx(0.5));
  // canonical form: 0.25 + 0.25 cos(t+pi)
  auto ms = e.monomials();
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].is_const());
  CHECK(ms[0].coeff == Approx(0.25));
  REQUIRE(ms[1].cosines.size() == 1);
  CHECK(ms[1].cosines[0].first == 1.0);
  CHECK(ms[1].cosines[0].second == Approx(kPi));
}

TEST_CASE("parsing scaled exponential complements") {
  TimeExpr e = parse_expr("0.25*(1-exp(-1*t))");
  CHECK(e.eval(0.0) == Approx(0.0).margin(1e-15));
  CHECK(e.eval(50.0) == Approx(0.25).epsilon(1e-12));
  auto ms = e.monomials();
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].coeff == 0.25);
  CHECK(ms[1].exp_rate == 1.0);
  CHECK(ms[1].coeff == -0.25);
}

TEST_CASE("exp with a growing argument is rejected") {
  CHECK_THROWS_AS(parse_expr("exp(t)"), DomainError);
  CHECK_THROWS_AS(parse_expr("exp(2*t)"), DomainError);
  CHECK_NOTHROW(parse_expr("exp(-t)"));
  CHECK_NOTHROW(parse_expr("exp(-0.5*t)"));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse_expr("1 + @");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse_expr("cos(exp(-t))"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(1+2"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("foo"), SyntaxError);
  CHECK_THROWS_AS(parse_expr(""), SyntaxError);
}

TEST_CASE("evaluation basics") {
  CHECK(TimeExpr::constant(1.0).eval(17.3) == 1.0);
  CHECK(TimeExpr::exp_decay(1.0).eval(0.0) == 1.0);
  CHECK(TimeExpr::var().eval(2.5) == 2.5);
  CHECK_THROWS_AS(TimeExpr::var().eval(-1.0), DomainError);
}

TEST_CASE("derivatives of the basic families") {
  // d/dt exp(-c t) = -c exp(-c t)
  TimeExpr de = differentiate(TimeExpr::exp_decay(2.0));
  CHECK(de.eval(0.7) == Approx(-2.0 * std::exp(-1.4)));

  // d/dt cos(a t + b) = -a sin(a t + b)
  TimeExpr dc = differentiate(TimeExpr::cosine(3.0, 0.4));
  CHECK(dc.eval(1.1) == Approx(-3.0 * std::sin(3.0 * 1.1 + 0.4)));

  // sum rule on 1 - e^{-t} gives back e^{-t}
  TimeExpr s = parse_expr("1-exp(-1*t)");
  TimeExpr ds = differentiate(s);
  CHECK(ds.same_structure(TimeExpr::exp_decay(1.0)));
}

TEST_CASE("derivative matches central differences on random trees") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> tdist(1e-4, 10.0);
  int trees = 1000;
  for (int n = 0; n < trees; ++n) {
    TimeExpr e = random_expr(rng, 3);
    TimeExpr de = differentiate(e);
    for (int k = 0; k < 100; ++k) {
      double t = tdist(rng);
      double got = de.eval(t);
      double want = central_difference(e, t, 1e-5);
      CHECK(std::abs(got - want) <= 1e-5 * (1.0 + std::abs(want)));
      if (std::abs(got - want) > 1e-5 * (1.0 + std::abs(want))) return;  // stop the flood
    }
  }
}

TEST_CASE("print/parse round trip reproduces the normalized tree") {
  std::mt19937 rng(77);
  for (int n = 0; n < 500; ++n) {
    TimeExpr e = random_expr(rng, 3);
    TimeExpr norm = e.normalized();
    TimeExpr round = parse_expr(e.to_string());
    CHECK(round.same_structure(norm));
    if (!round.same_structure(norm)) {
      INFO(e.to_string());
      return;
    }
  }
}

TEST_CASE("normalization merges like terms and is idempotent") {
  // 2 e^{-t} - e^{-t} collapses to e^{-t}
  TimeExpr e = TimeExpr::scaled(2.0, TimeExpr::exp_decay(1.0)) - TimeExpr::exp_decay(1.0);
  CHECK(e.normalized().same_structure(TimeExpr::exp_decay(1.0)));

  // products of exponentials merge rates
  TimeExpr p = TimeExpr::exp_decay(1.0) * TimeExpr::exp_decay(1.0);
  CHECK(p.normalized().same_structure(TimeExpr::exp_decay(2.0)));

  std::mt19937 rng(7);
  for (int n = 0; n < 200; ++n) {
    TimeExpr e2 = random_expr(rng, 3);
    TimeExpr n1 = e2.normalized();
    CHECK(n1.normalized().same_structure(n1));
  }
}

TEST_CASE("normalized structural equality implies pointwise equality") {
  // (1-e^{-t})(1+e^{-t}) and 1-e^{-2t} normalize to the same tree
  TimeExpr one = TimeExpr::constant(1.0);
  TimeExpr u = TimeExpr::exp_decay(1.0);
  TimeExpr a = (one - u) * (one + u);
  TimeExpr b = one - TimeExpr::exp_decay(2.0);
  CHECK(a.normalized().same_structure(b.normalized()));
  for (double t : {0.0, 0.3, 1.7, 9.0}) CHECK(a.eval(t) == Approx(b.eval(t)));
}

TEST_CASE("supremum: constant plus single cosine is exact") {
  TimeExpr p1 = parse_expr("(cos(1*t+pi)+1)*0.25");
  SupEstimate s = supremum(p1);
  CHECK(s.kind == SupKind::ExactAnalytic);
  CHECK(s.value == Approx(0.5));
  CHECK(s.witness_t == Approx(kPi));
}

TEST_CASE("supremum: monotone exponential families are exact") {
  SupEstimate rising = supremum(parse_expr("0.25*(1-exp(-1*t))"));
  CHECK(rising.kind == SupKind::ExactAnalytic);
  CHECK(rising.value == Approx(0.25));
  CHECK(std::isinf(rising.witness_t));

  SupEstimate falling = supremum(parse_expr("0.25+0.5*exp(-2*t)"));
  CHECK(falling.kind == SupKind::ExactAnalytic);
  CHECK(falling.value == Approx(0.75));
  CHECK(falling.witness_t == 0.0);

  SupEstimate zero = supremum(TimeExpr::constant(0.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.kind == SupKind::ExactAnalytic);
}

TEST_CASE("supremum: mixed-sign exponentials fall back to the grid with a tail bound") {
  // 1 + 2 e^{-0.05 t} - 3 e^{-t}: interior maximum, mixed signs
  TimeExpr e = parse_expr("1 + 2*exp(-0.05*t) - 3*exp(-1*t)");
  SupEstimate s = supremum(e);
  CHECK(s.kind == SupKind::GridWithTailBound);
  CHECK_FALSE(s.unbounded_warning);
  // independent dense-grid oracle
  double dense = -1e300;
  for (int i = 0; i <= 10000; ++i) {
    double t = 50.0 * i / 10000.0;
    dense = std::max(dense, e.eval(t));
  }
  CHECK(s.value >= dense - 1e-12);
  CHECK(s.value <= dense + 1e-3);  // refinement keeps the bound tight
}

TEST_CASE("supremum warns when values still grow at the end of the grid") {
  SupEstimate s = supremum(TimeExpr::var());  // unbounded
  CHECK(s.kind == SupKind::GridWithTailBound);
  CHECK(s.unbounded_warning);
}

TEST_CASE("supremum dominates a dense grid for probability-like components") {
  std::vector<TimeExpr> components;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    double amp = 1.0 / (2.0 * (alpha + 1));
    components.push_back(TimeExpr::scaled(
        amp, TimeExpr::cosine(alpha, kPi) + TimeExpr::constant(1.0)));
  }
  components.push_back(parse_expr("0.25*(1-exp(-1*t))"));
  components.push_back(parse_expr("0.25*(1+2*exp(-0.5*t)-3*exp(-1*t))"));
  components.push_back(parse_expr("0.1*(1-exp(-2*t))*(1-exp(-2*t))"));
  for (const auto& e : components) {
    SupEstimate s = supremum(e);
    double dense = -1e300;
    for (int i = 0; i <= 10000; ++i) dense = std::max(dense, e.eval(50.0 * i / 10000.0));
    CHECK(s.value >= dense - 1e-12);
  }
}

TEST_CASE("derivative stays inside the language") {
  std::mt19937 rng(99);
  for (int n = 0; n < 100; ++n) {
    TimeExpr e = random_expr(rng, 3);
    TimeExpr d2 = differentiate(differentiate(e));  // closure under repeated use
    CHECK_NOTHROW(d2.eval(1.0));
  }
}
