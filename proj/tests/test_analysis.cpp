/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <catch2/catch.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "gpcmix/analysis.hpp"
#include "gpcmix/repro.hpp"

using namespace gpcmix;

namespace {

std::shared_ptr<const MubFamily> family(int d) {
  static std::map<int, std::shared_ptr<const MubFamily>> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, std::make_shared<const MubFamily>(mub_family(d))).first;
  return it->second;
}

std::vector<double> random_semigroup_rates(std::mt19937& rng, int d, double hi = 2.5) {
  std::uniform_real_distribution<double> dist(0.0, hi);
  for (;;) {
    std::vector<double> c(d + 1);
    for (auto& x : c) x = dist(rng);
    double sum = std::accumulate(c.begin(), c.end(), 0.0);
    double mx = *std::max_element(c.begin(), c.end());
    if (sum >= d * mx) return c;
  }
}

}  // namespace

TEST_CASE("dephasing-set membership fixed cases") {
  DephasingMembership eq13 = in_dephasing_set(build_eq13_channel());
  CHECK_FALSE(eq13.member);
  CHECK(eq13.sup_sum == Approx(13.0 / 12.0).margin(1e-9));
  CHECK(eq13.sup_values[0] == Approx(0.5).margin(1e-12));
  CHECK(eq13.sup_values[1] == Approx(1.0 / 3.0).margin(1e-12));
  CHECK(eq13.sup_values[2] == Approx(0.25).margin(1e-12));

  std::vector<double> ones{1.0, 1.0, 1.0};
  DephasingMembership sg = in_dephasing_set(semigroup_from_rates(family(2), ones));
  CHECK(sg.member);
  CHECK(sg.sup_sum == Approx(0.75).margin(1e-12));

  TimeExpr pi_fn = TimeExpr::scaled(0.8, TimeExpr::constant(1.0) - TimeExpr::exp_decay(1.0));
  DephasingMembership deph = in_dephasing_set(dephasing_channel(family(2), 2, pi_fn));
  CHECK(deph.member);
}

TEST_CASE("decompose_dephasing fixed cases and reconstruction") {
  auto mub = family(2);
  std::vector<double> ones{1.0, 1.0, 1.0};
  GpcChannel sg = semigroup_from_rates(mub, ones);
  DephasingDecomposition dec = decompose_dephasing(sg);
  CHECK(dec.weights[0] == Approx(0.25).margin(1e-12));
  for (int a = 1; a <= 3; ++a) {
    CHECK(dec.weights[a] == Approx(0.25).margin(1e-12));
    REQUIRE(dec.pi[a]);
    // pi = p/m recovers 1 - e^{-t}
    CHECK(dec.pi[a]->eval(1.0) == Approx(1.0 - std::exp(-1.0)).margin(1e-9));
  }
  CHECK(channel_equal(reconstruct_dephasing_mix(dec, mub), sg, EqualMode::Grid));

  // identity: pure leftover weight
  std::vector<TimeExpr> idp(4, TimeExpr::constant(0.0));
  idp[0] = TimeExpr::constant(1.0);
  GpcChannel id = make_gpc_channel(mub, idp);
  DephasingDecomposition dec_id = decompose_dephasing(id);
  CHECK(dec_id.weights[0] == Approx(1.0));
  for (int a = 1; a <= 3; ++a) CHECK(dec_id.weights[a] == 0.0);

  CHECK_THROWS_AS(decompose_dephasing(build_eq13_channel()), NotDecomposable);
}

TEST_CASE("decompose_dephasing round trip over a corpus") {
  std::mt19937 rng(555);
  for (int d : {2, 3}) {
    auto mub = family(d);
    for (int trial = 0; trial < 10; ++trial) {
      GpcChannel sg = semigroup_from_rates(mub, random_semigroup_rates(rng, d));
      DephasingMembership mem = in_dephasing_set(sg);
      if (!mem.member) continue;  // qudit semigroups may sit outside
      DephasingDecomposition dec = decompose_dephasing(sg);
      CHECK(channel_equal(reconstruct_dephasing_mix(dec, mub), sg, EqualMode::Grid,
                          TimeGrid::standard(), 1e-9));
    }
  }
}

TEST_CASE("qubit semigroup dephasing split: fixed rates") {
  auto mub = family(2);

  std::vector<double> ones{1.0, 1.0, 1.0};
  DephasingDecomposition dec = decompose_qubit_semigroup(ones);
  CHECK(dec.weights[1] == 0.5);
  CHECK(dec.weights[2] == 0.25);
  CHECK(dec.weights[3] == 0.25);
  REQUIRE(dec.pi[1]);
  CHECK(dec.pi[1]->eval(1.0) == Approx(0.5 * (1.0 - std::exp(-1.0))).margin(1e-12));
  CHECK(dec.pi[2]->eval(1.0) == Approx(1.0 - std::exp(-1.0)).margin(1e-12));
  CHECK(channel_equal(reconstruct_dephasing_mix(dec, mub), semigroup_from_rates(mub, ones),
                      EqualMode::Symbolic));

  std::vector<double> zeros{0.0, 0.0, 0.0};
  DephasingDecomposition dec0 = decompose_qubit_semigroup(zeros);
  GpcChannel rebuilt = reconstruct_dephasing_mix(dec0, mub);
  std::vector<TimeExpr> idp(4, TimeExpr::constant(0.0));
  idp[0] = TimeExpr::constant(1.0);
  CHECK(channel_equal(rebuilt, make_gpc_channel(mub, idp), EqualMode::Grid));

  std::vector<double> c123{1.0, 2.0, 3.0};
  DephasingDecomposition dec123 = decompose_qubit_semigroup(c123);
  CHECK(channel_equal(reconstruct_dephasing_mix(dec123, mub), semigroup_from_rates(mub, c123),
                      EqualMode::Symbolic));
}

TEST_CASE("qubit semigroup dephasing split: random rates, arbitrary order") {
  std::mt19937 rng(808);
  auto mub = family(2);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> c = random_semigroup_rates(rng, 2);
    DephasingDecomposition dec = decompose_qubit_semigroup(c);
    std::vector<double> w = dec.weights;
    std::sort(w.begin(), w.end(), std::greater<>());
    CHECK(w[0] == 0.5);
    CHECK(w[1] == 0.25);
    CHECK(w[2] == 0.25);
    CHECK(channel_equal(reconstruct_dephasing_mix(dec, mub), semigroup_from_rates(mub, c),
                        EqualMode::Symbolic));
  }
}

TEST_CASE("semigroups outside the dephasing mixtures exist from d = 3 on") {
  DephasingGapWitness w = semigroup_outside_dephasing_witness(3);
  CHECK(w.c > 0.0);
  CHECK(w.c < 1.0);
  CHECK(w.sup_sum > 1.0 + 1e-9);
  CHECK(is_semigroup(w.channel).is_semigroup);
  CHECK_FALSE(in_dephasing_set(w.channel).member);

  // all-equal rates are not a witness: sup sum is (d+1)(d-1)/d^2 = 8/9
  std::vector<double> ones(4, 1.0);
  DephasingMembership all_one = in_dephasing_set(semigroup_from_rates(family(3), ones));
  CHECK(all_one.sup_sum == Approx(8.0 / 9.0).margin(1e-9));
  CHECK(all_one.member);

  // a small enough first rate certainly works: c = 0.05 is already outside
  std::vector<double> small_first{0.05, 1.0, 1.0, 1.0};
  DephasingMembership tiny = in_dephasing_set(semigroup_from_rates(family(3), small_first));
  CHECK(tiny.sup_sum > 1.0 + 1e-9);
  CHECK_FALSE(tiny.member);

  CHECK_THROWS_AS(semigroup_outside_dephasing_witness(2), DomainError);
}

TEST_CASE("semigroup_from_rates fixed values") {
  auto mub = family(2);
  std::vector<double> zeros{0.0, 0.0, 0.0};
  GpcChannel id = semigroup_from_rates(mub, zeros);
  for (double t : {0.0, 1.0, 5.0}) {
    CHECK(id.p[0].eval(t) == Approx(1.0).margin(1e-15));
    for (int a = 1; a <= 3; ++a) CHECK(id.p[a].eval(t) == Approx(0.0).margin(1e-15));
  }

  std::vector<double> ones{1.0, 1.0, 1.0};
  GpcChannel sg = semigroup_from_rates(mub, ones);
  for (int a = 1; a <= 3; ++a)
    CHECK(sg.p[a].eval(2.0) == Approx(0.25 * (1.0 - std::exp(-2.0))).margin(1e-15));
  Spectrum s = gpc_spectrum(sg);
  for (int a = 0; a < 3; ++a)
    CHECK(s.real_part[a].same_structure(TimeExpr::exp_decay(1.0)));  // exact symbolic form

  std::vector<double> bad{3.0, 0.1, 0.1};
  CHECK_THROWS_AS(semigroup_from_rates(mub, bad), RateInequalityViolated);
  try {
    semigroup_from_rates(mub, bad);
  } catch (const RateInequalityViolated& e) {
    CHECK(e.beta == 1);
  }
}

TEST_CASE("is_semigroup: detection round trip and violations") {
  auto mub2 = family(2);
  std::vector<double> ones{1.0, 1.0, 1.0};
  SemigroupVerdict v = is_semigroup(semigroup_from_rates(mub2, ones));
  CHECK(v.is_semigroup);
  for (double c : v.rates) CHECK(c == Approx(1.0).margin(1e-10));

  // qudit family with one small rate
  auto mub3 = family(3);
  std::vector<double> c_small{0.3, 1.0, 1.0, 1.0};
  SemigroupVerdict v3 = is_semigroup(semigroup_from_rates(mub3, c_small));
  CHECK(v3.is_semigroup);
  CHECK(v3.rates[0] == Approx(0.3).margin(1e-8));

  // prescribed spectra violating the rate inequality: not a semigroup
  std::vector<TimeExpr> lam{TimeExpr::exp_decay(3.0), TimeExpr::exp_decay(0.1),
                            TimeExpr::exp_decay(0.1)};
  GpcChannel forced = gpc_from_spectrum(mub2, lam);
  SemigroupVerdict vf = is_semigroup(forced);
  CHECK_FALSE(vf.is_semigroup);
  CHECK(vf.violated == SemigroupVerdict::Violation::RateInequality);

  // growing eigenvalue: negative rate
  std::vector<TimeExpr> grow{TimeExpr::constant(1.0), TimeExpr::constant(1.0),
                             TimeExpr::constant(1.0)};
  GpcChannel idch = gpc_from_spectrum(mub2, grow);
  CHECK(is_semigroup(idch).is_semigroup);  // identity: all rates zero
}

TEST_CASE("thm-1 style consistency: construct then detect") {
  std::mt19937 rng(91);
  for (int d : {2, 3, 5}) {
    auto mub = family(d);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c = random_semigroup_rates(rng, d);
      SemigroupVerdict v = is_semigroup(semigroup_from_rates(mub, c));
      REQUIRE(v.is_semigroup);
      for (int a = 0; a <= d; ++a) CHECK(std::abs(v.rates[a] - c[a]) <= 1e-8);
    }
  }
}

TEST_CASE("mixtures of distinct semigroups are never semigroups") {
  auto mub = family(2);
  std::vector<double> r1{1.0, 1.0, 1.0}, r2{2.0, 2.0, 2.0};
  GpcChannel a = semigroup_from_rates(mub, r1);
  GpcChannel b = semigroup_from_rates(mub, r2);

  std::vector<GpcChannel> chans{a, b};
  std::vector<double> w{0.5, 0.5};
  MixtureSemigroupResult res = semigroup_mixture_verdict(chans, w);
  CHECK(res.nontrivial);
  CHECK_FALSE(res.verdict.is_semigroup);
  CHECK(res.verdict.violated == SemigroupVerdict::Violation::ExpFit);
  CHECK(res.verdict.fit_residual > 1e-6);

  // trivial mixtures stay semigroups
  std::vector<GpcChannel> just_a{a};
  std::vector<double> w1{1.0};
  MixtureSemigroupResult triv = semigroup_mixture_verdict(just_a, w1);
  CHECK_FALSE(triv.nontrivial);
  CHECK(triv.verdict.is_semigroup);

  std::vector<GpcChannel> self{a, a};
  MixtureSemigroupResult self_mix = semigroup_mixture_verdict(self, w);
  CHECK_FALSE(self_mix.nontrivial);  // equal components: not a nontrivial mixture
  CHECK(self_mix.verdict.is_semigroup);
}

TEST_CASE("invertibility: weyl example channels") {
  WeylExample1 ex = build_weyl_example1();
  CHECK(invertibility(ex.p_channel).invertible);
  CHECK(invertibility(ex.q_channel).invertible);
  InvertibilityReport mixr = invertibility(ex.mixture);
  CHECK_FALSE(mixr.invertible);
  REQUIRE(mixr.first_zero);
  CHECK(std::abs(*mixr.first_zero - std::log(5.0)) <= 1e-6);
}

TEST_CASE("invertibility: gpc semigroup mixtures stay invertible") {
  auto mub = family(2);
  std::vector<double> r1{1.0, 1.5, 2.0}, r2{0.3, 0.3, 0.3};
  std::vector<GpcChannel> chans{semigroup_from_rates(mub, r1), semigroup_from_rates(mub, r2)};
  std::vector<double> w{0.35, 0.65};
  InvertibilityReport rep = invertibility(mix(chans, w));
  CHECK(rep.invertible);
  CHECK(rep.min_abs_value > 0.0);

  // the cosine channel has eigenvalue zeros inside [0, 2*pi]
  InvertibilityReport eq13 = invertibility(build_eq13_channel(), TimeGrid{2.0 * kPi, 1257});
  CHECK_FALSE(eq13.invertible);
  REQUIRE(eq13.first_zero);
  CHECK(*eq13.first_zero > 0.0);
  CHECK(*eq13.first_zero <= kPi + 1e-6);
  Spectrum s = gpc_spectrum(build_eq13_channel());
  double at_zero = 1e300;
  for (const auto& l : s.real_part) at_zero = std::min(at_zero, std::abs(l.eval(*eq13.first_zero)));
  CHECK(at_zero <= 1e-8);
}

TEST_CASE("random mixtures of invertible channels are invertible") {
  std::mt19937 rng(7453);
  std::uniform_real_distribution<double> wdist(0.05, 1.0);
  for (int d : {2, 3}) {
    auto mub = family(d);
    for (int trial = 0; trial < 20; ++trial) {
      int parts = 2 + static_cast<int>(rng() % 2);
      std::vector<GpcChannel> chans;
      std::vector<double> w;
      for (int k = 0; k < parts; ++k) {
        chans.push_back(semigroup_from_rates(mub, random_semigroup_rates(rng, d)));
        w.push_back(wdist(rng));
      }
      double sum = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& x : w) x /= sum;
      w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
      GpcChannel m = mix(chans, w);
      CHECK(invertibility(m).invertible);
    }
  }
}

TEST_CASE("decoherence rates: semigroups give constant profiles") {
  auto mub = family(2);
  std::vector<double> ones{1.0, 1.0, 1.0};
  RateProfile prof = decoherence_rates(semigroup_from_rates(mub, ones));
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < prof.times.size(); i += 100)
      CHECK(prof.gamma[a][i] == Approx(0.5).margin(1e-10));

  std::vector<double> c{0.8, 1.1, 1.7};
  RateProfile prof2 = decoherence_rates(semigroup_from_rates(mub, c));
  double csum = c[0] + c[1] + c[2];
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < prof2.times.size(); i += 157) {
      if (std::isnan(prof2.gamma[a][i])) continue;  // pole columns are reported, not compared
      CHECK(prof2.gamma[a][i] == Approx(csum / 2.0 - c[a]).margin(1e-8));
    }

  // identity channel: all rates vanish
  std::vector<TimeExpr> idp(4, TimeExpr::constant(0.0));
  idp[0] = TimeExpr::constant(1.0);
  RateProfile prof_id = decoherence_rates(make_gpc_channel(mub, idp));
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < prof_id.times.size(); i += 400)
      CHECK(prof_id.gamma[a][i] == Approx(0.0).margin(1e-12));
}

TEST_CASE("rate profiles satisfy the defining linear system") {
  auto mub = family(2);
  std::vector<double> r1{1.0, 1.0, 0.0}, r2{1.0, 0.0, 1.0};
  std::vector<GpcChannel> chans{semigroup_from_rates(mub, r1), semigroup_from_rates(mub, r2)};
  std::vector<double> w{0.5, 0.5};
  GpcChannel m = mix(chans, w);
  RateProfile prof = decoherence_rates(m);
  for (std::size_t i = 0; i < prof.times.size(); i += 37) {
    if (std::isnan(prof.gamma[0][i])) continue;
    double gsum = prof.gamma[0][i] + prof.gamma[1][i] + prof.gamma[2][i];
    for (int b = 0; b < 3; ++b)
      CHECK(gsum - prof.gamma[b][i] == Approx(prof.mu[b][i]).margin(1e-8));
  }
}

TEST_CASE("rate-negativity duality with the semigroup inequality") {
  // gamma_alpha = sum(c)/d - c_alpha for semigroups: all nonnegative exactly
  // when the rate inequality holds; tested on the fitted constants
  std::mt19937 rng(246);
  auto mub = family(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c = random_semigroup_rates(rng, 2);
    SemigroupVerdict v = is_semigroup(semigroup_from_rates(mub, c));
    REQUIRE(v.is_semigroup);
    double sum = std::accumulate(v.rates.begin(), v.rates.end(), 0.0);
    for (double ca : v.rates) CHECK(sum / 2.0 - ca >= -1e-10);
  }
}

TEST_CASE("p-divisibility: semigroup mixtures pass, contrived spectra fail") {
  std::mt19937 rng(1009);
  for (int d : {2, 3}) {
    auto mub = family(d);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<GpcChannel> chans{semigroup_from_rates(mub, random_semigroup_rates(rng, d)),
                                    semigroup_from_rates(mub, random_semigroup_rates(rng, d))};
      std::vector<double> w{0.4, 0.6};
      RateProfile prof = decoherence_rates(mix(chans, w));
      PDivisibilityResult res = p_divisibility_check(prof);
      CHECK(res.overall);
    }
  }

  // an eigenvalue that rises on an interval forces a negative rate sum
  auto mub = family(2);
  TimeExpr rising = TimeExpr::constant(1.0) -
                    TimeExpr::scaled(1.6, TimeExpr::exp_decay(1.0) - TimeExpr::exp_decay(2.0));
  std::vector<TimeExpr> lam{rising, TimeExpr::exp_decay(1.0), TimeExpr::exp_decay(1.0)};
  GpcChannel contrived = gpc_from_spectrum(mub, lam);
  PDivisibilityResult res = p_divisibility_check(decoherence_rates(contrived));
  CHECK_FALSE(res.overall);
  CHECK_FALSE(res.per_beta[0]);  // the rising eigenvalue's own rate sum dips
}

TEST_CASE("permanently negative rates: semigroups none, eternal-style mixture one") {
  auto mub = family(2);
  std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(permanently_negative_count(decoherence_rates(semigroup_from_rates(mub, ones))) == 0);

  std::vector<double> r1{1.0, 1.0, 0.0}, r2{1.0, 0.0, 1.0};
  std::vector<GpcChannel> chans{semigroup_from_rates(mub, r1), semigroup_from_rates(mub, r2)};
  std::vector<double> w{0.5, 0.5};
  GpcChannel eternal = mix(chans, w);
  RateProfile prof = decoherence_rates(eternal);
  CHECK(permanently_negative_count(prof) == 1);  // saturates the d-1 bound

  // the negative one is the slot whose eigenvalue is the pure exponential
  for (std::size_t i = 1; i < prof.times.size(); i += 97)
    CHECK(prof.gamma[0][i] < 0.0);
}

TEST_CASE("permanently negative count never exceeds d-1 over a corpus") {
  std::mt19937 rng(3141);
  std::uniform_real_distribution<double> wdist(0.1, 1.0);
  for (int d : {2, 3}) {
    auto mub = family(d);
    for (int trial = 0; trial < 10; ++trial) {
      int parts = 2 + static_cast<int>(rng() % 2);
      std::vector<GpcChannel> chans;
      std::vector<double> w;
      for (int k = 0; k < parts; ++k) {
        chans.push_back(semigroup_from_rates(mub, random_semigroup_rates(rng, d)));
        w.push_back(wdist(rng));
      }
      double sum = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& x : w) x /= sum;
      w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
      RateProfile prof = decoherence_rates(mix(chans, w));
      CHECK(permanently_negative_count(prof) <= d - 1);
    }
  }
}

TEST_CASE("splitting a semigroup into invertible channels") {
  SemigroupSplit s2 = split_semigroup_invertible(2, 2);
  REQUIRE(s2.components.size() == 2);
  CHECK(s2.weights == std::vector<double>{0.5, 0.5});
  Spectrum first = gpc_spectrum(s2.components[0]);
  Spectrum second = gpc_spectrum(s2.components[1]);
  for (double t : {0.3, 1.0, 2.7}) {
    double u = std::exp(-t);
    CHECK(first.real_part[0].eval(t) == Approx(1.0 - (1.0 - u) * (1.0 - u)).margin(1e-12));
    CHECK(second.real_part[0].eval(t) == Approx(std::exp(-2.0 * t)).margin(1e-12));
  }
  CHECK(channel_equal(mix(s2.components, s2.weights), s2.base, EqualMode::Symbolic));

  SemigroupSplit s3 = split_semigroup_invertible(2, 3);
  CHECK(s3.weights == std::vector<double>{0.5, 0.25, 0.25});
  Spectrum third = gpc_spectrum(s3.components[2]);
  CHECK(third.real_part[0].same_structure(TimeExpr::exp_decay(4.0)));
  CHECK(channel_equal(mix(s3.components, s3.weights), s3.base, EqualMode::Symbolic));

  for (int n : {2, 3, 4}) {
    for (int d : {2, 3}) {
      SemigroupSplit s = split_semigroup_invertible(d, n);
      int semis = 0;
      for (const auto& comp : s.components) {
        CHECK(invertibility(comp).invertible);
        if (is_semigroup(comp).is_semigroup) ++semis;
      }
      CHECK(semis == 1);
      CHECK(channel_equal(mix(s.components, s.weights), s.base, EqualMode::Symbolic));
    }
  }
}
