/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Canned channel builders and the named reproduction scenarios driven by the
// CLI. Each scenario writes its data files plus a summary JSON whose anchors
// are asserted facts; a scenario passes only if every anchor holds.

#ifndef GPCMIX_REPRO_HPP
#define GPCMIX_REPRO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "gpcmix/chanspec.hpp"

namespace gpcmix {

// ---------------------------------------------------------------------------
// canned channels
// ---------------------------------------------------------------------------

// Qubit channel with cosine probabilities p_alpha = (cos(alpha t + pi) + 1) /
// (2 (alpha + 1)), alpha = 1..3, p_0 the complement. A legitimate Pauli
// channel whose probability suprema sum to 13/12, so it is not a mixture of
// dephasing channels.
inline GpcChannel build_eq13_channel() {
  auto mub = std::make_shared<const MubFamily>(mub_family(2));
  std::vector<TimeExpr> p(4, TimeExpr::constant(0.0));
  for (int alpha = 1; alpha <= 3; ++alpha) {
    double amp = 1.0 / (2.0 * (alpha + 1));
    p[alpha] = TimeExpr::scaled(
        amp, TimeExpr::cosine(alpha, kPi) + TimeExpr::constant(1.0)).normalized();
  }
  p[0] = (TimeExpr::constant(1.0) - p[1] - p[2] - p[3]).normalized();
  return make_gpc_channel(std::move(mub), std::move(p));
}

struct WeylExample1 {
  WeylChannel p_channel;   // p_ij(t) = f_i(t) f_j(t)
  WeylChannel q_channel;   // q_ij(t) = g_i(t) f_j(t)
  WeylChannel mixture;     // equal-weight mixture; loses invertibility at log 5
};

// d = 3 product-form Weyl channels: f = (1 - f1 - f2, (1-e^-t)/2, (1-e^-t)/3)
// and g the same pair swapped. Both channels are invertible; their
// equal-weight mixture has eigenvalue factor (5 e^-t - 1)/4 vanishing at log 5.
inline WeylExample1 build_weyl_example1() {
  const int d = 3;
  auto ws = std::make_shared<const WeylSet>(weyl_set(d));
  TimeExpr one = TimeExpr::constant(1.0);
  TimeExpr f1 = TimeExpr::scaled(0.5, one - TimeExpr::exp_decay(1.0)).normalized();
  TimeExpr f2 = TimeExpr::scaled(1.0 / 3.0, one - TimeExpr::exp_decay(1.0)).normalized();
  TimeExpr f0 = (one - f1 - f2).normalized();
  std::vector<TimeExpr> f{f0, f1, f2};
  std::vector<TimeExpr> g{f0, f2, f1};  // swapped pair

  auto product_channel = [&](const std::vector<TimeExpr>& row_factor) {
    std::vector<TimeExpr> p;
    p.reserve(9);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) p.push_back((row_factor[i] * f[j]).normalized());
    return make_weyl_channel(ws, std::move(p));
  };

  WeylExample1 out{product_channel(f), product_channel(g), {}};
  std::vector<WeylChannel> parts{out.p_channel, out.q_channel};
  std::vector<double> w{0.5, 0.5};
  out.mixture = mix(parts, w);
  return out;
}

// ---------------------------------------------------------------------------
// check dispatcher (shared by CLI `check` and the tests)
// ---------------------------------------------------------------------------

inline json run_check(const AnyChannel& ch, const std::string& which, const TimeGrid& grid) {
  json out{{"schema_version", kSchemaVersion}, {"check", which}};
  if (which == "cp") {
    if (std::holds_alternative<GpcChannel>(ch)) {
      const auto& g = std::get<GpcChannel>(ch);
      CpVerdict fa = fa_cp_check(gpc_spectrum(g), grid);
      CpVerdict choi = choi_cp_oracle(g, grid);
      out["fa"] = to_json(fa);
      out["choi"] = to_json(choi);
      out["agree"] = fa.cp == choi.cp;
      out["cp"] = fa.cp;
    } else {
      CpVerdict choi = choi_cp_oracle(std::get<WeylChannel>(ch), grid);
      out["choi"] = to_json(choi);
      out["cp"] = choi.cp;
    }
    return out;
  }
  if (which == "invertible") {
    InvertibilityReport rep = std::holds_alternative<GpcChannel>(ch)
                                  ? invertibility(std::get<GpcChannel>(ch), grid)
                                  : invertibility(std::get<WeylChannel>(ch), grid);
    out.update(to_json(rep));
    return out;
  }
  if (!std::holds_alternative<GpcChannel>(ch))
    throw Error("check '" + which + "' applies to generalized Pauli channels only");
  const auto& g = std::get<GpcChannel>(ch);
  if (which == "semigroup") {
    out.update(to_json(is_semigroup(g, grid)));
  } else if (which == "dephasing-set") {
    out.update(to_json(in_dephasing_set(g)));
  } else if (which == "rates") {
    out.update(to_json(decoherence_rates(g, grid)));
  } else if (which == "p-divisible") {
    RateProfile prof = decoherence_rates(g, grid);
    PDivisibilityResult res = p_divisibility_check(prof);
    out["per_beta"] = json(res.per_beta);
    out["p_divisible"] = res.overall;
    out["pole_times"] = prof.pole_times;
  } else if (which == "neg-count") {
    RateProfile prof = decoherence_rates(g, grid);
    out["permanently_negative"] = permanently_negative_count(prof);
    out["bound"] = g.d() - 1;
  } else {
    throw Error("unknown check '" + which + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// reproduction scenarios
// ---------------------------------------------------------------------------

struct ReproResult {
  json summary;
  bool pass = true;
};

namespace detail {

struct AnchorList {
  json anchors = json::array();
  bool pass = true;
  void check(const std::string& name, bool ok, const json& detail = {}) {
    json a{{"name", name}, {"pass", ok}};
    if (!detail.is_null() && !detail.empty()) a["detail"] = detail;
    anchors.push_back(std::move(a));
    pass = pass && ok;
  }
};

inline ReproResult finish(const std::string& name, const std::string& outdir, AnchorList& a,
                          json extra = json::object()) {
  ReproResult r;
  r.summary = json{{"schema_version", kSchemaVersion},
                   {"repro", name},
                   {"anchors", std::move(a.anchors)},
                   {"pass", a.pass}};
  r.summary.update(extra);
  r.pass = a.pass;
  write_json_file(outdir + "/" + name + "_summary.json", r.summary);
  return r;
}

}  // namespace detail

// probability curves of the cosine qubit channel on [0, 2*pi]
inline ReproResult repro_fig1(const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  GpcChannel ch = build_eq13_channel();
  TimeGrid grid{2.0 * kPi, 629};

  std::ostringstream csv;
  csv << "t,p_0,p_1,p_2,p_3\n";
  double peak = 0.0, peak_t = 0.0, min_p = 1.0, sum_err = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    csv << format_double(t);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      double v = ch.p[a].eval(t);
      csv << "," << format_double(v);
      s += v;
      min_p = std::min(min_p, v);
      if (a == 1 && v > peak) {
        peak = v;
        peak_t = t;
      }
    }
    sum_err = std::max(sum_err, std::abs(s - 1.0));
    csv << "\n";
  }
  write_text_file(outdir + "/fig1_probabilities.csv", csv.str());

  detail::AnchorList a;
  a.check("p1_peak_half", std::abs(peak - 0.5) <= 1e-9,
          json{{"peak", peak}, {"t", peak_t}});
  a.check("p1_peak_at_pi", std::abs(peak_t - kPi) <= grid.t_max / (grid.points - 1),
          json{{"t", peak_t}});
  a.check("probabilities_sum_to_one", sum_err <= 1e-9, json{{"max_deviation", sum_err}});
  a.check("probabilities_nonnegative", min_p >= -1e-12, json{{"min", min_p}});
  return detail::finish("fig1", outdir, a);
}

inline ReproResult repro_eq13_membership(const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  GpcChannel ch = build_eq13_channel();
  DephasingMembership mem = in_dephasing_set(ch);
  write_json_file(outdir + "/eq13_membership.json", to_json(mem));

  detail::AnchorList a;
  a.check("sup_sum_is_13_over_12", std::abs(mem.sup_sum - 13.0 / 12.0) <= 1e-9,
          json{{"sup_sum", mem.sup_sum}});
  a.check("not_a_dephasing_mixture", !mem.member);
  return detail::finish("eq13-membership", outdir, a, json{{"sup_sum", mem.sup_sum}});
}

inline ReproResult repro_example1(const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  WeylExample1 ex = build_weyl_example1();
  TimeGrid grid = TimeGrid::standard();

  InvertibilityReport rp = invertibility(ex.p_channel, grid);
  InvertibilityReport rq = invertibility(ex.q_channel, grid);
  InvertibilityReport r_mix = invertibility(ex.mixture, grid);
  write_json_file(outdir + "/example1_p_invertibility.json", to_json(rp));
  write_json_file(outdir + "/example1_q_invertibility.json", to_json(rq));
  write_json_file(outdir + "/example1_mix_invertibility.json", to_json(r_mix));

  // minimum eigenvalue magnitude over the grid, per channel
  Spectrum sp = weyl_spectrum(ex.p_channel), sq = weyl_spectrum(ex.q_channel),
           sm = weyl_spectrum(ex.mixture);
  std::ostringstream csv;
  csv << "t,min_abs_lambda_p,min_abs_lambda_q,min_abs_lambda_mix\n";
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    auto min_abs = [&](const Spectrum& s) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s.real_part.size(); ++k) {
        double re = s.real_part[k].eval(t), im = s.imag_part[k].eval(t);
        mn = std::min(mn, std::sqrt(re * re + im * im));
      }
      return mn;
    };
    csv << format_double(t) << "," << format_double(min_abs(sp)) << ","
        << format_double(min_abs(sq)) << "," << format_double(min_abs(sm)) << "\n";
  }
  write_text_file(outdir + "/example1_eigenvalue_magnitudes.csv", csv.str());

  const double log5 = std::log(5.0);
  CpVerdict cp_at_zero = choi_cp_oracle(ex.mixture, TimeGrid{log5, 2});

  detail::AnchorList a;
  a.check("component_p_invertible", rp.invertible);
  a.check("component_q_invertible", rq.invertible);
  a.check("mixture_not_invertible", !r_mix.invertible);
  a.check("first_zero_is_log5",
          r_mix.first_zero && std::abs(*r_mix.first_zero - log5) <= 1e-6,
          json{{"first_zero", r_mix.first_zero ? json(*r_mix.first_zero) : json()},
               {"log5", log5}});
  a.check("mixture_cp_at_log5", cp_at_zero.cp);
  return detail::finish("example1", outdir, a);
}

inline ReproResult repro_prop4_qubit(const std::string& outdir, std::vector<double> rates) {
  std::filesystem::create_directories(outdir);
  if (rates.empty()) rates = {1.0, 2.0, 3.0};
  auto mub = std::make_shared<const MubFamily>(mub_family(2));
  GpcChannel sg = semigroup_from_rates(mub, rates);
  DephasingDecomposition dec = decompose_qubit_semigroup(rates);
  GpcChannel rebuilt = reconstruct_dephasing_mix(dec, mub);
  bool exact = channel_equal(sg, rebuilt, EqualMode::Symbolic);

  json out = to_json(dec);
  out["schema_version"] = kSchemaVersion;
  out["rates"] = rates;
  out["reconstruction_symbolic"] = exact;
  write_json_file(outdir + "/prop4_qubit_decomposition.json", out);

  std::vector<double> sorted = dec.weights;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  detail::AnchorList a;
  a.check("weights_are_half_quarter_quarter",
          sorted.size() == 4 && sorted[0] == 0.5 && sorted[1] == 0.25 && sorted[2] == 0.25 &&
              sorted[3] == 0.0,
          json{{"weights", dec.weights}});
  a.check("reconstruction_exact", exact);
  return detail::finish("prop4-qubit", outdir, a, json{{"rates", rates}});
}

inline ReproResult repro_prop4_qudit(const std::string& outdir, int d) {
  std::filesystem::create_directories(outdir);
  if (d < 3) d = 3;
  DephasingGapWitness w = semigroup_outside_dephasing_witness(d);
  SemigroupVerdict sg = is_semigroup(w.channel);
  DephasingMembership mem = in_dephasing_set(w.channel);

  json out{{"schema_version", kSchemaVersion},
           {"d", d},
           {"c", w.c},
           {"sup_sum", w.sup_sum},
           {"is_semigroup", sg.is_semigroup},
           {"sup_values", mem.sup_values}};
  write_json_file(outdir + "/prop4_qudit_witness.json", out);

  detail::AnchorList a;
  a.check("witness_rate_in_unit_interval", w.c > 0.0 && w.c < 1.0, json{{"c", w.c}});
  a.check("witness_is_semigroup", sg.is_semigroup);
  a.check("sup_sum_exceeds_one", w.sup_sum > 1.0 + 1e-9, json{{"sup_sum", w.sup_sum}});
  a.check("membership_false", !mem.member);
  return detail::finish("prop4-qudit", outdir, a, json{{"c", w.c}, {"sup_sum", w.sup_sum}});
}

inline ReproResult repro_split_n(const std::string& outdir, int d, int n) {
  std::filesystem::create_directories(outdir);
  if (d < 2) d = 2;
  if (n < 2) n = 2;
  SemigroupSplit split = split_semigroup_invertible(d, n);

  bool all_invertible = true;
  int semigroup_count = 0;
  int semigroup_index = -1;
  json comps = json::array();
  for (std::size_t k = 0; k < split.components.size(); ++k) {
    const GpcChannel& c = split.components[k];
    InvertibilityReport inv = invertibility(c);
    SemigroupVerdict sg = is_semigroup(c);
    all_invertible = all_invertible && inv.invertible;
    if (sg.is_semigroup && *std::max_element(sg.rates.begin(), sg.rates.end()) > 0.0) {
      ++semigroup_count;
      semigroup_index = static_cast<int>(k);
    }
    comps.push_back(json{{"weight", split.weights[k]},
                         {"p", channel_to_json(c).at("p")},
                         {"invertible", inv.invertible},
                         {"is_semigroup", sg.is_semigroup}});
  }
  GpcChannel rebuilt = mix(split.components, split.weights);
  bool exact = channel_equal(split.base, rebuilt, EqualMode::Symbolic);

  // expected weights 1/2, 1/4, ..., 2^{1-n}, 2^{1-n}
  bool weights_ok = split.weights.size() == static_cast<std::size_t>(n);
  for (int k = 0; k < n - 1 && weights_ok; ++k)
    weights_ok = split.weights[k] == std::ldexp(1.0, -(k + 1));
  weights_ok = weights_ok && split.weights[n - 1] == std::ldexp(1.0, -(n - 1));

  double expected_rate = std::ldexp(1.0, n - 1);
  bool last_rate_ok = false;
  if (semigroup_index >= 0) {
    SemigroupVerdict sg = is_semigroup(split.components[semigroup_index]);
    last_rate_ok = true;
    for (double c : sg.rates) last_rate_ok = last_rate_ok && std::abs(c - expected_rate) <= 1e-8;
  }

  json out{{"schema_version", kSchemaVersion}, {"d", d}, {"n", n}, {"components", comps},
           {"reconstruction_symbolic", exact}};
  write_json_file(outdir + "/split_components.json", out);

  detail::AnchorList a;
  a.check("all_components_invertible", all_invertible);
  a.check("weights_follow_halving", weights_ok, json{{"weights", split.weights}});
  a.check("exactly_one_semigroup_component", semigroup_count == 1,
          json{{"count", semigroup_count}});
  a.check("semigroup_component_rate_is_2_pow_n_minus_1", last_rate_ok,
          json{{"expected", expected_rate}});
  a.check("reconstruction_exact", exact);
  return detail::finish("split-n", outdir, a, json{{"d", d}, {"n", n}});
}

}  // namespace gpcmix

#endif
