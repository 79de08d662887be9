/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Command-line front end.
//
//   gpcmix build <family> --out PATH [flags]    write a channel spec
//   gpcmix spectrum --in SPEC [--grid T,N] [--format csv|json] [--out PATH]
//   gpcmix check <which> --in SPEC [--grid T,N] [--out PATH]
//   gpcmix repro <name> [--outdir DIR] [flags]
//
// Exit codes: 0 success (all asserted anchors pass), 1 usage or spec error,
// 2 a reproduction anchor failed.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gpcmix/gpcmix.hpp"

namespace {

using namespace gpcmix;

struct GridOption {
  std::string raw;
  TimeGrid parse() const {
    if (raw.empty()) return TimeGrid::standard();
    auto comma = raw.find(',');
    if (comma == std::string::npos)
      throw Error("--grid expects T_MAX,POINTS");
    TimeGrid g;
    g.t_max = std::stod(raw.substr(0, comma));
    g.points = std::stoi(raw.substr(comma + 1));
    if (g.points < 2 || !(g.t_max > 0.0)) throw Error("--grid needs points >= 2 and t_max > 0");
    return g;
  }
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_text_file(out_path, content);
}

void report_warnings(const AnyChannel& ch) {
  const auto& warnings = std::holds_alternative<GpcChannel>(ch)
                             ? std::get<GpcChannel>(ch).warnings
                             : std::get<WeylChannel>(ch).warnings;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<double> parse_rate_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-dependent generalized Pauli / Weyl channel toolbox"};
  app.require_subcommand(1);

  int seed = 12345;
  app.add_option("--seed", seed, "seed recorded in JSON outputs");

  // ---- build ----
  auto* build = app.add_subcommand("build", "write a channel spec JSON");
  std::string build_family, build_out = "channel.json", build_rates, build_pi = "1-exp(-1*t)";
  int build_d = 2, build_alpha = 1;
  build->add_option("family", build_family, "eq13 | semigroup | dephasing | weyl-example1")
      ->required();
  build->add_option("--out", build_out, "output path (build weyl-example1 writes three files)");
  build->add_option("--c", build_rates, "comma-separated rates (semigroup)");
  auto* build_d_opt = build->add_option("--d", build_d, "dimension (dephasing; optional cross-check for semigroup)");
  build->add_option("--alpha", build_alpha, "basis slot 1..d+1 (dephasing)");
  build->add_option("--pi", build_pi, "dephasing function expression");

  // ---- spectrum ----
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue functions on a grid");
  std::string spec_in, spec_out, spec_format = "csv";
  GridOption spec_grid;
  spectrum->add_option("--in", spec_in, "channel spec path")->required();
  spectrum->add_option("--grid", spec_grid.raw, "T_MAX,POINTS (default 20,2001)");
  spectrum->add_option("--format", spec_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_option("--out", spec_out, "output path (default stdout)");

  // ---- check ----
  auto* check = app.add_subcommand("check", "run an analysis and emit a JSON verdict");
  std::string check_which, check_in, check_out, check_format = "json";
  GridOption check_grid;
  check
      ->add_option("which", check_which,
                   "cp | invertible | semigroup | dephasing-set | rates | p-divisible | neg-count")
      ->required();
  check->add_option("--in", check_in, "channel spec path")->required();
  check->add_option("--grid", check_grid.raw, "T_MAX,POINTS");
  check->add_option("--format", check_format, "json (verdicts are JSON-only)")
      ->check(CLI::IsMember({"json"}));
  check->add_option("--out", check_out, "output path (default stdout)");

  // ---- repro ----
  auto* repro = app.add_subcommand("repro", "run a named reproduction scenario");
  std::string repro_name, repro_outdir = "repro_out", repro_rates;
  int repro_n = 2, repro_d = 0;
  repro
      ->add_option("name", repro_name,
                   "fig1 | eq13-membership | example1 | prop4-qubit | prop4-qudit | split-n")
      ->required();
  repro->add_option("--outdir", repro_outdir, "output directory");
  repro->add_option("--c", repro_rates, "rates for prop4-qubit");
  repro->add_option("--n", repro_n, "number of components for split-n");
  repro->add_option("--d", repro_d, "dimension for prop4-qudit / split-n");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      if (build_family == "eq13") {
        write_json_file(build_out, channel_to_json(build_eq13_channel()));
      } else if (build_family == "semigroup") {
        if (build_rates.empty()) throw Error("build semigroup needs --c r1,...,r_{d+1}");
        std::vector<double> rates = parse_rate_list(build_rates);
        int d = static_cast<int>(rates.size()) - 1;
        if (build_d_opt->count() > 0 && build_d != d)
          throw Error("--d " + std::to_string(build_d) + " does not match " +
                      std::to_string(rates.size()) + " rates (need d+1)");
        auto mub = std::make_shared<const MubFamily>(mub_family(d));
        write_json_file(build_out, channel_to_json(semigroup_from_rates(mub, rates)));
      } else if (build_family == "dephasing") {
        auto mub = std::make_shared<const MubFamily>(mub_family(build_d));
        write_json_file(build_out,
                        channel_to_json(dephasing_channel(mub, build_alpha, parse_expr(build_pi))));
      } else if (build_family == "weyl-example1") {
        WeylExample1 ex = build_weyl_example1();
        std::string stem = build_out;
        if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
          stem = stem.substr(0, stem.size() - 5);
        write_json_file(stem + "_p.json", channel_to_json(ex.p_channel));
        write_json_file(stem + "_q.json", channel_to_json(ex.q_channel));
        write_json_file(stem + "_mix.json", channel_to_json(ex.mixture));
      } else {
        throw Error("unknown build family '" + build_family + "'");
      }
      return 0;
    }

    if (*spectrum) {
      TimeGrid grid = spec_grid.parse();
      AnyChannel ch = load_channel_spec(spec_in);
      report_warnings(ch);
      Spectrum s = std::holds_alternative<GpcChannel>(ch)
                       ? gpc_spectrum(std::get<GpcChannel>(ch))
                       : weyl_spectrum(std::get<WeylChannel>(ch));
      if (spec_format == "csv") {
        emit(spec_out, spectrum_csv(s, grid));
      } else {
        json j = spectrum_json(s, grid);
        j["seed"] = seed;
        emit(spec_out, j.dump(2) + "\n");
      }
      return 0;
    }

    if (*check) {
      TimeGrid grid = check_grid.parse();
      AnyChannel ch = load_channel_spec(check_in);
      report_warnings(ch);
      json j = run_check(ch, check_which, grid);
      j["seed"] = seed;
      emit(check_out, j.dump(2) + "\n");
      return 0;
    }

    if (*repro) {
      ReproResult r;
      if (repro_name == "fig1") {
        r = repro_fig1(repro_outdir);
      } else if (repro_name == "eq13-membership") {
        r = repro_eq13_membership(repro_outdir);
      } else if (repro_name == "example1") {
        r = repro_example1(repro_outdir);
      } else if (repro_name == "prop4-qubit") {
        std::vector<double> rates;
        if (!repro_rates.empty()) rates = parse_rate_list(repro_rates);
        r = repro_prop4_qubit(repro_outdir, rates);
      } else if (repro_name == "prop4-qudit") {
        r = repro_prop4_qudit(repro_outdir, repro_d == 0 ? 3 : repro_d);
      } else if (repro_name == "split-n") {
        r = repro_split_n(repro_outdir, repro_d == 0 ? 2 : repro_d, repro_n);
      } else {
        throw Error("unknown repro scenario '" + repro_name + "'");
      }
      std::cout << r.summary.dump(2) << "\n";
      return r.pass ? 0 : 2;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
