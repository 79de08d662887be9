/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// File formats. Channel specs, MUB tables and analysis verdicts all live in
// versioned JSON (nlohmann, which keeps object keys sorted, so identical
// inputs serialize byte-identically). Spectra additionally export to CSV.

#ifndef GPCMIX_CHANSPEC_HPP
#define GPCMIX_CHANSPEC_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gpcmix/analysis.hpp"
#include "gpcmix/channels.hpp"

namespace gpcmix {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

using AnyChannel = std::variant<GpcChannel, WeylChannel>;

// ---------------------------------------------------------------------------
// MUB table files: {schema_version, d, bases: [[[re, im] x d] x d] x (d+1)}
// (each basis is a list of vectors; each vector a list of [re, im] pairs)
// ---------------------------------------------------------------------------

inline json mub_to_json(const MubFamily& f) {
  json bases = json::array();
  for (const auto& b : f.bases) {
    json vectors = json::array();
    for (int k = 0; k < f.d; ++k) {
      json v = json::array();
      for (int m = 0; m < f.d; ++m) v.push_back({b(m, k).real(), b(m, k).imag()});
      vectors.push_back(std::move(v));
    }
    bases.push_back(std::move(vectors));
  }
  return json{{"schema_version", kSchemaVersion}, {"d", f.d}, {"bases", std::move(bases)}};
}

inline MubFamily mub_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("bases")) throw ValidationError("mub table: missing d or bases");
  const int d = j.at("d").get<int>();
  std::vector<CMatrix> bases;
  for (const auto& bj : j.at("bases")) {
    CMatrix b(d, d);
    if (static_cast<int>(bj.size()) != d) throw ValidationError("mub table: basis has wrong vector count");
    for (int k = 0; k < d; ++k) {
      const auto& vj = bj.at(k);
      if (static_cast<int>(vj.size()) != d) throw ValidationError("mub table: vector has wrong length");
      for (int m = 0; m < d; ++m) b(m, k) = Complex(vj.at(m).at(0).get<double>(), vj.at(m).at(1).get<double>());
    }
    bases.push_back(std::move(b));
  }
  return load_mub_table(d, std::move(bases));
}

// ---------------------------------------------------------------------------
// channel spec files
// {schema_version, kind: "gpc"|"weyl", d, mub: "builtin"|path, p: [...]}
// gpc: p is a flat list of d+2 expression strings (identity weight first);
// weyl: p is a d x d nested list of expression strings.
// ---------------------------------------------------------------------------

inline json channel_to_json(const GpcChannel& ch) {
  json p = json::array();
  for (const auto& e : ch.p) p.push_back(e.to_string());
  return json{{"schema_version", kSchemaVersion},
              {"kind", "gpc"},
              {"d", ch.d()},
              {"mub", ch.mub->source == MubFamily::Source::BuiltinPrime ? "builtin" : "table"},
              {"p", std::move(p)}};
}

inline json channel_to_json(const WeylChannel& ch) {
  const int d = ch.d();
  json rows = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int j = 0; j < d; ++j) row.push_back(ch.pij(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "weyl"},
              {"d", d},
              {"p", std::move(rows)}};
}

inline json channel_to_json(const AnyChannel& ch) {
  return std::visit([](const auto& c) { return channel_to_json(c); }, ch);
}

// `base_dir` resolves a relative MUB table path inside the spec.
inline AnyChannel channel_from_json(const json& j, const std::string& base_dir = ".") {
  for (const char* key : {"kind", "d", "p"})
    if (!j.contains(key)) throw ValidationError(std::string("channel spec: missing field '") + key + "'");
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.at("d").get<int>();
  if (kind == "gpc") {
    std::shared_ptr<const MubFamily> mub;
    std::string mub_field = j.value("mub", "builtin");
    if (mub_field == "builtin") {
      mub = std::make_shared<const MubFamily>(mub_family(d));
    } else {
      std::string path = mub_field;
      if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
      std::ifstream in(path);
      if (!in) throw ValidationError("channel spec: cannot open mub table " + path);
      json mj = json::parse(in);
      mub = std::make_shared<const MubFamily>(mub_from_json(mj));
    }
    std::vector<TimeExpr> p;
    for (const auto& s : j.at("p")) p.push_back(parse_expr(s.get<std::string>()));
    return make_gpc_channel(std::move(mub), std::move(p));
  }
  if (kind == "weyl") {
    auto ws = std::make_shared<const WeylSet>(weyl_set(d));
    std::vector<TimeExpr> p;
    const auto& rows = j.at("p");
    if (static_cast<int>(rows.size()) != d) throw ValidationError("channel spec: weyl p must have d rows");
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != d) throw ValidationError("channel spec: weyl p row length");
      for (const auto& s : row) p.push_back(parse_expr(s.get<std::string>()));
    }
    return make_weyl_channel(std::move(ws), std::move(p));
  }
  throw ValidationError("channel spec: kind must be 'gpc' or 'weyl'");
}

inline AnyChannel load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel spec " + path);
  json j = json::parse(in);
  auto slash = path.find_last_of('/');
  std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return channel_from_json(j, dir);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// spectra to CSV / JSON
// ---------------------------------------------------------------------------

inline std::string spectrum_csv(const Spectrum& s, const TimeGrid& grid) {
  std::ostringstream out;
  out << "t";
  if (s.family == Spectrum::Family::Gpc) {
    for (std::size_t a = 0; a < s.real_part.size(); ++a) out << "," << s.label(static_cast<int>(a));
  } else {
    for (std::size_t a = 0; a < s.real_part.size(); ++a) {
      out << ",re_" << s.label(static_cast<int>(a)).substr(7) << ",im_"
          << s.label(static_cast<int>(a)).substr(7);
    }
  }
  out << "\n";
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    out << format_double(t);
    for (std::size_t a = 0; a < s.real_part.size(); ++a) {
      out << "," << format_double(s.real_part[a].eval(t));
      if (s.family == Spectrum::Family::Weyl) out << "," << format_double(s.imag_part[a].eval(t));
    }
    out << "\n";
  }
  return out.str();
}

inline json spectrum_json(const Spectrum& s, const TimeGrid& grid) {
  json lambdas = json::array();
  for (std::size_t a = 0; a < s.real_part.size(); ++a) {
    json entry{{"label", s.label(static_cast<int>(a))},
               {"multiplicity", s.multiplicity(static_cast<int>(a))},
               {"real", s.real_part[a].to_string()}};
    if (s.family == Spectrum::Family::Weyl) entry["imag"] = s.imag_part[a].to_string();
    json values = json::array();
    for (int i = 0; i < grid.points; ++i) {
      double t = grid.at(i);
      if (s.family == Spectrum::Family::Weyl)
        values.push_back({s.real_part[a].eval(t), s.imag_part[a].eval(t)});
      else
        values.push_back(s.real_part[a].eval(t));
    }
    entry["values"] = std::move(values);
    lambdas.push_back(std::move(entry));
  }
  return json{{"schema_version", kSchemaVersion},
              {"family", s.family == Spectrum::Family::Gpc ? "gpc" : "weyl"},
              {"d", s.d},
              {"grid", {{"t_max", grid.t_max}, {"points", grid.points}}},
              {"eigenvalues", std::move(lambdas)}};
}

// ---------------------------------------------------------------------------
// verdicts to JSON
// ---------------------------------------------------------------------------

inline double round_to_places(double v, int places) {
  double s = std::pow(10.0, places);
  return std::round(v * s) / s;
}

inline json to_json(const CpVerdict& v) {
  json j{{"cp", v.cp}};
  if (!v.cp) {
    j["witness_t"] = v.witness_t ? json(*v.witness_t) : json();
    switch (v.bound) {
      case CpVerdict::Bound::Lower: j["violated_bound"] = "lower"; break;
      case CpVerdict::Bound::Upper: j["violated_bound"] = "upper"; break;
      case CpVerdict::Bound::Choi: j["violated_bound"] = "choi"; break;
      default: break;
    }
  }
  return j;
}

inline json to_json(const InvertibilityReport& r) {
  json j{{"invertible", r.invertible},
         {"min_abs_eigenvalue",
          {{"value", r.min_abs_value}, {"t", r.min_abs_time}, {"label", r.min_abs_label}}}};
  j["first_zero"] = r.first_zero ? json(round_to_places(*r.first_zero, 9)) : json();
  return j;
}

inline json to_json(const SemigroupVerdict& v) {
  json j{{"is_semigroup", v.is_semigroup}, {"fit_residual", v.fit_residual}};
  if (v.is_semigroup) j["rates"] = v.rates;
  switch (v.violated) {
    case SemigroupVerdict::Violation::ExpFit: j["violated"] = "exp-fit"; break;
    case SemigroupVerdict::Violation::RateInequality: j["violated"] = "rate-inequality"; break;
    case SemigroupVerdict::Violation::NegativeRate: j["violated"] = "negative-rate"; break;
    default: break;
  }
  return j;
}

inline json to_json(const DephasingMembership& m) {
  json j{{"member", m.member}, {"sup_sum", m.sup_sum}, {"sup_values", m.sup_values}};
  if (m.unbounded_warning) j["unbounded_warning"] = true;
  return j;
}

inline json to_json(const DephasingDecomposition& dec) {
  json pis = json::array();
  for (std::size_t a = 0; a < dec.weights.size(); ++a) {
    json entry{{"weight", dec.weights[a]}};
    entry["slot"] = a == 0 ? json("identity") : json(static_cast<int>(a));
    if (a > 0 && dec.pi[a]) entry["pi"] = dec.pi[a]->to_string();
    pis.push_back(std::move(entry));
  }
  return json{{"weights", dec.weights}, {"parts", std::move(pis)}};
}

inline json to_json(const RateProfile& p) {
  json gammas = json::array();
  for (const auto& g : p.gamma) {
    json arr = json::array();
    for (double v : g) arr.push_back(std::isnan(v) ? json() : json(v));
    gammas.push_back(std::move(arr));
  }
  return json{{"d", p.d},
              {"times", p.times},
              {"gamma", std::move(gammas)},
              {"pole_times", p.pole_times}};
}

}  // namespace gpcmix

#endif
