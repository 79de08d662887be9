/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Time-dependent generalized Pauli channels over d+1 mutually unbiased bases
// and generalized Weyl channels over the d^2 shift-and-phase operators:
// action on states, closed-form spectra, complete-positivity checks (both the
// spectral Fujiwara-Algoet route and the numeric Choi route), mixing, and
// channel equality.

#ifndef GPCMIX_CHANNELS_HPP
#define GPCMIX_CHANNELS_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpcmix/expr.hpp"
#include "gpcmix/linalg.hpp"
#include "gpcmix/mub.hpp"

namespace gpcmix {

// Standard sampling grid for "for all t" checks; every family in scope is
// settled well before t = 20.
struct TimeGrid {
  double t_max = 20.0;
  int points = 2001;

  double at(int i) const { return t_max * i / (points - 1); }
  static TimeGrid standard() { return {}; }
};

// ---------------------------------------------------------------------------
// channel types
// ---------------------------------------------------------------------------

// rho -> p_0 rho + 1/(d-1) sum_alpha p_alpha sum_k U_alpha^k rho U_alpha^k^dag
struct GpcChannel {
  std::shared_ptr<const MubFamily> mub;
  std::vector<TimeExpr> p;  // size d+2: p[0] identity weight, p[alpha] per basis
  std::vector<std::string> warnings;

  int d() const { return mub->d; }
};

// X -> sum_ij p_ij U_ij X U_ij^dag
struct WeylChannel {
  std::shared_ptr<const WeylSet> weyl;
  std::vector<TimeExpr> p;  // size d^2, index i*d + j
  std::vector<std::string> warnings;

  int d() const { return weyl->d; }
  const TimeExpr& pij(int i, int j) const { return p[static_cast<std::size_t>(i) * d() + j]; }
};

// Strict construction demands the family start at the identity (p_0(0) = 1);
// Relaxed downgrades that to a warning so deliberately invalid fixtures
// (constant depolarizing weights, forced non-CP spectra) can be built and fed
// to the CP oracles.
enum class ChannelValidation { Strict, Relaxed };

namespace detail {

// Probability checks are warnings except at t = 0 under strict validation.
inline void validate_probabilities(std::vector<TimeExpr>& p, std::vector<std::string>& warnings,
                                   const TimeGrid& grid, const char* what,
                                   ChannelValidation mode) {
  double p00 = p[0].eval(0.0);
  if (std::abs(p00 - 1.0) > 1e-9) {
    if (mode == ChannelValidation::Strict)
      throw BadChannel(std::string(what) + ": identity weight at t=0 is " + format_double(p00) +
                       ", must be 1");
    warnings.push_back("identity weight at t=0 is " + format_double(p00));
  }
  for (std::size_t a = 1; a < p.size(); ++a) {
    double v = p[a].eval(0.0);
    if (std::abs(v) > 1e-9)
      warnings.push_back("component " + std::to_string(a) + " is " + format_double(v) + " at t=0");
  }
  double worst_sum = 0.0, worst_neg = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    double s = 0.0;
    for (const auto& e : p) {
      double v = e.eval(t);
      s += v;
      if (v < worst_neg) worst_neg = v;
    }
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  if (worst_sum > 1e-9)
    warnings.push_back(std::string("probabilities do not sum to 1 on the grid (max deviation ") +
                       format_double(worst_sum) + ")");
  if (worst_neg < -1e-12)
    warnings.push_back(std::string("negative probability on the grid (min ") +
                       format_double(worst_neg) + ")");
}

}  // namespace detail

inline GpcChannel make_gpc_channel(std::shared_ptr<const MubFamily> mub, std::vector<TimeExpr> p,
                                   const TimeGrid& grid = TimeGrid::standard(),
                                   ChannelValidation mode = ChannelValidation::Strict) {
  if (!mub) throw BadChannel("gpc channel: missing basis family");
  if (static_cast<int>(p.size()) != mub->d + 2)
    throw BadChannel("gpc channel: expected " + std::to_string(mub->d + 2) +
                     " probability functions, got " + std::to_string(p.size()));
  GpcChannel ch;
  ch.mub = std::move(mub);
  for (auto& e : p) e = e.normalized();
  ch.p = std::move(p);
  detail::validate_probabilities(ch.p, ch.warnings, grid, "gpc channel", mode);
  return ch;
}

inline WeylChannel make_weyl_channel(std::shared_ptr<const WeylSet> weyl, std::vector<TimeExpr> p,
                                     const TimeGrid& grid = TimeGrid::standard(),
                                     ChannelValidation mode = ChannelValidation::Strict) {
  if (!weyl) throw BadChannel("weyl channel: missing operator set");
  const int d = weyl->d;
  if (static_cast<int>(p.size()) != d * d)
    throw BadChannel("weyl channel: expected " + std::to_string(d * d) +
                     " probability functions, got " + std::to_string(p.size()));
  WeylChannel ch;
  ch.weyl = std::move(weyl);
  for (auto& e : p) e = e.normalized();
  ch.p = std::move(p);
  detail::validate_probabilities(ch.p, ch.warnings, grid, "weyl channel", mode);
  return ch;
}

// ---------------------------------------------------------------------------
// action and superoperators
// ---------------------------------------------------------------------------

inline CMatrix gpc_apply(const GpcChannel& ch, double t, const CMatrix& rho) {
  const int d = ch.d();
  if (!(t >= 0.0)) throw BadTime("gpc_apply: t must be >= 0");
  if (rho.rows() != d || rho.cols() != d) throw BadState("gpc_apply: state has wrong dimension");
  if (!is_hermitian(rho, 1e-10)) throw BadState("gpc_apply: state is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw BadState("gpc_apply: state does not have unit trace");

  CMatrix out = ch.p[0].eval(t) * rho;
  for (int alpha = 0; alpha <= d; ++alpha) {
    double w = ch.p[alpha + 1].eval(t) / (d - 1);
    CMatrix u = ch.mub->unitaries[alpha];
    CMatrix up = u;
    for (int k = 1; k <= d - 1; ++k) {
      out += w * (up * rho * up.adjoint());
      up = up * u;
    }
  }
  return out;
}

inline SuperOp channel_superop(const GpcChannel& ch, double t) {
  const int d = ch.d();
  std::vector<KrausTerm> terms;
  terms.push_back({ch.p[0].eval(t), CMatrix::Identity(d, d)});
  for (int alpha = 0; alpha <= d; ++alpha) {
    double w = ch.p[alpha + 1].eval(t) / (d - 1);
    for (const auto& up : ch.mub->unitary_powers(alpha)) terms.push_back({w, up});
  }
  return kraus_superop(terms);
}

inline SuperOp channel_superop(const WeylChannel& ch, double t) {
  const int d = ch.d();
  std::vector<KrausTerm> terms;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) terms.push_back({ch.pij(i, j).eval(t), ch.weyl->op(i, j)});
  return kraus_superop(terms);
}

// ---------------------------------------------------------------------------
// closed-form spectra
// ---------------------------------------------------------------------------

struct Spectrum {
  enum class Family { Gpc, Weyl };
  Family family = Family::Gpc;
  int d = 0;
  // Gpc: size d+1, one real eigenvalue function per basis index (each with
  //      multiplicity d-1 on the operators U_alpha^k; the unit eigenvalue on
  //      the identity is implicit).
  // Weyl: size d^2 indexed k*d+l, complex as (real_part, imag_part) pairs,
  //       each simple; entry (0,0) is the unit eigenvalue.
  std::vector<TimeExpr> real_part;
  std::vector<TimeExpr> imag_part;  // empty for Gpc

  int multiplicity(int) const { return family == Family::Gpc ? d - 1 : 1; }
  std::string label(int idx) const {
    if (family == Family::Gpc) return "lambda_" + std::to_string(idx + 1);
    return "lambda_" + std::to_string(idx / d) + std::to_string(idx % d);
  }
};

namespace detail {

// Spectra are affine images of the probability vector whose coefficients
// cancel exactly in real arithmetic. With non-dyadic scale factors the
// cancellation leaves monomials of relative size ~1e-16 that are pure
// rounding residue; they are semantically empty but poison -lambda'/lambda
// wherever lambda itself is small. Dropped relative to the dominant
// coefficient, so genuinely tiny spectra are left untouched.
inline TimeExpr drop_relative_dust(const TimeExpr& e, double rel = 1e-14) {
  auto ms = e.monomials();
  double biggest = 0.0;
  for (const auto& m : ms) biggest = std::max(biggest, std::abs(m.coeff));
  if (biggest == 0.0) return TimeExpr::constant(0.0);
  std::vector<TimeExpr> keep;
  for (const auto& m : ms) {
    if (std::abs(m.coeff) <= rel * biggest) continue;
    std::vector<TimeExpr> atoms;
    for (int i = 0; i < m.var_pow; ++i) atoms.push_back(TimeExpr::var());
    if (m.exp_rate != 0.0) atoms.push_back(TimeExpr::exp_decay(m.exp_rate));
    for (const auto& [a, b] : m.cosines) atoms.push_back(TimeExpr::cosine(a, b));
    if (atoms.empty())
      keep.push_back(TimeExpr::constant(m.coeff));
    else
      keep.push_back(TimeExpr::scaled(m.coeff, TimeExpr::product(std::move(atoms))));
  }
  return TimeExpr::sum(std::move(keep)).normalized();
}

}  // namespace detail

// lambda_alpha = 1 - d/(d-1) (sum_beta p_beta - p_alpha)
inline Spectrum gpc_spectrum(const GpcChannel& ch) {
  const int d = ch.d();
  Spectrum s;
  s.family = Spectrum::Family::Gpc;
  s.d = d;
  std::vector<TimeExpr> others;
  for (int alpha = 1; alpha <= d + 1; ++alpha) {
    std::vector<TimeExpr> sum_terms{TimeExpr::constant(1.0)};
    for (int beta = 1; beta <= d + 1; ++beta) {
      if (beta == alpha) continue;
      sum_terms.push_back(TimeExpr::scaled(-static_cast<double>(d) / (d - 1), ch.p[beta]));
    }
    s.real_part.push_back(detail::drop_relative_dust(TimeExpr::sum(std::move(sum_terms)).normalized()));
  }
  return s;
}

// lambda_kl = sum_ij omega^{jk - il} p_ij, split into real and imaginary parts
inline Spectrum weyl_spectrum(const WeylChannel& ch) {
  const int d = ch.d();
  Spectrum s;
  s.family = Spectrum::Family::Weyl;
  s.d = d;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      std::vector<TimeExpr> re, im;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Complex h = root_of_unity(d, static_cast<long long>(j) * k - static_cast<long long>(i) * l);
          if (h.real() != 0.0) re.push_back(TimeExpr::scaled(h.real(), ch.pij(i, j)));
          if (h.imag() != 0.0) im.push_back(TimeExpr::scaled(h.imag(), ch.pij(i, j)));
        }
      s.real_part.push_back(detail::drop_relative_dust(TimeExpr::sum(std::move(re)).normalized()));
      s.imag_part.push_back(detail::drop_relative_dust(TimeExpr::sum(std::move(im)).normalized()));
    }
  return s;
}

// ---------------------------------------------------------------------------
// complete positivity
// ---------------------------------------------------------------------------

struct CpVerdict {
  bool cp = true;
  std::optional<double> witness_t;       // earliest violating time when !cp
  enum class Bound { None, Lower, Upper, Choi } bound = Bound::None;
};

// spectral conditions for a generalized Pauli channel:
// -1/(d-1) <= sum_alpha lambda_alpha(t) <= 1 + d min_alpha lambda_alpha(t)
inline CpVerdict fa_cp_check(const Spectrum& spec, const TimeGrid& grid = TimeGrid::standard(),
                             double tol = 1e-9) {
  if (spec.family != Spectrum::Family::Gpc)
    throw Error("fa_cp_check: spectral conditions apply to generalized Pauli channels only");
  const int d = spec.d;
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    double sum = 0.0, mn = std::numeric_limits<double>::infinity();
    for (const auto& l : spec.real_part) {
      double v = l.eval(t);
      sum += v;
      mn = std::min(mn, v);
    }
    if (sum < -1.0 / (d - 1) - tol) return {false, t, CpVerdict::Bound::Lower};
    if (sum > 1.0 + d * mn + tol) return {false, t, CpVerdict::Bound::Upper};
  }
  return {true, std::nullopt, CpVerdict::Bound::None};
}

namespace detail {

template <class Channel>
inline CpVerdict choi_cp_verdict(const Channel& ch, const TimeGrid& grid, double tol) {
  for (int i = 0; i < grid.points; ++i) {
    double t = grid.at(i);
    CMatrix c = choi(channel_superop(ch, t));
    c = 0.5 * (c + c.adjoint().eval());  // clean Hermitian rounding noise
    if (!is_psd(c, tol)) return {false, t, CpVerdict::Bound::Choi};
  }
  return {true, std::nullopt, CpVerdict::Bound::None};
}

}  // namespace detail

// numeric route, independent of the spectral conditions: build the Choi
// matrix on the grid and test positive semidefiniteness
inline CpVerdict choi_cp_oracle(const GpcChannel& ch, const TimeGrid& grid = TimeGrid::standard(),
                                double tol = 1e-9) {
  return detail::choi_cp_verdict(ch, grid, tol);
}
inline CpVerdict choi_cp_oracle(const WeylChannel& ch, const TimeGrid& grid = TimeGrid::standard(),
                                double tol = 1e-9) {
  return detail::choi_cp_verdict(ch, grid, tol);
}

// ---------------------------------------------------------------------------
// mixing and equality
// ---------------------------------------------------------------------------

namespace detail {

inline void check_weights(std::span<const double> w, std::size_t n) {
  if (w.size() != n) throw WeightError("mix: need one weight per channel");
  double s = 0.0;
  for (double x : w) {
    if (x < 0.0) throw WeightError("mix: weights must be nonnegative");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw WeightError("mix: weights must sum to 1");
}

inline std::vector<TimeExpr> mix_probability_vectors(std::size_t m, std::size_t n,
                                                     auto&& component, std::span<const double> w) {
  std::vector<TimeExpr> out;
  out.reserve(m);
  for (std::size_t slot = 0; slot < m; ++slot) {
    std::vector<TimeExpr> terms;
    for (std::size_t k = 0; k < n; ++k) terms.push_back(TimeExpr::scaled(w[k], component(k, slot)));
    out.push_back(TimeExpr::sum(std::move(terms)).normalized());
  }
  return out;
}

}  // namespace detail

inline GpcChannel mix(std::span<const GpcChannel> channels, std::span<const double> weights) {
  if (channels.empty()) throw WeightError("mix: no channels");
  detail::check_weights(weights, channels.size());
  for (const auto& c : channels)
    if (!family_equivalent(*c.mub, *channels[0].mub))
      throw FamilyMismatch("mix: channels use different basis families");
  auto p = detail::mix_probability_vectors(
      channels[0].p.size(), channels.size(),
      [&](std::size_t k, std::size_t slot) { return channels[k].p[slot]; }, weights);
  return make_gpc_channel(channels[0].mub, std::move(p));
}

inline WeylChannel mix(std::span<const WeylChannel> channels, std::span<const double> weights) {
  if (channels.empty()) throw WeightError("mix: no channels");
  detail::check_weights(weights, channels.size());
  for (const auto& c : channels)
    if (!weyl_equivalent(*c.weyl, *channels[0].weyl))
      throw FamilyMismatch("mix: channels use different Weyl sets");
  auto p = detail::mix_probability_vectors(
      channels[0].p.size(), channels.size(),
      [&](std::size_t k, std::size_t slot) { return channels[k].p[slot]; }, weights);
  return make_weyl_channel(channels[0].weyl, std::move(p));
}

enum class EqualMode { Symbolic, Grid, Superop };

namespace detail {

template <class Channel>
inline bool channel_equal_impl(const Channel& a, const Channel& b, EqualMode mode,
                               const TimeGrid& grid, double tol) {
  if (a.p.size() != b.p.size()) return false;
  switch (mode) {
    case EqualMode::Symbolic:
      for (std::size_t i = 0; i < a.p.size(); ++i)
        if (!equal_normalized(a.p[i], b.p[i])) return false;
      return true;
    case EqualMode::Grid:
      for (int i = 0; i < grid.points; ++i) {
        double t = grid.at(i);
        for (std::size_t j = 0; j < a.p.size(); ++j)
          if (std::abs(a.p[j].eval(t) - b.p[j].eval(t)) > tol) return false;
      }
      return true;
    case EqualMode::Superop: {
      // sampled times; superoperator entries compared directly
      for (int i = 0; i < grid.points; i += std::max(1, grid.points / 16)) {
        double t = grid.at(i);
        SuperOp sa = channel_superop(a, t);
        SuperOp sb = channel_superop(b, t);
        if ((sa.m - sb.m).cwiseAbs().maxCoeff() > tol) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline bool channel_equal(const GpcChannel& a, const GpcChannel& b,
                          EqualMode mode = EqualMode::Symbolic,
                          const TimeGrid& grid = TimeGrid::standard(), double tol = 1e-9) {
  if (a.d() != b.d() || !family_equivalent(*a.mub, *b.mub)) return false;
  return detail::channel_equal_impl(a, b, mode, grid, tol);
}

inline bool channel_equal(const WeylChannel& a, const WeylChannel& b,
                          EqualMode mode = EqualMode::Symbolic,
                          const TimeGrid& grid = TimeGrid::standard(), double tol = 1e-9) {
  if (a.d() != b.d() || !weyl_equivalent(*a.weyl, *b.weyl)) return false;
  return detail::channel_equal_impl(a, b, mode, grid, tol);
}

// ---------------------------------------------------------------------------
// constructors for special families
// ---------------------------------------------------------------------------

// Weight 1 - pi on the identity and pi on basis index alpha (1-based):
// the alpha-th dephasing family.
inline GpcChannel dephasing_channel(std::shared_ptr<const MubFamily> mub, int alpha, TimeExpr pi_fn,
                                    const TimeGrid& grid = TimeGrid::standard()) {
  const int d = mub->d;
  if (alpha < 1 || alpha > d + 1) throw RangeError("dephasing_channel: alpha out of range");
  pi_fn = pi_fn.normalized();
  if (std::abs(pi_fn.eval(0.0)) > 1e-9) throw RangeError("dephasing_channel: pi(0) must be 0");
  for (int i = 0; i < grid.points; ++i) {
    double v = pi_fn.eval(grid.at(i));
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw RangeError("dephasing_channel: pi(t) leaves [0,1] at t=" + format_double(grid.at(i)));
  }
  std::vector<TimeExpr> p(d + 2, TimeExpr::constant(0.0));
  p[0] = (TimeExpr::constant(1.0) - pi_fn).normalized();
  p[alpha] = pi_fn;
  return make_gpc_channel(std::move(mub), std::move(p), grid);
}

// Channel with prescribed eigenvalue functions:
// p_beta = (d-1)/d^2 (1 + d lambda_beta - sum_alpha lambda_alpha), p_0 = 1 - sum p.
// No positivity is implied; used to build test channels (including non-CP ones).
inline GpcChannel gpc_from_spectrum(std::shared_ptr<const MubFamily> mub,
                                    const std::vector<TimeExpr>& lambdas,
                                    const TimeGrid& grid = TimeGrid::standard(),
                                    ChannelValidation mode = ChannelValidation::Relaxed) {
  const int d = mub->d;
  if (static_cast<int>(lambdas.size()) != d + 1)
    throw BadChannel("gpc_from_spectrum: need d+1 eigenvalue functions");
  const double scale = static_cast<double>(d - 1) / (d * d);
  std::vector<TimeExpr> p(d + 2, TimeExpr::constant(0.0));
  for (int beta = 1; beta <= d + 1; ++beta) {
    std::vector<TimeExpr> terms{TimeExpr::constant(1.0),
                                TimeExpr::scaled(static_cast<double>(d), lambdas[beta - 1])};
    for (const auto& l : lambdas) terms.push_back(TimeExpr::scaled(-1.0, l));
    p[beta] = TimeExpr::scaled(scale, TimeExpr::sum(std::move(terms))).normalized();
  }
  std::vector<TimeExpr> p0_terms{TimeExpr::constant(1.0)};
  for (int beta = 1; beta <= d + 1; ++beta) p0_terms.push_back(TimeExpr::scaled(-1.0, p[beta]));
  p[0] = TimeExpr::sum(std::move(p0_terms)).normalized();
  return make_gpc_channel(std::move(mub), std::move(p), grid, mode);
}

}  // namespace gpcmix

#endif
