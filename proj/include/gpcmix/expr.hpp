/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// A tiny closed-form function language over the time variable t >= 0:
// constants, t, decaying exponentials exp(-c*t), cosines cos(a*t+b), and
// sums/products/scalings thereof. The family is closed under differentiation,
// which is what makes exact spectral and rate computations possible downstream.
//
// Grammar accepted by parse_expr (whitespace insignificant):
//
//   expr    = term , { ("+" | "-") , term } ;
//   term    = factor , { "*" , factor } ;
//   factor  = "-" , factor | primary ;
//   primary = number | "pi" | "t"
//           | "exp" , "(" , expr , ")"    (* argument must reduce to -c*t, c >= 0 *)
//           | "cos" , "(" , expr , ")"    (* argument must reduce to a*t + b *)
//           | "(" , expr , ")" ;
//
// `pi` is the only named constant. There is no division node by design;
// every quotient needed downstream is by a constant or handled pointwise.

#ifndef GPCMIX_EXPR_HPP
#define GPCMIX_EXPR_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpcmix/errors.hpp"

namespace gpcmix {

inline constexpr double kPi = std::numbers::pi;

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TimeExpr {
 public:
  enum class Kind { Const, Var, Exp, Cos, Sum, Product, Scale };

 private:
  struct Node {
    Kind kind;
    double a = 0.0;  // Const: value; Exp: decay rate; Cos: angular rate; Scale: factor
    double b = 0.0;  // Cos: phase, canonical in [0, 2*pi)
    std::vector<std::shared_ptr<const Node>> kids;
    bool normal = false;
  };
  using NodePtr = std::shared_ptr<const Node>;
  NodePtr n_;

  explicit TimeExpr(NodePtr n) : n_(std::move(n)) {}

  static NodePtr make(Kind k, double a, double b, std::vector<NodePtr> kids, bool normal) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = a;
    n->b = b;
    n->kids = std::move(kids);
    n->normal = normal;
    return n;
  }

 public:
  TimeExpr() : TimeExpr(make(Kind::Const, 0.0, 0.0, {}, true)) {}

  // ---- factories ----------------------------------------------------------

  static TimeExpr constant(double v) { return TimeExpr(make(Kind::Const, v, 0.0, {}, true)); }

  static TimeExpr var() { return TimeExpr(make(Kind::Var, 0.0, 0.0, {}, true)); }

  // e^{-rate * t}; rate must be nonnegative so that values stay bounded on [0, inf)
  static TimeExpr exp_decay(double rate) {
    if (!(rate >= 0.0)) throw DomainError("exp decay rate must be nonnegative");
    if (rate == 0.0) return constant(1.0);
    return TimeExpr(make(Kind::Exp, rate, 0.0, {}, true));
  }

  // cos(rate * t + phase); canonicalized to rate > 0, phase in [0, 2*pi)
  static TimeExpr cosine(double rate, double phase) {
    if (rate == 0.0) return constant(std::cos(phase));
    if (rate < 0.0) {
      rate = -rate;
      phase = -phase;
    }
    phase = std::fmod(phase, 2.0 * kPi);
    if (phase < 0.0) phase += 2.0 * kPi;
    return TimeExpr(make(Kind::Cos, rate, phase, {}, true));
  }

  static TimeExpr sum(std::vector<TimeExpr> kids) {
    if (kids.empty()) return constant(0.0);
    if (kids.size() == 1) return kids.front();
    std::vector<NodePtr> ns;
    ns.reserve(kids.size());
    for (auto& k : kids) ns.push_back(k.n_);
    return TimeExpr(make(Kind::Sum, 0.0, 0.0, std::move(ns), false));
  }

  static TimeExpr product(std::vector<TimeExpr> kids) {
    if (kids.empty()) return constant(1.0);
    if (kids.size() == 1) return kids.front();
    std::vector<NodePtr> ns;
    ns.reserve(kids.size());
    for (auto& k : kids) ns.push_back(k.n_);
    return TimeExpr(make(Kind::Product, 0.0, 0.0, std::move(ns), false));
  }

  static TimeExpr scaled(double s, TimeExpr child) {
    return TimeExpr(make(Kind::Scale, s, 0.0, {child.n_}, false));
  }

  // ---- accessors ----------------------------------------------------------

  Kind kind() const { return n_->kind; }
  double value() const { return n_->a; }   // Const
  double rate() const { return n_->a; }    // Exp / Cos
  double phase() const { return n_->b; }   // Cos
  double factor() const { return n_->a; }  // Scale
  std::size_t child_count() const { return n_->kids.size(); }
  TimeExpr child(std::size_t i) const { return TimeExpr(n_->kids[i]); }
  bool is_normal() const { return n_->normal; }

  // ---- evaluation ---------------------------------------------------------

  double eval(double t) const {
    if (!(t >= 0.0)) throw DomainError("expression evaluated at negative time");
    double v = eval_raw(*n_, t);
    if (!std::isfinite(v)) throw EvalOverflow("expression value overflowed at t=" + format_double(t));
    return v;
  }

  // ---- calculus -----------------------------------------------------------

  TimeExpr derivative() const { return derivative_of(*this); }

  // ---- structure ----------------------------------------------------------

  TimeExpr normalized() const;

  bool same_structure(const TimeExpr& o) const { return same_structure(*n_, *o.n_); }

  // Prints the canonical (normalized) form. Coefficients print with exact
  // round-trip precision and reparse multiplies them only by 1.0, so
  // parse(to_string()) reproduces the normalized tree bit for bit.
  std::string to_string() const {
    TimeExpr n = normalized();
    std::string out;
    print(*n.n_, out, /*parent_product=*/false);
    return out;
  }

  friend TimeExpr operator+(const TimeExpr& x, const TimeExpr& y) { return sum({x, y}); }
  friend TimeExpr operator-(const TimeExpr& x, const TimeExpr& y) { return sum({x, scaled(-1.0, y)}); }
  friend TimeExpr operator-(const TimeExpr& x) { return scaled(-1.0, x); }
  friend TimeExpr operator*(const TimeExpr& x, const TimeExpr& y) { return product({x, y}); }
  friend TimeExpr operator*(double s, const TimeExpr& y) { return scaled(s, y); }

  // One multiplicative term of the canonical form: coeff * t^var_pow *
  // exp(-exp_rate*t) * prod cos(a_i*t+b_i). Exposed for the analyses that
  // classify expressions (supremum, exponential fits).
  struct Monomial {
    double coeff = 0.0;
    int var_pow = 0;
    double exp_rate = 0.0;  // 0 means no exponential factor
    std::vector<std::pair<double, double>> cosines;  // sorted (rate, phase)

    bool is_const() const { return var_pow == 0 && exp_rate == 0.0 && cosines.empty(); }

    double eval_shape(double t) const {  // the monomial without its coefficient
      double v = 1.0;
      for (int i = 0; i < var_pow; ++i) v *= t;
      if (exp_rate != 0.0) v *= std::exp(-exp_rate * t);
      for (const auto& [a, b] : cosines) v *= std::cos(a * t + b);
      return v;
    }
  };

  std::vector<Monomial> monomials() const {
    std::vector<Monomial> out = expand(*n_);
    collect(out);
    return out;
  }

 private:
  static double eval_raw(const Node& n, double t) {
    switch (n.kind) {
      case Kind::Const:
        return n.a;
      case Kind::Var:
        return t;
      case Kind::Exp:
        return std::exp(-n.a * t);
      case Kind::Cos:
        return std::cos(n.a * t + n.b);
      case Kind::Sum: {
        double s = 0.0;
        for (const auto& k : n.kids) s += eval_raw(*k, t);
        return s;
      }
      case Kind::Product: {
        double p = 1.0;
        for (const auto& k : n.kids) p *= eval_raw(*k, t);
        return p;
      }
      case Kind::Scale:
        return n.a * eval_raw(*n.kids[0], t);
    }
    return 0.0;
  }

  static TimeExpr derivative_of(const TimeExpr& e) {
    switch (e.kind()) {
      case Kind::Const:
        return constant(0.0);
      case Kind::Var:
        return constant(1.0);
      case Kind::Exp:
        return scaled(-e.rate(), e);
      case Kind::Cos:
        // d/dt cos(at+b) = -a sin(at+b) = a cos(at+b+pi/2)
        return scaled(e.rate(), cosine(e.rate(), e.phase() + kPi / 2.0));
      case Kind::Sum: {
        std::vector<TimeExpr> kids;
        for (std::size_t i = 0; i < e.child_count(); ++i) kids.push_back(derivative_of(e.child(i)));
        return sum(std::move(kids));
      }
      case Kind::Product: {
        // n-ary product rule
        std::vector<TimeExpr> terms;
        for (std::size_t i = 0; i < e.child_count(); ++i) {
          std::vector<TimeExpr> fac;
          for (std::size_t j = 0; j < e.child_count(); ++j)
            fac.push_back(i == j ? derivative_of(e.child(j)) : e.child(j));
          terms.push_back(product(std::move(fac)));
        }
        return sum(std::move(terms));
      }
      case Kind::Scale:
        return scaled(e.factor(), derivative_of(e.child(0)));
    }
    return constant(0.0);
  }

  static bool same_structure(const Node& x, const Node& y) {
    if (x.kind != y.kind || x.a != y.a || x.b != y.b || x.kids.size() != y.kids.size()) return false;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
      if (!same_structure(*x.kids[i], *y.kids[i])) return false;
    return true;
  }

  // ---- expansion into monomials ------------------------------------------

  static constexpr std::size_t kMaxMonomials = 1u << 16;

  static void mul_into(Monomial& m, const Monomial& f) {
    m.coeff *= f.coeff;
    m.var_pow += f.var_pow;
    m.exp_rate += f.exp_rate;
    m.cosines.insert(m.cosines.end(), f.cosines.begin(), f.cosines.end());
  }

  static std::vector<Monomial> expand(const Node& n) {
    switch (n.kind) {
      case Kind::Const: {
        Monomial m;
        m.coeff = n.a;
        return {m};
      }
      case Kind::Var: {
        Monomial m;
        m.coeff = 1.0;
        m.var_pow = 1;
        return {m};
      }
      case Kind::Exp: {
        Monomial m;
        m.coeff = 1.0;
        m.exp_rate = n.a;
        return {m};
      }
      case Kind::Cos: {
        Monomial m;
        m.coeff = 1.0;
        m.cosines = {{n.a, n.b}};
        return {m};
      }
      case Kind::Sum: {
        std::vector<Monomial> out;
        for (const auto& k : n.kids) {
          auto sub = expand(*k);
          out.insert(out.end(), sub.begin(), sub.end());
          if (out.size() > kMaxMonomials) throw Error("expression too large to normalize");
        }
        return out;
      }
      case Kind::Product: {
        std::vector<Monomial> out;
        Monomial one;
        one.coeff = 1.0;
        out.push_back(one);
        for (const auto& k : n.kids) {
          auto sub = expand(*k);
          std::vector<Monomial> next;
          next.reserve(out.size() * sub.size());
          for (const auto& x : out)
            for (const auto& y : sub) {
              Monomial m = x;
              mul_into(m, y);
              next.push_back(std::move(m));
            }
          if (next.size() > kMaxMonomials) throw Error("expression too large to normalize");
          out = std::move(next);
        }
        return out;
      }
      case Kind::Scale: {
        auto out = expand(*n.kids[0]);
        for (auto& m : out) m.coeff *= n.a;
        return out;
      }
    }
    return {};
  }

  static int key_compare(const Monomial& x, const Monomial& y) {
    if (x.var_pow != y.var_pow) return x.var_pow < y.var_pow ? -1 : 1;
    if (x.exp_rate != y.exp_rate) return x.exp_rate < y.exp_rate ? -1 : 1;
    if (x.cosines.size() != y.cosines.size()) return x.cosines.size() < y.cosines.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.cosines.size(); ++i) {
      if (x.cosines[i].first != y.cosines[i].first) return x.cosines[i].first < y.cosines[i].first ? -1 : 1;
      if (x.cosines[i].second != y.cosines[i].second)
        return x.cosines[i].second < y.cosines[i].second ? -1 : 1;
    }
    return 0;
  }

  static void collect(std::vector<Monomial>& ms) {
    for (auto& m : ms) std::sort(m.cosines.begin(), m.cosines.end());
    std::sort(ms.begin(), ms.end(), [](const Monomial& x, const Monomial& y) { return key_compare(x, y) < 0; });
    std::vector<Monomial> out;
    for (auto& m : ms) {
      if (!out.empty() && key_compare(out.back(), m) == 0)
        out.back().coeff += m.coeff;
      else
        out.push_back(std::move(m));
    }
    std::erase_if(out, [](const Monomial& m) { return m.coeff == 0.0; });
    ms = std::move(out);
  }

  static TimeExpr rebuild(const std::vector<Monomial>& ms) {
    if (ms.empty()) return constant(0.0);
    std::vector<NodePtr> terms;
    for (const auto& m : ms) {
      std::vector<NodePtr> atoms;
      for (int i = 0; i < m.var_pow; ++i) atoms.push_back(var().n_);
      if (m.exp_rate != 0.0) atoms.push_back(exp_decay(m.exp_rate).n_);
      for (const auto& [a, b] : m.cosines) atoms.push_back(make(Kind::Cos, a, b, {}, true));
      NodePtr t;
      if (atoms.empty()) {
        t = make(Kind::Const, m.coeff, 0.0, {}, true);
      } else {
        NodePtr base = atoms.size() == 1 ? atoms[0] : make(Kind::Product, 0.0, 0.0, std::move(atoms), true);
        t = m.coeff == 1.0 ? base : make(Kind::Scale, m.coeff, 0.0, {base}, true);
      }
      terms.push_back(std::move(t));
    }
    if (terms.size() == 1) return TimeExpr(terms[0]);
    return TimeExpr(make(Kind::Sum, 0.0, 0.0, std::move(terms), true));
  }

  // ---- printing -----------------------------------------------------------

  static void print(const Node& n, std::string& out, bool parent_product) {
    switch (n.kind) {
      case Kind::Const:
        if (n.a < 0.0 && parent_product) {
          out += '(';
          out += format_double(n.a);
          out += ')';
        } else {
          out += format_double(n.a);
        }
        return;
      case Kind::Var:
        out += 't';
        return;
      case Kind::Exp:
        out += "exp(-";
        out += format_double(n.a);
        out += "*t)";
        return;
      case Kind::Cos:
        out += "cos(";
        out += format_double(n.a);
        out += "*t";
        if (n.b != 0.0) {
          out += '+';
          out += format_double(n.b);
        }
        out += ')';
        return;
      case Kind::Sum: {
        if (parent_product) out += '(';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          const Node& k = *n.kids[i];
          if (i > 0) {
            // render negative scales/constants with a minus sign
            if (k.kind == Kind::Scale && k.a < 0.0) {
              out += '-';
              Node flipped = k;
              flipped.a = -k.a;
              print(flipped, out, true);
              continue;
            }
            if (k.kind == Kind::Const && k.a < 0.0) {
              out += '-';
              out += format_double(-k.a);
              continue;
            }
            out += '+';
          }
          print(k, out, true);
        }
        if (parent_product) out += ')';
        return;
      }
      case Kind::Product: {
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i > 0) out += '*';
          print(*n.kids[i], out, true);
        }
        return;
      }
      case Kind::Scale: {
        if (n.a == 1.0) {
          print(*n.kids[0], out, parent_product);
          return;
        }
        if (n.a < 0.0 && parent_product) out += '(';
        out += format_double(n.a);
        out += '*';
        print(*n.kids[0], out, true);
        if (n.a < 0.0 && parent_product) out += ')';
        return;
      }
    }
  }
};

inline TimeExpr TimeExpr::normalized() const {
  if (n_->normal) {
    // atoms and rebuilt trees are already canonical
    bool deep_ok = true;
    if (n_->kind == Kind::Sum || n_->kind == Kind::Product || n_->kind == Kind::Scale) {
      for (const auto& k : n_->kids) deep_ok = deep_ok && k->normal;
    }
    if (deep_ok) return *this;
  }
  return rebuild(monomials());
}

inline TimeExpr normalize(const TimeExpr& e) { return e.normalized(); }

inline double eval(const TimeExpr& e, double t) { return e.eval(t); }

inline TimeExpr differentiate(const TimeExpr& e) { return e.derivative().normalized(); }

// Normalized-form equality with a small coefficient tolerance. Keys (powers,
// rates, phases) must match exactly; coefficients may differ by rounding noise
// accumulated along different construction paths.
inline bool equal_normalized(const TimeExpr& a, const TimeExpr& b, double coeff_tol = 1e-12) {
  auto ma = a.monomials();
  auto mb = b.monomials();
  std::size_t i = 0, j = 0;
  auto close = [&](double x, double y) {
    return std::abs(x - y) <= coeff_tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  while (i < ma.size() || j < mb.size()) {
    if (i < ma.size() && j < mb.size()) {
      // compare keys via a throwaway pair ordering
      const auto& x = ma[i];
      const auto& y = mb[j];
      int cmp = 0;
      if (x.var_pow != y.var_pow)
        cmp = x.var_pow < y.var_pow ? -1 : 1;
      else if (x.exp_rate != y.exp_rate)
        cmp = x.exp_rate < y.exp_rate ? -1 : 1;
      else if (x.cosines != y.cosines)
        cmp = x.cosines < y.cosines ? -1 : 1;
      if (cmp == 0) {
        if (!close(x.coeff, y.coeff)) return false;
        ++i, ++j;
        continue;
      }
      if (cmp < 0) {
        if (!close(x.coeff, 0.0)) return false;
        ++i;
        continue;
      }
      if (!close(0.0, y.coeff)) return false;
      ++j;
      continue;
    }
    if (i < ma.size()) {
      if (!close(ma[i].coeff, 0.0)) return false;
      ++i;
    } else {
      if (!close(0.0, mb[j].coeff)) return false;
      ++j;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TimeExpr parse() {
    TimeExpr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  TimeExpr parse_sum() {
    std::vector<TimeExpr> kids{parse_term()};
    for (;;) {
      skip_ws();
      if (eat('+')) {
        kids.push_back(parse_term());
      } else if (eat('-')) {
        kids.push_back(TimeExpr::scaled(-1.0, parse_term()));
      } else {
        break;
      }
    }
    return TimeExpr::sum(std::move(kids));
  }

  TimeExpr parse_term() {
    std::vector<TimeExpr> kids{parse_factor()};
    while (eat('*')) kids.push_back(parse_factor());
    return TimeExpr::product(std::move(kids));
  }

  TimeExpr parse_factor() {
    if (eat('-')) return TimeExpr::scaled(-1.0, parse_factor());
    return parse_primary();
  }

  TimeExpr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      TimeExpr e = parse_sum();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == "t") return TimeExpr::var();
      if (name == "pi") return TimeExpr::constant(kPi);
      if (name == "exp") return parse_exp_call(start);
      if (name == "cos") return parse_cos_call(start);
      throw SyntaxError("unknown identifier '" + std::string(name) + "'", start);
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  TimeExpr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw SyntaxError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return TimeExpr::constant(v);
  }

  TimeExpr parse_call_arg(std::size_t at) {
    if (!eat('(')) throw SyntaxError("expected '(' after function name", at);
    TimeExpr arg = parse_sum();
    if (!eat(')')) throw SyntaxError("expected ')'", pos_);
    return arg;
  }

  // exp argument must be exactly -c*t with c >= 0
  TimeExpr parse_exp_call(std::size_t at) {
    TimeExpr arg = parse_call_arg(at);
    auto ms = arg.monomials();
    if (ms.empty()) return TimeExpr::constant(1.0);  // exp(-0*t)
    if (ms.size() != 1 || ms[0].var_pow != 1 || ms[0].exp_rate != 0.0 || !ms[0].cosines.empty())
      throw SyntaxError("exp argument must have the form -c*t", at);
    if (ms[0].coeff > 0.0) throw DomainError("exp coefficient is negative (growing exponential)");
    return TimeExpr::exp_decay(-ms[0].coeff);
  }

  // cos argument must be affine in t: a*t + b
  TimeExpr parse_cos_call(std::size_t at) {
    TimeExpr arg = parse_call_arg(at);
    double a = 0.0, b = 0.0;
    for (const auto& m : arg.monomials()) {
      if (m.is_const()) {
        b = m.coeff;
      } else if (m.var_pow == 1 && m.exp_rate == 0.0 && m.cosines.empty()) {
        a = m.coeff;
      } else {
        throw SyntaxError("cos argument must have the form a*t+b", at);
      }
    }
    return TimeExpr::cosine(a, b);
  }
};

}  // namespace detail

inline TimeExpr parse_expr(std::string_view text) { return detail::Parser(text).parse().normalized(); }

// ---------------------------------------------------------------------------
// supremum over [0, inf)
// ---------------------------------------------------------------------------

struct GridSpec {
  double t_max = 50.0;
  int points = 20001;
};

enum class SupKind { ExactAnalytic, GridWithTailBound };

struct SupEstimate {
  double value = 0.0;
  SupKind kind = SupKind::ExactAnalytic;
  double witness_t = 0.0;  // +inf means the supremum is approached as t -> inf
  GridSpec grid;           // meaningful when kind == GridWithTailBound
  bool unbounded_warning = false;
};

namespace detail {

// golden-section maximization on [lo, hi] for a unimodal-ish bracket
template <class F>
inline std::pair<double, double> golden_max(F f, double lo, double hi) {
  constexpr double invphi = 0.6180339887498948;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  double tm = 0.5 * (a + b);
  return {tm, f(tm)};
}

}  // namespace detail

inline SupEstimate supremum(const TimeExpr& e, std::optional<GridSpec> opts = std::nullopt) {
  GridSpec gs = opts.value_or(GridSpec{});
  const auto ms = e.monomials();

  SupEstimate out;
  out.grid = gs;

  // constant
  if (ms.empty()) {
    out = {0.0, SupKind::ExactAnalytic, 0.0, gs, false};
    return out;
  }
  if (ms.size() == 1 && ms[0].is_const()) {
    out = {ms[0].coeff, SupKind::ExactAnalytic, 0.0, gs, false};
    return out;
  }

  double const_part = 0.0;
  bool pure_exp = true, pure_cos = true;
  std::vector<std::pair<double, double>> exps;  // (coeff, rate)
  double cos_coeff = 0.0, cos_rate = 0.0, cos_phase = 0.0;
  int cos_terms = 0;
  for (const auto& m : ms) {
    if (m.is_const()) {
      const_part += m.coeff;
      continue;
    }
    if (m.var_pow == 0 && m.cosines.empty() && m.exp_rate > 0.0) {
      exps.emplace_back(m.coeff, m.exp_rate);
    } else {
      pure_exp = false;
    }
    if (m.var_pow == 0 && m.exp_rate == 0.0 && m.cosines.size() == 1) {
      cos_coeff = m.coeff;
      cos_rate = m.cosines[0].first;
      cos_phase = m.cosines[0].second;
      ++cos_terms;
    } else {
      pure_cos = false;
    }
  }

  // a + sum b_i exp(-c_i t) with uniformly signed b_i: monotone, so the
  // supremum sits at t = 0 or in the t -> inf limit
  if (pure_exp && !exps.empty()) {
    bool all_pos = std::all_of(exps.begin(), exps.end(), [](auto& p) { return p.first > 0.0; });
    bool all_neg = std::all_of(exps.begin(), exps.end(), [](auto& p) { return p.first < 0.0; });
    if (all_pos) {
      double s = const_part;
      for (auto& [b, c] : exps) s += b;
      out = {s, SupKind::ExactAnalytic, 0.0, gs, false};
      return out;
    }
    if (all_neg) {
      out = {const_part, SupKind::ExactAnalytic, std::numeric_limits<double>::infinity(), gs, false};
      return out;
    }
  }

  // a + s*cos(w t + phi): supremum a + |s| at the first aligned time
  if (pure_cos && cos_terms == 1) {
    double target = cos_coeff > 0.0 ? 0.0 : kPi;
    double t0 = std::fmod(target - cos_phase, 2.0 * kPi);
    if (t0 < 0.0) t0 += 2.0 * kPi;
    t0 /= cos_rate;
    out = {const_part + std::abs(cos_coeff), SupKind::ExactAnalytic, t0, gs, false};
    return out;
  }

  // grid fallback with golden-section refinement around the argmax
  const int n = std::max(2, gs.points);
  const double step = gs.t_max / (n - 1);
  double vmax = -std::numeric_limits<double>::infinity();
  int imax = 0;
  for (int i = 0; i < n; ++i) {
    double t = i * step;
    double v = e.eval(t);
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  double lo = std::max(0.0, (imax - 1) * step);
  double hi = std::min(gs.t_max, (imax + 1) * step);
  auto [tref, vref] = detail::golden_max([&](double t) { return e.eval(t); }, lo, hi);
  double witness = tref;
  if (vref < vmax) {
    vref = vmax;
    witness = imax * step;
  }

  // exponential tail bound past t_max when every non-constant monomial decays
  bool tail_ok = true;
  double tail = const_part;
  for (const auto& m : ms) {
    if (m.is_const()) continue;
    if (m.exp_rate < 0.01) {
      tail_ok = false;
      break;
    }
    double shape_bound = std::exp(-m.exp_rate * gs.t_max);
    if (m.var_pow > 0) {
      if (m.exp_rate * gs.t_max < m.var_pow) {
        tail_ok = false;
        break;
      }
      for (int i = 0; i < m.var_pow; ++i) shape_bound *= gs.t_max;
    }
    tail += std::abs(m.coeff) * shape_bound;
  }
  double value = vref;
  if (tail_ok && tail > value) {
    value = tail;
    witness = gs.t_max;
  }

  out.value = value;
  out.kind = SupKind::GridWithTailBound;
  out.witness_t = witness;
  out.grid = gs;
  if (!tail_ok) {
    // still growing at the end of the grid?
    double f_end = e.eval(gs.t_max);
    double f_prev = e.eval(gs.t_max - step);
    if (f_end >= vmax - 1e-12 && f_end > f_prev) out.unbounded_warning = true;
  }
  return out;
}

}  // namespace gpcmix

#endif
