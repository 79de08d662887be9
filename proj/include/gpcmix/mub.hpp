/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Mutually unbiased bases for prime d, the cyclic unitaries attached to each
// basis, and the Weyl shift-and-phase operators. MUBs for non-prime d are
// accepted from user-supplied tables and validated against the invariants.

#ifndef GPCMIX_MUB_HPP
#define GPCMIX_MUB_HPP

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gpcmix/expr.hpp"
#include "gpcmix/linalg.hpp"

namespace gpcmix {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline Complex root_of_unity(int d, long long power) {
  long long m = power % d;
  if (m < 0) m += d;
  double theta = 2.0 * kPi * static_cast<double>(m) / d;
  return {std::cos(theta), std::sin(theta)};
}

// The cyclic unitary of an orthonormal basis: the l-th root of unity attaches
// to the (l+1)-th basis vector, U |phi_l> = omega^l |phi_l> (0-based l).
inline CMatrix unitary_from_basis(const CMatrix& basis) {
  const int d = static_cast<int>(basis.rows());
  if (basis.cols() != d) throw NotOrthonormal("unitary_from_basis: basis must be square");
  if ((basis.adjoint() * basis - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw NotOrthonormal("unitary_from_basis: columns are not orthonormal");
  CMatrix u = CMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l)
    u += root_of_unity(d, l) * (basis.col(l) * basis.col(l).adjoint());
  return u;
}

struct MubFamily {
  enum class Source { BuiltinPrime, UserTable };
  int d = 0;
  std::vector<CMatrix> bases;      // d+1 matrices; columns are the basis vectors
  std::vector<CMatrix> unitaries;  // cyclic unitary per basis
  Source source = Source::BuiltinPrime;

  // all powers U_alpha^k for k = 1..d-1, alpha-major
  std::vector<CMatrix> unitary_powers(int alpha) const {
    std::vector<CMatrix> out;
    CMatrix u = unitaries[alpha];
    CMatrix p = u;
    for (int k = 1; k <= d - 1; ++k) {
      out.push_back(p);
      p = p * u;
    }
    return out;
  }
};

inline void validate_mub_family(int d, const std::vector<CMatrix>& bases) {
  if (d < 2) throw ValidationError("mub table: d must be >= 2");
  if (static_cast<int>(bases.size()) != d + 1)
    throw ValidationError("mub table: expected " + std::to_string(d + 1) + " bases, got " +
                          std::to_string(bases.size()));
  for (int a = 0; a <= d; ++a) {
    if (bases[a].rows() != d || bases[a].cols() != d)
      throw ValidationError("mub table: basis " + std::to_string(a + 1) + " has wrong shape");
    CMatrix g = bases[a].adjoint() * bases[a];
    double err = (g - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-10)
      throw ValidationError("mub table: basis " + std::to_string(a + 1) +
                            " is not orthonormal (deviation " + format_double(err) + ")");
  }
  for (int a = 0; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double ov = std::norm(bases[a].col(i).dot(bases[b].col(j)));
          if (std::abs(ov - 1.0 / d) > 1e-10)
            throw ValidationError("mub table: bases " + std::to_string(a + 1) + "," +
                                  std::to_string(b + 1) + " are not unbiased at vectors (" +
                                  std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
}

inline MubFamily finalize_family(int d, std::vector<CMatrix> bases, MubFamily::Source src) {
  MubFamily f;
  f.d = d;
  f.bases = std::move(bases);
  f.source = src;
  for (const auto& b : f.bases) f.unitaries.push_back(unitary_from_basis(b));
  return f;
}

// Built-in family for prime d. The computational basis is always first.
// d = 2 uses the Pauli eigenbasis triple; odd primes use the quadratic
// Wootters-Fields phases omega^(a m^2 + k m)/sqrt(d).
inline MubFamily mub_family(int d) {
  if (d < 2) throw UnsupportedDimension("mub_family: d must be >= 2");
  if (!is_prime(d))
    throw UnsupportedDimension("mub_family: built-in construction requires prime d (got " +
                               std::to_string(d) + "); supply a table instead");
  std::vector<CMatrix> bases;
  bases.push_back(CMatrix::Identity(d, d));
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix x(2, 2), y(2, 2);
    x << s, s, s, -s;                                      // |+>, |->
    y << s, s, Complex(0, s), Complex(0, -s);              // |y+>, |y->
    bases.push_back(x);
    bases.push_back(y);
  } else {
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a) {
      CMatrix b(d, d);
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m)
          b(m, k) = s * root_of_unity(d, static_cast<long long>(a) * m * m +
                                             static_cast<long long>(k) * m);
      bases.push_back(b);
    }
  }
  return finalize_family(d, std::move(bases), MubFamily::Source::BuiltinPrime);
}

inline MubFamily load_mub_table(int d, std::vector<CMatrix> bases) {
  validate_mub_family(d, bases);
  return finalize_family(d, std::move(bases), MubFamily::Source::UserTable);
}

inline bool family_equivalent(const MubFamily& a, const MubFamily& b, double tol = 1e-12) {
  if (a.d != b.d) return false;
  for (int i = 0; i <= a.d; ++i)
    if ((a.unitaries[i] - b.unitaries[i]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Weyl operators
// ---------------------------------------------------------------------------

// U_kl = sum_m omega^{km} |m><m+l mod d|
struct WeylSet {
  int d = 0;
  std::vector<CMatrix> ops;  // index k*d + l

  const CMatrix& op(int k, int l) const { return ops[static_cast<std::size_t>(k) * d + l]; }
};

inline WeylSet weyl_set(int d) {
  if (d < 2) throw UnsupportedDimension("weyl_set: d must be >= 2");
  WeylSet w;
  w.d = d;
  w.ops.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      CMatrix u = CMatrix::Zero(d, d);
      for (int m = 0; m < d; ++m) u(m, (m + l) % d) = root_of_unity(d, static_cast<long long>(k) * m);
      w.ops.push_back(std::move(u));
    }
  return w;
}

inline bool weyl_equivalent(const WeylSet& a, const WeylSet& b, double tol = 1e-12) {
  if (a.d != b.d) return false;
  for (std::size_t i = 0; i < a.ops.size(); ++i)
    if ((a.ops[i] - b.ops[i]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace gpcmix

#endif
