/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Dense complex linear algebra sized for d <= 7, backed by Eigen. This is the
// independent numeric layer: superoperators, Choi matrices and Hermitian
// eigendecompositions used to cross-check every closed-form result.
//
// Vectorization convention (fixed once, asserted in tests): column stacking.
// vec(X) stacks the columns of X, so vec(A X B) = (B^T kron A) vec(X).

#ifndef GPCMIX_LINALG_HPP
#define GPCMIX_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "gpcmix/errors.hpp"

namespace gpcmix {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline bool is_hermitian(const CMatrix& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

struct HermitianEig {
  RVector values;   // descending
  CMatrix vectors;  // columns match values
};

inline HermitianEig hermitian_eig(const CMatrix& a) {
  if (!is_hermitian(a)) throw NotHermitian("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
  const auto n = a.rows();
  HermitianEig out;
  out.values = RVector(n);
  out.vectors = CMatrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // Eigen returns ascending order
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline bool is_psd(const CMatrix& a, double tol = 1e-9) {
  if (!is_hermitian(a)) throw NotHermitian("is_psd: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVector vec(const CMatrix& x) {
  CVector v(x.rows() * x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) v(j * x.rows() + i) = x(i, j);
  return v;
}

inline CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("unvec: size mismatch");
  CMatrix x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = v(j * rows + i);
  return x;
}

struct KrausTerm {
  double weight;  // may be negative for maps under test (non-CP candidates)
  CMatrix op;
};

// d^2 x d^2 matrix acting on column-vectorized operators
struct SuperOp {
  int d = 0;
  CMatrix m;
};

// superoperator of X -> sum_i w_i K_i X K_i^dag;
// each Kraus term contributes w * (conj(K) kron K) under column stacking
inline SuperOp kraus_superop(std::span<const KrausTerm> terms) {
  if (terms.empty()) throw DimensionMismatch("kraus_superop: no terms");
  const Eigen::Index d = terms[0].op.rows();
  SuperOp s;
  s.d = static_cast<int>(d);
  s.m = CMatrix::Zero(d * d, d * d);
  for (const auto& t : terms) {
    if (t.op.rows() != d || t.op.cols() != d)
      throw DimensionMismatch("kraus_superop: operators must all be d x d");
    s.m += t.weight * kron(t.op.conjugate(), t.op);
  }
  return s;
}

inline CMatrix apply_superop(const SuperOp& s, const CMatrix& x) {
  if (x.rows() != s.d || x.cols() != s.d) throw DimensionMismatch("apply_superop: size mismatch");
  return unvec(s.m * vec(x), s.d, s.d);
}

// Choi matrix: C = sum_ij E_ij kron Lambda(E_ij), i.e. (id kron Lambda)
// applied to the unnormalized maximally entangled projector.
inline CMatrix choi(const SuperOp& s) {
  const int d = s.d;
  CMatrix c = CMatrix::Zero(d * d, d * d);
  CMatrix eij = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      eij(i, j) = 1.0;
      c.block(i * d, j * d, d, d) = apply_superop(s, eij);
      eij(i, j) = 0.0;
    }
  return c;
}

// partial trace over the output (second) slot of a Choi-ordered d^2 x d^2 matrix
inline CMatrix partial_trace_output(const CMatrix& c, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r) out(i, j) += c(i * d + r, j * d + r);
  return out;
}

// eigenvalue of s on a known eigenvector v, extracted as a Rayleigh quotient
inline Complex rayleigh_eigenvalue(const SuperOp& s, const CMatrix& eigvec_op) {
  CVector v = vec(eigvec_op);
  return v.dot(s.m * v) / v.dot(v);  // Eigen's dot conjugates the left argument
}

}  // namespace gpcmix

#endif
