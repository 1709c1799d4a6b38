#pragma once

// Small dense symmetric-matrix kernel. Everything on the SPD cone goes
// through an eigendecomposition: exp, log and the square roots are spectral
// functions Q f(L) Q^T.

#include <algorithm>

#include <Eigen/Dense>

#include "rlmc/errors.hpp"

namespace rlmc {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;
template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

using HalfVec = Vec<6>;

// Symmetric N x N matrix. Construction symmetrizes its argument as (M + M^T)/2
// and rejects non-finite entries, so entries(i, j) == entries(j, i) exactly.
template <int N>
class SymMatrix {
 public:
  static_assert(N == 3 || N == 6, "only 3x3 and 6x6 symmetric matrices are used");

  SymMatrix() : m_(Mat<N>::Zero()) {}
  explicit SymMatrix(const Mat<N>& m);

  static SymMatrix zero() { return SymMatrix(); }
  static SymMatrix identity();
  static SymMatrix diagonal(const Vec<N>& d);

  const Mat<N>& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(m_ + o.m_, Trusted{}); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(m_ - o.m_, Trusted{}); }
  SymMatrix operator*(double s) const { return SymMatrix(m_ * s, Trusted{}); }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

  double trace() const { return m_.trace(); }

 private:
  struct Trusted {};
  // Sums and scalings of symmetric matrices stay exactly symmetric.
  SymMatrix(const Mat<N>& m, Trusted) : m_(m) {}

  Mat<N> m_;
};

// Symmetric positive-definite matrix.
template <int N>
class SpdMatrix {
 public:
  // Checks that the smallest eigenvalue clears the positivity floor.
  explicit SpdMatrix(const SymMatrix<N>& s);

  // For values that are positive definite by construction (congruences of
  // matrix exponentials). Positivity is re-checked by the next log/sqrt.
  static SpdMatrix unchecked(const SymMatrix<N>& s) { return SpdMatrix(s, Unchecked{}); }
  static SpdMatrix identity() { return unchecked(SymMatrix<N>::identity()); }

  const SymMatrix<N>& sym() const { return s_; }
  const Mat<N>& matrix() const { return s_.matrix(); }
  double operator()(int i, int j) const { return s_(i, j); }

 private:
  struct Unchecked {};
  SpdMatrix(const SymMatrix<N>& s, Unchecked) : s_(s) {}

  SymMatrix<N> s_;
};

// Eigenvalues in descending order, eigenvectors as matching orthonormal columns.
template <int N>
struct SymEigen {
  Vec<N> values;
  Mat<N> vectors;
};

template <int N>
SymEigen<N> sym_eig(const SymMatrix<N>& s);

// Positivity floor: 1e-12 * max(1, largest eigenvalue).
template <int N>
double eig_floor(const SymEigen<N>& e) {
  return 1e-12 * std::max(1.0, e.values(0));
}

// Throws NotPositiveDefinite when the spectrum is not safely positive.
template <int N>
void require_positive(const SymEigen<N>& e);

// Q f(L) Q^T for a scalar function f.
template <int N, typename F>
SymMatrix<N> apply_spectral(const SymEigen<N>& e, F&& f) {
  Vec<N> fl;
  for (int i = 0; i < N; ++i) fl(i) = f(e.values(i));
  return SymMatrix<N>(e.vectors * fl.asDiagonal() * e.vectors.transpose());
}

// A S A^T, re-symmetrized.
template <int N>
SymMatrix<N> congruence(const Mat<N>& a, const SymMatrix<N>& s) {
  return SymMatrix<N>(a * s.matrix() * a.transpose());
}

template <int N>
SpdMatrix<N> mat_exp(const SymMatrix<N>& s);
template <int N>
SymMatrix<N> mat_log(const SpdMatrix<N>& x);
template <int N>
SpdMatrix<N> mat_sqrt(const SpdMatrix<N>& x);
template <int N>
SpdMatrix<N> mat_inv_sqrt(const SpdMatrix<N>& x);

// Half-vectorization with the layout
//   [[x1, x4, x6], [x4, x2, x5], [x6, x5, x3]].
HalfVec hvec(const SymMatrix<3>& s);
SymMatrix<3> hvec_inv(const HalfVec& v);

}  // namespace rlmc
