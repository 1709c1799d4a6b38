#include "rlmc/symmat.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace rlmc {

template <int N>
SymMatrix<N>::SymMatrix(const Mat<N>& m) : m_(0.5 * (m + m.transpose())) {
  if (!m_.allFinite()) throw std::domain_error("symmetric matrix has non-finite entries");
}

template <int N>
SymMatrix<N> SymMatrix<N>::identity() {
  return SymMatrix(Mat<N>::Identity(), Trusted{});
}

template <int N>
SymMatrix<N> SymMatrix<N>::diagonal(const Vec<N>& d) {
  return SymMatrix(Mat<N>(d.asDiagonal()));
}

template <int N>
SpdMatrix<N>::SpdMatrix(const SymMatrix<N>& s) : s_(s) {
  require_positive(sym_eig(s_));
}

template <int N>
SymEigen<N> sym_eig(const SymMatrix<N>& s) {
  if (!s.matrix().allFinite()) throw std::domain_error("sym_eig: non-finite input");
  Eigen::SelfAdjointEigenSolver<Mat<N>> solver(s.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::domain_error("sym_eig: no convergence");
  // Eigen sorts ascending; flip to descending.
  SymEigen<N> out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

template <int N>
void require_positive(const SymEigen<N>& e) {
  const double floor = eig_floor(e);
  if (!(e.values(N - 1) > floor)) {
    throw NotPositiveDefinite("smallest eigenvalue " + std::to_string(e.values(N - 1)) +
                              " is below the positivity floor " + std::to_string(floor));
  }
}

template <int N>
SpdMatrix<N> mat_exp(const SymMatrix<N>& s) {
  const auto e = sym_eig(s);
  return SpdMatrix<N>::unchecked(apply_spectral(e, [](double l) { return std::exp(l); }));
}

template <int N>
SymMatrix<N> mat_log(const SpdMatrix<N>& x) {
  const auto e = sym_eig(x.sym());
  require_positive(e);
  return apply_spectral(e, [](double l) { return std::log(l); });
}

template <int N>
SpdMatrix<N> mat_sqrt(const SpdMatrix<N>& x) {
  const auto e = sym_eig(x.sym());
  require_positive(e);
  return SpdMatrix<N>::unchecked(apply_spectral(e, [](double l) { return std::sqrt(l); }));
}

template <int N>
SpdMatrix<N> mat_inv_sqrt(const SpdMatrix<N>& x) {
  const auto e = sym_eig(x.sym());
  require_positive(e);
  return SpdMatrix<N>::unchecked(apply_spectral(e, [](double l) { return 1.0 / std::sqrt(l); }));
}

HalfVec hvec(const SymMatrix<3>& s) {
  HalfVec v;
  v << s(0, 0), s(1, 1), s(2, 2), s(0, 1), s(1, 2), s(0, 2);
  return v;
}

SymMatrix<3> hvec_inv(const HalfVec& v) {
  Mat<3> m;
  m << v(0), v(3), v(5),
       v(3), v(1), v(4),
       v(5), v(4), v(2);
  return SymMatrix<3>(m);
}

#define RLMC_INSTANTIATE(N)                                   \
  template class SymMatrix<N>;                                \
  template class SpdMatrix<N>;                                \
  template SymEigen<N> sym_eig<N>(const SymMatrix<N>&);       \
  template void require_positive<N>(const SymEigen<N>&);      \
  template SpdMatrix<N> mat_exp<N>(const SymMatrix<N>&);      \
  template SymMatrix<N> mat_log<N>(const SpdMatrix<N>&);      \
  template SpdMatrix<N> mat_sqrt<N>(const SpdMatrix<N>&);     \
  template SpdMatrix<N> mat_inv_sqrt<N>(const SpdMatrix<N>&);

RLMC_INSTANTIATE(3)
RLMC_INSTANTIATE(6)

#undef RLMC_INSTANTIATE

}  // namespace rlmc
