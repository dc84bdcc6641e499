#pragma once

// Independent reference computations for the test suites. Everything here goes
// through Eigen or plain loops, never through the library's SVD, feature map or
// thresholding code.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "bilinrank/design.hpp"
#include "bilinrank/matrix.hpp"

namespace oracle {

using Complex = std::complex<double>;
using EMatrix = Eigen::MatrixXcd;

inline EMatrix to_eigen(const bilinrank::DenseMatrix& m) {
  EMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

/// Singular values from the Hermitian eigendecomposition of A^dagger A,
/// non-increasing, min(m, n) of them.
inline std::vector<double> singular_values_via_gram(const bilinrank::DenseMatrix& a) {
  const EMatrix e = to_eigen(a);
  const bool tall = a.rows() >= a.cols();
  const EMatrix gram = tall ? EMatrix(e.adjoint() * e) : EMatrix(e * e.adjoint());
  Eigen::SelfAdjointEigenSolver<EMatrix> solver(gram);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) out.push_back(std::sqrt(std::max(0.0, solver.eigenvalues()(k))));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Singular values by Eigen's own SVD.
inline std::vector<double> singular_values_eigen(const EMatrix& a) {
  Eigen::BDCSVD<EMatrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

/// Numerical rank with the strict relative rule, via Eigen's SVD.
inline std::size_t rank_eigen(const EMatrix& a, double tau) {
  const auto s = singular_values_eigen(a);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > tau * s.front(); }));
}

/// Kronecker product by nested loops over the definition.
inline EMatrix kron_brute(const EMatrix& x, const EMatrix& y) {
  EMatrix out = EMatrix::Zero(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b)
      for (Eigen::Index c = 0; c < y.rows(); ++c)
        for (Eigen::Index e = 0; e < y.cols(); ++e) out(a * y.rows() + c, b * y.cols() + e) = x(a, b) * y(c, e);
  return out;
}

/// Column-major stacking by loops.
inline Eigen::VectorXcd vec_brute(const EMatrix& x) {
  Eigen::VectorXcd out(x.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) out(k++) = x(r, c);
  return out;
}

/// phi(E, rho) = vec(E kron rho^T), built the slow way.
inline Eigen::VectorXcd feature_brute(const bilinrank::DenseMatrix& e, const bilinrank::DenseMatrix& rho) {
  return vec_brute(kron_brute(to_eigen(e), to_eigen(rho).transpose()));
}

/// Rows = vec(M_i)^T, optionally after transposing each member.
inline EMatrix stacked(const std::vector<bilinrank::DenseMatrix>& family, bool transpose_members = false) {
  const auto n = family.front().rows() * family.front().cols();
  EMatrix out(family.size(), n);
  for (std::size_t i = 0; i < family.size(); ++i) {
    EMatrix m = to_eigen(family[i]);
    if (transpose_members) m.transposeInPlace();
    out.row(static_cast<Eigen::Index>(i)) = vec_brute(m).transpose();
  }
  return out;
}

inline std::size_t span_dim(const std::vector<bilinrank::DenseMatrix>& family, double tau = 1e-10) {
  return rank_eigen(stacked(family), tau);
}

/// Orthogonal projector onto the row space of conj(M): the space of vectors x
/// that M x can "see". Built from Eigen's SVD right singular vectors.
inline EMatrix row_space_projector(const EMatrix& m, double tau = 1e-10) {
  Eigen::JacobiSVD<EMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tau * s(0)) ++r;
  const EMatrix v = svd.matrixV().leftCols(r);
  return v * v.adjoint();
}

template <class Sample>
std::vector<bilinrank::DenseMatrix> matrices(const std::vector<Sample>& samples) {
  std::vector<bilinrank::DenseMatrix> out;
  for (const auto& s : samples) out.push_back(s.matrix);
  return out;
}

/// Sector weights from the exact nullspace projector of a design whose row
/// space factors as span{vec E_i} (x) span{vec rho_j^T}. The diagonal of the
/// nullspace projector at feature coordinate (a,b; f,c), where the feature is
/// E(a,b) rho(f,c), is 1 - P_E[(a,b)] * P_rho[(f,c)]; summing it over a mask
/// gives tr(P_s Pi_N).
struct ProjectorTraceResult {
  std::size_t nullspace_dim = 0;
  std::vector<double> weights;  // in mask order
};

inline ProjectorTraceResult projector_trace_weights(const bilinrank::DesignBundle& bundle,
                                                    const std::vector<std::vector<std::size_t>>& masks) {
  const std::size_t d = bundle.config.d;
  const EMatrix ops = stacked(matrices(bundle.operators));
  const EMatrix sts = stacked(matrices(bundle.states));
  // Design rows are plain transposes, so A x = 0 constrains x against the
  // conjugated row space; projectors on conj(family) have the same diagonal.
  const EMatrix pe = row_space_projector(ops);
  const EMatrix pr = row_space_projector(sts);
  const double rank = pe.trace().real() * pr.trace().real();
  ProjectorTraceResult out;
  out.nullspace_dim = static_cast<std::size_t>(std::llround(static_cast<double>(d * d * d * d) - rank));
  for (const auto& mask : masks) {
    double w = 0.0;
    for (std::size_t t : mask) {
      // Feature index t = (b*d + f) * d^2 + (a*d + c) holds E(a,b) * rho(f,c).
      const std::size_t kr = t % (d * d), kc = t / (d * d);
      const std::size_t a = kr / d, c = kr % d, b = kc / d, f = kc % d;
      // vec index of E(a,b) is b*d + a; of rho(f,c) is c*d + f.
      w += 1.0 - pe(b * d + a, b * d + a).real() * pr(c * d + f, c * d + f).real();
    }
    out.weights.push_back(w / static_cast<double>(out.nullspace_dim));
  }
  return out;
}

}  // namespace oracle
