#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <type_traits>
#include <vector>

#include "bilinrank/error.hpp"
#include "bilinrank/matrix.hpp"

namespace bilinrank {

/// Singular values of an m x n matrix in non-increasing order, paired with the
/// columns of the n x n unitary V. Columns 0..min(m,n)-1 of right_vectors go
/// with values[k]; for wide matrices the remaining columns complete V and span
/// part of the nullspace.
struct SingularSpectrum {
  std::vector<double> values;
  DenseMatrix right_vectors;
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;

  double max_value() const { return values.empty() ? 0.0 : values.front(); }
};

/// Spectrum plus the left factor: left_vectors(:, k) * values[k] = A * V(:, k).
/// For tall inputs, columns paired with a zero singular value are zero.
struct SvdFactors {
  DenseMatrix left_vectors;
  SingularSpectrum spectrum;
};

struct SvdOptions {
  /// Sweeps over all column pairs before giving up.
  int max_sweeps = 80;
};

namespace detail {

inline double abs2(double x) { return x * x; }
inline double abs2(const Complex& z) { return std::norm(z); }
inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& z) { return std::conj(z); }

/// One-sided (Hestenes) Jacobi on a column-major m x n working copy. Columns of
/// `a` are rotated until mutually orthogonal; `v` accumulates the rotations.
/// Exactly-zero columns are never touched, so structural zeros in the input
/// stay exact zeros in the spectrum.
template <class T>
void hestenes_jacobi(std::vector<T>& a, std::vector<T>& v, std::size_t m, std::size_t n, int max_sweeps) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = eps * std::sqrt(static_cast<double>(m));
  std::vector<double> norms(n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      const T* col = a.data() + j * m;
      for (std::size_t i = 0; i < m; ++i) s += abs2(col[i]);
      norms[j] = s;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        T* x = a.data() + p * m;
        T* y = a.data() + q * m;
        T gamma{};
        for (std::size_t i = 0; i < m; ++i) gamma += conj_of(x[i]) * y[i];
        const double abs_gamma = std::abs(gamma);
        // The second test stops a column at rounding-noise level from being
        // rotated forever against a much larger one: each rotation puts back
        // about eps * |x| of x into y, so |gamma| stalls near eps * alpha.
        if (abs_gamma <= tol * std::sqrt(alpha) * std::sqrt(beta) || abs_gamma <= eps * std::max(alpha, beta))
          continue;
        rotated = true;

        // Rotate y by the phase of gamma so the pair has a real inner product,
        // then apply the real Jacobi rotation that zeroes it.
        const T phase = conj_of(gamma / abs_gamma);
        const double zeta = (beta - alpha) / (2.0 * abs_gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        double new_alpha = 0.0;
        double new_beta = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const T xi = x[i];
          const T yi = phase * y[i];
          x[i] = c * xi - s * yi;
          y[i] = s * xi + c * yi;
          new_alpha += abs2(x[i]);
          new_beta += abs2(y[i]);
        }
        norms[p] = new_alpha;
        norms[q] = new_beta;

        T* vx = v.data() + p * n;
        T* vy = v.data() + q * n;
        for (std::size_t i = 0; i < n; ++i) {
          const T xi = vx[i];
          const T yi = phase * vy[i];
          vx[i] = c * xi - s * yi;
          vy[i] = s * xi + c * yi;
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalFailure("svd: one-sided Jacobi did not converge within " + std::to_string(max_sweeps) + " sweeps",
                         m, n);
}

/// Row order that depends only on row contents (lexicographic on re, im).
/// Running Jacobi on canonically ordered rows makes the spectrum bit-identical
/// under any row permutation of the input.
inline std::vector<std::size_t> canonical_row_order(const DenseMatrix& a) {
  std::vector<std::size_t> order(a.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t l, std::size_t r) {
    const auto x = a.row(l);
    const auto y = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (x[c].real() != y[c].real()) return x[c].real() < y[c].real();
      if (x[c].imag() != y[c].imag()) return x[c].imag() < y[c].imag();
    }
    return false;
  };
  std::stable_sort(order.begin(), order.end(), less);
  return order;
}

template <class T>
SvdFactors jacobi_svd(const DenseMatrix& input, const SvdOptions& options) {
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  const std::vector<std::size_t> rows = canonical_row_order(input);
  std::vector<T> a(m * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if constexpr (std::is_same_v<T, double>) {
        a[c * m + r] = input(rows[r], c).real();
      } else {
        a[c * m + r] = input(rows[r], c);
      }
    }
  std::vector<T> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T{1};

  hestenes_jacobi(a, v, m, n, options.max_sweeps);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += abs2(a[j * m + i]);
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return norms[l] > norms[r]; });

  const std::size_t k = std::min(m, n);
  SvdFactors out{DenseMatrix(m, k), SingularSpectrum{{}, DenseMatrix(n, n), m, n}};
  out.spectrum.values.reserve(k);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    for (std::size_t i = 0; i < n; ++i) out.spectrum.right_vectors(i, j) = v[src * n + i];
    if (j < k) {
      const double sigma = norms[src];
      out.spectrum.values.push_back(sigma);
      if (sigma > 0.0)
        for (std::size_t i = 0; i < m; ++i) out.left_vectors(rows[i], j) = Complex(a[src * m + i]) / sigma;
    }
  }
  return out;
}

inline bool is_real(const DenseMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Complex& z) { return z.imag() == 0.0; });
}

inline SvdFactors tall_svd(const DenseMatrix& a, const SvdOptions& options) {
  if (is_real(a)) return jacobi_svd<double>(a, options);
  return jacobi_svd<Complex>(a, options);
}

/// Two-pass Gram-Schmidt of v against the first `count` columns of q; returns
/// the norm of what is left.
inline double project_out(std::vector<Complex>& v, const DenseMatrix& q, std::size_t count) {
  const std::size_t n = q.rows();
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < count; ++i) {
      Complex dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, i)) * v[r];
      for (std::size_t r = 0; r < n; ++r) v[r] -= dot * q(r, i);
    }
  double norm = 0.0;
  for (const auto& z : v) norm += std::norm(z);
  return std::sqrt(norm);
}

/// Orthonormalizes the first `count` columns of the square matrix q in order,
/// then extends them to a unitary. Each new column starts from the coordinate
/// vector with the most weight outside the current span, which keeps it well
/// conditioned. Columns that collapse under projection are replaced as well.
inline void complete_unitary(DenseMatrix& q, std::size_t count) {
  const std::size_t n = q.rows();
  std::vector<Complex> v(n);
  std::size_t kept = 0;
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t r = 0; r < n; ++r) v[r] = q(r, j);
    const double norm = project_out(v, q, kept);
    if (norm < 0.5) continue;
    for (std::size_t r = 0; r < n; ++r) q(r, kept) = v[r] / norm;
    ++kept;
  }
  std::vector<double> outside(n, 1.0);
  for (std::size_t j = 0; j < kept; ++j)
    for (std::size_t k = 0; k < n; ++k) outside[k] -= std::norm(q(k, j));
  for (std::size_t j = kept; j < n; ++j) {
    const auto pick = static_cast<std::size_t>(std::max_element(outside.begin(), outside.end()) - outside.begin());
    std::fill(v.begin(), v.end(), Complex{});
    v[pick] = 1.0;
    const double norm = project_out(v, q, j);
    for (std::size_t r = 0; r < n; ++r) {
      q(r, j) = v[r] / norm;
      outside[r] -= std::norm(q(r, j));
    }
  }
}

/// m < n: one-sided Jacobi needs m >= n to converge reliably, so factor
/// a^dagger = U S W^dagger and read off a = W S U^dagger. Left vectors of
/// noise-level columns are not orthogonal to the rest, so only those above
/// max(m, n) * eps * sigma_max are reused; the others, and the n - m trailing
/// ones, come from completing to a unitary.
inline SvdFactors wide_svd(const DenseMatrix& a, const SvdOptions& options) {
  SvdFactors t;
  try {
    t = tall_svd(adjoint(a), options);
  } catch (const NumericalFailure&) {
    throw NumericalFailure("svd: one-sided Jacobi did not converge within " + std::to_string(options.max_sweeps) +
                               " sweeps",
                           a.rows(), a.cols());
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SvdFactors out{t.spectrum.right_vectors, SingularSpectrum{t.spectrum.values, DenseMatrix(n, n), m, n}};
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * t.spectrum.max_value();
  std::size_t filled = 0;
  for (; filled < m && t.spectrum.values[filled] > floor; ++filled)
    for (std::size_t r = 0; r < n; ++r) out.spectrum.right_vectors(r, filled) = t.left_vectors(r, filled);
  complete_unitary(out.spectrum.right_vectors, filled);
  return out;
}

}  // namespace detail

/// Full SVD by one-sided Jacobi. Deterministic; purely real inputs take a real
/// arithmetic path.
inline SvdFactors svd_factors(const DenseMatrix& a, const SvdOptions& options = {}) {
  if (a.empty()) throw InvalidInput("svd: matrix must be nonempty");
  if (a.rows() < a.cols()) return detail::wide_svd(a, options);
  return detail::tall_svd(a, options);
}

inline SingularSpectrum svd(const DenseMatrix& a, const SvdOptions& options = {}) {
  return svd_factors(a, options).spectrum;
}

}  // namespace bilinrank
