#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bilinrank/error.hpp"
#include "bilinrank/random.hpp"

namespace bilinrank {

using Complex = std::complex<double>;

/// Largest row or column count any constructed product may have.
inline constexpr std::size_t kMaxDimension = 4096;

/// Dense complex matrix, row-major. Entries are always finite: every factory
/// that accepts external data checks this, and arithmetic on finite inputs of
/// the sizes handled here cannot overflow.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw InvalidInput("matrix dimensions must be positive");
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw InvalidInput("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
      throw InvalidInput("matrix data length " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidInput("matrix entries must be finite");
      }
    }
  }

  /// Build from nested rows, e.g. {{1, 2}, {3, 4}}.
  static DenseMatrix from_rows(const std::vector<std::vector<Complex>>& rows) {
    if (rows.empty() || rows.front().empty()) throw InvalidInput("matrix must be nonempty");
    const std::size_t cols = rows.front().size();
    std::vector<Complex> data;
    data.reserve(rows.size() * cols);
    for (const auto& row : rows) {
      if (row.size() != cols) throw InvalidInput("ragged matrix rows");
      data.insert(data.end(), row.begin(), row.end());
    }
    return DenseMatrix(rows.size(), cols, std::move(data));
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> values) {
    DenseMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<Complex>& data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidInput("multiply: inner dimensions " + std::to_string(a.cols()) + " and " +
                       std::to_string(b.rows()) + " differ");
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) { return multiply(a, b); }

inline DenseMatrix scaled(const DenseMatrix& a, Complex factor) {
  DenseMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (auto& z : out.row(r)) z *= factor;
  return out;
}

/// a + factor * b
inline DenseMatrix add_scaled(const DenseMatrix& a, const DenseMatrix& b, Complex factor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("add: shape mismatch");
  DenseMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    const auto src = b.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) dst[c] += factor * src[c];
  }
  return out;
}

inline double frobenius_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

/// Frobenius norm of a - b.
inline double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("distance: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) sum += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(sum);
}

inline Complex trace(const DenseMatrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

/// max |a_ij - conj(a_ji)|
inline double hermitian_deviation(const DenseMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  double dev = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c) dev = std::max(dev, std::abs(a(r, c) - std::conj(a(c, r))));
  return dev;
}

/// (a + a^dagger) / 2, exactly Hermitian in floating point.
inline DenseMatrix hermitian_part(const DenseMatrix& a) {
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    out(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < a.cols(); ++c) {
      out(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
      out(c, r) = std::conj(out(r, c));
    }
  }
  return out;
}

/// Kronecker product; entry (a*Y.rows + c, b*Y.cols + e) = X(a,b) * Y(c,e).
inline DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y, std::size_t max_dim = kMaxDimension) {
  if (x.empty() || y.empty()) throw InvalidInput("kron: operands must be nonempty");
  const std::size_t rows = x.rows() * y.rows();
  const std::size_t cols = x.cols() * y.cols();
  if (rows > max_dim || cols > max_dim) {
    throw InvalidInput("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " exceeds the maximum dimension " + std::to_string(max_dim));
  }
  DenseMatrix out(rows, cols);
  for (std::size_t a = 0; a < x.rows(); ++a)
    for (std::size_t b = 0; b < x.cols(); ++b) {
      const Complex xab = x(a, b);
      for (std::size_t c = 0; c < y.rows(); ++c)
        for (std::size_t e = 0; e < y.cols(); ++e) out(a * y.rows() + c, b * y.cols() + e) = xab * y(c, e);
    }
  return out;
}

/// Column-major stacking into a column vector: output index c*rows + r holds X(r, c).
inline DenseMatrix vec(const DenseMatrix& x) {
  if (x.empty()) throw InvalidInput("vec: matrix must be nonempty");
  DenseMatrix out(x.rows() * x.cols(), 1);
  for (std::size_t c = 0; c < x.cols(); ++c)
    for (std::size_t r = 0; r < x.rows(); ++r) out(c * x.rows() + r, 0) = x(r, c);
  return out;
}

/// Columns [first, first + count) of a.
inline DenseMatrix column_block(const DenseMatrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols() || count == 0) throw InvalidInput("column_block: range out of bounds");
  DenseMatrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = a(r, first + c);
  return out;
}

inline DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (auto& z : m.row(r)) z = rng.complex_normal();
  return m;
}

inline DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  return random_gaussian(rows, cols, rng);
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix
/// (R with positive diagonal). Each column is orthogonalized twice so that
/// U^dagger U = I holds to roundoff at any size used here.
inline DenseMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidInput("random_unitary: dimension must be positive");
  const DenseMatrix g = random_gaussian(dim, dim, seed);
  // q[c] is column c.
  std::vector<std::vector<Complex>> q(dim, std::vector<Complex>(dim));
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) q[c][r] = g(r, c);

  for (std::size_t c = 0; c < dim; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < c; ++k) {
        Complex proj{};
        for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q[k][r]) * q[c][r];
        for (std::size_t r = 0; r < dim; ++r) q[c][r] -= proj * q[k][r];
      }
    }
    double norm = 0.0;
    for (const auto& z : q[c]) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (auto& z : q[c]) z /= norm;
  }

  DenseMatrix u(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) u(r, c) = q[c][r];
  return u;
}

}  // namespace bilinrank
