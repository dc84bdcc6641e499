#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bilinrank/error.hpp"
#include "bilinrank/matrix.hpp"
#include "bilinrank/svd.hpp"

namespace bilinrank {

/// Strictly increasing tolerances, all in (0, 1).
class ToleranceGrid {
 public:
  explicit ToleranceGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("tolerance grid must be nonempty");
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const double t = values_[k];
      if (!std::isfinite(t) || !(t > 0.0) || !(t < 1.0))
        throw InvalidInput("tolerance grid values must lie in (0, 1), found " + std::to_string(t));
      if (k > 0 && !(t > values_[k - 1])) throw InvalidInput("tolerance grid must be strictly increasing");
    }
  }

  /// count points, log-spaced from start to stop inclusive.
  static ToleranceGrid log_spaced(double start, double stop, std::size_t count) {
    if (count == 0) throw InvalidInput("tolerance grid count must be positive");
    if (!(start > 0.0) || !(stop > 0.0)) throw InvalidInput("tolerance grid endpoints must be positive");
    if (count == 1) {
      if (start != stop) throw InvalidInput("a one-point grid needs start == stop");
      return ToleranceGrid({start});
    }
    const double lo = std::log10(start);
    const double step = (std::log10(stop) - lo) / static_cast<double>(count - 1);
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = std::pow(10.0, lo + step * static_cast<double>(k));
    v.front() = start;
    v.back() = stop;
    return ToleranceGrid(std::move(v));
  }

  /// 29 points from 1e-16 to 1e-2, half a decade apart.
  static ToleranceGrid default_grid() { return log_spaced(1e-16, 1e-2, 29); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  bool operator==(const ToleranceGrid&) const = default;

 private:
  std::vector<double> values_;
};

/// rank_tau and nullity_tau over a grid.
struct RankProfile {
  ToleranceGrid grid = ToleranceGrid::default_grid();
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> nullities;
  std::size_t ambient_dim = 0;
  std::string source_label;

  void validate() const {
    if (ranks.size() != grid.size() || nullities.size() != grid.size())
      throw InvalidInput("rank profile: ranks/nullities must match the grid length");
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      if (ranks[k] > ambient_dim || nullities[k] != ambient_dim - ranks[k])
        throw InvalidInput("rank profile: nullity != ambient_dim - rank at grid index " + std::to_string(k));
      if (k > 0 && ranks[k] > ranks[k - 1])
        throw InvalidInput("rank profile: rank increases with tolerance at grid index " + std::to_string(k));
    }
  }

  /// Same numbers; the label is bookkeeping only.
  bool same_values(const RankProfile& other) const {
    return grid == other.grid && ranks == other.ranks && nullities == other.nullities &&
           ambient_dim == other.ambient_dim;
  }

  std::size_t max_rank() const { return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()); }
};

/// Maximal run of grid points with constant rank; indices inclusive.
struct Plateau {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  std::size_t rank_value = 0;
  double span_decades = 0.0;

  std::size_t length() const { return end_index - start_index + 1; }
  bool operator==(const Plateau&) const = default;
};

inline void check_tolerance(double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) throw InvalidInput("tolerance must be positive and finite");
}

/// |{k : sigma_k > tau * sigma_max}|, 0 for the zero matrix. Binary search on
/// the sorted spectrum.
inline std::size_t rank_at_tolerance(const SingularSpectrum& spectrum, double tau) {
  check_tolerance(tau);
  const double sigma_max = spectrum.max_value();
  if (!(sigma_max > 0.0)) return 0;
  const double threshold = tau * sigma_max;
  const auto it = std::partition_point(spectrum.values.begin(), spectrum.values.end(),
                                       [&](double s) { return s > threshold; });
  return static_cast<std::size_t>(it - spectrum.values.begin());
}

inline std::size_t nullity_at_tolerance(std::size_t rank, std::size_t ambient_dim) {
  if (rank > ambient_dim)
    throw InvalidInput("rank " + std::to_string(rank) + " exceeds ambient dimension " + std::to_string(ambient_dim) +
                       "; the ambient dimension is mis-specified");
  return ambient_dim - rank;
}

/// Thresholds a cached spectrum at every grid point.
inline RankProfile sweep(const SingularSpectrum& spectrum, const ToleranceGrid& grid, std::size_t ambient_dim,
                         std::string source_label = {}) {
  RankProfile profile{grid, {}, {}, ambient_dim, std::move(source_label)};
  profile.ranks.reserve(grid.size());
  profile.nullities.reserve(grid.size());
  for (double tau : grid.values()) {
    const std::size_t r = rank_at_tolerance(spectrum, tau);
    profile.ranks.push_back(r);
    profile.nullities.push_back(nullity_at_tolerance(r, ambient_dim));
  }
  return profile;
}

/// One SVD, then sweep the cached spectrum.
inline RankProfile sweep(const DenseMatrix& a, const ToleranceGrid& grid, std::size_t ambient_dim,
                         std::string source_label = {}) {
  return sweep(svd(a), grid, ambient_dim, std::move(source_label));
}

/// Run-length encoding of the rank sequence.
inline std::vector<Plateau> detect_plateaus(const RankProfile& profile) {
  if (profile.ranks.empty()) throw InvalidInput("detect_plateaus: empty profile");
  std::vector<Plateau> out;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= profile.ranks.size(); ++k) {
    if (k == profile.ranks.size() || profile.ranks[k] != profile.ranks[start]) {
      const double span = std::log10(profile.grid[k - 1] / profile.grid[start]);
      out.push_back({start, k - 1, profile.ranks[start], span});
      start = k;
    }
  }
  return out;
}

/// Real 2m x 2n embedding [[Re A, -Im A], [Im A, Re A]].
struct RealifiedMatrix {
  DenseMatrix matrix;
};

inline RealifiedMatrix realify(const DenseMatrix& a) {
  if (a.empty()) throw InvalidInput("realify: matrix must be nonempty");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix out(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double re = a(r, c).real();
      const double im = a(r, c).imag();
      out(r, c) = re;
      out(r, n + c) = -im;
      out(m + r, c) = im;
      out(m + r, n + c) = re;
    }
  return {std::move(out)};
}

}  // namespace bilinrank
