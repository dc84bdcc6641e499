#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilinrank/design.hpp"
#include "bilinrank/error.hpp"
#include "bilinrank/matrix.hpp"
#include "bilinrank/rank.hpp"
#include "bilinrank/svd.hpp"

namespace bilinrank {

/// Orthonormal basis of the numerical nullspace, one vector per column.
/// `vectors` is empty (default-constructed) when the nullspace is trivial.
struct NullspaceBasis {
  DenseMatrix vectors;
  double tolerance = 0.0;
  std::size_t dimension = 0;
  std::size_t vector_length = 0;
  std::string source_label;
};

/// Right singular vectors with sigma_k <= tau * sigma_max, plus the trailing
/// complement columns of V for wide inputs. The count is always
/// cols - rank_at_tolerance(tau).
inline NullspaceBasis nullspace_basis(const SingularSpectrum& spectrum, double tau, std::string source_label = {}) {
  const std::size_t rank = rank_at_tolerance(spectrum, tau);
  const std::size_t n = spectrum.source_cols;
  NullspaceBasis basis{{}, tau, n - rank, n, std::move(source_label)};
  if (basis.dimension > 0) basis.vectors = column_block(spectrum.right_vectors, rank, basis.dimension);
  return basis;
}

enum class SectorMode { TwoSector, FourSector };

inline std::string to_string(SectorMode mode) { return mode == SectorMode::TwoSector ? "two" : "four"; }

inline SectorMode parse_sector_mode(std::string_view text) {
  if (text == "two") return SectorMode::TwoSector;
  if (text == "four") return SectorMode::FourSector;
  throw InvalidInput("sector scheme must be 'two' or 'four', got '" + std::string(text) + "'");
}

/// Entry pairs behind feature coordinate t: phi_t = E(op_row, op_col) * rho(state_row, state_col).
struct FeatureCoordinate {
  std::size_t op_row = 0;
  std::size_t op_col = 0;
  std::size_t state_row = 0;
  std::size_t state_col = 0;
};

/// Inverse of the feature_vector layout: t = (b*d + f) * d^2 + (a*d + c) with
/// kron(E, rho^T) entry (a*d + c, b*d + f) = E(a,b) * rho(f,c).
inline FeatureCoordinate decode_feature_index(std::size_t t, std::size_t d) {
  const std::size_t d2 = d * d;
  const std::size_t kron_row = t % d2;
  const std::size_t kron_col = t / d2;
  return {kron_row / d, kron_col / d, kron_col % d, kron_row % d};
}

/// Coordinate-mask sector projectors derived from the partition alone.
struct SectorScheme {
  SectorMode mode = SectorMode::TwoSector;
  BlockPartition partition;
  std::size_t d = 0;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> masks;

  std::size_t feature_length() const { return d * d * d * d; }
};

inline const std::string kBlockDiagonal = "block-diagonal";
inline const std::string kBlockOffDiagonal = "block-off-diagonal";

/// Two-sector: block-diagonal iff both the E pair and the rho pair stay
/// within one block; everything else is block-off-diagonal. Four-sector splits
/// by (E within?, rho within?) into DD, DO, OD, OO.
inline SectorScheme build_sector_scheme(const BlockPartition& partition, std::size_t d, SectorMode mode) {
  partition.validate(d);
  SectorScheme scheme{mode, partition, d, {}, {}};
  if (mode == SectorMode::TwoSector) {
    scheme.names = {kBlockDiagonal, kBlockOffDiagonal};
  } else {
    scheme.names = {"DD", "DO", "OD", "OO"};
  }
  scheme.masks.resize(scheme.names.size());
  const auto owner = partition.block_of(d);
  for (std::size_t t = 0; t < scheme.feature_length(); ++t) {
    const auto fc = decode_feature_index(t, d);
    const bool op_within = owner[fc.op_row] == owner[fc.op_col];
    const bool state_within = owner[fc.state_row] == owner[fc.state_col];
    std::size_t sector = 0;
    if (mode == SectorMode::TwoSector) {
      sector = (op_within && state_within) ? 0 : 1;
    } else {
      sector = (op_within ? 0 : 2) + (state_within ? 0 : 1);
    }
    scheme.masks[sector].push_back(t);
  }
  return scheme;
}

/// Per-sector fractions of the nullspace's squared norm. `weights` is empty
/// ("undefined") when the nullspace is trivial.
struct SectorWeights {
  std::vector<std::string> names;
  std::vector<double> weights;
  double tolerance = 0.0;
  std::size_t nullspace_dim = 0;

  bool defined() const { return !weights.empty(); }

  double weight(std::string_view name) const {
    for (std::size_t s = 0; s < names.size(); ++s)
      if (names[s] == name) return defined() ? weights[s] : throw InvalidInput("sector weights are undefined");
    throw InvalidInput("no sector named '" + std::string(name) + "'");
  }
};

/// w_s = sum_l ||P_s n_l||^2 / sum_l ||n_l||^2.
inline SectorWeights sector_weights(const NullspaceBasis& basis, const SectorScheme& scheme) {
  if (basis.vector_length != scheme.feature_length())
    throw InvalidInput("sector_weights: nullspace vectors have length " + std::to_string(basis.vector_length) +
                       " but the scheme covers " + std::to_string(scheme.feature_length()) + " coordinates");
  SectorWeights out{scheme.names, {}, basis.tolerance, basis.dimension};
  if (basis.dimension == 0) return out;

  // Row t of the basis matrix holds coordinate t of every n_l.
  std::vector<double> row_mass(basis.vector_length, 0.0);
  for (std::size_t t = 0; t < basis.vector_length; ++t)
    for (const auto& z : basis.vectors.row(t)) row_mass[t] += std::norm(z);
  double total = 0.0;
  for (double m : row_mass) total += m;

  out.weights.resize(scheme.masks.size(), 0.0);
  for (std::size_t s = 0; s < scheme.masks.size(); ++s)
    for (std::size_t t : scheme.masks[s]) out.weights[s] += row_mass[t];
  for (auto& w : out.weights) w /= total;
  return out;
}

struct DominantSector {
  std::string name;
  double weight = 0.0;
  bool tie = false;
};

/// Weights closer than this count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Sector of maximal weight; ties go to the earlier sector in scheme order.
inline DominantSector dominant_sector(const SectorWeights& weights) {
  if (!weights.defined()) throw InvalidInput("dominant_sector: weights are undefined (empty nullspace)");
  std::size_t best = 0;
  for (std::size_t s = 1; s < weights.weights.size(); ++s)
    if (weights.weights[s] > weights.weights[best] + kTieTolerance) best = s;
  bool tie = false;
  for (std::size_t s = 0; s < weights.weights.size(); ++s)
    if (s != best && std::abs(weights.weights[s] - weights.weights[best]) <= kTieTolerance) tie = true;
  return {weights.names[best], weights.weights[best], tie};
}

}  // namespace bilinrank
