#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bilinrank/error.hpp"
#include "bilinrank/matrix.hpp"
#include "bilinrank/random.hpp"
#include "bilinrank/svd.hpp"

namespace bilinrank {

enum class ConfigLabel { A, B, C, Custom };

inline std::string to_string(ConfigLabel label) {
  switch (label) {
    case ConfigLabel::A: return "A";
    case ConfigLabel::B: return "B";
    case ConfigLabel::C: return "C";
    case ConfigLabel::Custom: return "custom";
  }
  return "custom";
}

inline ConfigLabel parse_config_label(std::string_view text) {
  if (text == "A") return ConfigLabel::A;
  if (text == "B") return ConfigLabel::B;
  if (text == "C") return ConfigLabel::C;
  if (text == "custom") return ConfigLabel::Custom;
  throw InvalidInput("unknown config label '" + std::string(text) + "'");
}

/// Problem shape: Hilbert-space dimension and family sizes.
struct DesignConfig {
  std::size_t d = 4;
  std::size_t n_operators = 16;
  std::size_t n_states = 16;
  ConfigLabel label = ConfigLabel::A;

  std::size_t ambient_dim() const { return d * d * d * d; }

  /// A is (16, 16); B and C are (20, 20).
  static DesignConfig for_label(ConfigLabel label, std::size_t d = 4) {
    switch (label) {
      case ConfigLabel::A: return {d, 16, 16, label};
      case ConfigLabel::B:
      case ConfigLabel::C: return {d, 20, 20, label};
      case ConfigLabel::Custom: break;
    }
    throw InvalidInput("config label 'custom' has no preset shape");
  }

  void validate() const {
    if (d < 2) throw InvalidInput("config.d: must be at least 2");
    if (n_operators == 0) throw InvalidInput("config.n_E: must be positive");
    if (n_states == 0) throw InvalidInput("config.n_rho: must be positive");
    if (label == ConfigLabel::A && (n_operators != 16 || n_states != 16))
      throw InvalidInput("config: label A requires (n_E, n_rho) = (16, 16)");
    if ((label == ConfigLabel::B || label == ConfigLabel::C) && (n_operators != 20 || n_states != 20))
      throw InvalidInput("config: labels B and C require (n_E, n_rho) = (20, 20)");
  }

  bool operator==(const DesignConfig&) const = default;
};

enum class OperatorKind { GenericHermitian, BlockDiagonal, BlockPerturbed, Augmented };
enum class StateKind { Density, BlockDiagonalDensity, SubspaceRestricted, Augmented };

inline std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::GenericHermitian: return "generic-hermitian";
    case OperatorKind::BlockDiagonal: return "block-diagonal";
    case OperatorKind::BlockPerturbed: return "block-perturbed";
    case OperatorKind::Augmented: return "augmented";
  }
  return "";
}

inline std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Density: return "density";
    case StateKind::BlockDiagonalDensity: return "block-diagonal-density";
    case StateKind::SubspaceRestricted: return "subspace-restricted";
    case StateKind::Augmented: return "augmented";
  }
  return "";
}

inline OperatorKind parse_operator_kind(std::string_view text) {
  for (auto kind : {OperatorKind::GenericHermitian, OperatorKind::BlockDiagonal, OperatorKind::BlockPerturbed,
                    OperatorKind::Augmented})
    if (to_string(kind) == text) return kind;
  throw InvalidInput("unknown operator kind '" + std::string(text) + "'");
}

inline StateKind parse_state_kind(std::string_view text) {
  for (auto kind : {StateKind::Density, StateKind::BlockDiagonalDensity, StateKind::SubspaceRestricted,
                    StateKind::Augmented})
    if (to_string(kind) == text) return kind;
  throw InvalidInput("unknown state kind '" + std::string(text) + "'");
}

struct OperatorSample {
  DenseMatrix matrix;
  OperatorKind kind = OperatorKind::GenericHermitian;
  bool operator==(const OperatorSample&) const = default;
};

struct StateSample {
  DenseMatrix matrix;
  StateKind kind = StateKind::Density;
  bool operator==(const StateSample&) const = default;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdSlack = 1e-10;

/// True when m + slack*I admits a Cholesky factorization, i.e. every
/// eigenvalue of the Hermitian matrix m is above -slack.
inline bool is_positive_semidefinite(const DenseMatrix& m, double slack = kPsdSlack) {
  const std::size_t n = m.rows();
  std::vector<Complex> l(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j).real() + slack;
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l[j * n + k]);
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * std::conj(l[j * n + k]);
      l[i * n + j] = s / ljj;
    }
  }
  return true;
}

/// Ordered, disjoint blocks covering {0, ..., d-1}.
struct BlockPartition {
  std::vector<std::vector<std::size_t>> blocks;

  /// Two contiguous halves; for d = 4 this is {0,1},{2,3}.
  static BlockPartition halves(std::size_t d) {
    BlockPartition p;
    const std::size_t first = (d + 1) / 2;
    p.blocks.emplace_back();
    p.blocks.emplace_back();
    for (std::size_t i = 0; i < d; ++i) p.blocks[i < first ? 0 : 1].push_back(i);
    if (p.blocks[1].empty()) p.blocks.pop_back();
    return p;
  }

  static BlockPartition single_block(std::size_t d) {
    BlockPartition p;
    p.blocks.emplace_back();
    for (std::size_t i = 0; i < d; ++i) p.blocks[0].push_back(i);
    return p;
  }

  /// Parses "0,1/2,3": blocks separated by '/', indices by ','.
  static BlockPartition parse(std::string_view text) {
    BlockPartition p;
    std::string spec(text);
    std::stringstream blocks(spec);
    std::string block;
    while (std::getline(blocks, block, '/')) {
      std::vector<std::size_t> indices;
      std::stringstream items(block);
      std::string item;
      while (std::getline(items, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
          throw InvalidInput("partition: bad index '" + item + "' in '" + spec + "'");
        indices.push_back(std::stoul(item));
      }
      if (indices.empty()) throw InvalidInput("partition: empty block in '" + spec + "'");
      p.blocks.push_back(std::move(indices));
    }
    if (p.blocks.empty()) throw InvalidInput("partition: empty specification");
    return p;
  }

  std::string format() const {
    std::string out;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b) out += '/';
      for (std::size_t i = 0; i < blocks[b].size(); ++i) {
        if (i) out += ',';
        out += std::to_string(blocks[b][i]);
      }
    }
    return out;
  }

  void validate(std::size_t d) const {
    std::vector<int> seen(d, 0);
    for (const auto& block : blocks) {
      if (block.empty()) throw InvalidInput("partition: blocks must be nonempty");
      for (std::size_t i : block) {
        if (i >= d) throw InvalidInput("partition: index " + std::to_string(i) + " out of range for d = " + std::to_string(d));
        if (seen[i]++) throw InvalidInput("partition: index " + std::to_string(i) + " appears twice");
      }
    }
    for (std::size_t i = 0; i < d; ++i)
      if (!seen[i]) throw InvalidInput("partition: index " + std::to_string(i) + " not covered");
  }

  /// block_of()[i] is the block containing index i. Assumes a valid partition.
  std::vector<std::size_t> block_of(std::size_t d) const {
    std::vector<std::size_t> owner(d);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t i : blocks[b]) owner[i] = b;
    return owner;
  }

  bool operator==(const BlockPartition&) const = default;
};

/// The fixed problem definition: both families plus the partition used by
/// every downstream sector analysis.
struct DesignBundle {
  DesignConfig config;
  std::vector<OperatorSample> operators;
  std::vector<StateSample> states;
  BlockPartition partition;
  std::uint64_t seed = 0;
  std::string preset_label;

  /// Throws InvalidInput naming the first failing field.
  void validate() const {
    config.validate();
    partition.validate(config.d);
    if (operators.size() != config.n_operators)
      throw InvalidInput("operators: expected " + std::to_string(config.n_operators) + " samples, found " +
                         std::to_string(operators.size()));
    if (states.size() != config.n_states)
      throw InvalidInput("states: expected " + std::to_string(config.n_states) + " samples, found " +
                         std::to_string(states.size()));
    for (std::size_t i = 0; i < operators.size(); ++i) {
      const auto field = "operators[" + std::to_string(i) + "]";
      const auto& m = operators[i].matrix;
      if (m.rows() != config.d || m.cols() != config.d) throw InvalidInput(field + ".matrix: expected d x d");
      if (hermitian_deviation(m) > kHermitianTolerance) throw InvalidInput(field + ".matrix: not Hermitian");
    }
    for (std::size_t j = 0; j < states.size(); ++j) {
      const auto field = "states[" + std::to_string(j) + "]";
      const auto& m = states[j].matrix;
      if (m.rows() != config.d || m.cols() != config.d) throw InvalidInput(field + ".matrix: expected d x d");
      if (hermitian_deviation(m) > kHermitianTolerance) throw InvalidInput(field + ".matrix: not Hermitian");
      const Complex tr = trace(m);
      if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTolerance)
        throw InvalidInput(field + ".trace: expected 1, found " + std::to_string(tr.real()));
      if (!is_positive_semidefinite(m)) throw InvalidInput(field + ".matrix: not positive semidefinite");
    }
  }

  bool operator==(const DesignBundle&) const = default;
};

/// phi(E, rho) = vec(E kron rho^T), column-major vec, as a d^4 column vector.
inline DenseMatrix feature_vector(const OperatorSample& e, const StateSample& rho) {
  const std::size_t d = e.matrix.rows();
  if (e.matrix.cols() != d || rho.matrix.rows() != d || rho.matrix.cols() != d)
    throw InvalidInput("feature_vector: operator and state must both be d x d with the same d");
  const std::size_t d2 = d * d;
  DenseMatrix out(d2 * d2, 1);
  // kron entry (a*d + c, b*d + e) = E(a,b) * rho^T(c,e) = E(a,b) * rho(e,c),
  // stored at column * d^2 + row.
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Complex eab = e.matrix(a, b);
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t f = 0; f < d; ++f) out((b * d + f) * d2 + (a * d + c), 0) = eab * rho.matrix(f, c);
    }
  return out;
}

/// Rows phi(E_i, rho_j)^T (no conjugation), row index i * n_rho + j.
inline DenseMatrix assemble_design(const DesignBundle& bundle) {
  bundle.validate();
  const std::size_t n_rho = bundle.states.size();
  const std::size_t cols = bundle.config.ambient_dim();
  DenseMatrix design(bundle.operators.size() * n_rho, cols);
  for (std::size_t i = 0; i < bundle.operators.size(); ++i)
    for (std::size_t j = 0; j < n_rho; ++j) {
      const DenseMatrix phi = feature_vector(bundle.operators[i], bundle.states[j]);
      auto row = design.row(i * n_rho + j);
      for (std::size_t t = 0; t < cols; ++t) row[t] = phi(t, 0);
    }
  return design;
}

namespace detail {

inline DenseMatrix gaussian_hermitian(std::size_t n, Rng& rng) { return hermitian_part(random_gaussian(n, n, rng)); }

/// G G^dagger / tr(G G^dagger) for square complex Gaussian G.
inline DenseMatrix gram_density(std::size_t n, Rng& rng) {
  const DenseMatrix g = random_gaussian(n, n, rng);
  DenseMatrix rho = hermitian_part(multiply(g, adjoint(g)));
  return scaled(rho, 1.0 / trace(rho).real());
}

/// Places the per-block matrices on the block diagonal of a d x d zero matrix.
inline DenseMatrix embed_blocks(std::size_t d, const BlockPartition& partition, const std::vector<DenseMatrix>& parts) {
  DenseMatrix out(d, d);
  for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
    const auto& idx = partition.blocks[b];
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) out(idx[r], idx[c]) = parts[b](r, c);
  }
  return out;
}

inline DenseMatrix block_hermitian(std::size_t d, const BlockPartition& partition, Rng& rng) {
  std::vector<DenseMatrix> parts;
  for (const auto& block : partition.blocks) parts.push_back(gaussian_hermitian(block.size(), rng));
  return embed_blocks(d, partition, parts);
}

/// blockdiag(G_b G_b^dagger) normalized to unit trace.
inline DenseMatrix block_density(std::size_t d, const BlockPartition& partition, Rng& rng) {
  std::vector<DenseMatrix> parts;
  for (const auto& block : partition.blocks) {
    const DenseMatrix g = random_gaussian(block.size(), block.size(), rng);
    parts.push_back(hermitian_part(multiply(g, adjoint(g))));
  }
  DenseMatrix rho = embed_blocks(d, partition, parts);
  return scaled(rho, 1.0 / trace(rho).real());
}

inline double spectral_norm(const DenseMatrix& m) { return svd(m).max_value(); }

}  // namespace detail

/// I.i.d. Gaussian-symmetrized Hermitian operators and Gram-product densities.
inline DesignBundle sample_generic(const DesignConfig& config, std::uint64_t seed,
                                   std::optional<BlockPartition> partition = std::nullopt) {
  config.validate();
  DesignBundle bundle{config, {}, {}, partition.value_or(BlockPartition::halves(config.d)), seed, "generic"};
  bundle.partition.validate(config.d);
  Rng rng(seed);
  for (std::size_t i = 0; i < config.n_operators; ++i)
    bundle.operators.push_back({detail::gaussian_hermitian(config.d, rng), OperatorKind::GenericHermitian});
  for (std::size_t j = 0; j < config.n_states; ++j)
    bundle.states.push_back({detail::gram_density(config.d, rng), StateKind::Density});
  return bundle;
}

/// Same sampling laws as sample_generic, applied within each block; every
/// entry coupling two distinct blocks is exactly zero.
inline DesignBundle sample_block_restricted(const DesignConfig& config, const BlockPartition& partition,
                                            std::uint64_t seed) {
  config.validate();
  partition.validate(config.d);
  DesignBundle bundle{config, {}, {}, partition, seed, "block-restricted"};
  Rng rng(seed);
  for (std::size_t i = 0; i < config.n_operators; ++i)
    bundle.operators.push_back({detail::block_hermitian(config.d, partition, rng), OperatorKind::BlockDiagonal});
  for (std::size_t j = 0; j < config.n_states; ++j)
    bundle.states.push_back({detail::block_density(config.d, partition, rng), StateKind::BlockDiagonalDensity});
  return bundle;
}

inline std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Block-restricted families plus epsilon-scaled generic Hermitian
/// perturbations. States become (rho + epsilon * (K + I)) / trace with
/// ||K||_2 = 1, which keeps them positive semidefinite. epsilon = 0 returns the
/// block-restricted families unchanged.
inline DesignBundle sample_block_perturbed(const DesignConfig& config, const BlockPartition& partition, double epsilon,
                                           std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInput("block-perturbed: epsilon must be >= 0");
  DesignBundle bundle = sample_block_restricted(config, partition, seed);
  bundle.preset_label = "block-perturbed:" + format_real(epsilon);
  if (epsilon == 0.0) return bundle;

  Rng rng(mix_seed(seed, 0x70657274));
  const DenseMatrix id = DenseMatrix::identity(config.d);
  for (auto& op : bundle.operators) {
    op.matrix = add_scaled(op.matrix, detail::gaussian_hermitian(config.d, rng), epsilon);
    op.kind = OperatorKind::BlockPerturbed;
  }
  for (auto& st : bundle.states) {
    DenseMatrix k = detail::gaussian_hermitian(config.d, rng);
    k = scaled(k, 1.0 / detail::spectral_norm(k));
    DenseMatrix rho = add_scaled(st.matrix, add_scaled(k, id, 1.0), epsilon);
    st.matrix = hermitian_part(scaled(rho, 1.0 / trace(rho).real()));
    st.kind = StateKind::Density;
  }
  return bundle;
}

/// Orthonormal (Frobenius) basis of a seeded state_subspace_dim-dimensional
/// subspace of d x d Hermitian matrices: I/sqrt(d) followed by Gram-Schmidt'd
/// generic traceless Hermitian directions, which mix within-block and
/// cross-block coordinates.
inline std::vector<DenseMatrix> mixed_state_subspace(std::size_t d, std::size_t state_subspace_dim, std::uint64_t seed) {
  if (state_subspace_dim < 1 || state_subspace_dim > d * d)
    throw InvalidInput("mixed: state_subspace_dim must lie in [1, d^2]");
  Rng rng(mix_seed(seed, 0x6d697865));
  std::vector<DenseMatrix> basis{scaled(DenseMatrix::identity(d), 1.0 / std::sqrt(static_cast<double>(d)))};
  auto inner = [](const DenseMatrix& x, const DenseMatrix& y) {
    Complex s{};
    for (std::size_t i = 0; i < x.data().size(); ++i) s += std::conj(x.data()[i]) * y.data()[i];
    return s.real();  // real for Hermitian pairs
  };
  while (basis.size() < state_subspace_dim) {
    DenseMatrix h = detail::gaussian_hermitian(d, rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) h = add_scaled(h, b, -inner(b, h));
    const double norm = frobenius_norm(h);
    if (norm < 1e-8) continue;
    basis.push_back(hermitian_part(scaled(h, 1.0 / norm)));
  }
  return basis;
}

/// Generic operators; states drawn from the seeded subspace as
/// I/d + t * H with H a random traceless element of the subspace and t small
/// enough that the result is a density matrix.
inline DesignBundle sample_mixed_restriction(const DesignConfig& config, const BlockPartition& partition,
                                             std::size_t state_subspace_dim, std::uint64_t seed) {
  config.validate();
  partition.validate(config.d);
  const auto basis = mixed_state_subspace(config.d, state_subspace_dim, seed);
  DesignBundle bundle{config, {}, {}, partition, seed, "mixed:" + std::to_string(state_subspace_dim)};
  Rng rng(seed);
  for (std::size_t i = 0; i < config.n_operators; ++i)
    bundle.operators.push_back({detail::gaussian_hermitian(config.d, rng), OperatorKind::GenericHermitian});

  const double dd = static_cast<double>(config.d);
  const DenseMatrix center = scaled(DenseMatrix::identity(config.d), 1.0 / dd);
  for (std::size_t j = 0; j < config.n_states; ++j) {
    DenseMatrix h(config.d, config.d);
    for (std::size_t k = 1; k < basis.size(); ++k) h = add_scaled(h, basis[k], rng.normal());
    DenseMatrix rho = center;
    if (basis.size() > 1) {
      // lambda_min(I/d + t H) >= 1/d - t ||H||_2 = 1/(2d) > 0
      const double t = 0.5 / (dd * detail::spectral_norm(h));
      rho = add_scaled(center, h, t);
    }
    rho = hermitian_part(scaled(rho, 1.0 / trace(rho).real()));
    bundle.states.push_back({std::move(rho), StateKind::SubspaceRestricted});
  }
  return bundle;
}

/// Named sampling preset as used on the command line.
struct Preset {
  enum class Kind { Generic, BlockRestricted, BlockPerturbed, Mixed };
  Kind kind = Kind::Generic;
  double epsilon = 0.0;
  std::size_t state_subspace_dim = 0;

  /// "generic", "block-restricted", "block-perturbed:<eps>", "mixed:<dim>"
  static Preset parse(std::string_view text) {
    const std::string s(text);
    if (s == "generic") return {Kind::Generic};
    if (s == "block-restricted") return {Kind::BlockRestricted};
    auto tail = [&](std::string_view prefix) { return s.substr(prefix.size()); };
    try {
      if (s.starts_with("block-perturbed:")) {
        std::size_t used = 0;
        const std::string num = tail("block-perturbed:");
        const double eps = std::stod(num, &used);
        if (used != num.size() || !(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument(num);
        return {Kind::BlockPerturbed, eps};
      }
      if (s.starts_with("mixed:")) {
        const std::string num = tail("mixed:");
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(num);
        return {Kind::Mixed, 0.0, std::stoul(num)};
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("preset: bad parameter in '" + s + "'");
    }
    throw InvalidInput("unknown preset '" + s + "'");
  }
};

inline DesignBundle sample_preset(const DesignConfig& config, const BlockPartition& partition, const Preset& preset,
                                  std::uint64_t seed) {
  switch (preset.kind) {
    case Preset::Kind::Generic: return sample_generic(config, seed, partition);
    case Preset::Kind::BlockRestricted: return sample_block_restricted(config, partition, seed);
    case Preset::Kind::BlockPerturbed: return sample_block_perturbed(config, partition, preset.epsilon, seed);
    case Preset::Kind::Mixed: return sample_mixed_restriction(config, partition, preset.state_subspace_dim, seed);
  }
  throw InvalidInput("unknown preset kind");
}

/// Matrices stacked as rows vec(M)^T; the row count is the family size.
inline DenseMatrix stacked_family(const std::vector<DenseMatrix>& family) {
  const std::size_t len = family.front().rows() * family.front().cols();
  DenseMatrix out(family.size(), len);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const DenseMatrix v = vec(family[i]);
    for (std::size_t t = 0; t < len; ++t) out(i, t) = v(t, 0);
  }
  return out;
}

/// Dimension of the complex span of a family of matrices, counting singular
/// values above tau * sigma_max of the stacked vec'd family.
inline std::size_t family_span_dim(const std::vector<DenseMatrix>& family, double tau = 1e-10) {
  if (family.empty()) return 0;
  const auto s = svd(stacked_family(family));
  return static_cast<std::size_t>(
      std::count_if(s.values.begin(), s.values.end(), [&](double v) { return v > tau * s.max_value(); }));
}

enum class ModificationMode { AugmentCrossBlock, ReplaceGeneric };

inline std::string to_string(ModificationMode mode) {
  return mode == ModificationMode::AugmentCrossBlock ? "augment-cross-block" : "replace-generic";
}

/// Changes the admissible families. augment-cross-block appends generic
/// Hermitian operators and density states (kind augmented); by default it adds
/// exactly as many of each as the family's span falls short of d^2.
/// replace-generic resamples both families generically at the same sizes.
inline DesignBundle modify_problem(const DesignBundle& bundle, ModificationMode mode, std::uint64_t seed,
                                   std::optional<std::size_t> augment_count = std::nullopt) {
  bundle.validate();
  DesignBundle out = bundle;
  out.config.label = ConfigLabel::Custom;
  out.preset_label = bundle.preset_label + "+" + to_string(mode);
  const std::size_t d = bundle.config.d;

  if (mode == ModificationMode::ReplaceGeneric) {
    const DesignBundle fresh = sample_generic(
        DesignConfig{d, bundle.config.n_operators, bundle.config.n_states, ConfigLabel::Custom}, seed, bundle.partition);
    out.operators = fresh.operators;
    out.states = fresh.states;
    return out;
  }

  auto matrices = [](const auto& samples) {
    std::vector<DenseMatrix> m;
    for (const auto& s : samples) m.push_back(s.matrix);
    return m;
  };
  const std::size_t full = d * d;
  const std::size_t add_ops = augment_count.value_or(full - std::min(full, family_span_dim(matrices(bundle.operators))));
  const std::size_t add_states = augment_count.value_or(full - std::min(full, family_span_dim(matrices(bundle.states))));
  Rng rng(seed);
  for (std::size_t i = 0; i < add_ops; ++i)
    out.operators.push_back({detail::gaussian_hermitian(d, rng), OperatorKind::Augmented});
  for (std::size_t j = 0; j < add_states; ++j)
    out.states.push_back({detail::gram_density(d, rng), StateKind::Augmented});
  out.config.n_operators = out.operators.size();
  out.config.n_states = out.states.size();
  if (add_ops + add_states > 0) out.preset_label += ":" + std::to_string(add_ops) + "x" + std::to_string(add_states);
  return out;
}

}  // namespace bilinrank
