#include <gtest/gtest.h>

#include <map>

#include "bilinrank/sectors.hpp"
#include "oracles.hpp"

using namespace bilinrank;

namespace {

const BlockPartition kHalves = BlockPartition::halves(4);

NullspaceBasis basis_from_columns(const DenseMatrix& vectors) {
  return {vectors, 1e-12, vectors.cols(), vectors.rows(), ""};
}

/// Restricted and mixed bundles are expensive enough to share across tests.
const DesignBundle& restricted_bundle() {
  static const DesignBundle b = sample_block_restricted(DesignConfig::for_label(ConfigLabel::A), kHalves, 1);
  return b;
}

const DesignBundle& mixed_bundle() {
  static const DesignBundle b = sample_mixed_restriction(DesignConfig::for_label(ConfigLabel::B), kHalves, 12, 1);
  return b;
}

const SingularSpectrum& spectrum_of(const DesignBundle& b) {
  static std::map<const DesignBundle*, SingularSpectrum> cache;
  auto it = cache.find(&b);
  if (it == cache.end()) it = cache.emplace(&b, svd(assemble_design(b))).first;
  return it->second;
}

}  // namespace

TEST(Sectors, MaskSizes) {
  const auto two = build_sector_scheme(kHalves, 4, SectorMode::TwoSector);
  ASSERT_EQ(two.masks.size(), 2u);
  // Within-block entry pairs: 2 blocks * 2 * 2 = 8 of 16 per factor.
  EXPECT_EQ(two.masks[0].size(), 64u);
  EXPECT_EQ(two.masks[1].size(), 192u);
  const auto four = build_sector_scheme(kHalves, 4, SectorMode::FourSector);
  for (const auto& m : four.masks) EXPECT_EQ(m.size(), 64u);
  EXPECT_EQ(four.names, (std::vector<std::string>{"DD", "DO", "OD", "OO"}));
}

TEST(Sectors, DecodingMatchesFeaturePlacement) {
  // Put a single 1 in E(a,b) and rho(f,c); the feature has exactly one nonzero
  // coordinate, which must decode back to (a,b,f,c).
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t c = 0; c < 3; ++c) {
          DenseMatrix e(3, 3), rho(3, 3);
          e(a, b) = 1.0;
          rho(f, c) = 1.0;
          const auto phi = oracle::feature_brute(e, rho);
          Eigen::Index t = 0;
          phi.cwiseAbs().maxCoeff(&t);
          const auto fc = decode_feature_index(static_cast<std::size_t>(t), 3);
          EXPECT_EQ(fc.op_row, a);
          EXPECT_EQ(fc.op_col, b);
          EXPECT_EQ(fc.state_row, f);
          EXPECT_EQ(fc.state_col, c);
        }
}

TEST(Sectors, OffDiagonalOnlyVector) {
  const auto scheme = build_sector_scheme(kHalves, 4, SectorMode::TwoSector);
  DenseMatrix v(256, 1);
  v(scheme.masks[1][5], 0) = 1.0;
  const auto w = sector_weights(basis_from_columns(v), scheme);
  EXPECT_EQ(w.weight(kBlockOffDiagonal), 1.0);
  EXPECT_EQ(w.weight(kBlockDiagonal), 0.0);
}

TEST(Sectors, UniformVectorInFourSectors) {
  const auto scheme = build_sector_scheme(kHalves, 4, SectorMode::FourSector);
  DenseMatrix v(256, 1);
  for (std::size_t t = 0; t < 256; ++t) v(t, 0) = 1.0 / 16.0;
  const auto w = sector_weights(basis_from_columns(v), scheme);
  for (double x : w.weights) EXPECT_NEAR(x, 0.25, 1e-15);
  const auto dom = dominant_sector(w);
  EXPECT_TRUE(dom.tie);
  EXPECT_EQ(dom.name, "DD");
}

TEST(Sectors, EmptyNullspaceIsUndefined) {
  const auto spectrum = svd(DenseMatrix::identity(16));
  const auto basis = nullspace_basis(spectrum, 1e-10);
  EXPECT_EQ(basis.dimension, 0u);
  const auto w = sector_weights(basis, build_sector_scheme(BlockPartition::halves(2), 2, SectorMode::TwoSector));
  EXPECT_FALSE(w.defined());
  EXPECT_THROW(dominant_sector(w), InvalidInput);
  EXPECT_THROW(w.weight(kBlockDiagonal), InvalidInput);
}

TEST(Sectors, LengthMismatchRejected) {
  DenseMatrix v(81, 1);
  v(0, 0) = 1.0;
  EXPECT_THROW(sector_weights(basis_from_columns(v), build_sector_scheme(kHalves, 4, SectorMode::TwoSector)),
               InvalidInput);
}

TEST(Sectors, NullspaceBasisIsOrthonormalAndAnnihilated) {
  const auto& b = restricted_bundle();
  const auto basis = nullspace_basis(spectrum_of(b), 1e-12);
  ASSERT_EQ(basis.dimension, 192u);
  EXPECT_LT(frobenius_distance(adjoint(basis.vectors) * basis.vectors, DenseMatrix::identity(192)), 1e-11);
  EXPECT_LT(frobenius_norm(assemble_design(b) * basis.vectors), 1e-11);
}

TEST(Sectors, RestrictedNullspaceIsEntirelyOffDiagonal) {
  const auto& b = restricted_bundle();
  const auto w = sector_weights(nullspace_basis(spectrum_of(b), 1e-12),
                                build_sector_scheme(kHalves, 4, SectorMode::TwoSector));
  EXPECT_NEAR(w.weight(kBlockOffDiagonal), 1.0, 1e-10);
  EXPECT_EQ(dominant_sector(w).name, kBlockOffDiagonal);
  EXPECT_FALSE(dominant_sector(w).tie);
}

TEST(Sectors, MixedMatchesProjectorTraceOracle) {
  const auto& b = mixed_bundle();
  const auto basis = nullspace_basis(spectrum_of(b), 1e-12);
  for (auto mode : {SectorMode::TwoSector, SectorMode::FourSector}) {
    const auto scheme = build_sector_scheme(kHalves, 4, mode);
    const auto w = sector_weights(basis, scheme);
    const auto ref = oracle::projector_trace_weights(b, scheme.masks);
    EXPECT_EQ(basis.dimension, ref.nullspace_dim);
    double sum = 0.0;
    for (std::size_t s = 0; s < w.weights.size(); ++s) {
      EXPECT_NEAR(w.weights[s], ref.weights[s], 1e-8) << scheme.names[s];
      sum += w.weights[s];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  const double off = sector_weights(basis, build_sector_scheme(kHalves, 4, SectorMode::TwoSector))
                         .weight(kBlockOffDiagonal);
  EXPECT_GT(off, 0.5);
  EXPECT_LT(off, 1.0);
}

TEST(Sectors, TwoSectorSplitIsSumOfFour) {
  const auto basis = nullspace_basis(spectrum_of(mixed_bundle()), 1e-12);
  const auto two = sector_weights(basis, build_sector_scheme(kHalves, 4, SectorMode::TwoSector));
  const auto four = sector_weights(basis, build_sector_scheme(kHalves, 4, SectorMode::FourSector));
  EXPECT_NEAR(two.weights[0], four.weights[0], 1e-14);
  EXPECT_NEAR(two.weights[1], four.weights[1] + four.weights[2] + four.weights[3], 1e-14);
}

TEST(Sectors, BasisInvariance) {
  const auto basis = nullspace_basis(spectrum_of(mixed_bundle()), 1e-12);
  const auto scheme = build_sector_scheme(kHalves, 4, SectorMode::FourSector);
  const auto base = sector_weights(basis, scheme);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto rotated = basis;
    rotated.vectors = basis.vectors * random_unitary(basis.dimension, seed);
    const auto w = sector_weights(rotated, scheme);
    for (std::size_t s = 0; s < w.weights.size(); ++s) EXPECT_NEAR(w.weights[s], base.weights[s], 1e-10);
  }
}

TEST(Sectors, SingleBlockPartitionPutsEverythingOnDiagonal) {
  const auto scheme = build_sector_scheme(BlockPartition::single_block(4), 4, SectorMode::TwoSector);
  EXPECT_EQ(scheme.masks[0].size(), 256u);
  EXPECT_TRUE(scheme.masks[1].empty());
}

TEST(Sectors, DominantSectorPrefersLargest) {
  SectorWeights w{{"DD", "DO", "OD", "OO"}, {0.1, 0.2, 0.3, 0.4}, 1e-12, 4};
  EXPECT_EQ(dominant_sector(w).name, "OO");
  EXPECT_FALSE(dominant_sector(w).tie);
  w.weights = {0.1, 0.4, 0.1, 0.4};
  EXPECT_EQ(dominant_sector(w).name, "DO");
  EXPECT_TRUE(dominant_sector(w).tie);
  EXPECT_THROW(parse_sector_mode("three"), InvalidInput);
}
