// Rank staircase of a block-restricted design next to a weakly perturbed one,
// followed by the sector split of the restricted design's nullspace.

#include <cstdio>

#include "bilinrank/bilinrank.hpp"

int main() {
  using namespace bilinrank;
  const auto config = DesignConfig::for_label(ConfigLabel::A);
  const auto partition = BlockPartition::halves(config.d);
  const auto grid = ToleranceGrid::default_grid();

  const auto restricted = sample_block_restricted(config, partition, 1);
  const auto perturbed = sample_block_perturbed(config, partition, 1e-6, 1);

  const auto spectrum = svd(assemble_design(restricted));
  const auto a = sweep(spectrum, grid, config.ambient_dim());
  const auto b = sweep(assemble_design(perturbed), grid, config.ambient_dim());

  std::printf("%-12s %10s %10s\n", "tolerance", "restricted", "perturbed");
  for (std::size_t k = 0; k < grid.size(); ++k) std::printf("%-12.3e %10zu %10zu\n", grid[k], a.ranks[k], b.ranks[k]);

  const auto weights = sector_weights(nullspace_basis(spectrum, 1e-12),
                                      build_sector_scheme(partition, config.d, SectorMode::FourSector));
  for (std::size_t s = 0; s < weights.names.size(); ++s)
    std::printf("%-4s %.6f\n", weights.names[s].c_str(), weights.weights[s]);
  return 0;
}
