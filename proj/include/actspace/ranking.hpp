#pragma once

#include <span>
#include <vector>

#include "actspace/grid.hpp"

namespace actspace {

/// Sorted sample densities. alpha(d) is the fraction of samples whose
/// density does not exceed d; ties count toward the rank, so the densest
/// sample(s) always rank exactly 1.
class RankingIndex {
 public:
  explicit RankingIndex(std::span<const double> sample_densities);

  double alpha(double density) const noexcept;
  std::span<const double> sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

inline RankingIndex build_ranking_index(std::span<const double> sample_densities) {
  return RankingIndex(sample_densities);
}

inline double alpha_at(const RankingIndex& index, double density) noexcept { return index.alpha(density); }

// Cell-wise ranking of a density field; values in [0, 1].
ScalarField rank_field(const RankingIndex& index, const ScalarField& density_field);

// alpha of each sample, in the original order: R_i / n.
std::vector<double> sample_rankings(const RankingIndex& index, std::span<const double> sample_densities);

// Cells with ranking >= 1 - gamma. Throws UsageError unless 0 <= gamma <= 1.
CellSet level_set(const ScalarField& rank_field, double gamma);

}  // namespace actspace
