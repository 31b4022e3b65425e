#include "actspace/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actspace/error.hpp"

namespace actspace {

RankingIndex::RankingIndex(std::span<const double> sample_densities)
    : sorted_(sample_densities.begin(), sample_densities.end()) {
  if (sorted_.empty()) throw DataError("cannot rank an empty sample");
  for (double d : sorted_) {
    if (!std::isfinite(d)) throw DataError("sample density is not finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double RankingIndex::alpha(double density) const noexcept {
  const auto below = std::upper_bound(sorted_.begin(), sorted_.end(), density) - sorted_.begin();
  return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

ScalarField rank_field(const RankingIndex& index, const ScalarField& density_field) {
  std::vector<double> ranks(density_field.size());
  const auto values = density_field.values();
  std::transform(values.begin(), values.end(), ranks.begin(), [&](double d) { return index.alpha(d); });
  return ScalarField(density_field.grid(), std::move(ranks));
}

std::vector<double> sample_rankings(const RankingIndex& index, std::span<const double> sample_densities) {
  std::vector<double> out(sample_densities.size());
  std::transform(sample_densities.begin(), sample_densities.end(), out.begin(),
                 [&](double d) { return index.alpha(d); });
  return out;
}

CellSet level_set(const ScalarField& rank_field, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw UsageError("level gamma must lie in [0,1], got " + std::to_string(gamma));
  const double threshold = 1.0 - gamma;
  std::vector<std::uint8_t> members(rank_field.size());
  const auto values = rank_field.values();
  for (std::size_t i = 0; i < values.size(); ++i) members[i] = values[i] >= threshold ? 1 : 0;
  return CellSet(rank_field.grid(), std::move(members));
}

}  // namespace actspace
