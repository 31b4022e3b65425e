#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "actspace/grid.hpp"

namespace actspace {

enum class Connectivity { Four = 4, Eight = 8 };

// Parses "4" or "8". Throws UsageError otherwise.
Connectivity parse_connectivity(int neighbors);

struct Components {
  std::size_t count = 0;
  // Label in [0, count) for member cells, -1 elsewhere. Labels are numbered
  // in row-major order of each component's first cell.
  std::vector<std::int64_t> labels;
};

Components connected_components(const CellSet& cells, Connectivity conn);

/// A connected component of the superlevel filtration of the ranking.
/// Levels are ranking values: the component appears once the threshold drops
/// to birth_alpha and merges into an older component at death_alpha. The
/// oldest component of each connected piece never merges and dies at 0.
struct PersistencePair {
  double birth_alpha = 0.0;
  double death_alpha = 0.0;
  CellIndex birth_cell{};

  double persistence() const noexcept { return birth_alpha - death_alpha; }
};

enum class CurveKind { MassVolume, Betti, Persistence };

struct SummaryCurve {
  CurveKind kind{};
  std::vector<double> levels;
  std::vector<double> values;
};

// {step, 2*step, ...} strictly below 1; the default curve levels for step 0.01
// are 0.01 .. 0.99.
std::vector<double> default_levels(double step = 0.01);
// {0, step, 2*step, ..., 1}.
std::vector<double> default_thresholds(double step = 0.01);

// Volume of each level set: member count times cell area.
SummaryCurve mass_volume_curve(const ScalarField& rank_field, std::span<const double> levels);

// Number of connected components of each level set.
SummaryCurve betti_curve(const ScalarField& rank_field, std::span<const double> levels, Connectivity conn);

/// Elder-rule persistence of the superlevel filtration of rank_field.
///
/// Cells are processed in decreasing ranking; cells with equal ranking form a
/// batch handled in row-major order. Within a batch, every cell without an
/// already-processed strictly higher neighbor births a component before any
/// union happens. On a merge the component with the smaller birth dies at
/// the current level; between equal births the one whose birth cell comes
/// later in row-major order dies. Cells with ranking 0 never enter. Merges
/// that kill a component at its own birth level carry no persistence and
/// are not reported.
///
/// Returned pairs are sorted by decreasing persistence, then by birth cell.
std::vector<PersistencePair> persistence_pairs(const ScalarField& rank_field, Connectivity conn);

// Number of pairs whose persistence is at least t, for each threshold t.
SummaryCurve persistence_curve(std::span<const PersistencePair> pairs, std::span<const double> thresholds);

}  // namespace actspace
