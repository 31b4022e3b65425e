#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actspace/grid.hpp"
#include "actspace/kde.hpp"
#include "actspace/mixture.hpp"
#include "actspace/ranking.hpp"
#include "actspace/topology.hpp"

namespace actspace {

struct AnalysisConfig {
  double bandwidth = 0.0;
  std::optional<double> cell_size;  // defaults to bandwidth / 4
  Connectivity connectivity = Connectivity::Eight;
  double step = 0.01;
  std::vector<double> gammas;  // level sets to export
  std::optional<BoundingBox> bbox;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  double effective_cell_size() const { return cell_size.value_or(bandwidth / 4.0); }
  // Throws UsageError on an invalid combination.
  void validate() const;
};

/// Everything the density-ranking pipeline derives from one point set.
struct Analysis {
  RasterGrid grid;
  ScalarField density;
  std::vector<double> sample_density;
  RankingIndex index;
  ScalarField rank;
  std::vector<double> sample_alpha;
  SummaryCurve mass_volume;
  SummaryCurve betti;
  std::vector<PersistencePair> pairs;
  SummaryCurve persistence;
};

Analysis analyze(const PointSet& points, const AnalysisConfig& config);

// Levels 0.05, 0.10, ..., 0.95 used by the estimator comparison.
std::vector<double> benchmark_levels();

/// Symmetric-difference errors of one simulated sample, per level, for the
/// density-ranking level sets {alpha >= 1 - gamma} and for the raw-density
/// level sets {p >= gamma * max p}.
struct ReplicationErrors {
  std::vector<double> dr_anchor;
  std::vector<double> dr_road;
  std::vector<double> kde_anchor;
  std::vector<double> kde_road;
};

ReplicationErrors run_replication(const MixtureModel& model, std::size_t n, Seed seed, Bandwidth h, double cell_size,
                                  std::span<const double> gammas);

struct SeriesSummary {
  std::vector<double> mean;
  std::vector<double> stderr_;  // empty when fewer than two replications
};

struct BenchmarkSummary {
  std::vector<double> gammas;
  SeriesSummary dr_anchor, dr_road, kde_anchor, kde_road;
};

// Runs `reps` replications with seeds seed, seed+1, ... using up to
// `workers` threads. Results do not depend on the worker count.
std::vector<ReplicationErrors> run_benchmark(const MixtureModel& model, std::size_t n, std::size_t reps,
                                             std::uint64_t seed, Bandwidth h, double cell_size,
                                             std::span<const double> gammas, unsigned workers);

BenchmarkSummary summarize(std::span<const double> gammas, std::span<const ReplicationErrors> runs);

}  // namespace actspace
