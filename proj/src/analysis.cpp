#include "actspace/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "actspace/error.hpp"

namespace actspace {

void AnalysisConfig::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw UsageError("bandwidth must be positive");
  const double cs = effective_cell_size();
  if (!(cs > 0.0) || !std::isfinite(cs)) throw UsageError("cell size must be positive");
  if (!(step > 0.0 && step <= 0.5)) throw UsageError("level step must lie in (0, 0.5]");
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) throw UsageError("gamma values must lie in [0,1], got " + std::to_string(g));
  }
  if (bbox && !bbox->valid()) throw UsageError("clip box is degenerate");
}

Analysis analyze(const PointSet& points, const AnalysisConfig& config) {
  config.validate();
  const Bandwidth h(config.bandwidth);
  const KernelDensity kde(points, h);
  RasterGrid grid = analysis_grid(points, h, config.effective_cell_size());
  ScalarField density = kde.field(grid, config.workers);
  std::vector<double> sample_density = kde.at_samples();
  RankingIndex index(sample_density);
  ScalarField rank = rank_field(index, density);
  std::vector<double> sample_alpha = sample_rankings(index, sample_density);

  const auto levels = default_levels(config.step);
  SummaryCurve mv = mass_volume_curve(rank, levels);
  SummaryCurve betti = betti_curve(rank, levels, config.connectivity);
  auto pairs = persistence_pairs(rank, config.connectivity);
  SummaryCurve pers = persistence_curve(pairs, default_thresholds(config.step));

  return Analysis{std::move(grid),  std::move(density), std::move(sample_density), std::move(index),
                  std::move(rank),  std::move(sample_alpha), std::move(mv),      std::move(betti),
                  std::move(pairs), std::move(pers)};
}

std::vector<double> benchmark_levels() {
  std::vector<double> g;
  for (int k = 1; k <= 19; ++k) g.push_back(k * 0.05);
  return g;
}

ReplicationErrors run_replication(const MixtureModel& model, std::size_t n, Seed seed, Bandwidth h, double cell_size,
                                  std::span<const double> gammas) {
  const PointSet points = sample(model, n, seed);
  const KernelDensity kde(points, h);
  const RasterGrid grid = analysis_grid(points, h, cell_size);
  const ScalarField density = kde.field(grid);
  const RankingIndex index(kde.at_samples());
  const ScalarField rank = rank_field(index, density);
  const CellMasses masses = cell_masses(model, grid);
  const double peak = density.max();

  ReplicationErrors e;
  for (double gamma : gammas) {
    const CellSet dr = level_set(rank, gamma);
    CellSet raw(grid);
    for (std::size_t i = 0; i < density.size(); ++i) {
      if (density[i] >= gamma * peak) raw.insert(i);
    }
    e.dr_anchor.push_back(symmetric_difference_error(model, masses, dr, SupportTarget::Anchors));
    e.dr_road.push_back(symmetric_difference_error(model, masses, dr, SupportTarget::AnchorsAndRoads));
    e.kde_anchor.push_back(symmetric_difference_error(model, masses, raw, SupportTarget::Anchors));
    e.kde_road.push_back(symmetric_difference_error(model, masses, raw, SupportTarget::AnchorsAndRoads));
  }
  return e;
}

std::vector<ReplicationErrors> run_benchmark(const MixtureModel& model, std::size_t n, std::size_t reps,
                                             std::uint64_t seed, Bandwidth h, double cell_size,
                                             std::span<const double> gammas, unsigned workers) {
  if (reps == 0) throw UsageError("repetitions must be at least 1");
  std::vector<ReplicationErrors> runs(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t r; (r = next++) < reps && !failed;) {
      try {
        runs[r] = run_replication(model, n, Seed{seed + r}, h, cell_size, gammas);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::size_t>(reps, 256)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

namespace {

SeriesSummary summarize_series(std::size_t levels, std::span<const ReplicationErrors> runs,
                               std::vector<double> ReplicationErrors::*series) {
  SeriesSummary s;
  const auto reps = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < levels; ++k) {
    double sum = 0.0;
    for (const auto& r : runs) sum += (r.*series)[k];
    const double mean = sum / reps;
    s.mean.push_back(mean);
    if (runs.size() > 1) {
      double ss = 0.0;
      for (const auto& r : runs) ss += ((r.*series)[k] - mean) * ((r.*series)[k] - mean);
      s.stderr_.push_back(std::sqrt(ss / (reps - 1.0)) / std::sqrt(reps));
    }
  }
  return s;
}

}  // namespace

BenchmarkSummary summarize(std::span<const double> gammas, std::span<const ReplicationErrors> runs) {
  if (runs.empty()) throw UsageError("no replications to summarize");
  BenchmarkSummary out;
  out.gammas.assign(gammas.begin(), gammas.end());
  out.dr_anchor = summarize_series(gammas.size(), runs, &ReplicationErrors::dr_anchor);
  out.dr_road = summarize_series(gammas.size(), runs, &ReplicationErrors::dr_road);
  out.kde_anchor = summarize_series(gammas.size(), runs, &ReplicationErrors::kde_anchor);
  out.kde_road = summarize_series(gammas.size(), runs, &ReplicationErrors::kde_road);
  return out;
}

}  // namespace actspace
