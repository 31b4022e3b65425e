#include "actspace/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "actspace/error.hpp"

namespace actspace {

namespace {

// Unnormalized quartic contribution of sample p at query q. Symmetric in its
// arguments bit for bit.
inline double kernel_term(const Point& q, const Point& p, double h2) noexcept {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double d2 = dx * dx + dy * dy;
  if (!(d2 < h2)) return 0.0;
  const double t = 1.0 - d2 / h2;
  return t * t;
}

}  // namespace

Bandwidth::Bandwidth(double h) : h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("bandwidth must be positive and finite, got " + std::to_string(h));
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw DataError("point set is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw DataError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

double quartic_kernel(double u) noexcept {
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double t = 1.0 - u * u;
  return 3.0 / std::numbers::pi * t * t;
}

SpatialBuckets::SpatialBuckets(const PointSet& points, Bandwidth h)
    // Slightly wider than h so rounding in the bucket division can never
    // separate two points closer than h by more than one bucket.
    : width_(h.value() * (1.0 + 1e-9)) {
  for (std::size_t i = 0; i < points.size(); ++i) buckets_[key_of(points[i])].push_back(i);
}

SpatialBuckets::Key SpatialBuckets::pack(std::int64_t bx, std::int64_t by) noexcept {
  return (static_cast<Key>(static_cast<std::uint32_t>(bx)) << 32) | static_cast<std::uint32_t>(by);
}

SpatialBuckets::Key SpatialBuckets::key_of(const Point& p) const noexcept {
  return pack(static_cast<std::int64_t>(std::floor(p.x / width_)), static_cast<std::int64_t>(std::floor(p.y / width_)));
}

void SpatialBuckets::neighbors(const Point& query, std::vector<std::size_t>& out, bool sorted) const {
  const auto bx = static_cast<std::int64_t>(std::floor(query.x / width_));
  const auto by = static_cast<std::int64_t>(std::floor(query.y / width_));
  const std::size_t first = out.size();
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      auto it = buckets_.find(pack(bx + dx, by + dy));
      if (it != buckets_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  if (sorted) std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

KernelDensity::KernelDensity(PointSet points, Bandwidth h)
    : points_(std::move(points)), h_(h), buckets_(points_, h) {}

double KernelDensity::normalize(double kernel_sum) const noexcept {
  const double h = h_.value();
  return kernel_sum * (3.0 / (std::numbers::pi * h * h)) / static_cast<double>(points_.size());
}

double KernelDensity::operator()(const Point& query) const {
  const double h2 = h_.value() * h_.value();
  std::vector<std::size_t> candidates;
  buckets_.neighbors(query, candidates);
  double sum = 0.0;
  for (std::size_t i : candidates) sum += kernel_term(query, points_[i], h2);
  return normalize(sum);
}

std::vector<double> KernelDensity::at_samples() const {
  // Scatter form: sample j adds its term to every neighbor i. Looping j in
  // ascending order reproduces the per-query ascending summation exactly.
  const double h2 = h_.value() * h_.value();
  const std::size_t n = points_.size();
  std::vector<double> sums(n, 0.0);
  std::vector<std::size_t> nb;
  for (std::size_t j = 0; j < n; ++j) {
    nb.clear();
    buckets_.neighbors(points_[j], nb, /*sorted=*/false);
    for (std::size_t i : nb) sums[i] += kernel_term(points_[i], points_[j], h2);
  }
  for (auto& s : sums) s = normalize(s);
  return sums;
}

ScalarField KernelDensity::field(const RasterGrid& grid, unsigned workers) const {
  const double h = h_.value();
  const double h2 = h * h;
  std::vector<double> sums(grid.size(), 0.0);

  auto scatter_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (const Point& p : points_) {
      const std::size_t c0 = grid.col_of(p.x - h);
      const std::size_t c1 = grid.col_of(p.x + h);
      const std::size_t r0 = std::max(grid.row_of(p.y - h), row_begin);
      const std::size_t r1 = std::min(grid.row_of(p.y + h) + 1, row_end);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c <= c1; ++c) {
          const CellIndex idx{r, c};
          sums[grid.linear(idx)] += kernel_term(grid.cell_center(idx), p, h2);
        }
      }
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.nrows())));
  if (workers == 1) {
    scatter_rows(0, grid.nrows());
  } else {
    std::vector<std::thread> pool;
    const std::size_t band = (grid.nrows() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * band;
      const std::size_t e = std::min(grid.nrows(), b + band);
      if (b < e) pool.emplace_back(scatter_rows, b, e);
    }
    for (auto& t : pool) t.join();
  }
  for (auto& s : sums) s = normalize(s);
  return ScalarField(grid, std::move(sums));
}

double evaluate_kde(const PointSet& points, const Point& query, Bandwidth h) {
  const double h2 = h.value() * h.value();
  double sum = 0.0;
  for (const Point& p : points) sum += kernel_term(query, p, h2);
  return sum * (3.0 / (std::numbers::pi * h.value() * h.value())) / static_cast<double>(points.size());
}

ScalarField kde_field(const PointSet& points, const RasterGrid& grid, Bandwidth h) {
  return KernelDensity(points, h).field(grid);
}

std::vector<double> kde_at_samples(const PointSet& points, Bandwidth h) {
  return KernelDensity(points, h).at_samples();
}

RasterGrid analysis_grid(const PointSet& points, Bandwidth h, double cell_size) {
  return RasterGrid::make_centered_lattice(BoundingBox::of(points.points()).padded(h.value()), cell_size);
}

}  // namespace actspace
