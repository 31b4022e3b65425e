#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "actspace/grid.hpp"

namespace actspace {

class Bandwidth {
 public:
  explicit Bandwidth(double h);
  double value() const noexcept { return h_; }

 private:
  double h_;
};

/// Non-empty sequence of planar sample locations with finite coordinates.
class PointSet {
 public:
  explicit PointSet(std::vector<Point> points);

  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const noexcept { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

 private:
  std::vector<Point> points_;
};

// (3/pi)(1-u^2)^2 on |u| < 1, zero elsewhere.
double quartic_kernel(double u) noexcept;

/// Square buckets of width h. A disc of radius h around any query meets at
/// most the 3x3 block of buckets around the query's bucket. Each bucket holds
/// point indices in ascending order.
class SpatialBuckets {
 public:
  SpatialBuckets(const PointSet& points, Bandwidth h);

  // Appends to out the indices of every point in the 3x3 neighborhood of the
  // query's bucket, in ascending index order unless `sorted` is false.
  void neighbors(const Point& query, std::vector<std::size_t>& out, bool sorted = true) const;

  std::size_t bucket_count() const noexcept { return buckets_.size(); }

 private:
  using Key = std::uint64_t;
  Key key_of(const Point& p) const noexcept;
  static Key pack(std::int64_t bx, std::int64_t by) noexcept;

  double width_;
  std::unordered_map<Key, std::vector<std::size_t>> buckets_;
};

/// Quartic-kernel density estimate normalized by 1/n:
///   p(x) = 1/n * 3/(pi h^2) * sum_{d_i(x) < h} (1 - (d_i(x)/h)^2)^2
/// Per-query sums always run over contributing points in ascending index
/// order, so every evaluation route below produces bit-identical values.
class KernelDensity {
 public:
  KernelDensity(PointSet points, Bandwidth h);

  double operator()(const Point& query) const;

  const PointSet& points() const noexcept { return points_; }
  Bandwidth bandwidth() const noexcept { return h_; }

  // Density at every sample, self-inclusive.
  std::vector<double> at_samples() const;

  // Density at every cell center of the grid. Rows are split across
  // `workers` threads; the result does not depend on the worker count.
  ScalarField field(const RasterGrid& grid, unsigned workers = 1) const;

 private:
  double normalize(double kernel_sum) const noexcept;

  PointSet points_;
  Bandwidth h_;
  SpatialBuckets buckets_;
};

double evaluate_kde(const PointSet& points, const Point& query, Bandwidth h);
ScalarField kde_field(const PointSet& points, const RasterGrid& grid, Bandwidth h);
std::vector<double> kde_at_samples(const PointSet& points, Bandwidth h);

// Grid used by the analysis pipeline: the data bounding box padded by h and
// snapped outward to the cell-centered lattice.
RasterGrid analysis_grid(const PointSet& points, Bandwidth h, double cell_size);

}  // namespace actspace
