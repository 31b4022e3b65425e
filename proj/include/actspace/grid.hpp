#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace actspace {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool valid() const noexcept;
  bool contains(const Point& p) const noexcept;  // inclusive on all edges
  double width() const noexcept { return xmax - xmin; }
  double height() const noexcept { return ymax - ymin; }

  // Smallest box containing every point. Throws DataError on an empty span.
  static BoundingBox of(std::span<const Point> points);
  BoundingBox padded(double margin) const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct CellIndex {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Rectangular lattice of square cells anchored at the lower-left corner of
/// its bounding box. Row 0 is the southernmost row. Cells are stored
/// row-major, so the linear index of (row, col) is row * ncols + col.
class RasterGrid {
 public:
  RasterGrid() = default;

  // ncols = ceil(width / cell_size), nrows = ceil(height / cell_size). The
  // last row and column may overhang the box by less than one cell.
  static RasterGrid make(const BoundingBox& bbox, double cell_size);

  // Expands bbox outward so every cell center lies on an integer multiple of
  // cell_size. Grids built this way share cells across runs and place
  // lattice-valued locations exactly at cell centers.
  static RasterGrid make_centered_lattice(const BoundingBox& bbox, double cell_size);

  // Grid with the given lower-left corner and explicit dimensions.
  static RasterGrid from_dimensions(double xll, double yll, double cell_size, std::size_t ncols, std::size_t nrows);

  const BoundingBox& bbox() const noexcept { return bbox_; }
  double cell_size() const noexcept { return cell_size_; }
  double cell_area() const noexcept { return cell_size_ * cell_size_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t size() const noexcept { return ncols_ * nrows_; }
  double total_area() const noexcept { return static_cast<double>(size()) * cell_area(); }

  // The covered region, bbox padded up to whole cells.
  BoundingBox extent() const noexcept;

  bool in_extent(const Point& p) const noexcept;
  bool valid(const CellIndex& idx) const noexcept { return idx.row < nrows_ && idx.col < ncols_; }

  // Points on a shared edge belong to the higher-index cell, except on the
  // extent maximum, which belongs to the last cell. Throws UsageError when p
  // lies outside the extent.
  CellIndex locate(const Point& p) const;

  Point cell_center(const CellIndex& idx) const;
  BoundingBox cell_bounds(const CellIndex& idx) const;

  std::size_t linear(const CellIndex& idx) const noexcept { return idx.row * ncols_ + idx.col; }
  CellIndex unlinear(std::size_t i) const noexcept { return {i / ncols_, i % ncols_}; }

  // Column/row whose closed interval contains the coordinate, clamped to the
  // grid. Used for range queries; no edge-ownership semantics.
  std::size_t col_of(double x) const noexcept;
  std::size_t row_of(double y) const noexcept;

  friend bool operator==(const RasterGrid&, const RasterGrid&) = default;

 private:
  BoundingBox bbox_{};
  double cell_size_ = 0.0;
  std::size_t ncols_ = 0;
  std::size_t nrows_ = 0;
};

/// One finite value per grid cell, row-major.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(RasterGrid grid, std::vector<double> values);
  explicit ScalarField(RasterGrid grid, double fill = 0.0);

  const RasterGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double at(const CellIndex& idx) const { return values_.at(grid_.linear(idx)); }
  std::size_t size() const noexcept { return values_.size(); }
  double max() const noexcept;

 private:
  RasterGrid grid_{};
  std::vector<double> values_;
};

/// Set of grid cells, one membership flag per cell.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(RasterGrid grid);
  CellSet(RasterGrid grid, std::vector<std::uint8_t> membership);

  const RasterGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const noexcept { return members_[i] != 0; }
  bool contains(const CellIndex& idx) const { return members_.at(grid_.linear(idx)) != 0; }
  void insert(std::size_t i) { members_.at(i) = 1; }
  void erase(std::size_t i) { members_.at(i) = 0; }
  std::size_t count() const noexcept;
  std::span<const std::uint8_t> membership() const noexcept { return members_; }

  bool subset_of(const CellSet& other) const;

 private:
  RasterGrid grid_{};
  std::vector<std::uint8_t> members_;
};

}  // namespace actspace
