#include "actspace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "actspace/error.hpp"

namespace actspace {

bool BoundingBox::valid() const noexcept {
  return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) && std::isfinite(ymax) &&
         xmin < xmax && ymin < ymax;
}

bool BoundingBox::contains(const Point& p) const noexcept {
  return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
}

BoundingBox BoundingBox::of(std::span<const Point> points) {
  if (points.empty()) throw DataError("bounding box of an empty point set");
  BoundingBox b{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const auto& p : points) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

BoundingBox BoundingBox::padded(double margin) const noexcept {
  return {xmin - margin, ymin - margin, xmax + margin, ymax + margin};
}

namespace {

void check_cell_size(double cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    std::ostringstream msg;
    msg << "cell size must be positive and finite, got " << cell_size;
    throw UsageError(msg.str());
  }
}

void check_bbox(const BoundingBox& b) {
  if (!b.valid()) {
    std::ostringstream msg;
    msg << "degenerate bounding box (" << b.xmin << "," << b.ymin << ")-(" << b.xmax << "," << b.ymax << ")";
    throw UsageError(msg.str());
  }
}

std::size_t cells_to_cover(double length, double cell_size) {
  const double n = std::ceil(length / cell_size);
  if (n > 1e8) throw UsageError("grid too large: " + std::to_string(n) + " cells along one axis");
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

}  // namespace

RasterGrid RasterGrid::make(const BoundingBox& bbox, double cell_size) {
  check_cell_size(cell_size);
  check_bbox(bbox);
  RasterGrid g;
  g.bbox_ = bbox;
  g.cell_size_ = cell_size;
  g.ncols_ = cells_to_cover(bbox.width(), cell_size);
  g.nrows_ = cells_to_cover(bbox.height(), cell_size);
  return g;
}

RasterGrid RasterGrid::make_centered_lattice(const BoundingBox& bbox, double cell_size) {
  check_cell_size(cell_size);
  check_bbox(bbox);
  // Column 0 is centered on k0 * cell_size, the lattice center whose cell
  // contains bbox.xmin; likewise for rows.
  const double kx0 = std::floor(bbox.xmin / cell_size + 0.5);
  const double ky0 = std::floor(bbox.ymin / cell_size + 0.5);
  const double kx1 = std::floor(bbox.xmax / cell_size + 0.5);
  const double ky1 = std::floor(bbox.ymax / cell_size + 0.5);
  if (kx1 - kx0 + 1 > 1e8 || ky1 - ky0 + 1 > 1e8) throw UsageError("grid too large");

  RasterGrid g;
  g.cell_size_ = cell_size;
  g.ncols_ = static_cast<std::size_t>(kx1 - kx0) + 1;
  g.nrows_ = static_cast<std::size_t>(ky1 - ky0) + 1;
  g.bbox_.xmin = (kx0 - 0.5) * cell_size;
  g.bbox_.ymin = (ky0 - 0.5) * cell_size;
  g.bbox_.xmax = (kx1 + 0.5) * cell_size;
  g.bbox_.ymax = (ky1 + 0.5) * cell_size;
  return g;
}

RasterGrid RasterGrid::from_dimensions(double xll, double yll, double cell_size, std::size_t ncols,
                                       std::size_t nrows) {
  check_cell_size(cell_size);
  if (ncols == 0 || nrows == 0) throw UsageError("grid must have at least one row and column");
  if (!std::isfinite(xll) || !std::isfinite(yll)) throw UsageError("grid corner is not finite");
  RasterGrid g;
  g.cell_size_ = cell_size;
  g.ncols_ = ncols;
  g.nrows_ = nrows;
  g.bbox_ = {xll, yll, xll + static_cast<double>(ncols) * cell_size, yll + static_cast<double>(nrows) * cell_size};
  return g;
}

BoundingBox RasterGrid::extent() const noexcept {
  return {bbox_.xmin, bbox_.ymin, bbox_.xmin + static_cast<double>(ncols_) * cell_size_,
          bbox_.ymin + static_cast<double>(nrows_) * cell_size_};
}

bool RasterGrid::in_extent(const Point& p) const noexcept { return extent().contains(p); }

CellIndex RasterGrid::locate(const Point& p) const {
  if (!in_extent(p)) {
    std::ostringstream msg;
    msg << "point (" << p.x << "," << p.y << ") lies outside the grid extent";
    throw UsageError(msg.str());
  }
  auto col = static_cast<std::size_t>(std::floor((p.x - bbox_.xmin) / cell_size_));
  auto row = static_cast<std::size_t>(std::floor((p.y - bbox_.ymin) / cell_size_));
  return {std::min(row, nrows_ - 1), std::min(col, ncols_ - 1)};
}

Point RasterGrid::cell_center(const CellIndex& idx) const {
  if (!valid(idx)) {
    std::ostringstream msg;
    msg << "cell (" << idx.row << "," << idx.col << ") outside " << nrows_ << "x" << ncols_ << " grid";
    throw UsageError(msg.str());
  }
  return {bbox_.xmin + (static_cast<double>(idx.col) + 0.5) * cell_size_,
          bbox_.ymin + (static_cast<double>(idx.row) + 0.5) * cell_size_};
}

BoundingBox RasterGrid::cell_bounds(const CellIndex& idx) const {
  if (!valid(idx)) throw UsageError("cell index outside grid");
  const double x0 = bbox_.xmin + static_cast<double>(idx.col) * cell_size_;
  const double y0 = bbox_.ymin + static_cast<double>(idx.row) * cell_size_;
  return {x0, y0, x0 + cell_size_, y0 + cell_size_};
}

std::size_t RasterGrid::col_of(double x) const noexcept {
  const double c = std::floor((x - bbox_.xmin) / cell_size_);
  if (!(c > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(c), ncols_ - 1);
}

std::size_t RasterGrid::row_of(double y) const noexcept {
  const double r = std::floor((y - bbox_.ymin) / cell_size_);
  if (!(r > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(r), nrows_ - 1);
}

ScalarField::ScalarField(RasterGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw UsageError("field has " + std::to_string(values_.size()) + " values for " +
                     std::to_string(grid_.size()) + " cells");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("field value is not finite");
  }
}

ScalarField::ScalarField(RasterGrid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

double ScalarField::max() const noexcept {
  if (values_.empty()) return 0.0;
  return *std::max_element(values_.begin(), values_.end());
}

CellSet::CellSet(RasterGrid grid) : grid_(std::move(grid)), members_(grid_.size(), 0) {}

CellSet::CellSet(RasterGrid grid, std::vector<std::uint8_t> membership)
    : grid_(std::move(grid)), members_(std::move(membership)) {
  if (members_.size() != grid_.size()) throw UsageError("membership length does not match grid");
}

std::size_t CellSet::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(members_.begin(), members_.end(), [](auto m) { return m != 0; }));
}

bool CellSet::subset_of(const CellSet& other) const {
  if (!(grid_ == other.grid_)) throw UsageError("cell sets on different grids");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] && !other.members_[i]) return false;
  }
  return true;
}

}  // namespace actspace
