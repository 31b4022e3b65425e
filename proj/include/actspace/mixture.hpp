#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "actspace/grid.hpp"
#include "actspace/kde.hpp"

namespace actspace {

struct Atom {
  Point at;
  double mass = 0.0;
};

struct Segment {
  Point a;
  Point b;
  double mass = 0.0;

  double length() const noexcept;
  double linear_density() const noexcept { return mass / length(); }
};

struct Rect {
  BoundingBox box;
  double mass = 0.0;

  double area() const noexcept { return box.width() * box.height(); }
  double density() const noexcept { return mass / area(); }
};

/// Three-part activity-space distribution:
///   P = pi0 * P0 + pi1 * P1 + pi2 * P2
/// P0 puts point masses on anchor locations, P1 spreads mass uniformly along
/// straight road segments, P2 spreads mass uniformly over rectangles. Each
/// part's masses sum to 1. Segments are assumed not to overlap one another.
class MixtureModel {
 public:
  // Volume of the unit ball in dimension s = 0, 1, 2.
  static constexpr std::array<double, 3> kBallVolume{1.0, 2.0, std::numbers::pi};
  // On-atom and on-segment tolerance used by dimension().
  static constexpr double kGeometryTolerance = 1e-9;

  MixtureModel(std::array<double, 3> weights, std::vector<Atom> atoms, std::vector<Segment> segments,
               std::vector<Rect> rects);

  const std::array<double, 3>& weights() const noexcept { return weights_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const std::vector<Rect>& rects() const noexcept { return rects_; }

  // Bounding box of the support (atoms, segment endpoints, rectangles).
  BoundingBox support_bounds() const;

  // P2 density at p (sum over rectangles containing p).
  double area_density(const Point& p) const noexcept;
  // P2 mass of {y : area_density(y) <= level}.
  double area_mass_at_or_below(double level) const noexcept;

 private:
  std::array<double, 3> weights_;
  std::vector<Atom> atoms_;
  std::vector<Segment> segments_;
  std::vector<Rect> rects_;
  // (density, mass) of each piece of the rectangle arrangement, by density.
  std::vector<std::pair<double, double>> area_levels_;
};

// Home (0,0), office (0,2), gym (2,0) with roads between every pair and
// walking squares around home and (2,0).
MixtureModel paper_model();

MixtureModel model_from_json(std::string_view text);
std::string model_to_json(const MixtureModel& model);
MixtureModel load_model(const std::filesystem::path& path);

struct Seed {
  std::uint64_t value = 0;
};

// n i.i.d. draws. For each draw the generator is consumed in a fixed order:
// component, then sub-index, then position.
PointSet sample(const MixtureModel& model, std::size_t n, Seed seed);

/// Per-cell mass of each mixture part (unweighted by pi), computed exactly:
/// atoms by location, segments by clipping against cell boundaries,
/// rectangles by overlap area.
struct CellMasses {
  RasterGrid grid;
  std::vector<double> atom;
  std::vector<double> road;
  std::vector<double> area;
};

CellMasses cell_masses(const MixtureModel& model, const RasterGrid& grid);

// Mass of each part inside the member cells.
struct PartMasses {
  double atom = 0.0;
  double road = 0.0;
  double area = 0.0;
};
PartMasses part_masses(const CellMasses& masses, const CellSet& cells);

double true_measure(const MixtureModel& model, const CellMasses& masses, const CellSet& cells);
double true_measure(const MixtureModel& model, const CellSet& cells);

enum class SupportTarget { Anchors, AnchorsAndRoads };

// P(estimate symmetric-difference target).
double symmetric_difference_error(const MixtureModel& model, const CellMasses& masses, const CellSet& estimate,
                                  SupportTarget target);
double symmetric_difference_error(const MixtureModel& model, const CellSet& estimate, SupportTarget target);

// 0 on an atom, 1 on a segment away from atoms, 2 elsewhere.
int dimension(const MixtureModel& model, const Point& p);

struct HausdorffDensity {
  int dimension = 2;
  double value = 0.0;  // pi-weighted density of P in that dimension
};
HausdorffDensity hausdorff_density(const MixtureModel& model, const Point& p);

// Population ranking P(p is ranked at or above a random draw): lower
// dimension ranks higher, ties broken by density within the dimension.
double true_alpha(const MixtureModel& model, const Point& p);

}  // namespace actspace
