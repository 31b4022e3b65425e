#include "actspace/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "actspace/error.hpp"
#include "json.hpp"

namespace actspace {

namespace {

constexpr double kMassTolerance = 1e-9;

double distance(const Point& a, const Point& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_segment(const Point& p, const Segment& s) noexcept {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {s.a.x + t * dx, s.a.y + t * dy});
}

template <typename Items>
void check_part(const Items& items, double weight, const char* name) {
  if (items.empty()) {
    if (weight > 0.0) throw DataError(std::string("mixture weight for ") + name + " is positive but no " + name + " given");
    return;
  }
  double total = 0.0;
  for (const auto& item : items) {
    if (!(item.mass > 0.0) || !std::isfinite(item.mass)) throw DataError(std::string(name) + " masses must be positive");
    total += item.mass;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg << name << " masses sum to " << total << ", expected 1";
    throw DataError(msg.str());
  }
}

// Uniform double in [0, 1) from the top 53 bits of one generator output.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename Items>
std::size_t pick(const Items& items, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    cumulative += items[i].mass;
    if (u < cumulative) return i;
  }
  return items.size() - 1;
}

}  // namespace

double Segment::length() const noexcept { return distance(a, b); }

MixtureModel::MixtureModel(std::array<double, 3> weights, std::vector<Atom> atoms, std::vector<Segment> segments,
                           std::vector<Rect> rects)
    : weights_(weights), atoms_(std::move(atoms)), segments_(std::move(segments)), rects_(std::move(rects)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) throw DataError("mixture weights must sum to 1");
  check_part(atoms_, weights_[0], "atoms");
  check_part(segments_, weights_[1], "segments");
  check_part(rects_, weights_[2], "rects");
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.at.x) || !std::isfinite(a.at.y)) throw DataError("atom location is not finite");
  }
  for (const auto& s : segments_) {
    if (!(s.length() > 0.0) || !std::isfinite(s.length())) throw DataError("segment has zero length");
  }
  for (const auto& r : rects_) {
    if (!r.box.valid()) throw DataError("rectangle has zero area");
  }

  // Split the plane along every rectangle edge; each piece of the resulting
  // arrangement has constant P2 density.
  std::vector<double> xs, ys;
  for (const auto& r : rects_) {
    xs.insert(xs.end(), {r.box.xmin, r.box.xmax});
    ys.insert(ys.end(), {r.box.ymin, r.box.ymax});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Point mid{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      const double d = area_density(mid);
      if (d > 0.0) area_levels_.emplace_back(d, d * (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]));
    }
  }
  std::sort(area_levels_.begin(), area_levels_.end());
}

BoundingBox MixtureModel::support_bounds() const {
  std::vector<Point> pts;
  for (const auto& a : atoms_) pts.push_back(a.at);
  for (const auto& s : segments_) pts.insert(pts.end(), {s.a, s.b});
  for (const auto& r : rects_) pts.insert(pts.end(), {{r.box.xmin, r.box.ymin}, {r.box.xmax, r.box.ymax}});
  return BoundingBox::of(pts);
}

double MixtureModel::area_density(const Point& p) const noexcept {
  double d = 0.0;
  for (const auto& r : rects_) {
    if (r.box.contains(p)) d += r.density();
  }
  return d;
}

double MixtureModel::area_mass_at_or_below(double level) const noexcept {
  double m = 0.0;
  for (const auto& [density, mass] : area_levels_) {
    if (density > level) break;
    m += mass;
  }
  return m;
}

MixtureModel paper_model() {
  const Point home{0.0, 0.0};
  const Point office{0.0, 2.0};
  const Point gym{2.0, 0.0};
  return MixtureModel({0.6, 0.3, 0.1}, {{home, 0.5}, {office, 0.3}, {gym, 0.2}},
                      {{home, gym, 0.3}, {gym, office, 0.2}, {home, office, 0.5}},
                      {{{-0.5, -0.5, 0.5, 0.5}, 0.7}, {{1.6, -0.4, 2.4, 0.4}, 0.3}});
}

MixtureModel model_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    std::array<double, 3> pi{};
    const auto& w = doc.at("pi");
    if (!w.is_array() || w.size() != 3) throw DataError("model \"pi\" must be an array of three weights");
    for (std::size_t i = 0; i < 3; ++i) pi[i] = w[i].get<double>();

    std::vector<Atom> atoms;
    for (const auto& a : doc.value("atoms", nlohmann::json::array())) {
      atoms.push_back({{a.at("x").get<double>(), a.at("y").get<double>()}, a.at("mass").get<double>()});
    }
    std::vector<Segment> segments;
    for (const auto& s : doc.value("segments", nlohmann::json::array())) {
      segments.push_back({{s.at("ax").get<double>(), s.at("ay").get<double>()},
                          {s.at("bx").get<double>(), s.at("by").get<double>()},
                          s.at("mass").get<double>()});
    }
    std::vector<Rect> rects;
    for (const auto& r : doc.value("rects", nlohmann::json::array())) {
      rects.push_back({{r.at("xmin").get<double>(), r.at("ymin").get<double>(), r.at("xmax").get<double>(),
                        r.at("ymax").get<double>()},
                       r.at("mass").get<double>()});
    }
    return MixtureModel(pi, std::move(atoms), std::move(segments), std::move(rects));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid model document: ") + e.what());
  }
}

std::string model_to_json(const MixtureModel& model) {
  nlohmann::ordered_json doc;
  doc["pi"] = model.weights();
  doc["atoms"] = nlohmann::ordered_json::array();
  for (const auto& a : model.atoms()) doc["atoms"].push_back({{"x", a.at.x}, {"y", a.at.y}, {"mass", a.mass}});
  doc["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : model.segments()) {
    doc["segments"].push_back({{"ax", s.a.x}, {"ay", s.a.y}, {"bx", s.b.x}, {"by", s.b.y}, {"mass", s.mass}});
  }
  doc["rects"] = nlohmann::ordered_json::array();
  for (const auto& r : model.rects()) {
    doc["rects"].push_back(
        {{"xmin", r.box.xmin}, {"ymin", r.box.ymin}, {"xmax", r.box.xmax}, {"ymax", r.box.ymax}, {"mass", r.mass}});
  }
  return doc.dump(2) + "\n";
}

MixtureModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model document " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

PointSet sample(const MixtureModel& model, std::size_t n, Seed seed) {
  if (n == 0) throw UsageError("sample size must be at least 1");
  std::mt19937_64 rng(seed.value);
  const auto& pi = model.weights();
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    int part = u < pi[0] ? 0 : (u < pi[0] + pi[1] ? 1 : 2);
    // Rounding in the cumulative weights must not select an empty part.
    while (part == 2 && model.rects().empty()) --part;
    while (part == 1 && model.segments().empty()) --part;
    while (part == 0 && model.atoms().empty()) ++part;

    if (part == 0) {
      out.push_back(model.atoms()[pick(model.atoms(), uniform01(rng))].at);
    } else if (part == 1) {
      const auto& s = model.segments()[pick(model.segments(), uniform01(rng))];
      const double t = uniform01(rng);
      out.push_back({s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)});
    } else {
      const auto& r = model.rects()[pick(model.rects(), uniform01(rng))];
      const double tx = uniform01(rng);
      const double ty = uniform01(rng);
      out.push_back({r.box.xmin + tx * r.box.width(), r.box.ymin + ty * r.box.height()});
    }
  }
  return PointSet(std::move(out));
}

CellMasses cell_masses(const MixtureModel& model, const RasterGrid& grid) {
  CellMasses m{grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
               std::vector<double>(grid.size(), 0.0)};

  for (const auto& a : model.atoms()) {
    if (grid.in_extent(a.at)) m.atom[grid.linear(grid.locate(a.at))] += a.mass;
  }

  // Each segment is cut at every grid line it crosses; every piece lies in
  // one cell, found by locating its midpoint.
  const BoundingBox ext = grid.extent();
  const double cs = grid.cell_size();
  for (const auto& s : model.segments()) {
    std::vector<double> cuts{0.0, 1.0};
    auto add_crossings = [&](double from, double to, double origin, std::size_t lines) {
      if (from == to) return;
      for (std::size_t k = 0; k <= lines; ++k) {
        const double t = (origin + static_cast<double>(k) * cs - from) / (to - from);
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    };
    add_crossings(s.a.x, s.b.x, ext.xmin, grid.ncols());
    add_crossings(s.a.y, s.b.y, ext.ymin, grid.nrows());
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double t0 = cuts[i];
      const double t1 = cuts[i + 1];
      if (!(t1 > t0)) continue;
      const double tm = 0.5 * (t0 + t1);
      const Point mid{s.a.x + tm * (s.b.x - s.a.x), s.a.y + tm * (s.b.y - s.a.y)};
      if (grid.in_extent(mid)) m.road[grid.linear(grid.locate(mid))] += s.mass * (t1 - t0);
    }
  }

  for (const auto& r : model.rects()) {
    const double x0 = std::max(r.box.xmin, ext.xmin);
    const double x1 = std::min(r.box.xmax, ext.xmax);
    const double y0 = std::max(r.box.ymin, ext.ymin);
    const double y1 = std::min(r.box.ymax, ext.ymax);
    if (!(x1 > x0 && y1 > y0)) continue;
    for (std::size_t row = grid.row_of(y0); row <= grid.row_of(y1); ++row) {
      for (std::size_t col = grid.col_of(x0); col <= grid.col_of(x1); ++col) {
        const BoundingBox c = grid.cell_bounds({row, col});
        const double w = std::min(c.xmax, r.box.xmax) - std::max(c.xmin, r.box.xmin);
        const double h = std::min(c.ymax, r.box.ymax) - std::max(c.ymin, r.box.ymin);
        if (w > 0.0 && h > 0.0) m.area[grid.linear({row, col})] += r.mass * (w * h) / r.area();
      }
    }
  }
  return m;
}

PartMasses part_masses(const CellMasses& masses, const CellSet& cells) {
  if (!(masses.grid == cells.grid())) throw UsageError("cell set and mass table use different grids");
  PartMasses p;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells.contains(i)) continue;
    p.atom += masses.atom[i];
    p.road += masses.road[i];
    p.area += masses.area[i];
  }
  return p;
}

double true_measure(const MixtureModel& model, const CellMasses& masses, const CellSet& cells) {
  const auto p = part_masses(masses, cells);
  const auto& pi = model.weights();
  return pi[0] * p.atom + pi[1] * p.road + pi[2] * p.area;
}

double true_measure(const MixtureModel& model, const CellSet& cells) {
  return true_measure(model, cell_masses(model, cells.grid()), cells);
}

double symmetric_difference_error(const MixtureModel& model, const CellMasses& masses, const CellSet& estimate,
                                  SupportTarget target) {
  // Atoms and segments carry no P2 mass and atoms carry no P1 mass, so the
  // target's measure splits cleanly by part.
  const auto p = part_masses(masses, estimate);
  const auto& pi = model.weights();
  const double missed_atoms = pi[0] * (1.0 - p.atom);
  if (target == SupportTarget::Anchors) return missed_atoms + pi[1] * p.road + pi[2] * p.area;
  return missed_atoms + pi[1] * (1.0 - p.road) + pi[2] * p.area;
}

double symmetric_difference_error(const MixtureModel& model, const CellSet& estimate, SupportTarget target) {
  return symmetric_difference_error(model, cell_masses(model, estimate.grid()), estimate, target);
}

namespace {

// Dimension and unweighted density of the part that dominates at p.
HausdorffDensity local_density(const MixtureModel& model, const Point& p) {
  double atom_mass = 0.0;
  for (const auto& a : model.atoms()) {
    if (distance(a.at, p) <= MixtureModel::kGeometryTolerance) atom_mass += a.mass;
  }
  if (atom_mass > 0.0) return {0, atom_mass};

  double linear = 0.0;
  for (const auto& s : model.segments()) {
    if (distance_to_segment(p, s) <= MixtureModel::kGeometryTolerance) linear += s.linear_density();
  }
  if (linear > 0.0) return {1, linear};
  return {2, model.area_density(p)};
}

}  // namespace

HausdorffDensity hausdorff_density(const MixtureModel& model, const Point& p) {
  HausdorffDensity hd = local_density(model, p);
  hd.value *= model.weights()[static_cast<std::size_t>(hd.dimension)];
  return hd;
}

int dimension(const MixtureModel& model, const Point& p) { return local_density(model, p).dimension; }

double true_alpha(const MixtureModel& model, const Point& p) {
  const auto& pi = model.weights();
  const HausdorffDensity own = local_density(model, p);
  switch (own.dimension) {
    case 0: {
      double below = 0.0;
      for (const auto& a : model.atoms()) {
        if (a.mass <= own.value) below += a.mass;
      }
      return pi[1] + pi[2] + pi[0] * below;
    }
    case 1: {
      double below = 0.0;
      for (const auto& s : model.segments()) {
        if (s.linear_density() <= own.value) below += s.mass;
      }
      return pi[2] + pi[1] * below;
    }
    default:
      return pi[2] * model.area_mass_at_or_below(own.value);
  }
}

}  // namespace actspace
