#include "actspace/topology.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <utility>

#include "actspace/error.hpp"
#include "actspace/ranking.hpp"

namespace actspace {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Links two distinct roots; returns the surviving root.
  std::size_t link(std::size_t a, std::size_t b) noexcept {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct Offset {
  int dr;
  int dc;
};

constexpr std::array<Offset, 8> kEightNeighbors{{{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<Offset, 4> kFourNeighbors{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

std::span<const Offset> offsets(Connectivity conn) {
  if (conn == Connectivity::Four) return kFourNeighbors;
  return kEightNeighbors;
}

template <typename Fn>
void for_each_neighbor(const RasterGrid& grid, std::size_t cell, Connectivity conn, Fn&& fn) {
  const auto [row, col] = grid.unlinear(cell);
  for (const auto& o : offsets(conn)) {
    const auto r = static_cast<std::ptrdiff_t>(row) + o.dr;
    const auto c = static_cast<std::ptrdiff_t>(col) + o.dc;
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(grid.nrows()) ||
        c >= static_cast<std::ptrdiff_t>(grid.ncols())) {
      continue;
    }
    fn(static_cast<std::size_t>(r) * grid.ncols() + static_cast<std::size_t>(c));
  }
}

void check_levels(std::span<const double> levels, const char* what) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0 && levels[i] <= 1.0)) {
      throw UsageError(std::string(what) + " must lie in [0,1], got " + std::to_string(levels[i]));
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) throw UsageError(std::string(what) + " must be strictly increasing");
  }
}

}  // namespace

Connectivity parse_connectivity(int neighbors) {
  if (neighbors == 4) return Connectivity::Four;
  if (neighbors == 8) return Connectivity::Eight;
  throw UsageError("connectivity must be 4 or 8, got " + std::to_string(neighbors));
}

Components connected_components(const CellSet& cells, Connectivity conn) {
  const RasterGrid& grid = cells.grid();
  DisjointSets sets(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells.contains(i)) continue;
    for_each_neighbor(grid, i, conn, [&](std::size_t j) {
      if (j >= i || !cells.contains(j)) return;
      const auto a = sets.find(i);
      const auto b = sets.find(j);
      if (a != b) sets.link(a, b);
    });
  }

  Components out;
  out.labels.assign(cells.size(), -1);
  std::vector<std::int64_t> root_label(cells.size(), -1);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells.contains(i)) continue;
    const auto root = sets.find(i);
    if (root_label[root] < 0) root_label[root] = static_cast<std::int64_t>(out.count++);
    out.labels[i] = root_label[root];
  }
  return out;
}

std::vector<double> default_levels(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw UsageError("level step must lie in (0, 0.5], got " + std::to_string(step));
  std::vector<double> levels;
  for (std::size_t k = 1;; ++k) {
    const double g = static_cast<double>(k) * step;
    if (g >= 1.0 - 1e-9) break;
    levels.push_back(g);
  }
  return levels;
}

std::vector<double> default_thresholds(double step) {
  std::vector<double> t{0.0};
  for (double g : default_levels(step)) t.push_back(g);
  t.push_back(1.0);
  return t;
}

SummaryCurve mass_volume_curve(const ScalarField& rank_field, std::span<const double> levels) {
  check_levels(levels, "levels");
  SummaryCurve curve{CurveKind::MassVolume, {levels.begin(), levels.end()}, {}};
  const auto values = rank_field.values();
  for (double gamma : levels) {
    const double threshold = 1.0 - gamma;
    const auto n = std::count_if(values.begin(), values.end(), [&](double a) { return a >= threshold; });
    curve.values.push_back(static_cast<double>(n) * rank_field.grid().cell_area());
  }
  return curve;
}

SummaryCurve betti_curve(const ScalarField& rank_field, std::span<const double> levels, Connectivity conn) {
  check_levels(levels, "levels");
  SummaryCurve curve{CurveKind::Betti, {levels.begin(), levels.end()}, {}};
  for (double gamma : levels) {
    const CellSet cells = level_set(rank_field, gamma);
    curve.values.push_back(static_cast<double>(connected_components(cells, conn).count));
  }
  return curve;
}

std::vector<PersistencePair> persistence_pairs(const ScalarField& rank_field, Connectivity conn) {
  const RasterGrid& grid = rank_field.grid();
  const auto alpha = rank_field.values();

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return alpha[a] > alpha[b]; });

  struct Birth {
    bool born = false;
    double alpha = 0.0;
    std::size_t cell = 0;
  };
  // Indexed by set root.
  std::vector<Birth> births(alpha.size());
  std::vector<std::uint8_t> active(alpha.size(), 0);
  DisjointSets sets(alpha.size());
  std::vector<PersistencePair> pairs;

  auto elder_first = [](const Birth& a, const Birth& b) {
    return a.alpha > b.alpha || (a.alpha == b.alpha && a.cell < b.cell);
  };

  auto merge = [&](std::size_t a, std::size_t b, double level) {
    auto ra = sets.find(a);
    auto rb = sets.find(b);
    if (ra == rb) return;
    Birth ba = births[ra];
    Birth bb = births[rb];
    Birth survivor = ba.born ? ba : bb;
    if (ba.born && bb.born) {
      if (!elder_first(ba, bb)) std::swap(ba, bb);
      survivor = ba;
      if (bb.alpha > level) pairs.push_back({bb.alpha, level, grid.unlinear(bb.cell)});
    }
    births[sets.link(ra, rb)] = survivor;
  };

  for (std::size_t begin = 0; begin < order.size();) {
    const double level = alpha[order[begin]];
    std::size_t end = begin;
    while (end < order.size() && alpha[order[end]] == level) ++end;
    // The stable sort keeps each batch in row-major order.
    for (std::size_t k = begin; k < end; ++k) active[order[k]] = 1;

    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t cell = order[k];
      bool has_higher = false;
      for_each_neighbor(grid, cell, conn, [&](std::size_t j) { has_higher |= active[j] && alpha[j] > level; });
      if (!has_higher) births[cell] = {true, level, cell};
    }
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t cell = order[k];
      for_each_neighbor(grid, cell, conn, [&](std::size_t j) {
        if (active[j]) merge(cell, j, level);
      });
    }
    begin = end;
  }

  for (std::size_t i : order) {
    if (sets.find(i) == i && births[i].born) pairs.push_back({births[i].alpha, 0.0, grid.unlinear(births[i].cell)});
  }

  std::stable_sort(pairs.begin(), pairs.end(), [&](const PersistencePair& a, const PersistencePair& b) {
    if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
    return grid.linear(a.birth_cell) < grid.linear(b.birth_cell);
  });
  return pairs;
}

SummaryCurve persistence_curve(std::span<const PersistencePair> pairs, std::span<const double> thresholds) {
  check_levels(thresholds, "thresholds");
  SummaryCurve curve{CurveKind::Persistence, {thresholds.begin(), thresholds.end()}, {}};
  for (double t : thresholds) {
    const auto n = std::count_if(pairs.begin(), pairs.end(), [&](const PersistencePair& p) { return p.persistence() >= t; });
    curve.values.push_back(static_cast<double>(n));
  }
  return curve;
}

}  // namespace actspace
