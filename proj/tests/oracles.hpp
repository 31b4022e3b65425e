#pragma once

// Independent reference implementations used by the tests. They are
// deliberately naive: no buckets, no sorting, no union-find.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <random>
#include <vector>

#include "actspace/grid.hpp"
#include "actspace/mixture.hpp"
#include "actspace/topology.hpp"

namespace oracle {

using actspace::CellSet;
using actspace::Connectivity;
using actspace::Point;

// All-pairs quartic KDE. Terms are accumulated in ascending point order with
// the same floating expression as the definition, so results compare exactly.
inline double kde(const std::vector<Point>& pts, const Point& q, double h) {
  const double h2 = h * h;
  double sum = 0.0;
  for (const Point& p : pts) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < h2) {
      const double t = 1.0 - d2 / h2;
      sum += t * t;
    }
  }
  return sum * (3.0 / (std::numbers::pi * h * h)) / static_cast<double>(pts.size());
}

// Fraction of samples with density <= d, by direct counting.
inline double alpha(const std::vector<double>& samples, double d) {
  std::size_t c = 0;
  for (double s : samples) c += s <= d;
  return static_cast<double>(c) / static_cast<double>(samples.size());
}

// Breadth-first flood fill component count.
inline std::size_t flood_fill_count(const CellSet& cells, Connectivity conn) {
  const auto& g = cells.grid();
  const long nr = static_cast<long>(g.nrows()), nc = static_cast<long>(g.ncols());
  std::vector<char> seen(cells.size(), 0);
  std::size_t count = 0;
  for (long r0 = 0; r0 < nr; ++r0) {
    for (long c0 = 0; c0 < nc; ++c0) {
      const std::size_t start = static_cast<std::size_t>(r0 * nc + c0);
      if (!cells.contains(start) || seen[start]) continue;
      ++count;
      std::queue<std::pair<long, long>> q;
      q.push({r0, c0});
      seen[start] = 1;
      while (!q.empty()) {
        auto [r, c] = q.front();
        q.pop();
        for (long dr = -1; dr <= 1; ++dr) {
          for (long dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            if (conn == Connectivity::Four && dr != 0 && dc != 0) continue;
            const long rr = r + dr, cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= nr || cc >= nc) continue;
            const std::size_t k = static_cast<std::size_t>(rr * nc + cc);
            if (cells.contains(k) && !seen[k]) {
              seen[k] = 1;
              q.push({rr, cc});
            }
          }
        }
      }
    }
  }
  return count;
}

// Random membership with the given fill probability.
inline CellSet random_cells(const actspace::RasterGrid& g, double fill, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(fill);
  CellSet s(g);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (coin(rng)) s.insert(i);
  }
  return s;
}

// Random field with values k/levels, k uniform in [0, levels]: plenty of ties.
inline actspace::ScalarField random_quantized_field(const actspace::RasterGrid& g, int levels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(0, levels);
  std::vector<double> v(g.size());
  for (auto& x : v) x = static_cast<double>(k(rng)) / levels;
  return actspace::ScalarField(g, std::move(v));
}

// Fraction of `pts` falling in member cells of `cells`.
inline double empirical_measure(std::span<const Point> pts, const CellSet& cells) {
  const auto& g = cells.grid();
  std::size_t in = 0;
  for (const auto& p : pts) {
    if (g.in_extent(p) && cells.contains(g.locate(p))) ++in;
  }
  return static_cast<double>(in) / static_cast<double>(pts.size());
}

}  // namespace oracle
