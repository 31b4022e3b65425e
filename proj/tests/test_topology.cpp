#include <doctest.h>

#include <random>

#include "actspace/error.hpp"
#include "actspace/ranking.hpp"
#include "actspace/topology.hpp"
#include "oracles.hpp"

using namespace actspace;

namespace {

ScalarField row_field(std::vector<double> v) {
  const auto g = RasterGrid::make({0, 0, static_cast<double>(v.size()), 1}, 1.0);
  return ScalarField(g, std::move(v));
}

// Number of pairs alive in the level set at gamma.
double alive(const std::vector<PersistencePair>& pairs, double gamma) {
  double n = 0;
  for (const auto& p : pairs) n += p.birth_alpha >= 1.0 - gamma && 1.0 - gamma > p.death_alpha;
  return n;
}

}  // namespace

TEST_CASE("connected components basics") {
  const auto g = RasterGrid::make({0, 0, 4, 4}, 1.0);
  CHECK(connected_components(CellSet(g), Connectivity::Eight).count == 0);
  CellSet all(g, std::vector<std::uint8_t>(g.size(), 1));
  CHECK(connected_components(all, Connectivity::Four).count == 1);

  CellSet diag(g);
  diag.insert(g.linear({0, 0}));
  diag.insert(g.linear({1, 1}));
  CHECK(connected_components(diag, Connectivity::Eight).count == 1);
  CHECK(connected_components(diag, Connectivity::Four).count == 2);
  const auto c = connected_components(diag, Connectivity::Four);
  CHECK(c.labels[g.linear({0, 0})] == 0);
  CHECK(c.labels[g.linear({1, 1})] == 1);
  CHECK(c.labels[g.linear({3, 3})] == -1);
}

TEST_CASE("parse_connectivity") {
  CHECK(parse_connectivity(4) == Connectivity::Four);
  CHECK(parse_connectivity(8) == Connectivity::Eight);
  CHECK_THROWS_AS(parse_connectivity(6), UsageError);
}

TEST_CASE("union-find agrees with flood fill on random sets") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> side(1, 64);
  std::uniform_real_distribution<double> fill(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = RasterGrid::make({0, 0, static_cast<double>(side(rng)), static_cast<double>(side(rng))}, 1.0);
    const auto cells = oracle::random_cells(g, fill(rng), rng);
    for (auto conn : {Connectivity::Four, Connectivity::Eight}) {
      const auto comp = connected_components(cells, conn);
      REQUIRE(comp.count == oracle::flood_fill_count(cells, conn));
      // Labels are consistent with adjacency.
      for (std::size_t i = 0; i < cells.size(); ++i) REQUIRE((comp.labels[i] >= 0) == cells.contains(i));
    }
  }
}

TEST_CASE("mass-volume curve") {
  const auto r = row_field({0.2, 1.0, 0.6});
  const std::vector<double> levels{0.5, 1.0};
  const auto mv = mass_volume_curve(r, levels);
  CHECK(mv.kind == CurveKind::MassVolume);
  CHECK(mv.values[0] == 2.0);
  CHECK(mv.values[1] == 3.0);
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(mass_volume_curve(r, bad), UsageError);
  const std::vector<double> out{0.5, 1.5};
  CHECK_THROWS_AS(mass_volume_curve(r, out), UsageError);
}

TEST_CASE("default levels and thresholds") {
  const auto l = default_levels();
  REQUIRE(l.size() == 99);
  CHECK(l.front() == doctest::Approx(0.01));
  CHECK(l.back() == doctest::Approx(0.99));
  const auto t = default_thresholds();
  REQUIRE(t.size() == 101);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 1.0);
}

TEST_CASE("single peak gives one pair dying at zero") {
  const auto r = row_field({0.1, 0.4, 0.9, 0.5, 0.2});
  const auto pairs = persistence_pairs(r, Connectivity::Eight);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].birth_alpha == 0.9);
  CHECK(pairs[0].death_alpha == 0.0);
  CHECK(pairs[0].persistence() == 0.9);
  CHECK(pairs[0].birth_cell == CellIndex{0, 2});
}

TEST_CASE("equal peaks merge with the row-major elder surviving") {
  const auto r = row_field({1.0, 0.3, 1.0});
  const auto pairs = persistence_pairs(r, Connectivity::Four);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].birth_alpha == 1.0);
  CHECK(pairs[0].death_alpha == 0.0);
  CHECK(pairs[0].birth_cell == CellIndex{0, 0});
  CHECK(pairs[1].birth_alpha == 1.0);
  CHECK(pairs[1].death_alpha == 0.3);
  CHECK(pairs[1].birth_cell == CellIndex{0, 2});
  CHECK(pairs[1].persistence() == doctest::Approx(0.7));
}

TEST_CASE("staircase with four peaks") {
  // Peaks b = 0.9, 0.8, 0.7, 0.6 separated by valleys; hand simulation:
  //   0.9 born, 0.8 born, 0.7 born, 0.6 born,
  //   valley 0.5 joins 0.7 and 0.6 -> 0.6 dies at 0.5,
  //   valley 0.4 joins 0.9 and 0.8 -> 0.8 dies at 0.4,
  //   valley 0.3 joins 0.9 and 0.7 -> 0.7 dies at 0.3,
  //   0.9 dies at 0.
  const auto r = row_field({0.9, 0.4, 0.8, 0.3, 0.7, 0.5, 0.6});
  const auto pairs = persistence_pairs(r, Connectivity::Eight);
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0].birth_alpha == 0.9);
  CHECK(pairs[0].death_alpha == 0.0);
  CHECK(pairs[1].birth_alpha == 0.8);
  CHECK(pairs[1].death_alpha == 0.4);
  CHECK(pairs[2].birth_alpha == 0.7);
  CHECK(pairs[2].death_alpha == 0.3);
  CHECK(pairs[3].birth_alpha == 0.6);
  CHECK(pairs[3].death_alpha == 0.5);

  // Betti staircase: +1 at each birth, -1 at each death.
  std::vector<double> levels;
  for (int k = 1; k <= 99; ++k) levels.push_back(k / 100.0);
  const auto b = betti_curve(r, levels, Connectivity::Eight);
  auto at = [&](double g) { return b.values[static_cast<std::size_t>(std::lround(g * 100)) - 1]; };
  CHECK(at(0.05) == 0);
  CHECK(at(0.15) == 1);
  CHECK(at(0.25) == 2);
  CHECK(at(0.35) == 3);
  CHECK(at(0.45) == 4);
  CHECK(at(0.55) == 3);
  CHECK(at(0.65) == 2);
  CHECK(at(0.75) == 1);
}

TEST_CASE("zero cells never enter the filtration") {
  const auto r = row_field({0.5, 0.0, 0.5});
  const auto pairs = persistence_pairs(r, Connectivity::Eight);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].death_alpha == 0.0);
  CHECK(pairs[1].death_alpha == 0.0);
}

TEST_CASE("plateau of equal values forms one component") {
  const auto g = RasterGrid::make({0, 0, 3, 3}, 1.0);
  const auto pairs = persistence_pairs(ScalarField(g, 0.7), Connectivity::Four);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].birth_cell == CellIndex{0, 0});
}

TEST_CASE("persistence curve counts inclusively") {
  std::vector<PersistencePair> pairs{{1.0, 0.0, {}}, {1.0, 0.3, {}}};
  const std::vector<double> t{0.0, 0.5, 0.7, 0.8, 1.0};
  const auto c = persistence_curve(pairs, t);
  CHECK(c.values == std::vector<double>{2, 2, 2, 1, 1});
  const std::vector<double> past{0.5, 1.0};
  CHECK(persistence_curve(std::vector<PersistencePair>{{0.4, 0.0, {}}}, past).values == std::vector<double>{0, 0});
}

TEST_CASE("Betti curve equals the alive count from pairs") {
  std::mt19937_64 rng(32);
  const auto levels = default_levels();
  std::uniform_int_distribution<int> side(2, 40), q(3, 40);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = RasterGrid::make({0, 0, static_cast<double>(side(rng)), static_cast<double>(side(rng))}, 1.0);
    const auto field = oracle::random_quantized_field(g, q(rng), rng);
    for (auto conn : {Connectivity::Four, Connectivity::Eight}) {
      const auto pairs = persistence_pairs(field, conn);
      const auto b = betti_curve(field, levels, conn);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        REQUIRE(b.values[k] == alive(pairs, levels[k]));
        REQUIRE(b.values[k] == oracle::flood_fill_count(level_set(field, levels[k]), conn));
      }
      // The eldest component carries the global maximum.
      double best = 0;
      for (const auto& p : pairs) best = std::max(best, p.persistence());
      if (field.max() > 0) REQUIRE(best == field.max());
    }
  }
}
