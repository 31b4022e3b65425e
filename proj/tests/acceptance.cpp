// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `acceptance --calibrate` recomputes the frozen error
// thresholds below from 100 independent replications.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "actspace/analysis.hpp"
#include "actspace/cli.hpp"
#include "actspace/io.hpp"
#include "oracles.hpp"
#include "property_checks.hpp"

using namespace actspace;
namespace fs = std::filesystem;

namespace {

// Frozen by `acceptance --calibrate` (seeds 10001..10100, n = 8000, h = 0.5,
// cell size 0.05): mean + 5 * stderr of the density-ranking error.
constexpr double kEpsAnchor = 0.087451;  // P(A_0.6 sym-diff anchors)
constexpr double kEpsRoad = 0.147310;    // P(A_0.9 sym-diff anchors+roads)

constexpr std::size_t kN = 8000;
constexpr double kH = 0.5;
constexpr double kCell = 0.05;
constexpr std::uint64_t kCalibrationSeed = 10001;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Both density-ranking errors for every calibration seed.
std::pair<std::vector<double>, std::vector<double>> calibration_errors() {
  const std::vector<double> gammas{0.6, 0.9};
  const auto runs = run_benchmark(paper_model(), kN, 100, kCalibrationSeed, Bandwidth(kH), kCell, gammas, workers());
  std::vector<double> anchor, road;
  for (const auto& r : runs) {
    anchor.push_back(r.dr_anchor[0]);
    road.push_back(r.dr_road[1]);
  }
  return {anchor, road};
}

// Per-run quantities for criteria 1 and 2.
struct RecoveryRun {
  bool anchors_inside = false;
  double min_anchor_alpha = 1.0;
  double dr_anchor = 0, dr_road = 0, kde_road = 0;
};

RecoveryRun recovery_run(std::uint64_t seed) {
  const auto model = paper_model();
  const PointSet pts = sample(model, kN, Seed{seed});
  const KernelDensity kde{pts, Bandwidth(kH)};
  const RasterGrid grid = analysis_grid(pts, Bandwidth(kH), kCell);
  const ScalarField density = kde.field(grid);
  const ScalarField rank = rank_field(RankingIndex(kde.at_samples()), density);
  const CellMasses masses = cell_masses(model, grid);

  RecoveryRun r;
  const CellSet a06 = level_set(rank, 0.6);
  r.anchors_inside = true;
  for (const auto& atom : model.atoms()) {
    const auto cell = grid.locate(atom.at);
    r.anchors_inside = r.anchors_inside && a06.contains(cell);
    r.min_anchor_alpha = std::min(r.min_anchor_alpha, rank.at(cell));
  }
  r.dr_anchor = symmetric_difference_error(model, masses, a06, SupportTarget::Anchors);
  r.dr_road = symmetric_difference_error(model, masses, level_set(rank, 0.9), SupportTarget::AnchorsAndRoads);
  CellSet raw(grid);
  const double peak = density.max();
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (density[i] >= 0.9 * peak) raw.insert(i);
  }
  r.kde_road = symmetric_difference_error(model, masses, raw, SupportTarget::AnchorsAndRoads);
  return r;
}

std::vector<RecoveryRun> recovery_runs() {
  std::vector<RecoveryRun> runs(20);
  for (std::uint64_t s = 0; s < 20; ++s) runs[s] = recovery_run(1 + s);
  return runs;
}

Outcome criterion1(const std::vector<RecoveryRun>& runs) {
  bool all_inside = true;
  double min_alpha = 1.0;
  std::vector<double> err;
  for (const auto& r : runs) {
    all_inside = all_inside && r.anchors_inside;
    min_alpha = std::min(min_alpha, r.min_anchor_alpha);
    err.push_back(r.dr_anchor);
  }
  const double m = mean(err);
  return {all_inside && m <= kEpsAnchor,
          fmt("anchors inside A_0.6 in %s of 20 runs (lowest anchor alpha %.4f); mean error %.4f vs eps_A %.4f",
              all_inside ? "all" : "not all", min_alpha, m, kEpsAnchor)};
}

Outcome criterion2(const std::vector<RecoveryRun>& runs) {
  std::vector<double> dr, raw;
  for (const auto& r : runs) {
    dr.push_back(r.dr_road);
    raw.push_back(r.kde_road);
  }
  const double m = mean(dr), k = mean(raw);
  return {m <= kEpsRoad && m < k, fmt("mean DR error %.4f vs eps_R %.4f; KDE baseline %.4f", m, kEpsRoad, k)};
}

Outcome criterion3() {
  const auto gammas = benchmark_levels();
  const auto runs = run_benchmark(paper_model(), kN, 100, 1, Bandwidth(kH), kCell, gammas, workers());
  const auto s = summarize(gammas, runs);
  const auto best = std::min_element(s.dr_anchor.mean.begin(), s.dr_anchor.mean.end()) - s.dr_anchor.mean.begin();
  const double g = gammas[static_cast<std::size_t>(best)];
  double max_se = 0;
  for (const auto* ser : {&s.dr_anchor, &s.dr_road, &s.kde_anchor, &s.kde_road}) {
    for (double se : ser->stderr_) max_se = std::max(max_se, se);
  }
  const bool valley = g >= 0.50 - 1e-9 && g <= 0.65 + 1e-9;
  return {valley && max_se <= 0.01,
          fmt("argmin gamma %.2f (error %.4f); largest standard error %.4f", g, s.dr_anchor.mean[best], max_se)};
}

double modal(const SummaryCurve& c, double lo, double hi) {
  std::map<double, int> counts;
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    if (c.levels[k] > lo + 1e-9 && c.levels[k] < hi - 1e-9) ++counts[c.values[k]];
  }
  double best = -1;
  int n = 0;
  for (const auto& [v, cnt] : counts) {
    if (cnt > n) best = v, n = cnt;
  }
  return best;
}

Outcome criterion4(const Analysis& a) {
  const double m1 = modal(a.betti, 0.05, 0.28), m2 = modal(a.betti, 0.32, 0.48), m3 = modal(a.betti, 0.52, 0.58);
  std::string first3 = "none";
  for (std::size_t k = 0; k < a.betti.levels.size(); ++k) {
    if (a.betti.values[k] == 3) {
      first3 = fmt("%.2f", a.betti.levels[k]);
      break;
    }
  }
  return {m1 == 1 && m2 == 2 && m3 == 3,
          fmt("modal Betti %g / %g / %g (want 1 / 2 / 3); Betti first reaches 3 at gamma %s", m1, m2, m3,
              first3.c_str())};
}

Outcome criterion5(const Analysis& a) {
  // Three anchors at distinct analytic rankings 1.0 / 0.7 / 0.52.
  const auto model = paper_model();
  const double home = true_alpha(model, {0, 0}), office = true_alpha(model, {0, 2}), gym = true_alpha(model, {2, 0});
  const bool gaps = home == 1.0 && std::abs(office - 0.7) < 1e-12 && std::abs(gym - 0.52) < 1e-12;
  std::size_t big = 0;
  double top = 0;
  for (const auto& p : a.pairs) {
    big += p.persistence() >= 0.3;
    top = std::max(top, p.persistence());
  }
  return {gaps && big == 3 && top >= 0.95,
          fmt("%zu pairs with persistence >= 0.3; max persistence %.4f; analytic anchor alphas %.2f/%.2f/%.2f", big,
              top, home, office, gym)};
}

Outcome criterion6() {
  const PointSet pts = sample(paper_model(), 20000, Seed{6});
  std::string trace;
  double prev = -1;
  bool inc = true;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    const double v = evaluate_kde(pts, {0, 0}, Bandwidth(h));
    inc = inc && v > prev;
    prev = v;
    trace += fmt("%s%.2f", trace.empty() ? "" : " < ", v);
  }
  return {inc, "p(0,0) along h = 0.4, 0.2, 0.1, 0.05: " + trace};
}

Outcome criterion7() {
  const auto model = paper_model();
  std::vector<double> medians;
  for (std::size_t n : {1000u, 4000u, 16000u}) {
    const double h = std::pow(static_cast<double>(n), -1.0 / 7.0);
    std::vector<double> per_seed;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const PointSet pts = sample(model, n, Seed{s});
      const KernelDensity kde{pts, Bandwidth(h)};
      const RankingIndex index(kde.at_samples());
      const PointSet fresh = sample(model, 2000, Seed{1000000 + s});
      double sq = 0;
      for (const auto& x : fresh) {
        const double d = index.alpha(kde(x)) - true_alpha(model, x);
        sq += d * d;
      }
      per_seed.push_back(sq / 2000.0);
    }
    medians.push_back(median(per_seed));
  }
  return {medians[0] > medians[1] && medians[1] > medians[2],
          fmt("median integrated squared ranking error %.5f > %.5f > %.5f", medians[0], medians[1], medians[2])};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::size_t cc_bad = 0, betti_bad = 0, rank_bad = 0;
  std::uniform_real_distribution<double> fill(0.05, 0.95);
  const auto g64 = RasterGrid::make({0, 0, 64, 64}, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto cells = oracle::random_cells(g64, fill(rng), rng);
    const auto conn = t % 2 ? Connectivity::Four : Connectivity::Eight;
    cc_bad += connected_components(cells, conn).count != oracle::flood_fill_count(cells, conn);
  }
  const auto levels = default_levels();
  for (int t = 0; t < 20; ++t) {
    const auto g = RasterGrid::make({0, 0, 32, 24}, 1.0);
    const auto field = oracle::random_quantized_field(g, 5 + t, rng);
    const auto pairs = persistence_pairs(field, Connectivity::Eight);
    const auto b = betti_curve(field, levels, Connectivity::Eight);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      double alive = 0;
      for (const auto& p : pairs) alive += p.birth_alpha >= 1.0 - levels[k] && 1.0 - levels[k] > p.death_alpha;
      betti_bad += b.values[k] != alive;
    }
  }
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    const auto g = RasterGrid::make({0, 0, 10, 10}, 1.0);
    std::vector<double> samples(50), cells(g.size());
    for (auto& s : samples) s = u(rng);
    for (auto& c : cells) c = t % 2 ? samples[static_cast<std::size_t>(u(rng) * 50)] : u(rng);
    const auto r = rank_field(build_ranking_index(samples), ScalarField(g, cells));
    for (std::size_t i = 0; i < g.size(); ++i) rank_bad += r[i] != oracle::alpha(samples, cells[i]);
  }
  return {cc_bad == 0 && betti_bad == 0 && rank_bad == 0,
          fmt("mismatches: components %zu/200 sets, Betti %zu/1980 levels, ranking %zu/2000 cells", cc_bad, betti_bad,
              rank_bad)};
}

Outcome criterion9() {
  constexpr int kCases = 1000;
  const std::size_t v[] = {props::alpha_in_unit_interval(kCases, 91),    props::ranking_scale_invariant(kCases, 92),
                           props::level_sets_nested(kCases, 93),         props::mass_volume_non_decreasing(kCases, 94),
                           props::persistence_non_increasing(kCases, 95), props::true_measure_additive(kCases, 96)};
  bool ok = true;
  for (auto x : v) ok = ok && x == 0;
  return {ok, fmt("violations per 1000 cases: alpha range %zu, scale %zu, nesting %zu, volume %zu, persistence %zu, "
                  "measure %zu",
                  v[0], v[1], v[2], v[3], v[4], v[5])};
}

Outcome criterion10() {
  const fs::path input = fs::path(ACTSPACE_SOURCE_DIR) / "data" / "synthetic_gps_5000.csv";
  const fs::path root = fs::temp_directory_path() / "actspace_acceptance_smoke";
  fs::remove_all(root);
  std::ostringstream out, err;
  auto run = [&](const fs::path& dir) {
    return run_cli({"analyze", "--input", input.string(), "--bandwidth", "200", "--gamma", "0.5,0.6,0.9", "--out",
                    dir.string()},
                   out, err);
  };
  if (run(root / "a") != 0 || run(root / "b") != 0) return {false, "analyze failed: " + err.str()};

  std::size_t files = 0, identical = 0;
  std::string problem;
  try {
    const auto manifest = nlohmann::json::parse(slurp(root / "a" / "manifest.json"));
    const auto& ds = manifest.at("datasets").at(0);
    if (ds.at("fixes") != 5000) problem = "manifest does not report 5000 fixes";
    for (const auto& f : ds.at("files")) {
      const std::string name = f.get<std::string>();
      const fs::path p = root / "a" / name;
      if (name.ends_with(".asc")) {
        const auto field = read_esri_ascii(p);
        for (double v : field.values()) {
          if (v < 0 || v > 1) problem = name + " has a value outside [0,1]";
        }
      } else if (name == "pairs.csv") {
        if (read_pairs_csv(p).empty()) problem = "no persistence pairs";
      } else if (name == "sample_rankings.csv") {
        std::istringstream in(slurp(p));
        std::string line;
        std::getline(in, line);
        std::size_t rows = 0;
        while (std::getline(in, line)) {
          const auto comma = line.find(',');
          if (comma == std::string::npos || std::stoul(line.substr(0, comma)) != rows) problem = "bad ranking row";
          const double a = std::stod(line.substr(comma + 1));
          if (a <= 0 || a > 1) problem = "ranking out of range";
          ++rows;
        }
        if (rows != 5000) problem = "sample rankings have " + std::to_string(rows) + " rows";
      } else {
        const auto kind = name == "betti.csv"         ? CurveKind::Betti
                          : name == "persistence.csv" ? CurveKind::Persistence
                                                      : CurveKind::MassVolume;
        if (read_curve_csv(p, kind).levels.empty()) problem = name + " is empty";
      }
      ++files;
    }
    for (const auto& e : fs::directory_iterator(root / "a")) {
      identical += slurp(e.path()) == slurp(root / "b" / e.path().filename());
    }
  } catch (const std::exception& e) {
    problem = e.what();
  }
  const std::size_t present = static_cast<std::size_t>(std::distance(fs::directory_iterator(root / "a"), {}));
  const bool ok = problem.empty() && files == 9 && identical == present;
  return {ok, fmt("%zu artifacts re-parsed, %zu of %zu files byte-identical on rerun%s%s", files, identical, present,
                  problem.empty() ? "" : "; ", problem.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "--calibrate") {
    const auto [anchor, road] = calibration_errors();
    std::printf("eps_A = %.6f  (mean %.6f, stderr %.6f)\n", mean(anchor) + 5 * stderr_of(anchor), mean(anchor),
                stderr_of(anchor));
    std::printf("eps_R = %.6f  (mean %.6f, stderr %.6f)\n", mean(road) + 5 * stderr_of(road), mean(road),
                stderr_of(road));
    return 0;
  }

  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  std::vector<RecoveryRun> runs;
  report(1, "anchor recovery", [&] {
    runs = recovery_runs();
    return criterion1(runs);
  });
  report(2, "road recovery", [&] { return criterion2(runs); });
  report(3, "error valley", criterion3);

  AnalysisConfig cfg;
  cfg.bandwidth = kH;
  cfg.cell_size = kCell;
  const Analysis single = analyze(sample(paper_model(), kN, Seed{1}), cfg);
  report(4, "Betti flat regions", [&] { return criterion4(single); });
  report(5, "persistence structure", [&] { return criterion5(single); });
  report(6, "density divergence", criterion6);
  report(7, "ranking consistency", criterion7);
  report(8, "oracle equivalences", criterion8);
  report(9, "structural invariants", criterion9);
  report(10, "pipeline smoke", criterion10);

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 10 criteria passed in %.1fs\n", 10 - failed, total);
  return failed ? 1 : 0;
}
