#include "actspace/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "actspace/analysis.hpp"
#include "actspace/error.hpp"
#include "actspace/ingest.hpp"
#include "actspace/io.hpp"

namespace actspace {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const Json& manifest) {
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
}

BoundingBox parse_bbox(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--bbox: cannot parse '" + item + "'");
    }
  }
  if (v.size() != 4) throw UsageError("--bbox expects xmin,ymin,xmax,ymax");
  BoundingBox b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) throw UsageError("--bbox must satisfy xmin < xmax and ymin < ymax");
  return b;
}

Json bbox_json(const BoundingBox& b) { return Json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

std::string sanitize(const std::string& id) {
  std::string s;
  for (unsigned char c : id) s += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? static_cast<char>(c) : '_';
  if (s.empty() || s == "." || s == "..") s = "device_" + s;
  return s;
}

// One point set to analyze, with what the manifest needs to know about it.
struct Dataset {
  std::string name;  // empty for a single dataset written at the top level
  std::vector<Point> points;
  Json info;
};

bool looks_like_gps(const std::string& text) {
  std::string header = text.substr(0, text.find('\n'));
  std::transform(header.begin(), header.end(), header.begin(), [](unsigned char c) { return std::tolower(c); });
  std::set<std::string> names;
  std::stringstream ss(header);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.pop_back();
    names.insert(item);
  }
  return names.count("lat") && names.count("lon");
}

std::vector<Dataset> load_datasets(const fs::path& input, const std::optional<BoundingBox>& bbox, std::ostream& err) {
  const std::string text = read_file(input);
  std::vector<Dataset> sets;
  if (looks_like_gps(text)) {
    std::istringstream in(text);
    GpsParseResult parsed = parse_gps_csv(in);
    for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
    if (parsed.trajectories.empty()) throw DataError(input.string() + ": no GPS fixes");
    std::set<std::string> used;
    for (const auto& traj : parsed.trajectories) {
      const ProjectionReference ref = centroid(traj);
      std::vector<Point> pts;
      for (const auto& f : traj.fixes) pts.push_back(project(ref, f.lat, f.lon));
      Dataset d;
      if (parsed.trajectories.size() > 1) {
        d.name = sanitize(traj.device_id);
        if (!used.insert(d.name).second) throw DataError("device ids collide after sanitizing: " + d.name);
      }
      d.info = Json{{"format", "gps"},
                    {"device_id", traj.device_id},
                    {"fixes", traj.fixes.size()},
                    {"projection", Json{{"method", "equirectangular"},
                                        {"lat0", ref.lat0},
                                        {"lon0", ref.lon0},
                                        {"earth_radius_m", kEarthRadiusMeters}}}};
      d.points = std::move(pts);
      sets.push_back(std::move(d));
    }
  } else {
    std::istringstream in(text);
    Dataset d;
    d.points = read_points_csv(in);
    d.info = Json{{"format", "xy"}, {"rows", d.points.size()}};
    sets.push_back(std::move(d));
  }
  for (auto& d : sets) {
    if (bbox) d.points = clip_bbox(d.points, *bbox);
    if (d.points.empty()) {
      throw DataError(input.string() + (d.name.empty() ? "" : " [" + d.name + "]") + ": no points to analyze");
    }
    d.info["points"] = d.points.size();
  }
  return sets;
}

Json config_json(const AnalysisConfig& cfg) {
  Json j{{"bandwidth", cfg.bandwidth},
         {"cell_size", cfg.effective_cell_size()},
         {"connectivity", static_cast<int>(cfg.connectivity)},
         {"step", cfg.step},
         {"gamma", cfg.gammas},
         {"seed", cfg.seed}};
  j["bbox"] = cfg.bbox ? bbox_json(*cfg.bbox) : Json(nullptr);
  return j;
}

Json grid_json(const RasterGrid& g) {
  return Json{{"ncols", g.ncols()}, {"nrows", g.nrows()}, {"xllcorner", g.bbox().xmin},
              {"yllcorner", g.bbox().ymin}, {"cellsize", g.cell_size()}};
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Options shared by analyze, bench and sweep.
struct Common {
  double cell_size = 0.0;
  double step = 0.01;
  int connectivity = 8;
  std::uint64_t seed = 1;
  std::string bbox;
  std::vector<double> gammas;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--cell-size", c.cell_size, "Raster cell size (default bandwidth/4)");
  cmd->add_option("--step", c.step, "Level step for the summary curves")->capture_default_str();
  cmd->add_option("--connectivity", c.connectivity, "Cell adjacency, 4 or 8")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--bbox", c.bbox, "Clip box xmin,ymin,xmax,ymax");
  cmd->add_option("--gamma", c.gammas, "Comma-separated levels")->delimiter(',');
}

AnalysisConfig make_config(const Common& c, double bandwidth, const CLI::App* cmd) {
  AnalysisConfig cfg;
  cfg.bandwidth = bandwidth;
  if (cmd->count("--cell-size")) cfg.cell_size = c.cell_size;
  cfg.connectivity = parse_connectivity(c.connectivity);
  cfg.step = c.step;
  cfg.gammas = c.gammas;
  if (!c.bbox.empty()) cfg.bbox = parse_bbox(c.bbox);
  cfg.seed = c.seed;
  cfg.workers = default_workers();
  cfg.validate();
  return cfg;
}

MixtureModel model_or_default(const std::string& path) { return path.empty() ? paper_model() : load_model(path); }

Json model_source(const std::string& path) { return path.empty() ? Json("builtin:paper_model") : Json(path); }

int cmd_simulate(const std::string& model_path, std::size_t n, std::uint64_t seed, const std::string& out_path,
                 std::ostream& out) {
  if (n == 0) throw UsageError("--n must be at least 1");
  const MixtureModel model = model_or_default(model_path);
  const PointSet pts = sample(model, n, Seed{seed});
  if (out_path.empty()) {
    write_points_csv(out, pts.points());
  } else {
    write_points_csv(fs::path(out_path), pts.points());
  }
  return 0;
}

Json write_analysis(const fs::path& dir, const Analysis& a, const AnalysisConfig& cfg) {
  ensure_dir(dir);
  Json files = Json::array();
  auto record = [&](const std::string& f) { files.push_back(f); };

  write_esri_ascii(dir / "rank_field.asc", a.rank);
  record("rank_field.asc");
  write_curve_csv(dir / "mass_volume.csv", a.mass_volume, /*log_column=*/true);
  record("mass_volume.csv");
  write_curve_csv(dir / "betti.csv", a.betti);
  record("betti.csv");
  write_curve_csv(dir / "persistence.csv", a.persistence);
  record("persistence.csv");
  write_pairs_csv(dir / "pairs.csv", a.pairs);
  record("pairs.csv");
  write_rankings_csv(dir / "sample_rankings.csv", a.sample_alpha);
  record("sample_rankings.csv");
  for (double g : cfg.gammas) {
    const std::string name = "level_set_" + format_level(g) + ".asc";
    write_esri_ascii(dir / name, level_set(a.rank, g));
    record(name);
  }
  return Json{{"grid", grid_json(a.grid)}, {"pairs", a.pairs.size()}, {"files", files}};
}

int cmd_analyze(const std::string& input, const AnalysisConfig& cfg, const fs::path& out_dir, std::ostream& err) {
  const auto sets = load_datasets(input, cfg.bbox, err);
  ensure_dir(out_dir);
  Json manifest{{"command", "analyze"}, {"version", kVersion}, {"input", input}, {"config", config_json(cfg)}};
  Json runs = Json::array();
  for (const auto& d : sets) {
    const Analysis a = analyze(PointSet(d.points), cfg);
    Json run = d.info;
    run["directory"] = d.name.empty() ? "." : d.name;
    run.update(write_analysis(out_dir / (d.name.empty() ? fs::path(".") : fs::path(d.name)), a, cfg));
    runs.push_back(std::move(run));
  }
  manifest["datasets"] = std::move(runs);
  write_manifest(out_dir, manifest);
  return 0;
}

std::string se_cell(const SeriesSummary& s, std::size_t k) {
  if (s.stderr_.empty()) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s.stderr_[k]);
  return buf;
}

int cmd_bench(const std::string& model_path, std::size_t n, std::size_t reps, const AnalysisConfig& cfg,
              const fs::path& out_dir) {
  if (n == 0) throw UsageError("--n must be at least 1");
  if (reps == 0) throw UsageError("--reps must be at least 1");
  const MixtureModel model = model_or_default(model_path);
  const std::vector<double> gammas = cfg.gammas.empty() ? benchmark_levels() : cfg.gammas;
  const auto runs = run_benchmark(model, n, reps, cfg.seed, Bandwidth(cfg.bandwidth), cfg.effective_cell_size(),
                                  gammas, cfg.workers);
  const BenchmarkSummary s = summarize(gammas, runs);

  ensure_dir(out_dir);
  std::ostringstream csv;
  csv << "gamma,dr_anchor_mean,dr_anchor_se,dr_road_mean,dr_road_se,"
         "kde_anchor_mean,kde_anchor_se,kde_road_mean,kde_road_se\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    csv << num(gammas[k]);
    for (const SeriesSummary* ser : {&s.dr_anchor, &s.dr_road, &s.kde_anchor, &s.kde_road}) {
      csv << ',' << num(ser->mean[k]) << ',' << se_cell(*ser, k);
    }
    csv << '\n';
  }
  write_text(out_dir / "bench.csv", csv.str());

  AnalysisConfig recorded = cfg;
  recorded.gammas = gammas;
  Json manifest{{"command", "bench"}, {"version", kVersion},  {"model", model_source(model_path)},
                {"n", n},             {"reps", reps},         {"seeds", Json::array({cfg.seed, cfg.seed + reps - 1})},
                {"config", config_json(recorded)},            {"files", Json::array({"bench.csv"})}};
  write_manifest(out_dir, manifest);
  return 0;
}

int cmd_sweep(const std::string& input, std::vector<double> bandwidths, const AnalysisConfig& base,
              const fs::path& out_dir, std::ostream& err) {
  std::sort(bandwidths.begin(), bandwidths.end());
  bandwidths.erase(std::unique(bandwidths.begin(), bandwidths.end()), bandwidths.end());
  if (bandwidths.size() < 2) throw UsageError("sweep needs at least two distinct bandwidths");
  for (double h : bandwidths) (void)Bandwidth(h);

  const auto sets = load_datasets(input, base.bbox, err);
  ensure_dir(out_dir);
  AnalysisConfig recorded = base;
  Json manifest{{"command", "sweep"}, {"version", kVersion}, {"input", input}};
  Json cfg_json = config_json(recorded);
  cfg_json["bandwidth"] = bandwidths;
  if (!base.cell_size) cfg_json["cell_size"] = "bandwidth/4";
  manifest["config"] = std::move(cfg_json);

  Json runs = Json::array();
  for (const auto& d : sets) {
    const fs::path dir = out_dir / (d.name.empty() ? fs::path(".") : fs::path(d.name));
    ensure_dir(dir);
    std::ostringstream summary;
    summary << "bandwidth,betti_max\n";
    Json files = Json::array();
    for (double h : bandwidths) {
      AnalysisConfig cfg = base;
      cfg.bandwidth = h;
      cfg.validate();
      const Analysis a = analyze(PointSet(d.points), cfg);
      const std::string name = "rank_field_h" + format_level(h) + ".asc";
      write_esri_ascii(dir / name, a.rank);
      files.push_back(name);
      const double bmax = a.betti.values.empty() ? 0.0 : *std::max_element(a.betti.values.begin(), a.betti.values.end());
      summary << format_level(h) << ',' << static_cast<long long>(bmax) << '\n';
    }
    write_text(dir / "sweep.csv", summary.str());
    files.push_back("sweep.csv");
    Json run = d.info;
    run["directory"] = d.name.empty() ? "." : d.name;
    run["files"] = std::move(files);
    runs.push_back(std::move(run));
  }
  manifest["datasets"] = std::move(runs);
  write_manifest(out_dir, manifest);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Activity-space measurement by density ranking", "actspace"};
  app.require_subcommand(1);

  std::string model_path, input, out_path;
  std::size_t n = 8000, reps = 100;
  double bandwidth = 0.0;
  std::vector<double> bandwidths;
  Common common;
  std::uint64_t sim_seed = 1;

  auto* sim = app.add_subcommand("simulate", "Draw points from a mixture model");
  sim->add_option("--model", model_path, "Model JSON (default: built-in paper model)");
  sim->add_option("--n", n, "Number of points")->required();
  sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  sim->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* ana = app.add_subcommand("analyze", "Density ranking and topological summaries of a point file");
  ana->add_option("--input", input, "Points CSV (x,y) or GPS CSV (id,timestamp,lat,lon)")->required();
  ana->add_option("--bandwidth", bandwidth, "Kernel bandwidth")->required();
  ana->add_option("--out", out_path, "Output directory")->required();
  add_common(ana, common);

  auto* bench = app.add_subcommand("bench", "Level-set error benchmark against the model oracle");
  bench->add_option("--model", model_path, "Model JSON (default: built-in paper model)");
  bench->add_option("--n", n, "Points per replication")->capture_default_str();
  bench->add_option("--reps", reps, "Replications")->capture_default_str();
  bench->add_option("--bandwidth", bandwidth, "Kernel bandwidth")->required();
  bench->add_option("--out", out_path, "Output directory")->required();
  add_common(bench, common);

  auto* sweep = app.add_subcommand("sweep", "Rank fields across several bandwidths");
  sweep->add_option("--input", input, "Points CSV (x,y) or GPS CSV")->required();
  sweep->add_option("--bandwidth", bandwidths, "Comma-separated bandwidths")->required()->delimiter(',');
  sweep->add_option("--out", out_path, "Output directory")->required();
  add_common(sweep, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(model_path, n, sim_seed, out_path, out);
    if (*ana) return cmd_analyze(input, make_config(common, bandwidth, ana), out_path, err);
    if (*bench) return cmd_bench(model_path, n, reps, make_config(common, bandwidth, bench), out_path);
    if (*sweep) return cmd_sweep(input, bandwidths, make_config(common, bandwidths.front(), sweep), out_path, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace actspace
