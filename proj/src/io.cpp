#include "actspace/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "actspace/error.hpp"

namespace actspace {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": cannot parse number '" + s + "'");
  }
}

void expect_header(std::istream& in, const std::string& expected, const std::string& context) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(context + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw DataError(context + ": expected header '" + expected + "', found '" + line + "'");
}

void write_grid(std::ostream& out, const RasterGrid& g, const std::function<std::string(std::size_t)>& cell) {
  out << "ncols " << g.ncols() << "\n"
      << "nrows " << g.nrows() << "\n"
      << "xllcorner " << fmt("%.17g", g.bbox().xmin) << "\n"
      << "yllcorner " << fmt("%.17g", g.bbox().ymin) << "\n"
      << "cellsize " << fmt("%.17g", g.cell_size()) << "\n"
      << "NODATA_value -9999\n";
  for (std::size_t r = g.nrows(); r-- > 0;) {
    for (std::size_t c = 0; c < g.ncols(); ++c) {
      if (c) out << ' ';
      out << cell(g.linear({r, c}));
    }
    out << '\n';
  }
}

}  // namespace

void write_esri_ascii(std::ostream& out, const ScalarField& field) {
  write_grid(out, field.grid(), [&](std::size_t i) { return fmt("%.6g", field[i]); });
}

void write_esri_ascii(const std::filesystem::path& path, const ScalarField& field) {
  auto out = open_out(path);
  write_esri_ascii(out, field);
}

void write_esri_ascii(const std::filesystem::path& path, const CellSet& cells) {
  auto out = open_out(path);
  write_grid(out, cells.grid(), [&](std::size_t i) { return std::string(cells.contains(i) ? "1" : "0"); });
}

ScalarField read_esri_ascii(std::istream& in) {
  const char* keys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};
  double header[6] = {};
  for (int k = 0; k < 6; ++k) {
    std::string key;
    if (!(in >> key >> header[k])) throw DataError("ESRI grid: truncated header");
    if (key != keys[k]) throw DataError("ESRI grid: expected '" + std::string(keys[k]) + "', found '" + key + "'");
  }
  const auto ncols = static_cast<std::size_t>(header[0]);
  const auto nrows = static_cast<std::size_t>(header[1]);
  if (static_cast<double>(ncols) != header[0] || static_cast<double>(nrows) != header[1]) {
    throw DataError("ESRI grid: non-integer dimensions");
  }
  const RasterGrid grid = RasterGrid::from_dimensions(header[2], header[3], header[4], ncols, nrows);
  std::vector<double> values(grid.size());
  for (std::size_t r = nrows; r-- > 0;) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!(in >> values[grid.linear({r, c})])) throw DataError("ESRI grid: truncated body");
    }
  }
  std::string extra;
  if (in >> extra) throw DataError("ESRI grid: trailing data '" + extra + "'");
  return ScalarField(grid, std::move(values));
}

ScalarField read_esri_ascii(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_esri_ascii(in);
}

void write_curve_csv(const std::filesystem::path& path, const SummaryCurve& curve, bool log_column) {
  auto out = open_out(path);
  out << (log_column ? "level,value,log_value\n" : "level,value\n");
  for (std::size_t i = 0; i < curve.levels.size(); ++i) {
    out << fmt("%.6f", curve.levels[i]) << ',' << fmt("%.6f", curve.values[i]);
    if (log_column) out << ',' << (curve.values[i] > 0.0 ? fmt("%.6f", std::log(curve.values[i])) : "");
    out << '\n';
  }
}

SummaryCurve read_curve_csv(const std::filesystem::path& path, CurveKind kind) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "level,value" && line != "level,value,log_value") {
    throw DataError(path.string() + ": unexpected curve header '" + line + "'");
  }
  const std::size_t width = split(line, ',').size();
  SummaryCurve curve{kind, {}, {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != width) throw DataError(path.string() + ": malformed row '" + line + "'");
    curve.levels.push_back(to_double(f[0], path.string()));
    curve.values.push_back(to_double(f[1], path.string()));
  }
  return curve;
}

void write_pairs_csv(const std::filesystem::path& path, std::span<const PersistencePair> pairs) {
  auto out = open_out(path);
  out << "birth_alpha,death_alpha,persistence,birth_row,birth_col\n";
  for (const auto& p : pairs) {
    out << fmt("%.6f", p.birth_alpha) << ',' << fmt("%.6f", p.death_alpha) << ',' << fmt("%.6f", p.persistence())
        << ',' << p.birth_cell.row << ',' << p.birth_cell.col << '\n';
  }
}

std::vector<PersistencePair> read_pairs_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_header(in, "birth_alpha,death_alpha,persistence,birth_row,birth_col", path.string());
  std::vector<PersistencePair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw DataError(path.string() + ": malformed row '" + line + "'");
    PersistencePair p;
    p.birth_alpha = to_double(f[0], path.string());
    p.death_alpha = to_double(f[1], path.string());
    p.birth_cell = {static_cast<std::size_t>(to_double(f[3], path.string())),
                    static_cast<std::size_t>(to_double(f[4], path.string()))};
    pairs.push_back(p);
  }
  return pairs;
}

void write_rankings_csv(const std::filesystem::path& path, std::span<const double> alphas) {
  auto out = open_out(path);
  out << "index,alpha\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) out << i << ',' << fmt("%.6f", alphas[i]) << '\n';
}

void write_points_csv(std::ostream& out, std::span<const Point> points) {
  out << "x,y\n";
  for (const auto& p : points) out << fmt("%.17g", p.x) << ',' << fmt("%.17g", p.y) << '\n';
}

void write_points_csv(const std::filesystem::path& path, std::span<const Point> points) {
  auto out = open_out(path);
  write_points_csv(out, points);
}

std::vector<Point> read_points_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      header = split(line, ',');
      break;
    }
  }
  if (header.empty()) throw DataError("points CSV is empty");
  std::size_t cx = header.size(), cy = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x" || header[i] == "X") cx = i;
    if (header[i] == "y" || header[i] == "Y") cy = i;
  }
  if (cx == header.size() || cy == header.size()) throw DataError("points CSV header must contain x and y columns");

  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    const std::string ctx = "line " + std::to_string(line_no);
    if (f.size() <= std::max(cx, cy)) throw DataError(ctx + ": too few fields");
    const Point p{to_double(f[cx], ctx), to_double(f[cy], ctx)};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DataError(ctx + ": non-finite coordinate");
    pts.push_back(p);
  }
  return pts;
}

std::string format_level(double v) {
  std::string s = fmt("%.6f", v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace actspace
