#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "actspace/grid.hpp"
#include "actspace/topology.hpp"

namespace actspace {

// ESRI ASCII grid: ncols, nrows, xllcorner, yllcorner, cellsize,
// NODATA_value -9999, then rows north to south, values with 6 significant
// digits separated by single spaces.
void write_esri_ascii(std::ostream& out, const ScalarField& field);
void write_esri_ascii(const std::filesystem::path& path, const ScalarField& field);
void write_esri_ascii(const std::filesystem::path& path, const CellSet& cells);  // 0/1 mask
ScalarField read_esri_ascii(std::istream& in);
ScalarField read_esri_ascii(const std::filesystem::path& path);

// "level,value" with 6 decimals. When log_column is set a third column holds
// the natural log of the value (empty when the value is not positive).
void write_curve_csv(const std::filesystem::path& path, const SummaryCurve& curve, bool log_column = false);
SummaryCurve read_curve_csv(const std::filesystem::path& path, CurveKind kind);

// "birth_alpha,death_alpha,persistence,birth_row,birth_col".
void write_pairs_csv(const std::filesystem::path& path, std::span<const PersistencePair> pairs);
std::vector<PersistencePair> read_pairs_csv(const std::filesystem::path& path);

// "index,alpha" with 6 decimals.
void write_rankings_csv(const std::filesystem::path& path, std::span<const double> alphas);

// "x,y" sample files.
void write_points_csv(std::ostream& out, std::span<const Point> points);
void write_points_csv(const std::filesystem::path& path, std::span<const Point> points);
std::vector<Point> read_points_csv(std::istream& in);

// Compact fixed-point rendering used in file names, e.g. 0.5 -> "0.5", 200 -> "200".
std::string format_level(double v);

}  // namespace actspace
