#pragma once

#include <chrono>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actspace/grid.hpp"
#include "actspace/kde.hpp"

namespace actspace {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

struct GpsFix {
  std::string device_id;
  Timestamp time{};
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> accuracy;  // meters; carried through, not used

  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

// Fixes of one device in strictly increasing time.
struct Trajectory {
  std::string device_id;
  std::vector<GpsFix> fixes;
};

struct ProjectionReference {
  double lat0 = 0.0;
  double lon0 = 0.0;
};

struct GpsParseResult {
  std::vector<Trajectory> trajectories;  // in order of first appearance
  std::vector<std::string> warnings;
};

constexpr double kEarthRadiusMeters = 6371000.0;

// ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]" ('T' or ' '); no
// offset means UTC. Returns nullopt when malformed.
std::optional<Timestamp> parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp t);

/// Reads CSV with header columns id, timestamp, lat, lon and optionally
/// accuracy, resolved by name case-insensitively in any order. Rows are
/// grouped by id and stably sorted by time. Exact duplicate rows are dropped;
/// of several distinct rows sharing (id, timestamp) the first is kept and a
/// warning is recorded. Throws DataError naming the line on malformed input.
GpsParseResult parse_gps_csv(std::istream& in);

// Mean latitude and longitude of the fixes.
ProjectionReference centroid(const Trajectory& traj);

// Local equirectangular projection to meters around ref, preserving order.
Point project(const ProjectionReference& ref, double lat, double lon) noexcept;
PointSet project(const Trajectory& traj, const ProjectionReference& ref);
PointSet project(const Trajectory& traj);  // about the trajectory centroid

// Points inside bbox, boundaries inclusive, in input order. May be empty.
std::vector<Point> clip_bbox(std::span<const Point> points, const BoundingBox& bbox);

double haversine_meters(double lat1, double lon1, double lat2, double lon2) noexcept;

}  // namespace actspace
