#include "actspace/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "actspace/error.hpp"

namespace actspace {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  text = trim(text);
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) || !parse_int(text.substr(8, 2), d) ||
      !parse_int(text.substr(11, 2), hh) || !parse_int(text.substr(14, 2), mm) || !parse_int(text.substr(17, 2), ss)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60 || hh < 0 || mm < 0 || ss < 0) return std::nullopt;

  std::string_view rest = text.substr(19);
  long long millis = 0;
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    std::size_t digits = 0;
    long long scale = 100;
    while (digits < rest.size() && std::isdigit(static_cast<unsigned char>(rest[digits]))) {
      millis += (rest[digits] - '0') * scale;
      scale /= 10;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
    rest.remove_prefix(digits);
  }
  minutes offset{0};
  if (rest == "Z" || rest == "z") {
    rest = {};
  } else if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
    int oh = 0, om = 0;
    if (rest.size() != 6 || rest[3] != ':' || !parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om)) {
      return std::nullopt;
    }
    offset = hours{oh} + minutes{om};
    if (rest.front() == '-') offset = -offset;
    rest = {};
  }
  if (!rest.empty()) return std::nullopt;

  const auto local = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
  return time_point_cast<milliseconds>(local - offset);
}

std::string format_iso8601(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(t);
  const year_month_day ymd{days};
  const hh_mm_ss tod{t - days};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(tod.hours().count()), static_cast<long long>(tod.minutes().count()),
                static_cast<long long>(tod.seconds().count()), static_cast<long long>(tod.subseconds().count()));
  return buf;
}

GpsParseResult parse_gps_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  // Header: first non-blank line.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw DataError("GPS CSV is empty; expected header id,timestamp,lat,lon[,accuracy]");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::map<std::string, std::size_t> column;
  const auto header = split_fields(line);
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(lower(header[i]), i);
  for (const char* required : {"id", "timestamp", "lat", "lon"}) {
    if (!column.count(required)) {
      throw DataError(std::string("GPS CSV header is missing column '") + required +
                      "'; expected id,timestamp,lat,lon[,accuracy]");
    }
  }
  const std::size_t c_id = column["id"], c_time = column["timestamp"], c_lat = column["lat"], c_lon = column["lon"];
  const std::optional<std::size_t> c_acc =
      column.count("accuracy") ? std::optional<std::size_t>(column["accuracy"]) : std::nullopt;
  const std::size_t needed = std::max({c_id, c_time, c_lat, c_lon, c_acc.value_or(0)}) + 1;

  GpsParseResult result;
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::vector<std::pair<GpsFix, std::size_t>>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_fields(line);
    if (f.size() < needed) fail(line_no, "expected at least " + std::to_string(needed) + " fields");
    GpsFix fix;
    fix.device_id = std::string(f[c_id]);
    if (fix.device_id.empty()) fail(line_no, "empty device id");
    const auto t = parse_iso8601(f[c_time]);
    if (!t) fail(line_no, "unparseable timestamp '" + std::string(f[c_time]) + "'");
    fix.time = *t;
    if (!parse_double(f[c_lat], fix.lat)) fail(line_no, "unparseable latitude '" + std::string(f[c_lat]) + "'");
    if (!parse_double(f[c_lon], fix.lon)) fail(line_no, "unparseable longitude '" + std::string(f[c_lon]) + "'");
    if (fix.lat < -90.0 || fix.lat > 90.0) fail(line_no, "latitude out of range [-90,90]");
    if (fix.lon < -180.0 || fix.lon > 180.0) fail(line_no, "longitude out of range [-180,180]");
    if (c_acc && !f[*c_acc].empty()) {
      double a = 0.0;
      if (!parse_double(f[*c_acc], a)) fail(line_no, "unparseable accuracy '" + std::string(f[*c_acc]) + "'");
      if (a < 0.0) fail(line_no, "accuracy must be non-negative");
      fix.accuracy = a;
    }
    auto [it, inserted] = slot.emplace(fix.device_id, rows.size());
    if (inserted) rows.emplace_back();
    rows[it->second].emplace_back(std::move(fix), line_no);
  }

  for (auto& device_rows : rows) {
    std::stable_sort(device_rows.begin(), device_rows.end(),
                     [](const auto& a, const auto& b) { return a.first.time < b.first.time; });
    Trajectory traj{device_rows.front().first.device_id, {}};
    std::size_t kept_line = 0;
    for (auto& [fix, ln] : device_rows) {
      if (!traj.fixes.empty() && traj.fixes.back().time == fix.time) {
        if (!(traj.fixes.back() == fix)) {
          result.warnings.push_back("line " + std::to_string(ln) + ": device '" + fix.device_id +
                                    "' has a second fix at " + format_iso8601(fix.time) + "; keeping line " +
                                    std::to_string(kept_line));
        }
        continue;
      }
      kept_line = ln;
      traj.fixes.push_back(std::move(fix));
    }
    result.trajectories.push_back(std::move(traj));
  }
  return result;
}

ProjectionReference centroid(const Trajectory& traj) {
  if (traj.fixes.empty()) throw DataError("trajectory '" + traj.device_id + "' has no fixes");
  double lat = 0.0, lon = 0.0;
  for (const auto& f : traj.fixes) {
    lat += f.lat;
    lon += f.lon;
  }
  const auto n = static_cast<double>(traj.fixes.size());
  return {lat / n, lon / n};
}

Point project(const ProjectionReference& ref, double lat, double lon) noexcept {
  constexpr double rad = std::numbers::pi / 180.0;
  return {(lon - ref.lon0) * rad * kEarthRadiusMeters * std::cos(ref.lat0 * rad),
          (lat - ref.lat0) * rad * kEarthRadiusMeters};
}

PointSet project(const Trajectory& traj, const ProjectionReference& ref) {
  std::vector<Point> pts;
  pts.reserve(traj.fixes.size());
  for (const auto& f : traj.fixes) pts.push_back(project(ref, f.lat, f.lon));
  return PointSet(std::move(pts));
}

PointSet project(const Trajectory& traj) { return project(traj, centroid(traj)); }

std::vector<Point> clip_bbox(std::span<const Point> points, const BoundingBox& bbox) {
  if (!bbox.valid()) throw UsageError("clip box is degenerate");
  std::vector<Point> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out), [&](const Point& p) { return bbox.contains(p); });
  return out;
}

double haversine_meters(double lat1, double lon1, double lat2, double lon2) noexcept {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace actspace
