// Writes a synthetic single-device GPS CSV drawn from the three-anchor
// mixture model, scaled so one model unit is one kilometre.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include "actspace/ingest.hpp"
#include "actspace/mixture.hpp"

int main(int argc, char** argv) {
  using namespace actspace;
  const std::string path = argc > 1 ? argv[1] : "synthetic_gps_5000.csv";
  constexpr std::size_t kFixes = 5000;
  constexpr double kScale = 1000.0;  // meters per model unit
  constexpr double kLat0 = 47.6062, kLon0 = -122.3321;
  constexpr double kJitter = 8.0;  // meters, receiver noise

  const PointSet pts = sample(paper_model(), kFixes, Seed{20240301});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, kJitter);
  std::uniform_real_distribution<double> acc(4.0, 25.0);

  const double m_per_deg = std::numbers::pi / 180.0 * kEarthRadiusMeters;
  const double coslat = std::cos(kLat0 * std::numbers::pi / 180.0);
  Timestamp t = *parse_iso8601("2024-03-01T06:00:00Z");

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 1;
  }
  out << "id,timestamp,lat,lon,accuracy\n";
  char buf[128];
  for (const Point& p : pts) {
    const double x = p.x * kScale + noise(rng);
    const double y = p.y * kScale + noise(rng);
    std::snprintf(buf, sizeof buf, "device-01,%s,%.7f,%.7f,%.1f\n", format_iso8601(t).c_str(),
                  kLat0 + y / m_per_deg, kLon0 + x / (m_per_deg * coslat), acc(rng));
    out << buf;
    t += std::chrono::minutes(3);
  }
  return 0;
}
