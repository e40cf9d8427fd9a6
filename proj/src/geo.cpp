#include "agentsim/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace agentsim {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDeg;
  const double phi2 = b.lat * kDeg;
  const double dphi = (b.lat - a.lat) * kDeg;
  const double dlambda = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

GeoPoint intermediate_point(const GeoPoint& a, const GeoPoint& b, double f) {
  if (f <= 0.0) return a;
  if (f >= 1.0) return b;
  const double delta = haversine(a, b) / kEarthRadiusM;
  if (delta < 1e-12) return a;
  const double phi1 = a.lat * kDeg, lam1 = a.lon * kDeg;
  const double phi2 = b.lat * kDeg, lam2 = b.lon * kDeg;
  const double wa = std::sin((1.0 - f) * delta) / std::sin(delta);
  const double wb = std::sin(f * delta) / std::sin(delta);
  const double x = wa * std::cos(phi1) * std::cos(lam1) +
                   wb * std::cos(phi2) * std::cos(lam2);
  const double y = wa * std::cos(phi1) * std::sin(lam1) +
                   wb * std::cos(phi2) * std::sin(lam2);
  const double z = wa * std::sin(phi1) + wb * std::sin(phi2);
  return {std::atan2(z, std::hypot(x, y)) / kDeg, std::atan2(y, x) / kDeg};
}

GeoPoint offset_meters(const GeoPoint& p, double east_m, double north_m) {
  const double dlat = north_m / kEarthRadiusM / kDeg;
  const double dlon = east_m / (kEarthRadiusM * std::cos(p.lat * kDeg)) / kDeg;
  return {p.lat + dlat, p.lon + dlon};
}

void local_offset_meters(const GeoPoint& p, const GeoPoint& q, double& east_m,
                         double& north_m) {
  north_m = (q.lat - p.lat) * kDeg * kEarthRadiusM;
  east_m = (q.lon - p.lon) * kDeg * kEarthRadiusM * std::cos(p.lat * kDeg);
}

}  // namespace agentsim
