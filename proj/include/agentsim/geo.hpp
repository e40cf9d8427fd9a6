#pragma once

namespace agentsim {

inline constexpr double kEarthRadiusM = 6371000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p);

// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine(const GeoPoint& a, const GeoPoint& b);

// Point at fraction f in [0, 1] of the great-circle arc from a to b.
GeoPoint intermediate_point(const GeoPoint& a, const GeoPoint& b, double f);

// Shift by (east_m, north_m) in the local tangent plane at p.
GeoPoint offset_meters(const GeoPoint& p, double east_m, double north_m);

// Inverse of offset_meters: local (east, north) of q relative to p, meters.
void local_offset_meters(const GeoPoint& p, const GeoPoint& q, double& east_m,
                         double& north_m);

}  // namespace agentsim
