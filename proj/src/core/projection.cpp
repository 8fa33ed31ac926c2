#include "core/projection.hpp"

#include <cmath>
#include <string>

#include "core/common.hpp"

namespace gtwnn {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

struct TmParams {
  const char* name;
  double a, b;            // ellipsoid semi-axes (m)
  double f0;              // central-meridian scale factor
  double lat0, lon0;      // true origin (radians)
  double e0, n0;          // false easting / northing (m)
  double lon_min, lon_max, lat_min, lat_max;  // validity zone (degrees)
};

const TmParams& params_for(Crs crs) {
  // Airy 1830 for the national grid; WGS 84 for UTM.
  static const TmParams bng{
      "BNG", 6377563.396, 6356256.909, 0.9996012717,
      49.0 * kDegToRad, -2.0 * kDegToRad, 400000.0, -100000.0,
      -9.0, 2.0, 49.0, 61.0};
  static const TmParams utm17n{
      "UTM17N", 6378137.0, 6356752.314245, 0.9996,
      0.0, -81.0 * kDegToRad, 500000.0, 0.0,
      -84.0, -78.0, 0.0, 84.0};
  return crs == Crs::bng ? bng : utm17n;
}

// Developed meridional arc from lat0 to lat.
double meridional_arc(const TmParams& p, double lat) {
  const double n = (p.a - p.b) / (p.a + p.b);
  const double n2 = n * n, n3 = n2 * n;
  const double dl = lat - p.lat0;
  const double sl = lat + p.lat0;
  return p.b * p.f0 *
         ((1.0 + n + 1.25 * n2 + 1.25 * n3) * dl -
          (3.0 * n + 3.0 * n2 + (21.0 / 8.0) * n3) * std::sin(dl) * std::cos(sl) +
          ((15.0 / 8.0) * (n2 + n3)) * std::sin(2.0 * dl) * std::cos(2.0 * sl) -
          (35.0 / 24.0) * n3 * std::sin(3.0 * dl) * std::cos(3.0 * sl));
}

void check_zone(const TmParams& p, double lon_deg, double lat_deg) {
  if (lon_deg < p.lon_min || lon_deg > p.lon_max || lat_deg < p.lat_min || lat_deg > p.lat_max) {
    throw Error(ErrorKind::domain,
                "coordinate (lon=" + format_double(lon_deg) + ", lat=" + format_double(lat_deg) +
                    ") outside " + p.name + " validity zone (lon [" + format_double(p.lon_min) +
                    ", " + format_double(p.lon_max) + "], lat [" + format_double(p.lat_min) +
                    ", " + format_double(p.lat_max) + "])");
  }
}

// Forward series over radians, without the zone check; shared by
// project_coords and the Newton polish inside unproject_coords. Returns
// metres.
std::pair<double, double> forward_raw(const TmParams& p, double lon, double lat) {
  const double e2 = (p.a * p.a - p.b * p.b) / (p.a * p.a);

  const double sin_lat = std::sin(lat);
  const double cos_lat = std::cos(lat);
  const double tan_lat = std::tan(lat);
  const double nu = p.a * p.f0 / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
  const double rho = p.a * p.f0 * (1.0 - e2) * std::pow(1.0 - e2 * sin_lat * sin_lat, -1.5);
  const double eta2 = nu / rho - 1.0;

  const double t2 = tan_lat * tan_lat;
  const double t4 = t2 * t2;
  const double c3 = cos_lat * cos_lat * cos_lat;
  const double c5 = c3 * cos_lat * cos_lat;

  const double term_i = meridional_arc(p, lat) + p.n0;
  const double term_ii = (nu / 2.0) * sin_lat * cos_lat;
  const double term_iii = (nu / 24.0) * sin_lat * c3 * (5.0 - t2 + 9.0 * eta2);
  const double term_iiia = (nu / 720.0) * sin_lat * c5 * (61.0 - 58.0 * t2 + t4);
  const double term_iv = nu * cos_lat;
  const double term_v = (nu / 6.0) * c3 * (nu / rho - t2);
  const double term_vi = (nu / 120.0) * c5 * (5.0 - 18.0 * t2 + t4 + 14.0 * eta2 - 58.0 * t2 * eta2);

  const double dl = lon - p.lon0;
  const double dl2 = dl * dl;
  const double northing = term_i + term_ii * dl2 + term_iii * dl2 * dl2 + term_iiia * dl2 * dl2 * dl2;
  const double easting = p.e0 + term_iv * dl + term_v * dl * dl2 + term_vi * dl * dl2 * dl2;
  return {easting, northing};
}

}  // namespace

Crs crs_from_string(std::string_view s) {
  if (s == "BNG") return Crs::bng;
  if (s == "UTM17N") return Crs::utm17n;
  throw Error(ErrorKind::invalid_argument,
              "unknown CRS '" + std::string(s) + "' (expected BNG or UTM17N)");
}

const char* to_string(Crs crs) { return params_for(crs).name; }

std::pair<double, double> project_coords(double lon_deg, double lat_deg, Crs crs) {
  const TmParams& p = params_for(crs);
  check_zone(p, lon_deg, lat_deg);
  auto [easting, northing] = forward_raw(p, lon_deg * kDegToRad, lat_deg * kDegToRad);
  return {easting / 1000.0, northing / 1000.0};
}

std::pair<double, double> unproject_coords(double easting_km, double northing_km, Crs crs) {
  const TmParams& p = params_for(crs);
  const double easting = easting_km * 1000.0;
  const double northing = northing_km * 1000.0;
  const double e2 = (p.a * p.a - p.b * p.b) / (p.a * p.a);

  double lat = (northing - p.n0) / (p.a * p.f0) + p.lat0;
  for (int i = 0; i < 100; ++i) {
    const double m = meridional_arc(p, lat);
    if (std::fabs(northing - p.n0 - m) < 1e-11) break;
    lat += (northing - p.n0 - m) / (p.a * p.f0);
  }

  const double sin_lat = std::sin(lat);
  const double tan_lat = std::tan(lat);
  const double sec_lat = 1.0 / std::cos(lat);
  const double nu = p.a * p.f0 / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
  const double rho = p.a * p.f0 * (1.0 - e2) * std::pow(1.0 - e2 * sin_lat * sin_lat, -1.5);
  const double eta2 = nu / rho - 1.0;

  const double t2 = tan_lat * tan_lat;
  const double t4 = t2 * t2;
  const double t6 = t4 * t2;
  const double nu3 = nu * nu * nu;
  const double nu5 = nu3 * nu * nu;
  const double nu7 = nu5 * nu * nu;

  const double term_vii = tan_lat / (2.0 * rho * nu);
  const double term_viii = tan_lat / (24.0 * rho * nu3) * (5.0 + 3.0 * t2 + eta2 - 9.0 * t2 * eta2);
  const double term_ix = tan_lat / (720.0 * rho * nu5) * (61.0 + 90.0 * t2 + 45.0 * t4);
  const double term_x = sec_lat / nu;
  const double term_xi = sec_lat / (6.0 * nu3) * (nu / rho + 2.0 * t2);
  const double term_xii = sec_lat / (120.0 * nu5) * (5.0 + 28.0 * t2 + 24.0 * t4);
  const double term_xiia = sec_lat / (5040.0 * nu7) * (61.0 + 662.0 * t2 + 1320.0 * t4 + 720.0 * t6);

  const double de = easting - p.e0;
  const double de2 = de * de;
  double out_lat = lat - term_vii * de2 + term_viii * de2 * de2 - term_ix * de2 * de2 * de2;
  double out_lon = p.lon0 + term_x * de - term_xi * de * de2 + term_xii * de * de2 * de2 -
                   term_xiia * de * de2 * de2 * de2;

  // The truncated inverse series drifts to ~1e-8 degrees near the zone
  // edges; a short Newton polish against the forward series pins the
  // round-trip to machine precision.
  for (int i = 0; i < 4; ++i) {
    auto [fe, fn] = forward_raw(p, out_lon, out_lat);
    const double re = easting - fe;
    const double rn = northing - fn;
    if (std::fabs(re) < 1e-7 && std::fabs(rn) < 1e-7) break;
    const double h = 1e-8;
    auto [e_lon, n_lon] = forward_raw(p, out_lon + h, out_lat);
    auto [e_lat, n_lat] = forward_raw(p, out_lon, out_lat + h);
    const double j11 = (e_lon - fe) / h;
    const double j12 = (e_lat - fe) / h;
    const double j21 = (n_lon - fn) / h;
    const double j22 = (n_lat - fn) / h;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    out_lon += (re * j22 - rn * j12) / det;
    out_lat += (rn * j11 - re * j21) / det;
  }
  return {out_lon / kDegToRad, out_lat / kDegToRad};
}

}  // namespace gtwnn
