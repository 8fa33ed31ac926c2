#pragma once

#include <string_view>
#include <utility>

namespace gtwnn {

// The two coordinate reference systems the pipeline supports: the British
// National Grid (Airy 1830 ellipsoid) and UTM zone 17N (WGS 84).
enum class Crs { bng, utm17n };

Crs crs_from_string(std::string_view s);
const char* to_string(Crs crs);

// Forward transverse-Mercator projection of a lon/lat degree pair into
// projected kilometres (metres / 1000). Coordinates outside the CRS's
// validity zone raise ErrorKind::domain, naming the zone.
std::pair<double, double> project_coords(double lon_deg, double lat_deg, Crs crs);

// Inverse projection, provided for round-trip verification in the test
// suite; the pipeline itself only projects forward.
std::pair<double, double> unproject_coords(double easting_km, double northing_km, Crs crs);

}  // namespace gtwnn
