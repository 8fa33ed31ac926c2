#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/date.hpp"
#include "core/grid.hpp"
#include "core/projection.hpp"

namespace gtwnn {

// One raw point-event row after parsing.
struct EventRecord {
  double longitude = 0.0;
  double latitude = 0.0;
  Date timestamp;
  std::string type;
};

// Column names of the delimiter-separated input.
struct ColumnSchema {
  std::string longitude = "Longitude";
  std::string latitude = "Latitude";
  std::string date = "Date";
  std::string type = "Type";
  char delimiter = ',';
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::int64_t dropped = 0;
};

// Reads delimiter-separated text with a header row. Rows missing valid
// coordinates, a parseable date, or a non-empty type are counted in
// `dropped` and skipped; an unreadable stream or a missing schema column is
// fatal. Quoted fields (RFC 4180 style) are supported.
ParseResult parse_records(std::istream& source, const ColumnSchema& schema);

// A record carried through projection into grid kilometres.
struct ProjectedEvent {
  double e_km = 0.0;
  double n_km = 0.0;
  Date timestamp;
  std::string type;
};

struct ProjectionResult {
  std::vector<ProjectedEvent> events;
  std::int64_t dropped = 0;  // coordinates outside the CRS validity zone
};

ProjectionResult project_events(const std::vector<EventRecord>& records, Crs crs);

// Grid-dimension selection: approximates the extent's aspect ratio by a
// small integer pair, scales the pair so the cell count is comparable to
// seed_n x seed_n, then adjusts rows/cols by +-1 steps until the implied
// cell width and height are as close as possible. The result always
// satisfies the 10% near-square tolerance or the call fails.
std::pair<std::int64_t, std::int64_t> compute_grid_dims(double width_km, double height_km,
                                                        std::int32_t seed_n);

struct HistogramResult {
  SpatioTemporalGrid grid;
  std::int64_t out_of_extent = 0;
};

// Sorted unique type labels found in `events`.
std::vector<std::string> collect_type_labels(const std::vector<ProjectedEvent>& events);

// Bins events into the grid described by `spec`. Bins are left/bottom-closed
// and right/top-open, except that the extent's maximum edge is closed so
// boundary events are kept. Events outside the extent (or outside the time
// span, or lacking day detail on a daily grid) are counted, not fatal.
HistogramResult histogram(const std::vector<ProjectedEvent>& events, const GridSpec& spec,
                          const std::vector<std::string>& type_labels);

struct IngestOptions {
  ColumnSchema schema;
  Crs crs = Crs::bng;
  TimeResolution resolution = TimeResolution::monthly;
  std::int32_t seed_n = 32;
};

struct IngestSummary {
  std::int64_t records_kept = 0;
  std::int64_t records_dropped = 0;
  std::int64_t out_of_extent = 0;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::int64_t t_steps = 0;
  double cell_w_km = 0.0;
  double cell_h_km = 0.0;
};

struct IngestResult {
  SpatioTemporalGrid grid;
  IngestSummary summary;
};

// Full pipeline: parse -> project -> size the grid from the projected
// bounding box -> histogram. The grid extent covers every kept event, so
// out_of_extent is zero here unless every event shares one coordinate.
IngestResult ingest_csv(const std::string& path, const IngestOptions& options);

}  // namespace gtwnn
