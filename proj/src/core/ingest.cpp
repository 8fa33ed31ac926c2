#include "core/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>

#include "core/common.hpp"

namespace gtwnn {

namespace {

// Splits one CSV line honoring RFC 4180 quoting ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool parse_double_field(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

ParseResult parse_records(std::istream& source, const ColumnSchema& schema) {
  if (!source) throw Error(ErrorKind::io, "unreadable input stream");

  std::string line;
  if (!std::getline(source, line))
    throw Error(ErrorKind::parse, "input has no header row");
  const std::vector<std::string> header = split_csv_line(strip_cr(line), schema.delimiter);

  auto find_column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error(ErrorKind::parse, "missing schema column '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t lon_idx = find_column(schema.longitude);
  const std::size_t lat_idx = find_column(schema.latitude);
  const std::size_t date_idx = find_column(schema.date);
  const std::size_t type_idx = find_column(schema.type);

  ParseResult result;
  while (std::getline(source, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line, schema.delimiter);
    const std::size_t needed = std::max({lon_idx, lat_idx, date_idx, type_idx});
    if (fields.size() <= needed) {
      ++result.dropped;
      continue;
    }
    EventRecord rec;
    if (!parse_double_field(fields[lon_idx], rec.longitude) ||
        !parse_double_field(fields[lat_idx], rec.latitude) || rec.longitude < -180.0 ||
        rec.longitude > 180.0 || rec.latitude < -90.0 || rec.latitude > 90.0) {
      ++result.dropped;
      continue;
    }
    try {
      rec.timestamp = parse_date(fields[date_idx]);
    } catch (const Error&) {
      ++result.dropped;
      continue;
    }
    rec.type = fields[type_idx];
    if (rec.type.empty()) {
      ++result.dropped;
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (source.bad()) throw Error(ErrorKind::io, "read failure while parsing records");
  return result;
}

ProjectionResult project_events(const std::vector<EventRecord>& records, Crs crs) {
  ProjectionResult result;
  result.events.reserve(records.size());
  for (const EventRecord& rec : records) {
    try {
      auto [e_km, n_km] = project_coords(rec.longitude, rec.latitude, crs);
      result.events.push_back({e_km, n_km, rec.timestamp, rec.type});
    } catch (const Error&) {
      ++result.dropped;
    }
  }
  return result;
}

namespace {

double cell_mismatch(double width_km, double height_km, std::int64_t rows, std::int64_t cols) {
  const double ch = height_km / static_cast<double>(rows);
  const double cw = width_km / static_cast<double>(cols);
  return std::fabs(ch - cw) / std::min(ch, cw);
}

}  // namespace

std::pair<std::int64_t, std::int64_t> compute_grid_dims(double width_km, double height_km,
                                                        std::int32_t seed_n) {
  if (!(width_km > 0.0) || !(height_km > 0.0))
    throw Error(ErrorKind::invalid_argument, "degenerate extent: width and height must be positive");
  if (seed_n < 1) throw Error(ErrorKind::invalid_argument, "seed grid size must be at least 1");

  // Best small-integer approximation p/q of the height:width ratio, ties
  // resolved toward the smaller pair.
  const double ratio = height_km / width_km;
  int best_p = 1, best_q = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 9; ++p) {
    for (int q = 1; q <= 9; ++q) {
      const double err = std::fabs(static_cast<double>(p) / q - ratio);
      const bool better = err < best_err - 1e-15 ||
                          (std::fabs(err - best_err) <= 1e-15 &&
                           (p + q < best_p + best_q ||
                            (p + q == best_p + best_q && p < best_p)));
      if (better) {
        best_err = err;
        best_p = p;
        best_q = q;
      }
    }
  }

  // Scale the pair so the grid has roughly seed_n^2 cells.
  const double k_real = static_cast<double>(seed_n) / std::sqrt(static_cast<double>(best_p) * best_q);
  const std::int64_t k = std::max<std::int64_t>(1, std::llround(k_real));
  std::int64_t rows = best_p * k;
  std::int64_t cols = best_q * k;

  // Iterative +-1 adjustment until the implied cell sides stop improving.
  double current = cell_mismatch(width_km, height_km, rows, cols);
  for (;;) {
    std::int64_t next_rows = rows, next_cols = cols;
    double next = current;
    const std::int64_t cand[4][2] = {
        {rows + 1, cols}, {rows - 1, cols}, {rows, cols + 1}, {rows, cols - 1}};
    for (const auto& rc : cand) {
      if (rc[0] < 1 || rc[1] < 1) continue;
      const double err = cell_mismatch(width_km, height_km, rc[0], rc[1]);
      if (err < next - 1e-15) {
        next = err;
        next_rows = rc[0];
        next_cols = rc[1];
      }
    }
    if (next_rows == rows && next_cols == cols) break;
    rows = next_rows;
    cols = next_cols;
    current = next;
  }

  if (current > 0.1)
    throw Error(ErrorKind::domain,
                "no near-square grid found for extent " + format_double(width_km) + " km x " +
                    format_double(height_km) + " km (best cell mismatch " + format_double(current) +
                    " exceeds 10%)");
  return {rows, cols};
}

std::vector<std::string> collect_type_labels(const std::vector<ProjectedEvent>& events) {
  std::set<std::string> labels;
  for (const ProjectedEvent& ev : events) labels.insert(ev.type);
  return {labels.begin(), labels.end()};
}

HistogramResult histogram(const std::vector<ProjectedEvent>& events, const GridSpec& spec,
                          const std::vector<std::string>& type_labels) {
  spec.validate();
  HistogramResult result{SpatioTemporalGrid(spec, type_labels), 0};

  const double max_e = spec.origin_e_km + spec.cell_w_km * static_cast<double>(spec.cols);
  const double max_n = spec.origin_n_km + spec.cell_h_km * static_cast<double>(spec.rows);

  for (const ProjectedEvent& ev : events) {
    if (spec.t_resolution == TimeResolution::daily && ev.timestamp.monthly()) {
      ++result.out_of_extent;
      continue;
    }
    const std::int64_t t = step_index(ev.timestamp, spec.start_date, spec.t_resolution);
    std::int64_t c = static_cast<std::int64_t>(std::floor((ev.e_km - spec.origin_e_km) / spec.cell_w_km));
    std::int64_t r = static_cast<std::int64_t>(std::floor((ev.n_km - spec.origin_n_km) / spec.cell_h_km));
    // The extent's maximum edge is closed: events exactly on it fall in the
    // last row/column rather than outside.
    if (c == spec.cols && ev.e_km <= max_e) c = spec.cols - 1;
    if (r == spec.rows && ev.n_km <= max_n) r = spec.rows - 1;
    if (t < 0 || t >= spec.t_steps || r < 0 || r >= spec.rows || c < 0 || c >= spec.cols) {
      ++result.out_of_extent;
      continue;
    }
    result.grid.count(t, r, c) += 1;
    const auto it = std::find(type_labels.begin(), type_labels.end(), ev.type);
    if (it == type_labels.end())
      throw Error(ErrorKind::invalid_argument, "event type '" + ev.type + "' missing from type labels");
    result.grid.type_count(it - type_labels.begin(), t, r, c) += 1;
  }
  return result;
}

IngestResult ingest_csv(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");

  ParseResult parsed = parse_records(in, options.schema);
  ProjectionResult projected = project_events(parsed.records, options.crs);
  if (projected.events.empty())
    throw Error(ErrorKind::domain, "no events remained after parsing and projection");

  double min_e = std::numeric_limits<double>::infinity(), max_e = -min_e;
  double min_n = min_e, max_n = -min_e;
  bool have_dates = false;
  Date first_date, last_date;
  std::int64_t min_step = 0, max_step = 0;
  for (const ProjectedEvent& ev : projected.events) {
    min_e = std::min(min_e, ev.e_km);
    max_e = std::max(max_e, ev.e_km);
    min_n = std::min(min_n, ev.n_km);
    max_n = std::max(max_n, ev.n_km);
    if (options.resolution == TimeResolution::daily && ev.timestamp.monthly()) continue;
    const std::int64_t step = options.resolution == TimeResolution::monthly
                                  ? month_number(ev.timestamp)
                                  : day_number(ev.timestamp);
    if (!have_dates || step < min_step) {
      min_step = step;
      first_date = ev.timestamp;
    }
    if (!have_dates || step > max_step) {
      max_step = step;
      last_date = ev.timestamp;
    }
    have_dates = true;
  }
  if (!have_dates)
    throw Error(ErrorKind::domain, "no events carry dates usable at the requested resolution");

  auto [rows, cols] = compute_grid_dims(max_e - min_e, max_n - min_n, options.seed_n);

  GridSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.origin_e_km = min_e;
  spec.origin_n_km = min_n;
  spec.cell_w_km = (max_e - min_e) / static_cast<double>(cols);
  spec.cell_h_km = (max_n - min_n) / static_cast<double>(rows);
  spec.t_resolution = options.resolution;
  if (options.resolution == TimeResolution::monthly) {
    first_date.day = 0;  // normalize to month resolution
    spec.start_date = first_date;
    spec.t_steps = month_number(last_date) - month_number(first_date) + 1;
  } else {
    spec.start_date = first_date;
    spec.t_steps = day_number(last_date) - day_number(first_date) + 1;
  }

  HistogramResult binned = histogram(projected.events, spec, collect_type_labels(projected.events));

  IngestResult result{std::move(binned.grid), {}};
  result.summary.records_kept = static_cast<std::int64_t>(parsed.records.size()) - projected.dropped;
  result.summary.records_dropped = parsed.dropped + projected.dropped;
  result.summary.out_of_extent = binned.out_of_extent;
  result.summary.rows = rows;
  result.summary.cols = cols;
  result.summary.t_steps = spec.t_steps;
  result.summary.cell_w_km = spec.cell_w_km;
  result.summary.cell_h_km = spec.cell_h_km;
  return result;
}

}  // namespace gtwnn
