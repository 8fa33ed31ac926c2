#include "core/grid.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/common.hpp"

namespace gtwnn {

namespace {

constexpr char kMagic[8] = {'G', 'T', 'W', 'N', 'N', 'G', 'R', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_tensor(std::ostream& out, const std::vector<std::int64_t>& tensor) {
  for (std::int64_t v : tensor) write_u64(out, static_cast<std::uint64_t>(v));
}

void read_tensor(std::istream& in, std::vector<std::int64_t>& tensor) {
  for (std::int64_t& v : tensor) v = static_cast<std::int64_t>(read_u64(in));
}

}  // namespace

void GridSpec::validate() const {
  if (rows <= 0 || cols <= 0)
    throw Error(ErrorKind::invalid_argument, "grid dimensions must be positive");
  if (cell_w_km <= 0.0 || cell_h_km <= 0.0)
    throw Error(ErrorKind::invalid_argument, "cell width and height must be positive");
  double wide = std::max(cell_w_km, cell_h_km);
  double narrow = std::min(cell_w_km, cell_h_km);
  if ((wide - narrow) / wide > 0.1 + 1e-12)
    throw Error(ErrorKind::invalid_argument,
                "cells are not near-square: width " + format_double(cell_w_km) + " km vs height " +
                    format_double(cell_h_km) + " km differ by more than 10%");
  if (t_steps <= 0) throw Error(ErrorKind::invalid_argument, "grid needs at least one time step");
}

SpatioTemporalGrid::SpatioTemporalGrid(GridSpec spec, std::vector<std::string> type_labels)
    : spec_(spec), type_labels_(std::move(type_labels)) {
  spec_.validate();
  std::size_t cells = static_cast<std::size_t>(spec_.t_steps * spec_.rows * spec_.cols);
  counts_.assign(cells, 0);
  per_type_.assign(type_labels_.size(), std::vector<std::int64_t>(cells, 0));
}

std::size_t SpatioTemporalGrid::index(std::int64_t t, std::int64_t r, std::int64_t c) const {
  if (t < 0 || t >= spec_.t_steps || r < 0 || r >= spec_.rows || c < 0 || c >= spec_.cols)
    throw Error(ErrorKind::invalid_argument,
                "grid index (" + format_int(t) + ", " + format_int(r) + ", " + format_int(c) +
                    ") out of range");
  return static_cast<std::size_t>((t * spec_.rows + r) * spec_.cols + c);
}

std::vector<double> SpatioTemporalGrid::total_series() const {
  std::vector<double> series(static_cast<std::size_t>(spec_.t_steps), 0.0);
  const std::size_t per_step = static_cast<std::size_t>(spec_.rows * spec_.cols);
  for (std::int64_t t = 0; t < spec_.t_steps; ++t) {
    double sum = 0.0;
    const std::size_t base = static_cast<std::size_t>(t) * per_step;
    for (std::size_t i = 0; i < per_step; ++i) sum += static_cast<double>(counts_[base + i]);
    series[static_cast<std::size_t>(t)] = sum;
  }
  return series;
}

std::int64_t SpatioTemporalGrid::total_events() const {
  std::int64_t sum = 0;
  for (std::int64_t v : counts_) sum += v;
  return sum;
}

void SpatioTemporalGrid::validate_consistency() const {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) throw Error(ErrorKind::invalid_argument, "negative count in grid");
    std::int64_t type_sum = 0;
    for (const auto& tensor : per_type_) {
      if (tensor[i] < 0) throw Error(ErrorKind::invalid_argument, "negative per-type count in grid");
      type_sum += tensor[i];
    }
    if (!per_type_.empty() && type_sum != counts_[i])
      throw Error(ErrorKind::invalid_argument,
                  "per-type counts do not sum to the total count at flat index " +
                      format_int(static_cast<std::int64_t>(i)));
  }
}

void save_grid(const SpatioTemporalGrid& grid, const std::string& path) {
  nlohmann::json header;
  const GridSpec& s = grid.spec();
  header["rows"] = s.rows;
  header["cols"] = s.cols;
  header["t_steps"] = s.t_steps;
  header["origin_e_km"] = s.origin_e_km;
  header["origin_n_km"] = s.origin_n_km;
  header["cell_w_km"] = s.cell_w_km;
  header["cell_h_km"] = s.cell_h_km;
  header["t_resolution"] = to_string(s.t_resolution);
  header["start_date"] = format_date(s.start_date);
  header["types"] = grid.type_labels();
  std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, header_text.size());
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  write_tensor(out, grid.counts_flat());
  for (std::int64_t k = 0; k < grid.n_types(); ++k) write_tensor(out, grid.type_counts_flat(k));
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

SpatioTemporalGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::parse, "'" + path + "' is not a grid container");
  std::uint64_t header_len = read_u64(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw Error(ErrorKind::parse, "truncated grid container header in '" + path + "'");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "bad grid container header: " + std::string(e.what()));
  }

  GridSpec spec;
  std::vector<std::string> labels;
  try {
    spec.rows = header.at("rows").get<std::int64_t>();
    spec.cols = header.at("cols").get<std::int64_t>();
    spec.t_steps = header.at("t_steps").get<std::int64_t>();
    spec.origin_e_km = header.at("origin_e_km").get<double>();
    spec.origin_n_km = header.at("origin_n_km").get<double>();
    spec.cell_w_km = header.at("cell_w_km").get<double>();
    spec.cell_h_km = header.at("cell_h_km").get<double>();
    spec.t_resolution = time_resolution_from_string(header.at("t_resolution").get<std::string>());
    spec.start_date = parse_date(header.at("start_date").get<std::string>());
    labels = header.at("types").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "grid container header missing fields: " + std::string(e.what()));
  }

  SpatioTemporalGrid grid(spec, labels);
  std::vector<std::int64_t> tensor(static_cast<std::size_t>(spec.t_steps * spec.rows * spec.cols));
  read_tensor(in, tensor);
  for (std::int64_t t = 0; t < spec.t_steps; ++t)
    for (std::int64_t r = 0; r < spec.rows; ++r)
      for (std::int64_t c = 0; c < spec.cols; ++c)
        grid.count(t, r, c) = tensor[static_cast<std::size_t>((t * spec.rows + r) * spec.cols + c)];
  for (std::int64_t k = 0; k < grid.n_types(); ++k) {
    read_tensor(in, tensor);
    for (std::int64_t t = 0; t < spec.t_steps; ++t)
      for (std::int64_t r = 0; r < spec.rows; ++r)
        for (std::int64_t c = 0; c < spec.cols; ++c)
          grid.type_count(k, t, r, c) =
              tensor[static_cast<std::size_t>((t * spec.rows + r) * spec.cols + c)];
  }
  if (!in) throw Error(ErrorKind::parse, "truncated grid container tensors in '" + path + "'");
  grid.validate_consistency();
  return grid;
}

void export_grid_csv(const SpatioTemporalGrid& grid, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const GridSpec& s = grid.spec();
  for (std::int64_t t = 0; t < s.t_steps; ++t) {
    std::string name = format_int(t);
    while (name.size() < 4) name.insert(name.begin(), '0');
    std::ofstream out(dir + "/t" + name + ".csv", std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write per-timestep CSV into '" + dir + "'");
    for (std::int64_t r = 0; r < s.rows; ++r) {
      for (std::int64_t c = 0; c < s.cols; ++c) {
        if (c) out << ',';
        out << format_int(grid.count(t, r, c));
      }
      out << '\n';
    }
  }
}

}  // namespace gtwnn
