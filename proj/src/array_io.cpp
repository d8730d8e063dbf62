#include "sonartda/array_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace sonartda {

namespace {

namespace fs = std::filesystem;
using njson = nlohmann::json;

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string swap_extension(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p.string();
}

float load_le_f32(const unsigned char* p) {
  std::uint32_t bits = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                       (std::uint32_t(p[2]) << 16) |
                       (std::uint32_t(p[3]) << 24);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

void store_le_f32(float f, unsigned char* p) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  p[0] = bits & 0xFF;
  p[1] = (bits >> 8) & 0xFF;
  p[2] = (bits >> 16) & 0xFF;
  p[3] = (bits >> 24) & 0xFF;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& tok, int row, int col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    if (!std::isfinite(v))
      throw ValidationError("non-finite value at row " + std::to_string(row) +
                            ", col " + std::to_string(col));
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse cell at row " + std::to_string(row) +
                          ", col " + std::to_string(col) + ": '" + tok + "'");
  }
}

SignalMap ingest_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open array file: " + path);
  std::string line;
  if (!std::getline(f, line))
    throw ValidationError("array CSV is empty: " + path);
  const auto header = split_csv_line(line);
  if (header.empty()) throw ValidationError("array CSV header row is empty");

  // re*/im* pairs mark complex channels, anything else is a real column.
  bool complex_cols = header[0].rfind("re", 0) == 0;
  if (complex_cols) {
    if (header.size() % 2 != 0)
      throw ValidationError("complex array CSV needs re/im column pairs");
    for (std::size_t c = 0; c < header.size(); c += 2)
      if (header[c].rfind("re", 0) != 0 || header[c + 1].rfind("im", 0) != 0)
        throw ValidationError(
            "complex array CSV header must alternate re*/im* columns");
  }
  const int cols = static_cast<int>(header.size());
  const int channels = complex_cols ? cols / 2 : cols;

  std::vector<Complex> samples;
  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != cols)
      throw ValidationError("row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols));
    if (complex_cols) {
      for (int c = 0; c < cols; c += 2)
        samples.emplace_back(parse_cell(cells[c], row, c),
                             parse_cell(cells[c + 1], row, c + 1));
    } else {
      for (int c = 0; c < cols; ++c)
        samples.emplace_back(parse_cell(cells[c], row, c), 0.0);
    }
    ++row;
  }
  if (row < 2)
    throw ValidationError("array CSV needs at least 2 rows, got " +
                          std::to_string(row));
  return {DomainDescriptor::circle(row), channels, std::move(samples)};
}

SignalMap ingest_binary(const std::string& payload_path) {
  const std::string sidecar_path = swap_extension(payload_path, ".json");
  std::ifstream sf(sidecar_path);
  if (!sf)
    throw ValidationError("missing sidecar header: " + sidecar_path);
  njson sidecar;
  try {
    sf >> sidecar;
  } catch (const std::exception& e) {
    throw ValidationError("malformed sidecar " + sidecar_path + ": " +
                          e.what());
  }
  for (const char* key : {"rows", "cols", "dtype"})
    if (!sidecar.contains(key))
      throw ValidationError(std::string("sidecar is missing field '") + key +
                            "'");
  const int rows = sidecar["rows"].get<int>();
  const int cols = sidecar["cols"].get<int>();
  const std::string dtype = sidecar["dtype"].get<std::string>();
  if (dtype != "f32" && dtype != "c64")
    throw ValidationError("unknown dtype '" + dtype + "' (want f32 or c64)");
  if (rows < 2 || cols < 1)
    throw ValidationError("sidecar declares a degenerate shape");
  const bool complex_data = dtype == "c64";
  const std::size_t floats_per_cell = complex_data ? 2 : 1;
  const std::size_t expected_bytes =
      std::size_t(rows) * cols * floats_per_cell * 4;

  std::ifstream pf(payload_path, std::ios::binary);
  if (!pf) throw ValidationError("cannot open payload: " + payload_path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(pf)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() != expected_bytes)
    throw ValidationError(
        "payload size mismatch: sidecar declares " +
        std::to_string(expected_bytes) + " bytes (" + std::to_string(rows) +
        "x" + std::to_string(cols) + " " + dtype + "), file has " +
        std::to_string(bytes.size()));

  std::vector<Complex> samples;
  samples.reserve(std::size_t(rows) * cols);
  for (std::size_t cell = 0; cell < std::size_t(rows) * cols; ++cell) {
    const std::size_t off = cell * floats_per_cell * 4;
    const double re = load_le_f32(bytes.data() + off);
    const double im = complex_data ? load_le_f32(bytes.data() + off + 4) : 0.0;
    if (!std::isfinite(re) || !std::isfinite(im))
      throw ValidationError(
          "non-finite value at row " + std::to_string(cell / cols) + ", col " +
          std::to_string(cell % cols) + " (byte offset " +
          std::to_string(off) + ")");
    samples.emplace_back(re, im);
  }
  return {DomainDescriptor::circle(rows), cols, std::move(samples)};
}

}  // namespace

SignalMap ingest_array(const std::string& path) {
  if (!fs::exists(path))
    throw ValidationError("input file does not exist: " + path);
  if (has_suffix(path, ".csv")) return ingest_csv(path);
  if (has_suffix(path, ".bin")) return ingest_binary(path);
  if (has_suffix(path, ".json"))
    return ingest_binary(swap_extension(path, ".bin"));
  throw ValidationError("unknown array format (want .csv, .bin or .json): " +
                        path);
}

void write_array_csv(const SignalMap& map, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  const bool complex_data = !map.is_real();
  const int l = map.channels();
  for (int q = 0; q < l; ++q) {
    if (q) f << ',';
    if (complex_data)
      f << "re" << q << ",im" << q;
    else
      f << 'c' << q;
  }
  f << '\n';
  char buf[64];
  for (int i = 0; i < map.grid_size(); ++i) {
    const auto row = map.row(i);
    for (int q = 0; q < l; ++q) {
      if (q) f << ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[q].real());
      f << buf;
      if (complex_data) {
        std::snprintf(buf, sizeof buf, ",%.17g", row[q].imag());
        f << buf;
      }
    }
    f << '\n';
  }
}

void write_array_binary(const SignalMap& map, const std::string& payload_path,
                        double range_bin_m) {
  if (map.domain().kind() != DomainKind::kCircle)
    throw ValidationError("binary array format stores circle-domain maps");
  const bool complex_data = !map.is_real();
  const int rows = map.domain().count0();
  const int cols = map.channels();

  std::vector<unsigned char> bytes(std::size_t(rows) * cols *
                                   (complex_data ? 8 : 4));
  std::size_t off = 0;
  for (int i = 0; i < rows; ++i) {
    const auto row = map.row(i);
    for (int q = 0; q < cols; ++q) {
      store_le_f32(static_cast<float>(row[q].real()), bytes.data() + off);
      off += 4;
      if (complex_data) {
        store_le_f32(static_cast<float>(row[q].imag()), bytes.data() + off);
        off += 4;
      }
    }
  }
  std::ofstream pf(payload_path, std::ios::binary);
  if (!pf) throw ComputeError("cannot open for writing: " + payload_path);
  pf.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));

  njson sidecar;
  sidecar["rows"] = rows;
  sidecar["cols"] = cols;
  sidecar["dtype"] = complex_data ? "c64" : "f32";
  sidecar["angular_units"] = "deg";
  sidecar["range_bin_m"] = range_bin_m;
  std::ofstream sf(swap_extension(payload_path, ".json"));
  if (!sf) throw ComputeError("cannot open sidecar for writing");
  sf << sidecar.dump(2) << '\n';
}

void write_cloud_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  const int ld = cloud.label_dim();
  if (ld >= 1) f << "label_theta";
  if (ld == 2) f << ",label_phi";
  for (int c = 0; c < cloud.ambient_dim(); ++c) {
    if (c || ld) f << ',';
    f << 'p' << c;
  }
  f << '\n';
  char buf[64];
  for (int i = 0; i < cloud.size(); ++i) {
    bool first = true;
    for (int c = 0; c < ld; ++c) {
      if (!first) f << ',';
      std::snprintf(buf, sizeof buf, "%.17g", cloud.labels()[i][c]);
      f << buf;
      first = false;
    }
    for (double x : cloud.point(i)) {
      if (!first) f << ',';
      std::snprintf(buf, sizeof buf, "%.17g", x);
      f << buf;
      first = false;
    }
    f << '\n';
  }
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open cloud file: " + path);
  std::string line;
  if (!std::getline(f, line))
    throw ValidationError("cloud CSV is empty: " + path);
  const auto header = split_csv_line(line);
  int label_dim = 0;
  if (!header.empty() && header[0] == "label_theta") label_dim = 1;
  if (label_dim == 1 && header.size() > 1 && header[1] == "label_phi")
    label_dim = 2;
  const int dim = static_cast<int>(header.size()) - label_dim;
  if (dim < 1) throw ValidationError("cloud CSV has no coordinate columns");

  std::vector<double> coords;
  std::vector<std::array<double, 2>> labels;
  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dim + label_dim)
      throw ValidationError("cloud row " + std::to_string(row) +
                            " has the wrong number of cells");
    std::array<double, 2> label{0.0, 0.0};
    for (int c = 0; c < label_dim; ++c)
      label[c] = parse_cell(cells[c], row, c);
    for (int c = 0; c < dim; ++c)
      coords.push_back(parse_cell(cells[label_dim + c], row, label_dim + c));
    if (label_dim) labels.push_back(label);
    ++row;
  }
  if (label_dim) return {dim, std::move(coords), std::move(labels), label_dim};
  return {dim, std::move(coords)};
}

}  // namespace sonartda
