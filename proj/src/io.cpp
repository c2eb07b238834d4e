#include "vds/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vds/error.hpp"

namespace vds::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail("not a number: '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail("not an integer: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

/// key=value tokens of a whitespace-separated header line.
std::vector<std::pair<std::string_view, std::string_view>> header_tokens(std::string_view line) {
  std::vector<std::pair<std::string_view, std::string_view>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) {
      const std::string_view tok = line.substr(i, j - i);
      const std::size_t eq = tok.find('=');
      if (eq == std::string_view::npos) {
        out.emplace_back(tok, std::string_view{});
      } else {
        out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
      }
    }
    i = j;
  }
  return out;
}

struct GridHeader {
  int dim = 0;
  int resolution = 0;
  std::string kind;
};

GridHeader parse_grid_header(std::string_view line) {
  const auto tokens = header_tokens(line);
  if (tokens.empty() || tokens.front().first != "vds-density") parse_fail("missing 'vds-density' header");
  GridHeader h;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto& [key, value] = tokens[i];
    if (key == "d") {
      h.dim = parse_int<int>(value);
    } else if (key == "r") {
      h.resolution = parse_int<int>(value);
    } else if (key == "kind") {
      h.kind = std::string(value);
    } else {
      parse_fail("unknown density header token '" + std::string(key) + "'");
    }
  }
  if (h.dim < 2 || h.resolution < 1) parse_fail("density header needs d>=2 and r>=1");
  return h;
}

std::vector<double> parse_values(std::string_view body) {
  std::vector<double> values;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    std::size_t j = i;
    while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j]))) ++j;
    if (j > i) values.push_back(parse_double(body.substr(i, j - i)));
    i = j;
  }
  return values;
}

std::string grid_to_string(int dim, int resolution, std::span<const double> values, std::string_view extra) {
  std::string out = "vds-density d=" + std::to_string(dim) + " r=" + std::to_string(resolution);
  if (!extra.empty()) {
    out += ' ';
    out += extra;
  }
  out += '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += format_double(values[i]);
    out += (i + 1) % static_cast<std::size_t>(resolution) == 0 ? '\n' : ' ';
  }
  return out;
}

std::string axis_name(int j) {
  static constexpr const char* kNames[] = {"x", "y", "z"};
  return j < 3 ? kNames[j] : "x" + std::to_string(j);
}

std::string points_body(const PointSet& ps) {
  std::string out;
  for (int j = 0; j < ps.dim; ++j) {
    if (j) out += ',';
    out += axis_name(j);
  }
  out += '\n';
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto p = ps.point(k);
    for (int j = 0; j < ps.dim; ++j) {
      if (j) out += ',';
      out += format_double(p[j]);
    }
    out += '\n';
  }
  return out;
}

/// Parses comment lines into key=value tokens and the CSV rest into a point set.
PointSet parse_points(std::string_view text, std::vector<std::pair<std::string, std::string>>* comments) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  for (; i < lines.size() && !lines[i].empty() && lines[i].front() == '#'; ++i) {
    if (comments) {
      for (const auto& [k, v] : header_tokens(lines[i].substr(1))) comments->emplace_back(k, v);
    }
  }
  if (i == lines.size()) parse_fail("missing CSV header");
  const auto header = split(lines[i], ',');
  PointSet ps;
  ps.dim = static_cast<int>(header.size());
  for (int j = 0; j < ps.dim; ++j) {
    if (trim(header[j]) != axis_name(j)) parse_fail("unexpected column '" + std::string(header[j]) + "'");
  }
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], ',');
    if (static_cast<int>(cells.size()) != ps.dim) parse_fail("row has wrong number of columns");
    for (auto c : cells) ps.coords.push_back(parse_double(c));
  }
  return ps;
}

std::string sidecar_path(const std::filesystem::path& path) { return path.string() + ".json"; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

std::string density_to_string(const DensityGrid& g) {
  return grid_to_string(g.dim(), g.resolution(), g.values(), {});
}

DensityGrid density_from_string(std::string_view text) {
  const std::size_t nl = text.find('\n');
  const GridHeader h = parse_grid_header(text.substr(0, nl));
  auto values = parse_values(nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1));
  if (values.size() != grid_cell_count(h.dim, h.resolution)) parse_fail("wrong number of values");
  return DensityGrid(h.dim, h.resolution, std::move(values));
}

DensityGrid density_from_spec(std::string_view spec, int dim, int resolution) {
  if (spec == "uniform") return DensityGrid::uniform(dim, resolution);
  if (spec.starts_with("radial:")) {
    const auto parts = split(spec.substr(7), ':');
    if (parts.size() != 2) parse_fail("expected radial:<decay>:<plateau_radius>, got '" + std::string(spec) + "'");
    return radial_polynomial_density(dim, resolution, parse_double(parts[0]), parse_double(parts[1]));
  }
  return normalize(density_from_string(read_text(std::filesystem::path(spec))));
}

std::string empirical_to_string(const PartitionMasses& e) {
  std::vector<double> values(e.masses);
  const double cells = static_cast<double>(values.size());
  for (double& v : values) v *= cells;
  return grid_to_string(e.dim, e.m, values, "kind=empirical");
}

PartitionMasses empirical_from_string(std::string_view text) {
  const std::size_t nl = text.find('\n');
  const GridHeader h = parse_grid_header(text.substr(0, nl));
  if (h.kind != "empirical") parse_fail("not an empirical distribution file");
  PartitionMasses e;
  e.dim = h.dim;
  e.m = h.resolution;
  e.masses = parse_values(nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1));
  if (e.masses.size() != grid_cell_count(e.dim, e.m)) parse_fail("wrong number of values");
  const double cells = static_cast<double>(e.masses.size());
  for (double& v : e.masses) v /= cells;
  return e;
}

std::string points_to_string(const PointSet& ps) {
  return "# seed=" + std::to_string(ps.seed) + "\n" + points_body(ps);
}

PointSet points_from_string(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> comments;
  PointSet ps = parse_points(text, &comments);
  for (const auto& [k, v] : comments) {
    if (k == "seed") ps.seed = parse_int<std::uint64_t>(v);
  }
  return ps;
}

std::string tour_to_string(const Tour& t) {
  std::string out = "# length=" + format_double(t.length) + " method=" + std::string(to_string(t.method)) + "\nindex\n";
  for (std::size_t i : t.order) out += std::to_string(i) + '\n';
  return out;
}

Tour tour_from_string(std::string_view text) {
  const auto lines = split_lines(text);
  Tour t;
  std::size_t i = 0;
  bool have_length = false;
  for (; i < lines.size() && !lines[i].empty() && lines[i].front() == '#'; ++i) {
    for (const auto& [k, v] : header_tokens(lines[i].substr(1))) {
      if (k == "length") {
        t.length = parse_double(v);
        have_length = true;
      } else if (k == "method") {
        if (v == "exact") {
          t.method = TourMethod::exact;
        } else if (v == "heuristic") {
          t.method = TourMethod::heuristic;
        } else {
          parse_fail("unknown tour method '" + std::string(v) + "'");
        }
      }
    }
  }
  if (!have_length) parse_fail("tour file lacks '# length=' comment");
  if (i == lines.size() || trim(lines[i]) != "index") parse_fail("tour file lacks 'index' header");
  for (++i; i < lines.size(); ++i) {
    if (!trim(lines[i]).empty()) t.order.push_back(parse_int<std::size_t>(lines[i]));
  }
  return t;
}

std::string trajectory_to_string(const Trajectory& traj) {
  return "# total_length=" + format_double(traj.total_length()) + "\n" + points_body(traj.vertices());
}

Trajectory trajectory_from_string(std::string_view text) {
  PointSet ps = parse_points(text, nullptr);
  return Trajectory(std::move(ps));
}

std::string beta_to_json(const BetaEstimate& b) {
  nlohmann::ordered_json j;
  j["dim"] = b.dim;
  j["beta"] = b.beta;
  j["std_error"] = b.std_error;
  j["trials"] = b.trials;
  j["n_per_trial"] = b.n_per_trial;
  j["seed"] = b.seed;
  return j.dump(2) + "\n";
}

BetaEstimate beta_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    BetaEstimate b;
    b.dim = j.at("dim").get<int>();
    b.beta = j.at("beta").get<double>();
    b.std_error = j.at("std_error").get<double>();
    b.trials = j.at("trials").get<std::size_t>();
    b.n_per_trial = j.at("n_per_trial").get<std::size_t>();
    b.seed = j.at("seed").get<std::uint64_t>();
    if (!(b.beta > 0.0)) parse_fail("beta must be positive");
    return b;
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("calibration JSON: ") + e.what());
  }
}

std::string image_to_pgm(const Image& img) {
  const int n = img.side();
  double peak = 0.0;
  for (const auto& v : img.pixels()) peak = std::max(peak, std::abs(v));
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  for (const auto& v : img.pixels()) {
    const double level = peak > 0.0 ? std::abs(v) / peak * 255.0 : 0.0;
    out += static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(level), 0L, 255L)));
  }
  return out;
}

std::vector<unsigned char> pgm_levels(std::string_view data, int* side) {
  std::istringstream in{std::string(data)};
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || w != h || maxval != 255) parse_fail("unsupported PGM");
  in.get();
  std::vector<unsigned char> levels(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(levels.data()), static_cast<std::streamsize>(levels.size()));
  if (!in) parse_fail("truncated PGM");
  if (side) *side = w;
  return levels;
}

std::string mask_to_pbm(const SamplingMask& mask) {
  const int n = mask.side();
  std::string out = "P4\n" + std::to_string(n) + " " + std::to_string(n) + "\n";
  const std::size_t row_bytes = (static_cast<std::size_t>(n) + 7) / 8;
  for (int row = 0; row < n; ++row) {
    std::string bytes(row_bytes, '\0');
    for (int col = 0; col < n; ++col) {
      if (mask.test(static_cast<std::size_t>(row) * n + col)) {
        bytes[static_cast<std::size_t>(col) / 8] =
            static_cast<char>(static_cast<unsigned char>(bytes[static_cast<std::size_t>(col) / 8]) | (0x80u >> (col % 8)));
      }
    }
    out += bytes;
  }
  return out;
}

SamplingMask mask_from_pbm(std::string_view data) {
  std::istringstream in{std::string(data)};
  std::string magic;
  int w = 0, h = 0;
  in >> magic >> w >> h;
  if (magic != "P4" || w <= 0 || w != h) parse_fail("unsupported PBM");
  in.get();
  SamplingMask mask(w);
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  std::string bytes(row_bytes, '\0');
  for (int row = 0; row < h; ++row) {
    in.read(bytes.data(), static_cast<std::streamsize>(row_bytes));
    if (!in) parse_fail("truncated PBM");
    for (int col = 0; col < w; ++col) {
      if (static_cast<unsigned char>(bytes[static_cast<std::size_t>(col) / 8]) & (0x80u >> (col % 8))) {
        mask.set(static_cast<std::size_t>(row) * w + col);
      }
    }
  }
  return mask;
}

void write_image_f64(const std::filesystem::path& path, const Image& img) {
  static_assert(std::endian::native == std::endian::little, "raw dumps assume a little-endian host");
  std::string raw(img.pixels().size() * 2 * sizeof(double), '\0');
  std::size_t at = 0;
  for (const auto& v : img.pixels()) {
    const double parts[2] = {v.real(), v.imag()};
    std::memcpy(raw.data() + at, parts, sizeof parts);
    at += sizeof parts;
  }
  write_text(path, raw);
  nlohmann::ordered_json j;
  j["side"] = img.side();
  j["dtype"] = "complex128";
  j["layout"] = "row-major, interleaved (re, im) float64 little-endian";
  write_text(sidecar_path(path), j.dump(2) + "\n");
}

Image read_image_f64(const std::filesystem::path& path) {
  int side = 0;
  try {
    const auto j = nlohmann::json::parse(read_text(sidecar_path(path)));
    side = j.at("side").get<int>();
    if (j.at("dtype").get<std::string>() != "complex128") parse_fail("unsupported dtype");
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("image sidecar: ") + e.what());
  }
  const std::string raw = read_text(path);
  const std::size_t count = static_cast<std::size_t>(side) * side;
  if (raw.size() != count * 2 * sizeof(double)) parse_fail("raw image size does not match sidecar");
  std::vector<Complex> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    double parts[2];
    std::memcpy(parts, raw.data() + i * sizeof parts, sizeof parts);
    pixels[i] = Complex(parts[0], parts[1]);
  }
  return Image(side, std::move(pixels));
}

std::string report_to_csv(const std::vector<ExperimentRun>& runs) {
  std::string out(kReportHeader);
  out += '\n';
  for (const auto& run : runs) {
    out += std::string(to_string(run.scheme)) + ',' + std::to_string(run.seed) + ',' + std::to_string(run.side) +
           ',' + format_double(run.acceleration) + ',' + std::to_string(run.mask.sampled_count()) + ',' +
           format_double(run.snr_db) + ',' + std::to_string(run.recon.iterations) + ',' +
           format_double(run.recon.residual) + '\n';
  }
  return out;
}

std::vector<ReportRow> report_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != kReportHeader) parse_fail("report header mismatch");
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != 8) parse_fail("report row needs 8 columns");
    ReportRow r;
    r.scheme = std::string(cells[0]);
    r.seed = parse_int<std::uint64_t>(cells[1]);
    r.n = parse_int<int>(cells[2]);
    r.r = parse_double(cells[3]);
    r.sampled_count = parse_int<std::size_t>(cells[4]);
    r.snr_db = parse_double(cells[5]);
    r.iterations = parse_int<int>(cells[6]);
    r.residual = parse_double(cells[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace vds::io
