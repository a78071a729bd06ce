#include "physpline/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "physpline/errors.hpp"
#include "physpline/heading_spline.hpp"

namespace physpline {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed while reading " + path.string());
  }
  return std::move(buf).str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view token, const std::string& where) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(where + ": cannot parse number \"" +
                     std::string(token) + "\"");
  }
  if (!std::isfinite(value)) {
    throw ParseError(where + ": non-finite value");
  }
  return value;
}

std::string format_number(double value, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

// Column layout of one CSV file: header name to cell index.
class ColumnMap {
public:
  explicit ColumnMap(std::string_view header_line) {
    const auto names = split_csv(header_line);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string name(names[i]);
      if (name.empty()) continue;
      if (!index_.emplace(name, i).second) {
        throw ParseError("duplicate column \"" + name + "\" in header");
      }
    }
  }

  bool has(const std::string& name) const { return index_.count(name) > 0; }

  std::optional<double> cell(const std::vector<std::string_view>& cells,
                             const std::string& name,
                             std::size_t row_number) const {
    const auto it = index_.find(name);
    if (it == index_.end() || it->second >= cells.size()) return std::nullopt;
    const std::string_view token = cells[it->second];
    if (token.empty()) return std::nullopt;
    return parse_number(token, "row " + std::to_string(row_number) +
                                   ", column " + name);
  }

private:
  std::unordered_map<std::string, std::size_t> index_;
};

// None-or-both check for paired signals.
void require_pair(const std::optional<double>& a,
                  const std::optional<double>& b, const char* a_name,
                  const char* b_name, std::size_t row_number) {
  if (a.has_value() != b.has_value()) {
    throw ParseError("row " + std::to_string(row_number) + ": " +
                     (a ? a_name : b_name) + " present without " +
                     (a ? b_name : a_name));
  }
}

double weight_cell(const ColumnMap& cols,
                   const std::vector<std::string_view>& cells,
                   const std::string& name, std::size_t row_number) {
  const auto v = cols.cell(cells, name, row_number);
  if (!v) return 1.0;
  if (*v < 0.0) {
    throw ParseError("row " + std::to_string(row_number) + ", column " + name +
                     ": weight must be >= 0");
  }
  return *v;
}

}  // namespace

MeasurementSet load_track(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);

  std::size_t line_idx = 0;
  while (line_idx < lines.size() && trim(lines[line_idx]).empty()) ++line_idx;
  if (line_idx == lines.size()) {
    throw ParseError(path.string() + ": empty file");
  }
  const ColumnMap cols(lines[line_idx]);
  if (!cols.has("t")) {
    throw ParseError(path.string() + ": header has no t column");
  }

  std::vector<Measurement> ms;
  std::size_t rows = 0;
  for (std::size_t i = line_idx + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::size_t row_number = i + 1;
    const auto cells = split_csv(lines[i]);

    const auto t_cell = cols.cell(cells, "t", row_number);
    if (!t_cell) {
      throw ParseError("row " + std::to_string(row_number) +
                       ": missing t value");
    }
    const double t = *t_cell;
    ++rows;

    const auto x = cols.cell(cells, "x", row_number);
    const auto y = cols.cell(cells, "y", row_number);
    const auto vx = cols.cell(cells, "vx", row_number);
    const auto vy = cols.cell(cells, "vy", row_number);
    const auto ax = cols.cell(cells, "ax", row_number);
    const auto ay = cols.cell(cells, "ay", row_number);
    const auto psi = cols.cell(cells, "psi", row_number);
    const auto psi_ref = cols.cell(cells, "psi_ref", row_number);
    require_pair(x, y, "x", "y", row_number);
    require_pair(vx, vy, "vx", "vy", row_number);
    require_pair(ax, ay, "ax", "ay", row_number);
    if (psi_ref && !x) {
      throw ParseError("row " + std::to_string(row_number) +
                       ": psi_ref without x,y position");
    }

    if (x) {
      const double c = weight_cell(cols, cells, "c_pos", row_number);
      if (psi_ref) {
        const double c_lon = weight_cell(cols, cells, "c_lon", row_number);
        const double c_lat = weight_cell(cols, cells, "c_lat", row_number);
        ms.push_back(Measurement::lonlat_position(t, *x, *y, *psi_ref, c_lon,
                                                  c_lat, c));
      } else {
        ms.push_back(Measurement::position(t, *x, *y, c));
      }
    }
    if (vx) {
      ms.push_back(Measurement::velocity(
          t, *vx, *vy, weight_cell(cols, cells, "c_vel", row_number)));
    }
    if (ax) {
      ms.push_back(Measurement::acceleration(
          t, *ax, *ay, weight_cell(cols, cells, "c_acc", row_number)));
    }
    if (psi) {
      ms.push_back(Measurement::heading(
          t, *psi, weight_cell(cols, cells, "c_psi", row_number)));
    }
  }

  if (rows == 0) {
    throw ParseError(path.string() + ": no data rows");
  }
  const bool anchored =
      std::any_of(ms.begin(), ms.end(), [](const Measurement& m) {
        return m.kind == MeasurementKind::position ||
               m.kind == MeasurementKind::lonlat_position;
      });
  if (!anchored) {
    throw UnanchoredProblemError(path.string() +
                                 ": no position data in any row");
  }
  return MeasurementSet::from_recorded(std::move(ms));
}

std::vector<TrackRow> load_states(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);

  std::size_t line_idx = 0;
  while (line_idx < lines.size() && trim(lines[line_idx]).empty()) ++line_idx;
  if (line_idx == lines.size()) {
    throw ParseError(path.string() + ": empty file");
  }
  const ColumnMap cols(lines[line_idx]);
  if (!cols.has("t")) {
    throw ParseError(path.string() + ": header has no t column");
  }

  std::vector<TrackRow> rows;
  for (std::size_t i = line_idx + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::size_t row_number = i + 1;
    const auto cells = split_csv(lines[i]);
    const auto t_cell = cols.cell(cells, "t", row_number);
    if (!t_cell) {
      throw ParseError("row " + std::to_string(row_number) +
                       ": missing t value");
    }
    TrackRow row;
    row.t = *t_cell;
    row.x = cols.cell(cells, "x", row_number);
    row.y = cols.cell(cells, "y", row_number);
    row.vx = cols.cell(cells, "vx", row_number);
    row.vy = cols.cell(cells, "vy", row_number);
    row.ax = cols.cell(cells, "ax", row_number);
    row.ay = cols.cell(cells, "ay", row_number);
    row.speed = cols.cell(cells, "speed", row_number);
    row.psi = cols.cell(cells, "psi", row_number);
    row.psi_ref = cols.cell(cells, "psi_ref", row_number);
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TrackRow& a, const TrackRow& b) {
                     return a.t < b.t;
                   });
  return rows;
}

namespace {

constexpr int kCsvDigits = 15;

struct TrackColumn {
  const char* name;
  std::optional<double> TrackRow::* field;
};

constexpr TrackColumn kTrackColumns[] = {
    {"x", &TrackRow::x},         {"y", &TrackRow::y},
    {"vx", &TrackRow::vx},       {"vy", &TrackRow::vy},
    {"ax", &TrackRow::ax},       {"ay", &TrackRow::ay},
    {"speed", &TrackRow::speed}, {"psi", &TrackRow::psi},
    {"psi_ref", &TrackRow::psi_ref},
};

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed while writing " + path.string());
  }
}

}  // namespace

void write_track(const std::filesystem::path& path,
                 std::span<const TrackRow> rows) {
  std::vector<TrackColumn> present;
  for (const TrackColumn& col : kTrackColumns) {
    const bool any = std::any_of(rows.begin(), rows.end(),
                                 [&col](const TrackRow& r) {
                                   return (r.*(col.field)).has_value();
                                 });
    if (any) present.push_back(col);
  }

  std::ofstream out = open_for_write(path);
  out << "t";
  for (const TrackColumn& col : present) out << ',' << col.name;
  out << '\n';
  for (const TrackRow& r : rows) {
    out << format_number(r.t, kCsvDigits);
    for (const TrackColumn& col : present) {
      out << ',';
      if (const auto& v = r.*(col.field)) {
        out << format_number(*v, kCsvDigits);
      }
    }
    out << '\n';
  }
  finish_write(out, path);
}

void write_states(const std::filesystem::path& path,
                  std::span<const KinematicState> states, double t_offset,
                  const HeadingSpline* heading) {
  std::ofstream out = open_for_write(path);
  out << "t,x,y,vx,vy,ax,ay,speed,psi\n";
  for (const KinematicState& s : states) {
    out << format_number(s.t + t_offset, kCsvDigits) << ','
        << format_number(s.x, kCsvDigits) << ','
        << format_number(s.y, kCsvDigits) << ','
        << format_number(s.vx, kCsvDigits) << ','
        << format_number(s.vy, kCsvDigits) << ','
        << format_number(s.ax, kCsvDigits) << ','
        << format_number(s.ay, kCsvDigits) << ','
        << format_number(s.speed(), kCsvDigits) << ',';
    std::optional<double> psi;
    if (heading != nullptr) {
      psi = try_reconstruct_heading(*heading, s.t);
    } else {
      psi = s.course();
    }
    if (psi) out << format_number(*psi, kCsvDigits);
    out << '\n';
  }
  finish_write(out, path);
}

namespace {

constexpr int kModelDigits = 17;
constexpr const char* kModelMagic = "physpline-model";
constexpr const char* kModelVersion = "1";

void write_vector(std::ofstream& out, const char* name,
                  std::span<const double> values) {
  out << name << ' ' << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_number(values[i], kModelDigits);
  }
  out << '\n';
}

void write_eigen_vector(std::ofstream& out, const char* name,
                        const Eigen::VectorXd& v) {
  write_vector(out, name,
               std::span<const double>(v.data(),
                                       static_cast<std::size_t>(v.size())));
}

// Applies one "key value" pair to a config; shared between config files and
// the model file's config section.
void set_config_key(FitConfig& cfg, const std::string& key,
                    const std::string& value, const std::string& where) {
  const auto number = [&]() { return parse_number(value, where); };
  const auto flag = [&]() {
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    throw ParseError(where + ": expected 0/1/true/false, got \"" + value +
                     "\"");
  };

  if (key == "grid_dt") {
    cfg.grid_dt = number();
  } else if (key == "c_pos") {
    cfg.c_pos = number();
  } else if (key == "c_vel") {
    cfg.c_vel = number();
  } else if (key == "c_acc") {
    cfg.c_acc = number();
  } else if (key == "c_lon") {
    cfg.c_lon = number();
  } else if (key == "c_lat") {
    cfg.c_lat = number();
  } else if (key == "c_heading_dir") {
    cfg.c_heading_dir = number();
  } else if (key == "lambda_acc_reg") {
    cfg.lambda_acc_reg = number();
  } else if (key == "c_zero_vel") {
    cfg.c_zero_vel = number();
  } else if (key == "v_stop") {
    cfg.v_stop = number();
  } else if (key == "t_stop") {
    cfg.t_stop = number();
  } else if (key == "use_lonlat_split") {
    cfg.use_lonlat_split = flag();
  } else if (key == "use_heading_dir") {
    cfg.use_heading_dir = flag();
  } else {
    throw ParseError(where + ": unknown config key \"" + key + "\"");
  }
}

void write_config(std::ofstream& out, const FitConfig& cfg) {
  out << "config\n";
  out << "grid_dt " << format_number(cfg.grid_dt, kModelDigits) << '\n';
  out << "c_pos " << format_number(cfg.c_pos, kModelDigits) << '\n';
  out << "c_vel " << format_number(cfg.c_vel, kModelDigits) << '\n';
  out << "c_acc " << format_number(cfg.c_acc, kModelDigits) << '\n';
  out << "c_lon " << format_number(cfg.c_lon, kModelDigits) << '\n';
  out << "c_lat " << format_number(cfg.c_lat, kModelDigits) << '\n';
  out << "c_heading_dir " << format_number(cfg.c_heading_dir, kModelDigits)
      << '\n';
  out << "lambda_acc_reg " << format_number(cfg.lambda_acc_reg, kModelDigits)
      << '\n';
  out << "c_zero_vel " << format_number(cfg.c_zero_vel, kModelDigits) << '\n';
  out << "v_stop " << format_number(cfg.v_stop, kModelDigits) << '\n';
  out << "t_stop " << format_number(cfg.t_stop, kModelDigits) << '\n';
  out << "use_lonlat_split " << (cfg.use_lonlat_split ? 1 : 0) << '\n';
  out << "use_heading_dir " << (cfg.use_heading_dir ? 1 : 0) << '\n';
}

class TokenReader {
public:
  explicit TokenReader(const std::string& text) : stream_(text) {}

  std::string next(const char* what) {
    std::string token;
    if (!(stream_ >> token)) {
      throw ParseError(std::string("model file truncated while reading ") +
                       what);
    }
    return token;
  }

  void expect(const char* keyword) {
    const std::string token = next(keyword);
    if (token != keyword) {
      throw ParseError(std::string("model file: expected \"") + keyword +
                       "\", got \"" + token + "\"");
    }
  }

  double number(const char* what) {
    return parse_number(next(what), std::string("model file, ") + what);
  }

  std::size_t count(const char* what) {
    const std::string token = next(what);
    std::size_t value = 0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(std::string("model file, ") + what +
                       ": bad count \"" + token + "\"");
    }
    return value;
  }

  std::vector<double> vector(const char* keyword) {
    expect(keyword);
    const std::size_t n = count(keyword);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = number(keyword);
    return values;
  }

private:
  std::istringstream stream_;
};

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void save_model(const std::filesystem::path& path, const PhysicalSpline& spline,
                const FitConfig& config) {
  std::ofstream out = open_for_write(path);
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "t_offset " << format_number(spline.t_offset(), kModelDigits) << '\n';
  write_vector(out, "knots", spline.grid().knots());
  write_eigen_vector(out, "x_block", spline.weights().x_block);
  write_eigen_vector(out, "y_block", spline.weights().y_block);
  if (spline.heading_model()) {
    const HeadingSpline& hs = *spline.heading_model();
    write_vector(out, "heading_knots", hs.grid().knots());
    write_eigen_vector(out, "cos_block", hs.cos_block());
    write_eigen_vector(out, "sin_block", hs.sin_block());
  }
  write_config(out, config);
  out << "end\n";
  finish_write(out, path);
}

LoadedModel load_model(const std::filesystem::path& path) {
  TokenReader tokens(read_file(path));

  const std::string magic = tokens.next("format magic");
  if (magic != kModelMagic) {
    throw ParseError(path.string() + ": not a model file");
  }
  const std::string version = tokens.next("format version");
  if (version != kModelVersion) {
    throw ParseError(path.string() + ": unsupported model file version \"" +
                     version + "\"");
  }

  tokens.expect("t_offset");
  const double t_offset = tokens.number("t_offset");
  const auto knots = tokens.vector("knots");
  const auto x_block = tokens.vector("x_block");
  const auto y_block = tokens.vector("y_block");

  std::string section = tokens.next("heading_knots or config");
  std::optional<HeadingSpline> heading;
  std::vector<double> heading_knots, cos_block, sin_block;
  if (section == "heading_knots") {
    const std::size_t n = tokens.count("heading_knots");
    heading_knots.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      heading_knots[i] = tokens.number("heading_knots");
    }
    cos_block = tokens.vector("cos_block");
    sin_block = tokens.vector("sin_block");
    section = tokens.next("config");
  }
  if (section != "config") {
    throw ParseError("model file: expected \"config\", got \"" + section +
                     "\"");
  }

  FitConfig cfg;
  while (true) {
    const std::string key = tokens.next("config key or end");
    if (key == "end") break;
    const std::string value = tokens.next("config value");
    set_config_key(cfg, key, value, "model file, config key " + key);
  }

  try {
    cfg.validate();
    if (!heading_knots.empty()) {
      heading.emplace(TimeGrid(heading_knots), to_eigen(cos_block),
                      to_eigen(sin_block));
    }
    WeightVector w{to_eigen(x_block), to_eigen(y_block)};
    PhysicalSpline spline(TimeGrid(knots), std::move(w), t_offset,
                          std::move(heading));
    return LoadedModel{std::move(spline), cfg};
  } catch (const ArgumentError& e) {
    throw ParseError(path.string() + ": inconsistent model data: " + e.what());
  }
}

FitConfig parse_config_text(const std::string& text) {
  FitConfig cfg;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string flattened(line);
    std::replace(flattened.begin(), flattened.end(), '=', ' ');
    std::istringstream ss(flattened);
    std::string key, value, extra;
    ss >> key >> value;
    const std::string where = "config line " + std::to_string(i + 1);
    if (value.empty()) {
      throw ParseError(where + ": expected \"key value\"");
    }
    if (ss >> extra) {
      throw ParseError(where + ": unexpected trailing content \"" + extra +
                       "\"");
    }
    set_config_key(cfg, key, value, where + " (" + key + ")");
  }
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

FitConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config_text(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace physpline
