#include "gtvc/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gtvc {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

double to_double(const std::string& s, const std::string& path, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

PointTable read_point_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "y") throw std::invalid_argument(path + ": header must be x0,...,x{d-1},y");
  for (std::size_t k = 0; k + 1 < header.size(); ++k)
    if (header[k] != "x" + std::to_string(k)) throw std::invalid_argument(path + ": header must be x0,...,x{d-1},y");

  PointTable table;
  table.dim = static_cast<int>(header.size()) - 1;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": wrong number of columns");
    for (int k = 0; k < table.dim; ++k) table.points.push_back(to_double(fields[k], path, lineno));
    table.values.push_back(to_double(fields.back(), path, lineno));
  }
  if (in.bad()) throw IoError("read failed: " + path);
  return table;
}

void write_point_table(const PointTable& table, const std::string& path) {
  auto out = open_out(path);
  out.precision(17);
  for (int k = 0; k < table.dim; ++k) out << 'x' << k << ',';
  out << "y\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (int k = 0; k < table.dim; ++k) out << table.points[i * table.dim + k] << ',';
    out << table.values[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

LabeledCloud read_cloud_csv(const std::string& path) {
  PointTable table = read_point_table(path);
  LabeledCloud cloud;
  cloud.dim = table.dim;
  cloud.points = std::move(table.points);
  cloud.labels.reserve(table.size());
  for (double y : table.values) {
    if (y != 0.0 && y != 1.0) throw std::invalid_argument(path + ": labels must be exactly 0 or 1");
    cloud.labels.push_back(static_cast<std::uint8_t>(y));
  }
  return cloud;
}

void write_cloud_csv(const LabeledCloud& cloud, const std::string& path) {
  PointTable table{cloud.dim, cloud.points, std::vector<double>(cloud.labels.begin(), cloud.labels.end())};
  write_point_table(table, path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_json(const nlohmann::json& j, const std::string& path) { write_text(j.dump(2) + "\n", path); }

void write_text(const std::string& text, const std::string& path) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

GroundTruthModel load_model(const std::string& path) { return GroundTruthModel::from_json(read_json(path)); }

}  // namespace gtvc
