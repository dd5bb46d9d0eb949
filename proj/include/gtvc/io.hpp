#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtvc/groundtruth.hpp"

namespace gtvc {

/// File-system failure (missing file, unwritable path, truncated write).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points with one real value per point, as stored in the dataset CSV.
struct PointTable {
  int dim = 0;
  std::vector<double> points;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Reads a CSV with header x0,...,x{d-1},y.
PointTable read_point_table(const std::string& path);
void write_point_table(const PointTable& table, const std::string& path);

/// Dataset CSV; labels must be exactly 0 or 1.
LabeledCloud read_cloud_csv(const std::string& path);
void write_cloud_csv(const LabeledCloud& cloud, const std::string& path);

nlohmann::json read_json(const std::string& path);
void write_json(const nlohmann::json& j, const std::string& path);
void write_text(const std::string& text, const std::string& path);

GroundTruthModel load_model(const std::string& path);

}  // namespace gtvc
