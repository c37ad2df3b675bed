#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace mchn {

using Json = nlohmann::ordered_json;

/// Output formats are versioned; bump when columns or keys change meaning.
inline constexpr int kSchemaVersion = 1;

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// CSV with a schema line "# mchn.<schema> v<version>" before the column names.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t width_;
  std::ofstream out_;
};

/// Serializes with floats at 17 significant digits (non-finite as null).
std::string dump_json(const Json& j, int indent = 2);

/// Writes {"schema": "mchn.<schema> v<version>", ...body} to path.
void write_json(const std::string& path, const std::string& schema, const Json& body);

/// Reads a CSV written by CsvWriter: returns the schema line, column names and rows.
struct CsvTable {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace mchn
