#include "mchn/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace mchn {

namespace {

std::string schema_line(const std::string& schema) {
  return "mchn." + schema + " v" + std::to_string(kSchemaVersion);
}

void emit(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        emit(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += nl + pad;
        emit(e, indent, depth + 1, out);
      }
      if (!flat) out += nl + close;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema, std::vector<std::string> columns)
    : path_(path), width_(columns.size()), out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  out_ << "# " << schema_line(schema) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  return out;
}

void write_json(const std::string& path, const std::string& schema, const Json& body) {
  Json j;
  j["schema"] = schema_line(schema);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << dump_json(j) << '\n';
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::runtime_error(path + ": missing schema line");
  t.schema = line.substr(2);
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
  t.columns = split_csv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    for (const auto& c : split_csv(line)) r.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace mchn
