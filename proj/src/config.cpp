#include "mchn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mchn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  if (trim(text.substr(used)) != "") throw ConfigError(key + ": expected a number, got '" + text + "'");
  if (!std::isfinite(v)) throw ConfigError(key + ": must be finite");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": keys must live under a [section]");
    for (const auto& [key, value] : body) c.values_[section + "." + key] = trim(value.data());
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key + ": required");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
  return static_cast<long>(v);
}

long Config::get_int(const std::string& key, long fallback) const { return has(key) ? get_int(key) : fallback; }

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  auto v = get_string(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? get_list(key) : fallback;
}

std::string Config::get_choice(const std::string& key, const std::vector<std::string>& choices,
                               const std::string& fallback) const {
  const auto v = get_string(key, fallback);
  if (std::find(choices.begin(), choices.end(), v) != choices.end()) return v;
  std::string list;
  for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
  throw ConfigError(key + ": '" + v + "' is not one of {" + list + "}");
}

void Config::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_)
    if (!allowed.count(key)) throw ConfigError(key + ": unknown key for this scenario");
}

}  // namespace mchn
