#pragma once

// Flat key=value experiment configs: one pair per line, '#' comments,
// whitespace-tolerant. Typed getters with defaults.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "conelab/gauge.hpp"

namespace conelab {

class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
  }

  static Config from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      if (trim(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config: missing '=' on line " +
                                    std::to_string(lineno));
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config: empty key on line " +
                                    std::to_string(lineno));
      cfg.values_[key] = value;
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
      throw std::invalid_argument("config: bad number for " + key);
    return v;
  }

  int get_int(const std::string& key, int fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size())
      throw std::invalid_argument("config: bad integer for " + key);
    return v;
  }

  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return std::stoull(it->second);
  }

  // Gauge spec: "euclidean" or "lqQ" (e.g. lq4, lq6).
  Gauge get_gauge(int d) const {
    const std::string spec = get_string("gauge", "euclidean");
    if (spec == "euclidean") return Gauge::euclidean(d);
    if (spec.rfind("lq", 0) == 0) {
      const int q = std::stoi(spec.substr(2));
      return Gauge::lq(d, q);
    }
    throw std::invalid_argument("config: unknown gauge '" + spec + "'");
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace conelab
