#pragma once

#include <map>
#include <string>
#include <vector>

namespace hmmwave::config {

/// Flat key-value configuration with INI-style [sections]. Lines are
/// `key = value`; `#` starts a comment. Keys before any section header live
/// in the "" section. Lookup falls back from "section.key" to the preamble.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  /// Comma- or space-separated list of reals.
  std::vector<double> get_list(const std::string& section,
                               const std::string& key) const;

  std::vector<std::string> sections() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace hmmwave::config
