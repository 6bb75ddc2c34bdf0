#include "hmmwave/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hmmwave::config {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    cfg.data_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  if (auto s = data_.find(section); s != data_.end() && s->second.count(key))
    return true;
  if (auto s = data_.find(""); s != data_.end() && s->second.count(key))
    return true;
  return false;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  if (auto s = data_.find(section); s != data_.end()) {
    if (auto k = s->second.find(key); k != s->second.end()) return k->second;
  }
  if (auto s = data_.find(""); s != data_.end()) {
    if (auto k = s->second.find(key); k != s->second.end()) return k->second;
  }
  return fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const std::string v = get(section, key);
  return v.empty() ? fallback : std::stod(v);
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  const std::string v = get(section, key);
  return v.empty() ? fallback : std::stoi(v);
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  std::string v = get(section, key);
  if (v.empty()) return fallback;
  for (auto& c : v) c = char(std::tolower(c));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: not a boolean: " + v);
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  std::vector<double> out;
  std::string v = get(section, key);
  for (auto& c : v)
    if (c == ',') c = ' ';
  std::istringstream in(v);
  double x;
  while (in >> x) out.push_back(x);
  return out;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_)
    if (!name.empty()) out.push_back(name);
  return out;
}

}  // namespace hmmwave::config
