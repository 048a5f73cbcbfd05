#ifndef FBSDE_CONFIG_HPP
#define FBSDE_CONFIG_HPP

// Line-oriented experiment configuration: [section] headers over key = value
// lines, '#' comments. Unknown sections or keys are rejected so typos fail
// loudly instead of silently running the wrong experiment.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fbsde/errors.hpp"
#include "fbsde/model.hpp"

namespace fbsde {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace detail

class RawConfig {
 public:
  static RawConfig parse_text(const std::string& text) {
    RawConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) +
                            ": unterminated section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        cfg.sections_[section];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected key = value");
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) +
                          ": key outside any [section]");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (cfg.sections_[section].count(key))
        throw ConfigError("section [" + section + "]: duplicate key '" + key +
                          "'");
      cfg.sections_[section][key] = value;
    }
    return cfg;
  }

  static RawConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str());
  }

  bool has_section(const std::string& name) const {
    return sections_.count(name) > 0;
  }

  void require_sections(const std::vector<std::string>& names) const {
    for (const auto& name : names)
      if (!has_section(name))
        throw ConfigError("missing [" + name + "] section");
  }

  void check_schema(
      const std::map<std::string, std::set<std::string>>& schema) const {
    for (const auto& [section, entries] : sections_) {
      const auto it = schema.find(section);
      if (it == schema.end())
        throw ConfigError("unknown section [" + section + "]");
      for (const auto& [key, value] : entries) {
        (void)value;
        if (!it->second.count(key))
          throw ConfigError("section [" + section + "]: unknown key '" + key +
                            "'");
      }
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
  }

  std::string get(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end())
      throw ConfigError("missing [" + section + "] section");
    const auto kit = it->second.find(key);
    if (kit == it->second.end())
      throw ConfigError("section [" + section + "]: missing key '" + key +
                        "'");
    return kit->second;
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("section [" + section + "], key '" + key +
                        "': not a number: " + raw);
    }
  }

  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  long long get_int(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("section [" + section + "], key '" + key +
                        "': not an integer: " + raw);
    }
  }

  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  unsigned long long get_u64(const std::string& section,
                             const std::string& key) const {
    const std::string raw = get(section, key);
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("section [" + section + "], key '" + key +
                        "': not an unsigned integer: " + raw);
    }
  }

  Vector get_vector(const std::string& section, const std::string& key) const {
    const auto parts = detail::split(get(section, key), ',');
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        std::size_t pos = 0;
        v(static_cast<Eigen::Index>(i)) = std::stod(parts[i], &pos);
        if (pos != parts[i].size()) throw std::invalid_argument(parts[i]);
      } catch (const std::exception&) {
        throw ConfigError("section [" + section + "], key '" + key +
                          "': bad vector component: " + parts[i]);
      }
    }
    return v;
  }

  std::vector<Vector> get_vector_list(const std::string& section,
                                      const std::string& key) const {
    const auto groups = detail::split(get(section, key), '|');
    std::vector<Vector> out;
    for (const auto& group : groups) {
      const auto parts = detail::split(group, ',');
      Vector v(static_cast<Eigen::Index>(parts.size()));
      for (std::size_t i = 0; i < parts.size(); ++i) {
        try {
          std::size_t pos = 0;
          v(static_cast<Eigen::Index>(i)) = std::stod(parts[i], &pos);
          if (pos != parts[i].size()) throw std::invalid_argument(parts[i]);
        } catch (const std::exception&) {
          throw ConfigError("section [" + section + "], key '" + key +
                            "': bad vector component: " + parts[i]);
        }
      }
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace fbsde

#endif  // FBSDE_CONFIG_HPP
