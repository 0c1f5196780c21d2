#include "dyad/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dyad {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw DataError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw DataError(where + ": bad section name '" + section + "'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw DataError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw DataError(where + ": bad key '" + key + "'");
    if (cfg.find(section, key) != nullptr) {
      throw DataError(where + ": duplicate key '" + section + "." + key + "'");
    }
    cfg.set(section, key, value);
  }
  return cfg;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  for (const auto& sec : sections_) {
    if (sec.name != section) continue;
    for (const auto& e : sec.entries) {
      if (e.key == key) return &e.value;
    }
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  errno = 0;
  double parsed = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw DataError(origin_ + ": key '" + section + "." + key + "' has malformed number '" +
                    *v + "'");
  }
  return parsed;
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  errno = 0;
  long long parsed = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw DataError(origin_ + ": key '" + section + "." + key + "' has malformed integer '" +
                    *v + "'");
  }
  return parsed;
}

std::uint64_t Config::get_uint64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long parsed = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE || v->front() == '-') {
    throw DataError(origin_ + ": key '" + section + "." + key + "' has malformed unsigned '" +
                    *v + "'");
  }
  return parsed;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw DataError(origin_ + ": key '" + section + "." + key + "' has malformed boolean '" + *v +
                  "'");
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  consumed_.insert(section + "." + key);
  const std::string* v = find(section, key);
  if (!v) throw DataError(origin_ + ": missing required key '" + section + "." + key + "'");
  return *v;
}

double Config::require_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    throw DataError(origin_ + ": missing required key '" + section + "." + key + "'");
  }
  return get_double(section, key, 0.0);
}

long long Config::require_int(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    throw DataError(origin_ + ": missing required key '" + section + "." + key + "'");
  }
  return get_int(section, key, 0);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& sec : sections_) {
    if (sec.name != section) continue;
    for (auto& e : sec.entries) {
      if (e.key == key) {
        e.value = value;
        return;
      }
    }
    sec.entries.push_back({key, value});
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

void Config::set_double(const std::string& section, const std::string& key, double value) {
  set(section, key, to_shortest(value));
}

void Config::set_int(const std::string& section, const std::string& key, long long value) {
  set(section, key, std::to_string(value));
}

void Config::set_uint64(const std::string& section, const std::string& key, std::uint64_t value) {
  set(section, key, std::to_string(value));
}

void Config::set_bool(const std::string& section, const std::string& key, bool value) {
  set(section, key, value ? "true" : "false");
}

std::vector<std::pair<std::string, std::string>> Config::section_entries(
    const std::string& section) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& sec : sections_) {
    if (sec.name != section) continue;
    for (const auto& e : sec.entries) {
      consumed_.insert(sec.name + "." + e.key);
      out.emplace_back(e.key, e.value);
    }
  }
  return out;
}

void Config::reject_unknown_keys() const {
  for (const auto& sec : sections_) {
    for (const auto& e : sec.entries) {
      std::string full = sec.name + "." + e.key;
      if (consumed_.count(full) == 0) {
        throw DataError(origin_ + ": unknown key '" + full + "'");
      }
    }
  }
}

std::string Config::serialize() const {
  std::string out;
  bool first = true;
  for (const auto& sec : sections_) {
    if (!first) out += '\n';
    first = false;
    if (!sec.name.empty()) {
      out += '[';
      out += sec.name;
      out += "]\n";
    }
    for (const auto& e : sec.entries) {
      out += e.key;
      out += " = ";
      out += e.value;
      out += '\n';
    }
  }
  return out;
}

void Config::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path + " for writing");
  std::string text = serialize();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace dyad
