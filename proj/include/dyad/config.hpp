#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dyad/common.hpp"

namespace dyad {

// Flat key-value configuration grouped into [sections].  Lines are
// `key = value`, comments start with '#'.  Every lookup is recorded so a
// caller can reject keys it never asked about, naming the offender.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<config>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  std::uint64_t get_uint64(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  std::string require_string(const std::string& section, const std::string& key) const;
  double require_double(const std::string& section, const std::string& key) const;
  long long require_int(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set_double(const std::string& section, const std::string& key, double value);
  void set_int(const std::string& section, const std::string& key, long long value);
  void set_uint64(const std::string& section, const std::string& key, std::uint64_t value);
  void set_bool(const std::string& section, const std::string& key, bool value);

  // Throws naming the first key nobody consumed; call after all lookups.
  void reject_unknown_keys() const;

  // Entries of one section in file order; marks them consumed.
  std::vector<std::pair<std::string, std::string>> section_entries(
      const std::string& section) const;

  std::string serialize() const;
  void write_file(const std::string& path) const;

 private:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  const std::string* find(const std::string& section, const std::string& key) const;

  std::vector<Section> sections_;
  std::string origin_ = "<config>";
  mutable std::set<std::string> consumed_;
};

}  // namespace dyad
