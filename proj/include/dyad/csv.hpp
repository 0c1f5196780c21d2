#pragma once

#include <string>
#include <vector>

#include "dyad/common.hpp"

namespace dyad {

// Timestamps carry nine fractional digits; values use the shortest decimal
// that round-trips, so parse(write(x)) == x bit for bit.
std::string format_time(double t_s);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(const std::vector<std::string>& cells);
  void close();

 private:
  std::string path_;
  std::string buffer_;
  size_t columns_;
  bool closed_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

void expect_columns(const CsvTable& table,
                    const std::vector<std::string>& expected,
                    const std::string& file);

double parse_double(const std::string& cell, const std::string& context);
long long parse_int(const std::string& cell, const std::string& context);

}  // namespace dyad
