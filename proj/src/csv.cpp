#include "dyad/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dyad {

std::string format_time(double t_s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", t_s);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  if (header.empty()) throw DataError("csv header must not be empty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (closed_) throw std::logic_error("csv writer already closed");
  if (cells.size() != columns_) {
    throw DataError("csv row width mismatch in " + path_);
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path_ + " for writing");
  out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  out.flush();
  if (!out) throw DataError("write failed for " + path_);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  table.header = split_line(line);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw DataError(path + " line " + std::to_string(lineno) + ": expected " +
                      std::to_string(table.header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void expect_columns(const CsvTable& table,
                    const std::vector<std::string>& expected,
                    const std::string& file) {
  if (table.header == expected) return;
  std::string got;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) got += ',';
    got += table.header[i];
  }
  throw DataError(file + ": unexpected header '" + got + "'");
}

double parse_double(const std::string& cell, const std::string& context) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw DataError(context + ": malformed number '" + cell + "'");
  }
  return v;
}

long long parse_int(const std::string& cell, const std::string& context) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError(context + ": malformed integer '" + cell + "'");
  }
  return v;
}

}  // namespace dyad
