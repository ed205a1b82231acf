#include "cumstream/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cumstream {

namespace {

double parse_field(const char* begin, const char* end, std::size_t line) {
  // Tolerate surrounding spaces; std::from_chars does the actual parse.
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error("csv: unparsable number on line " + std::to_string(line));
  return v;
}

}  // namespace

CsvBatchSource::CsvBatchSource(std::istream& in, std::size_t cols, bool skip_header)
    : in_(in), cols_(cols) {
  if (cols < 1) throw std::invalid_argument("CsvBatchSource: cols must be positive");
  if (skip_header) {
    std::string line;
    if (std::getline(in_, line)) ++line_;
  }
}

std::optional<DataBatch> CsvBatchSource::next(std::size_t rows) {
  if (drained_ || rows == 0) return std::nullopt;
  DataBatch out;
  out.cols = cols_;
  out.values.reserve(rows * cols_);
  std::string line;
  while (out.rows < rows && std::getline(in_, line)) {
    ++line_;
    if (line.empty() || line == "\r") continue;
    const char* p = line.data();
    const char* end = p + line.size();
    std::size_t fields = 0;
    while (true) {
      const char* comma = p;
      while (comma < end && *comma != ',') ++comma;
      out.values.push_back(parse_field(p, comma, line_));
      ++fields;
      if (comma == end) break;
      p = comma + 1;
    }
    if (fields != cols_) {
      throw std::runtime_error("csv: expected " + std::to_string(cols_) + " fields, got " +
                               std::to_string(fields) + " on line " + std::to_string(line_));
    }
    ++out.rows;
  }
  if (out.rows < rows) drained_ = true;
  if (out.rows == 0) return std::nullopt;
  return out;
}

void write_csv(std::ostream& out, const DataBatch& x) {
  char buf[32];
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double* row = x.row(r);
    for (std::size_t c = 0; c < x.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c > 0) out.put(',');
      out << buf;
    }
    out.put('\n');
  }
}

}  // namespace cumstream
