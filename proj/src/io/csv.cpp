#include "fbm/io/csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "fbm/errors.h"

namespace fbm::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header) : out_(out) {
  bool first = true;
  for (auto h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << (i ? "," : "") << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::labelled_row(std::string_view label, const std::vector<double>& values) {
  out_ << label;
  for (double v : values) {
    out_ << ',' << format_double(v);
  }
  out_ << '\n';
}

void CsvWriter::text_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
}

namespace {

double parse_number(std::string_view cell, std::size_t line) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
    throw InputError("line " + std::to_string(line) + ": not a number: '" + std::string(cell) + "'", line);
  }
  return v;
}

} // namespace

prediction::ObservedPath read_path_csv(std::istream& in) {
  std::string text;
  std::vector<double> times, values;
  std::size_t line = 0;
  bool header_seen = false;
  bool blank_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) {
      blank_seen = true;
      continue;
    }
    if (blank_seen) {
      throw InputError("line " + std::to_string(line) + ": data after blank line", line);
    }
    if (!header_seen) {
      if (text != "time,value") {
        throw InputError("line " + std::to_string(line) + ": expected header 'time,value'", line);
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw InputError("line " + std::to_string(line) + ": expected two comma-separated fields", line);
    }
    const std::string_view sv(text);
    times.push_back(parse_number(sv.substr(0, comma), line));
    values.push_back(parse_number(sv.substr(comma + 1), line));
    const std::size_t n = times.size();
    if (n == 1 && (times[0] != 0.0 || values[0] != 0.0)) {
      throw InputError("line " + std::to_string(line) + ": path must start at time 0 with value 0", line);
    }
    if (n > 1 && !(times[n - 1] > times[n - 2])) {
      throw InputError("line " + std::to_string(line) + ": times must be strictly increasing", line);
    }
    if (!std::isfinite(times.back()) || !std::isfinite(values.back())) {
      throw InputError("line " + std::to_string(line) + ": non-finite number", line);
    }
  }
  if (!header_seen) {
    throw InputError("empty input: expected header 'time,value'", 1);
  }
  if (times.size() < 2) {
    throw InputError("need at least two observations", line);
  }
  return prediction::ObservedPath(std::move(times), std::move(values));
}

prediction::ObservedPath read_path_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open " + path);
  }
  return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const prediction::ObservedPath& path) {
  CsvWriter w(out, {"time", "value"});
  for (std::size_t i = 0; i < path.size(); ++i) {
    w.row({path.times()[i], path.values()[i]});
  }
}

} // namespace fbm::io
