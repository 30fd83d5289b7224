#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fbm/prediction/prediction.h"

namespace fbm::io {

/// 17 significant digits, C locale.
std::string format_double(double v);

/// Writes a header row and then rows of numbers, LF-terminated.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  /// Row whose first cell is text.
  void labelled_row(std::string_view label, const std::vector<double>& values);
  void text_row(const std::vector<std::string>& cells);

private:
  std::ostream& out_;
};

/// Reads a `time,value` CSV into an ObservedPath. Blank trailing lines and a
/// trailing CR are tolerated; anything else malformed throws InputError with
/// the offending line number.
prediction::ObservedPath read_path_csv(std::istream& in);
prediction::ObservedPath read_path_csv_file(const std::string& path);

/// Writes the path in the format read_path_csv accepts.
void write_path_csv(std::ostream& out, const prediction::ObservedPath& path);

} // namespace fbm::io
