#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "revar/error.hpp"
#include "revar/ts_moments.hpp"

namespace revar {

/// Parse failure with 1-based line and column (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long row, long column);

  long row() const noexcept { return row_; }
  long column() const noexcept { return column_; }

 private:
  long row_;
  long column_;
};

/// Header row of names, then one numeric row per time point (oldest first).
TimeSeriesData parse_csv(const std::string& text);
TimeSeriesData read_csv(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

std::string matrix_to_csv(const MatrixXd& m, const std::vector<std::string>& header = {});
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// `key = value` lines; `#` starts a comment; values may be double-quoted.
/// Repeated keys keep the last value.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(const std::string& text);
ConfigMap read_config(const std::filesystem::path& path);

std::vector<std::string> split_list(const std::string& s, char sep = ',');

}  // namespace revar
