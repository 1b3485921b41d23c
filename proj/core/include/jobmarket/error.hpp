#pragma once

#include <stdexcept>
#include <string>

namespace jobmarket {

/// Raised when a MarketConfig (or a config file) violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structured CSV/config parse failure. `row` is 1-based over data rows
/// (0 means the header or the file as a whole); `column` may be empty.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::size_t row, std::string column,
             const std::string& what)
      : std::runtime_error(format(path, row, column, what)),
        path_(std::move(path)),
        row_(row),
        column_(std::move(column)) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& path, std::size_t row,
                            const std::string& column, const std::string& what) {
    std::string msg = path;
    if (row > 0) msg += ": row " + std::to_string(row);
    if (!column.empty()) msg += ", column '" + column + "'";
    msg += ": " + what;
    return msg;
  }

  std::string path_;
  std::size_t row_;
  std::string column_;
};

}  // namespace jobmarket
