#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "h2sched/error.hpp"

namespace h2sched {

// Minimal strict CSV reader: fixed header, comma separation, no quoting.
// Rows are numbered from 1 (the header is row 0 in error messages).
class CsvReader {
 public:
  CsvReader(std::istream& in, std::vector<std::string> expected_header);

  // Advances to the next data row; false at end of input.
  bool next_row();

  int row_number() const noexcept { return row_number_; }
  const std::string& field(std::size_t col) const;
  double number(std::size_t col) const;
  std::size_t n_columns() const noexcept { return fields_.size(); }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  int row_number_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace h2sched
