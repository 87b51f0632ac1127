#pragma once

#include <stdexcept>
#include <string>

namespace h2sched {

// Error for rejected input data (curve files, market files, configs).
// `row` is the 1-based data row that triggered the rejection, or -1 when
// the problem is not tied to a single row.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::string message, int row = -1)
      : std::runtime_error(std::move(message)), row_(row) {}

  int row() const noexcept { return row_; }

 private:
  int row_;
};

}  // namespace h2sched
