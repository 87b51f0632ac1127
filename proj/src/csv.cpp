#include "h2sched/csv.hpp"

#include <cctype>
#include <charconv>
#include <istream>

namespace h2sched {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

CsvReader::CsvReader(std::istream& in, std::vector<std::string> expected_header)
    : in_(in), header_(std::move(expected_header)) {
  std::string line;
  if (!std::getline(in_, line)) {
    throw ValidationError("empty input: missing CSV header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> got = split_csv_line(line);
  if (got != header_) {
    std::string want;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) want += ',';
      want += header_[i];
    }
    throw ValidationError("unexpected CSV header '" + line + "'; expected '" +
                          want + "'");
  }
}

bool CsvReader::next_row() {
  std::string line;
  while (std::getline(in_, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row_number_;
    fields_ = split_csv_line(line);
    if (fields_.size() != header_.size()) {
      throw ValidationError("row " + std::to_string(row_number_) + " has " +
                                std::to_string(fields_.size()) +
                                " fields; expected " +
                                std::to_string(header_.size()),
                            row_number_);
    }
    return true;
  }
  return false;
}

const std::string& CsvReader::field(std::size_t col) const {
  return fields_.at(col);
}

double CsvReader::number(std::size_t col) const {
  const std::string& s = fields_.at(col);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("row " + std::to_string(row_number_) +
                              ": cannot parse number from '" + s +
                              "' in column " + header_[col],
                          row_number_);
  }
  return value;
}

}  // namespace h2sched
