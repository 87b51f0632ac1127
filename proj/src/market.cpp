#include "h2sched/market.hpp"

#include <cmath>
#include <istream>
#include <string>

#include "h2sched/csv.hpp"

namespace h2sched {

void validate_record(const MarketRecord& record, int row) {
  const std::string where =
      row >= 0 ? " in row " + std::to_string(row) : std::string();
  if (!std::isfinite(record.bid_price) || !std::isfinite(record.cleared_price)) {
    throw ValidationError("non-finite price" + where, row);
  }
  if (!std::isfinite(record.hsl) || !std::isfinite(record.lsl) ||
      !std::isfinite(record.cleared_power)) {
    throw ValidationError("non-finite power field" + where, row);
  }
  if (record.lsl < 0.0 || record.hsl < record.lsl) {
    throw ValidationError("need 0 <= lsl <= hsl" + where, row);
  }
  if (record.cleared_power < 0.0 || record.cleared_power > record.hsl) {
    throw ValidationError("cleared power outside [0, hsl]" + where, row);
  }
}

MarketSeries parse_market_csv(std::istream& in) {
  CsvReader reader(in, {"hour", "bid_price_usd_mwh", "cleared_price_usd_mwh",
                        "hsl_mw", "lsl_mw", "cleared_power_mw"});
  MarketSeries series;
  int expected_hour = 0;
  while (reader.next_row()) {
    MarketRecord r;
    const double hour = reader.number(0);
    if (hour != static_cast<double>(static_cast<int>(hour))) {
      throw ValidationError("row " + std::to_string(reader.row_number()) +
                                ": hour index must be an integer",
                            reader.row_number());
    }
    r.hour = static_cast<int>(hour);
    if (r.hour != expected_hour) {
      if (r.hour > expected_hour) {
        throw ValidationError("missing hour " + std::to_string(expected_hour) +
                                  " before row " +
                                  std::to_string(reader.row_number()),
                              reader.row_number());
      }
      throw ValidationError("duplicate or out-of-order hour " +
                                std::to_string(r.hour) + " in row " +
                                std::to_string(reader.row_number()),
                            reader.row_number());
    }
    r.bid_price = reader.number(1);
    r.cleared_price = reader.number(2);
    r.hsl = reader.number(3);
    r.lsl = reader.number(4);
    r.cleared_power = reader.number(5);
    validate_record(r, reader.row_number());
    series.records.push_back(r);
    ++expected_hour;
  }
  if (series.records.empty()) {
    throw ValidationError("market file has no data rows");
  }
  return series;
}

double export_limit(const MarketRecord& record) {
  return record.bid_price > record.cleared_price ? record.hsl
                                                 : record.cleared_power;
}

double availability(const MarketRecord& record) { return record.hsl; }

}  // namespace h2sched
