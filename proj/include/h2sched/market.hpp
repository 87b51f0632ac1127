#pragma once

#include <iosfwd>
#include <vector>

#include "h2sched/error.hpp"

namespace h2sched {

// One hour of day-ahead market data for the wind plant.
struct MarketRecord {
  int hour = 0;                // 0-based hour index
  double bid_price = 0.0;      // USD/MWh
  double cleared_price = 0.0;  // USD/MWh, day-ahead price
  double hsl = 0.0;            // MW, high sustainable limit
  double lsl = 0.0;            // MW, low sustainable limit
  double cleared_power = 0.0;  // MW awarded in the day-ahead market
};

// Contiguous hourly records, hour 0 .. T-1.
struct MarketSeries {
  std::vector<MarketRecord> records;

  int horizon() const noexcept { return static_cast<int>(records.size()); }
};

void validate_record(const MarketRecord& record, int row = -1);

// Reads CSV with header
//   hour,bid_price_usd_mwh,cleared_price_usd_mwh,hsl_mw,lsl_mw,cleared_power_mw
// Hours must be contiguous from 0 with no duplicates.
MarketSeries parse_market_csv(std::istream& in);

// Maximum power sellable to the grid this hour: the full availability when
// the bid cleared above the nodal price, otherwise the cleared award (ties
// take the cleared branch).
double export_limit(const MarketRecord& record);

// Maximum wind production this hour (the high sustainable limit).
double availability(const MarketRecord& record);

}  // namespace h2sched
