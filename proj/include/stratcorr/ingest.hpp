#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "stratcorr/types.hpp"

namespace stratcorr {

struct RejectEntry {
    std::size_t line_no = 0;  // 1-based, header is line 1
    std::string line;
    std::string reason;
};

struct ParseResult {
    std::vector<TradeRecord> records;
    std::vector<RejectEntry> rejects;
    std::vector<std::string> header;  // as read, for the rejects report
};

// Reads a delimited trade table. Required columns (by name, any order):
// timestamp, instrument, venue, institution, signed_volume, order_id.
// Malformed lines land in rejects with a reason; a missing required column
// throws SchemaError.
ParseResult parse_trades(std::istream& in);

void write_trades_csv(std::ostream& out, const std::vector<TradeRecord>& records);
void write_rejects_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<RejectEntry>& rejects);

struct ExcludedTrade {
    TradeRecord trade;
    std::string reason;
};

// One (instrument, venue, month) sample of hourly buckets. `buckets` covers
// every trading day of the month times the session hours, empty or not, so
// T = hours_per_day * trading_days. `bucket_of[i]` is the bucket index of
// trades[i]. Window- and month-excluded input rows are kept in `excluded`
// so that input trades partition exactly into assignments and exclusions.
struct MonthSample {
    std::string instrument;
    Venue venue = Venue::on_book;
    Month month;
    int first_hour = 9;
    int hours_per_day = 7;
    std::vector<Date> trading_days;
    std::vector<BucketId> buckets;
    std::vector<TradeRecord> trades;
    std::vector<int> bucket_of;
    std::vector<ExcludedTrade> excluded;

    int bucket_index(const BucketId& b) const;
};

// Assigns trades to hour buckets [h:00, h+1:00), h in [first_hour,
// last_hour). Trades outside the window (the discarded opening hour and
// closing half hour) or outside the month are excluded, not dropped.
// `trading_days` may be supplied from a wider scan (all instruments) or a
// calendar file; when empty the days are inferred from the input trades.
// Throws EmptySampleError if no trading day remains, ContractViolation if a
// trade carries the wrong instrument or venue.
MonthSample bucketize(const std::vector<TradeRecord>& trades, const std::string& instrument,
                      Venue venue, Month month, const std::set<Date>& trading_days = {},
                      int first_hour = 9, int last_hour = 16);

// Canonical sample file: a '#'-metadata line (instrument, venue, month,
// session hours, trading days), the trade header, then the assigned trades
// in bucket order. Exclusions are not part of the canonical content.
void write_month_sample(std::ostream& out, const MonthSample& sample);
MonthSample read_month_sample(std::istream& in);

}  // namespace stratcorr
