#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace stratcorr {

// Domain errors. All computation errors derive from std::runtime_error so
// callers that only care about pass/fail can catch one type.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

enum class Venue { on_book, off_book };

std::string to_string(Venue v);
std::optional<Venue> parse_venue(const std::string& s);

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31
    auto operator<=>(const Date&) const = default;
};

struct Month {
    int year = 0;
    int month = 0;  // 1..12
    auto operator<=>(const Month&) const = default;

    Month next() const { return month == 12 ? Month{year + 1, 1} : Month{year, month + 1}; }
};

inline Month month_of(const Date& d) { return Month{d.year, d.month}; }

// Exchange-local wall-clock time; no time zone handling anywhere.
struct CivilTime {
    Date date;
    int hour = 0;
    int minute = 0;
    int second = 0;
    auto operator<=>(const CivilTime&) const = default;
};

std::string to_string(const Date& d);      // YYYY-MM-DD
std::string to_string(const Month& m);     // YYYY-MM
std::string to_string(const CivilTime& t); // YYYY-MM-DDTHH:MM:SS

std::optional<Date> parse_date(const std::string& s);
std::optional<Month> parse_month(const std::string& s);
// Accepts YYYY-MM-DD[T ]HH:MM[:SS].
std::optional<CivilTime> parse_civil_time(const std::string& s);

inline bool is_weekday(const Date& d) {
    using namespace std::chrono;
    const weekday wd{sys_days{year{d.year} / d.month / d.day}};
    return wd != Saturday && wd != Sunday;
}

// One fill event, one record per (institution, trade) side.
struct TradeRecord {
    CivilTime timestamp;
    std::string instrument;
    Venue venue = Venue::on_book;
    std::string institution;
    double signed_volume = 0.0;  // monetary units; + buys, - sells; never 0
    std::string order_id;        // empty = absent; off_book records carry none

    bool operator==(const TradeRecord&) const = default;
};

// Hour interval [9+index:00, 10+index:00) on a trading day.
struct BucketId {
    Date day;
    int hour_index = 0;
    auto operator<=>(const BucketId&) const = default;
};

std::string bucket_label(const BucketId& b, int first_hour);

}  // namespace stratcorr
