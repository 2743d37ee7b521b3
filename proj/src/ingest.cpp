#include "stratcorr/ingest.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

#include "stratcorr/csv.hpp"

namespace stratcorr {

namespace {

const std::vector<std::string> kRequired = {"timestamp", "instrument", "venue",
                                            "institution", "signed_volume", "order_id"};

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

bool parse_volume(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

// 17 significant digits round-trip any double exactly; %g keeps the short
// form for clean monetary values.
std::string canonical_volume(double v) { return fmt_double(v, 17); }

}  // namespace

ParseResult parse_trades(std::istream& in) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input: no header row");
    line = strip_cr(line);
    result.header = split_csv(line);

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < result.header.size(); ++i) col[result.header[i]] = i;
    for (const auto& name : kRequired)
        if (!col.count(name)) throw SchemaError("missing required column: " + name);

    const std::size_t n_cols = result.header.size();
    const std::size_t c_ts = col["timestamp"], c_inst = col["instrument"], c_ven = col["venue"],
                      c_code = col["institution"], c_vol = col["signed_volume"], c_oid = col["order_id"];

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto reject = [&](const std::string& reason) {
            result.rejects.push_back({line_no, line, reason});
        };
        const auto fields = split_csv(line);
        if (fields.size() != n_cols) {
            reject("bad_field_count");
            continue;
        }
        const auto ts = parse_civil_time(fields[c_ts]);
        if (!ts) {
            reject("bad_timestamp");
            continue;
        }
        const auto venue = parse_venue(fields[c_ven]);
        if (!venue) {
            reject("bad_venue");
            continue;
        }
        if (fields[c_inst].empty() || fields[c_code].empty()) {
            reject("missing_field");
            continue;
        }
        double volume = 0.0;
        if (!parse_volume(fields[c_vol], volume)) {
            reject("bad_volume");
            continue;
        }
        if (volume == 0.0) {
            reject("zero_volume");
            continue;
        }
        if (*venue == Venue::off_book && !fields[c_oid].empty()) {
            reject("offbook_order_id");
            continue;
        }
        result.records.push_back(
            {*ts, fields[c_inst], *venue, fields[c_code], volume, fields[c_oid]});
    }
    return result;
}

void write_trades_csv(std::ostream& out, const std::vector<TradeRecord>& records) {
    out << "timestamp,instrument,venue,institution,signed_volume,order_id\n";
    for (const auto& r : records) {
        out << to_string(r.timestamp) << ',' << r.instrument << ',' << to_string(r.venue) << ','
            << r.institution << ',' << canonical_volume(r.signed_volume) << ',' << r.order_id
            << '\n';
    }
}

void write_rejects_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<RejectEntry>& rejects) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << ",reject_reason,line_number\n";
    for (const auto& r : rejects) out << r.line << ',' << r.reason << ',' << r.line_no << '\n';
}

int MonthSample::bucket_index(const BucketId& b) const {
    const auto it = std::lower_bound(buckets.begin(), buckets.end(), b);
    if (it == buckets.end() || !(*it == b)) return -1;
    return static_cast<int>(it - buckets.begin());
}

MonthSample bucketize(const std::vector<TradeRecord>& trades, const std::string& instrument,
                      Venue venue, Month month, const std::set<Date>& trading_days, int first_hour,
                      int last_hour) {
    if (first_hour < 0 || last_hour <= first_hour || last_hour > 24)
        throw ContractViolation("bucketize: invalid session hours");

    MonthSample sample;
    sample.instrument = instrument;
    sample.venue = venue;
    sample.month = month;
    sample.first_hour = first_hour;
    sample.hours_per_day = last_hour - first_hour;

    std::set<Date> days = trading_days;
    if (days.empty()) {
        for (const auto& t : trades)
            if (month_of(t.timestamp.date) == month) days.insert(t.timestamp.date);
    }
    if (days.empty()) throw EmptySampleError("no trading days in " + to_string(month));

    sample.trading_days.assign(days.begin(), days.end());
    sample.buckets.reserve(days.size() * static_cast<std::size_t>(sample.hours_per_day));
    for (const auto& d : sample.trading_days)
        for (int h = 0; h < sample.hours_per_day; ++h) sample.buckets.push_back({d, h});

    for (const auto& t : trades) {
        if (t.instrument != instrument || t.venue != venue)
            throw ContractViolation("bucketize: trade from a different instrument/venue group");
        if (month_of(t.timestamp.date) != month) {
            sample.excluded.push_back({t, "outside_month"});
            continue;
        }
        const int h = t.timestamp.hour;
        if (h < first_hour || h >= last_hour) {
            sample.excluded.push_back({t, "outside_trading_window"});
            continue;
        }
        const int idx = sample.bucket_index({t.timestamp.date, h - first_hour});
        if (idx < 0) {
            // Day absent from a caller-supplied calendar.
            sample.excluded.push_back({t, "not_a_trading_day"});
            continue;
        }
        sample.trades.push_back(t);
        sample.bucket_of.push_back(idx);
    }
    return sample;
}

void write_month_sample(std::ostream& out, const MonthSample& sample) {
    out << "# month_sample,instrument=" << sample.instrument << ",venue=" << to_string(sample.venue)
        << ",month=" << to_string(sample.month) << ",first_hour=" << sample.first_hour
        << ",hours=" << sample.hours_per_day << ",days=";
    for (std::size_t i = 0; i < sample.trading_days.size(); ++i)
        out << (i ? ";" : "") << to_string(sample.trading_days[i]);
    out << '\n';

    // Assigned trades in bucket order; exclusions are not canonical content.
    std::vector<std::size_t> idx(sample.trades.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return sample.bucket_of[a] < sample.bucket_of[b]; });
    std::vector<TradeRecord> ordered;
    ordered.reserve(idx.size());
    for (auto i : idx) ordered.push_back(sample.trades[i]);
    write_trades_csv(out, ordered);
}

MonthSample read_month_sample(std::istream& in) {
    std::string meta;
    if (!std::getline(in, meta) || meta.rfind("# month_sample,", 0) != 0)
        throw SchemaError("not a month_sample file");
    std::string instrument;
    std::optional<Venue> venue;
    std::optional<Month> month;
    int first_hour = 9, hours = 7;
    std::set<Date> days;
    for (const auto& kv : split_csv(meta.substr(std::string("# month_sample,").size()))) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "instrument") instrument = value;
        else if (key == "venue") venue = parse_venue(value);
        else if (key == "month") month = parse_month(value);
        else if (key == "first_hour") first_hour = std::atoi(value.c_str());
        else if (key == "hours") hours = std::atoi(value.c_str());
        else if (key == "days")
            for (const auto& d : split_csv(value, ';'))
                if (auto date = parse_date(d)) days.insert(*date);
    }
    if (instrument.empty() || !venue || !month || days.empty())
        throw SchemaError("month_sample metadata incomplete");

    ParseResult parsed = parse_trades(in);
    if (!parsed.rejects.empty())
        throw SchemaError("canonical month_sample contains malformed trades");
    return bucketize(parsed.records, instrument, *venue, *month, days, first_hour,
                     first_hour + hours);
}

}  // namespace stratcorr
