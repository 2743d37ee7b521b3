#include "stratcorr/types.hpp"

#include <cstdio>

namespace stratcorr {

std::string to_string(Venue v) { return v == Venue::on_book ? "on_book" : "off_book"; }

std::optional<Venue> parse_venue(const std::string& s) {
    if (s == "on_book") return Venue::on_book;
    if (s == "off_book") return Venue::off_book;
    return std::nullopt;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string to_string(const Month& m) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
    return buf;
}

std::string to_string(const CivilTime& t) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", t.date.year, t.date.month,
                  t.date.day, t.hour, t.minute, t.second);
    return buf;
}

namespace {

bool valid_date(int y, int m, int d) {
    static constexpr int days_in[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (y < 1900 || y > 9999 || m < 1 || m > 12 || d < 1) return false;
    int dim = days_in[m - 1];
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) dim = 29;
    return d <= dim;
}

}  // namespace

std::optional<Date> parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char trail = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &trail) != 3) return std::nullopt;
    if (!valid_date(y, m, d)) return std::nullopt;
    return Date{y, m, d};
}

std::optional<Month> parse_month(const std::string& s) {
    int y = 0, m = 0;
    char trail = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d%c", &y, &m, &trail) != 2) return std::nullopt;
    if (y < 1900 || y > 9999 || m < 1 || m > 12) return std::nullopt;
    return Month{y, m};
}

std::optional<CivilTime> parse_civil_time(const std::string& s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char sep = 0, trail = 0;
    int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c", &y, &mo, &d, &sep, &h, &mi, &sec, &trail);
    if (n != 6 && n != 7) return std::nullopt;
    if (n == 6) sec = 0;
    if (sep != 'T' && sep != ' ') return std::nullopt;
    if (!valid_date(y, mo, d)) return std::nullopt;
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) return std::nullopt;
    return CivilTime{Date{y, mo, d}, h, mi, sec};
}

std::string bucket_label(const BucketId& b, int first_hour) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%sT%02d", to_string(b.day).c_str(), first_hour + b.hour_index);
    return buf;
}

}  // namespace stratcorr
