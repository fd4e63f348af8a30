#include "liqarch/timeutil.hpp"

#include <cstdio>
#include <stdexcept>

namespace liqarch {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int weekday_from_days(std::int64_t z) {
    return static_cast<int>(z >= -4 ? (z + 4) % 7 : (z + 5) % 7 + 6);
}

std::string format_date(std::int64_t days) {
    CivilDate c = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

std::int64_t parse_date(const std::string& s) {
    int y, m, d;
    char tail;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31)
        throw std::invalid_argument("bad date: " + s);
    return days_from_civil(y, m, d);
}

std::int64_t parse_iso_utc(const std::string& s) {
    int y, mo, d, h, mi, sec;
    char z, tail;
    int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c", &y, &mo, &d, &h, &mi, &sec,
                        &z, &tail);
    if (n != 7 || z != 'Z' || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 ||
        mi < 0 || mi > 59 || sec < 0 || sec > 59)
        throw std::invalid_argument("bad timestamp: " + s);
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_iso_utc(std::int64_t t) {
    std::int64_t days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
    int rem = static_cast<int>(t - days * 86400);
    CivilDate c = civil_from_days(days);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  rem / 3600, (rem / 60) % 60, rem % 60);
    return buf;
}

namespace {

// Day of the n-th given weekday in a month (n = 1 -> first).
std::int64_t nth_weekday(int year, int month, int wday, int n) {
    std::int64_t first = days_from_civil(year, month, 1);
    int w = weekday_from_days(first);
    int delta = (wday - w + 7) % 7 + (n - 1) * 7;
    return first + delta;
}

}  // namespace

int us_eastern_offset_sec(std::int64_t epoch_sec) {
    // Evaluate in EST first; the rule boundaries are 02:00 local but bars at
    // minute granularity inside the trading session never straddle them.
    std::int64_t days = (epoch_sec - (-5 * 3600)) >= 0 ? (epoch_sec + 5 * 3600) / 86400
                                                       : (epoch_sec + 5 * 3600 - 86399) / 86400;
    CivilDate c = civil_from_days(days);
    std::int64_t dst_start = nth_weekday(c.year, 3, 0, 2);  // 2nd Sunday of March
    std::int64_t dst_end = nth_weekday(c.year, 11, 0, 1);   // 1st Sunday of November
    bool dst = days >= dst_start && days < dst_end;
    return dst ? -4 * 3600 : -5 * 3600;
}

}  // namespace liqarch
