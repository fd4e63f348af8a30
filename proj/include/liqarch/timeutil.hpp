#pragma once

#include <cstdint>
#include <string>

namespace liqarch {

// Calendar helpers on days-since-epoch (1970-01-01 = day 0) and
// epoch-second timestamps. All conversions are proleptic Gregorian, UTC.

struct CivilDate {
    int year;
    int month;  // 1..12
    int day;    // 1..31
};

// Howard Hinnant's algorithms; exact for the whole int range we use.
std::int64_t days_from_civil(int y, int m, int d);
CivilDate civil_from_days(std::int64_t z);

// Day-of-week, 0 = Sunday .. 6 = Saturday.
int weekday_from_days(std::int64_t z);

// "YYYY-MM-DD"
std::string format_date(std::int64_t days);
std::int64_t parse_date(const std::string& s);  // throws std::invalid_argument

// Strict "YYYY-MM-DDTHH:MM:SSZ", seconds must be 00 for minute bars.
// Returns epoch seconds. Throws std::invalid_argument on malformed input.
std::int64_t parse_iso_utc(const std::string& s);
std::string format_iso_utc(std::int64_t epoch_sec);

// US/Eastern UTC offset in seconds for the civil date holding `epoch_sec`
// (post-2007 DST rule: second Sunday of March to first Sunday of November).
int us_eastern_offset_sec(std::int64_t epoch_sec);

}  // namespace liqarch
