#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace liqarch::marketdata {

// One minute bar: closing price plus the dollar amount traded in the minute.
// The original decimal text of close/amount is retained so persisted bars
// round-trip bit-exactly.
struct MinuteBar {
    std::string ticker;
    std::int64_t minute_start = 0;  // epoch seconds, whole minute
    double close = 0.0;             // > 0
    double amount = 0.0;            // >= 0, dollar amount traded
    std::string close_text;
    std::string amount_text;
};

enum class VenueKind { Stock, Crypto };

struct Venue {
    VenueKind kind = VenueKind::Crypto;
    int session_minutes = 1440;   // nominal T: 390 stock, 1440 crypto
    int annualization_days = 365; // 252 stock, 365 crypto

    static Venue stock() { return Venue{VenueKind::Stock, 390, 252}; }
    static Venue crypto() { return Venue{VenueKind::Crypto, 1440, 365}; }
};

struct TradingDay {
    std::string ticker;
    std::int64_t date = 0;  // days since epoch, venue-local calendar date
    std::vector<MinuteBar> bars;
    std::optional<double> prev_close;
};

struct DayStatus {
    bool valid = false;
    int effective_minutes = 0;  // usable minute returns
    std::string reason;
};

// Parse error carrying the 1-based line number of the offending row.
struct ParseError : std::runtime_error {
    ParseError(std::string msg, int line_no) : std::runtime_error(std::move(msg)), line(line_no) {}
    int line;
};

// Reads `ticker,minute_start,close,amount` rows (ISO-8601 UTC timestamps).
// Throws ParseError: MissingColumn (line 1), BadTimestamp, NonPositivePrice,
// NegativeAmount, or a malformed-row error, each naming the line.
std::vector<MinuteBar> parse_minute_csv(std::istream& in);
std::vector<MinuteBar> parse_minute_csv_file(const std::string& path);

// Writes bars back in the same schema, preserving the original decimal text.
void write_minute_csv(const std::string& path, const std::vector<MinuteBar>& bars);

// Groups bars by (ticker, venue-local date). For stocks only bars inside the
// 09:30-16:00 US/Eastern session are retained; prev_close comes from the last
// bar of the preceding retained day of the same ticker. Input must be sorted
// by (ticker, minute_start) or UnsortedInput is thrown.
std::vector<TradingDay> partition_days(const std::vector<MinuteBar>& bars, const Venue& venue);

// r_tau = close_tau / close_{tau-1} - 1 over consecutive bars; the first bar
// settles against prev_close when present, otherwise it only seeds the chain.
std::vector<double> minute_returns(const TradingDay& day);

DayStatus validate_day(const TradingDay& day, int min_minutes = 30);

}  // namespace liqarch::marketdata
