#include "liqarch/marketdata.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "liqarch/csv.hpp"
#include "liqarch/timeutil.hpp"

namespace liqarch::marketdata {

namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string trim_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

std::vector<MinuteBar> parse_minute_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("MissingColumn: empty input", 1);
    auto header = split_csv_line(trim_cr(line));
    const std::vector<std::string> expected{"ticker", "minute_start", "close", "amount"};
    if (header != expected)
        throw ParseError("MissingColumn: header must be ticker,minute_start,close,amount", 1);

    std::vector<MinuteBar> bars;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(line);
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 4)
            throw ParseError("malformed row: expected 4 fields at line " + std::to_string(line_no),
                             line_no);
        MinuteBar bar;
        bar.ticker = f[0];
        try {
            bar.minute_start = parse_iso_utc(f[1]);
        } catch (const std::invalid_argument&) {
            throw ParseError("BadTimestamp at line " + std::to_string(line_no) + ": " + f[1],
                             line_no);
        }
        if (bar.minute_start % 60 != 0)
            throw ParseError("BadTimestamp at line " + std::to_string(line_no) +
                                 ": not minute-aligned",
                             line_no);
        if (!parse_number(f[2], bar.close))
            throw ParseError("malformed close at line " + std::to_string(line_no), line_no);
        if (!(bar.close > 0.0))
            throw ParseError("NonPositivePrice at line " + std::to_string(line_no), line_no);
        if (!parse_number(f[3], bar.amount))
            throw ParseError("malformed amount at line " + std::to_string(line_no), line_no);
        if (bar.amount < 0.0)
            throw ParseError("NegativeAmount at line " + std::to_string(line_no), line_no);
        bar.close_text = f[2];
        bar.amount_text = f[3];
        bars.push_back(std::move(bar));
    }
    return bars;
}

std::vector<MinuteBar> parse_minute_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return parse_minute_csv(in);
}

void write_minute_csv(const std::string& path, const std::vector<MinuteBar>& bars) {
    CsvWriter w(path);
    w.row({"ticker", "minute_start", "close", "amount"});
    for (const auto& b : bars) {
        std::string close = b.close_text.empty() ? format_double(b.close) : b.close_text;
        std::string amount = b.amount_text.empty() ? format_double(b.amount) : b.amount_text;
        w.row({b.ticker, format_iso_utc(b.minute_start), close, amount});
    }
}

namespace {

// Local calendar date of a bar: US/Eastern for stocks, UTC for crypto.
std::int64_t local_date(const MinuteBar& bar, const Venue& venue) {
    std::int64_t t = bar.minute_start;
    if (venue.kind == VenueKind::Stock) t += us_eastern_offset_sec(bar.minute_start);
    return t >= 0 ? t / 86400 : (t - 86399) / 86400;
}

bool in_stock_session(const MinuteBar& bar) {
    std::int64_t local = bar.minute_start + us_eastern_offset_sec(bar.minute_start);
    std::int64_t day = local >= 0 ? local / 86400 : (local - 86399) / 86400;
    int sec = static_cast<int>(local - day * 86400);
    return sec >= 9 * 3600 + 30 * 60 && sec < 16 * 3600;  // [09:30, 16:00)
}

}  // namespace

std::vector<TradingDay> partition_days(const std::vector<MinuteBar>& bars, const Venue& venue) {
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].ticker < bars[i - 1].ticker ||
            (bars[i].ticker == bars[i - 1].ticker &&
             bars[i].minute_start <= bars[i - 1].minute_start))
            throw std::runtime_error("UnsortedInput: bars must be sorted by (ticker, minute)");
    }

    std::vector<TradingDay> days;
    for (const auto& bar : bars) {
        if (venue.kind == VenueKind::Stock && !in_stock_session(bar)) continue;
        std::int64_t date = local_date(bar, venue);
        bool new_day = days.empty() || days.back().ticker != bar.ticker ||
                       days.back().date != date;
        if (new_day) {
            TradingDay day;
            day.ticker = bar.ticker;
            day.date = date;
            if (!days.empty() && days.back().ticker == bar.ticker)
                day.prev_close = days.back().bars.back().close;
            days.push_back(std::move(day));
        }
        days.back().bars.push_back(bar);
    }
    return days;
}

std::vector<double> minute_returns(const TradingDay& day) {
    if (day.bars.size() < 2 && !(day.bars.size() == 1 && day.prev_close))
        throw std::runtime_error("TooFewBars: need >= 2 bars or 1 bar with prev_close");
    std::vector<double> r;
    r.reserve(day.bars.size());
    double prev;
    std::size_t start;
    if (day.prev_close) {
        prev = *day.prev_close;
        start = 0;
    } else {
        prev = day.bars[0].close;
        start = 1;
    }
    for (std::size_t i = start; i < day.bars.size(); ++i) {
        r.push_back(day.bars[i].close / prev - 1.0);
        prev = day.bars[i].close;
    }
    return r;
}

DayStatus validate_day(const TradingDay& day, int min_minutes) {
    DayStatus st;
    std::unordered_set<std::int64_t> seen;
    for (const auto& b : day.bars) {
        if (!seen.insert(b.minute_start).second) {
            st.valid = false;
            st.reason = "duplicate minute";
            return st;
        }
    }
    int eff = static_cast<int>(day.bars.size());
    if (!day.prev_close) eff -= 1;
    if (eff < 0) eff = 0;
    st.effective_minutes = eff;
    if (eff < min_minutes) {
        st.valid = false;
        st.reason = "too few minutes";
        return st;
    }
    st.valid = true;
    return st;
}

}  // namespace liqarch::marketdata
