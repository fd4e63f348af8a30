#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "liqarch/marketdata.hpp"
#include "liqarch/timeutil.hpp"

using namespace liqarch;
using namespace liqarch::marketdata;

namespace {

std::vector<MinuteBar> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_minute_csv(in);
}

MinuteBar bar(const std::string& ticker, std::int64_t minute, double close, double amount) {
    MinuteBar b;
    b.ticker = ticker;
    b.minute_start = minute;
    b.close = close;
    b.amount = amount;
    return b;
}

constexpr const char* kHeader = "ticker,minute_start,close,amount\n";

}  // namespace

TEST_CASE("parse_minute_csv basic row") {
    auto bars = parse(std::string(kHeader) + "AAPL,2020-01-02T14:30:00Z,296.24,1250000.50\n");
    REQUIRE(bars.size() == 1);
    CHECK(bars[0].ticker == "AAPL");
    CHECK(bars[0].minute_start == parse_iso_utc("2020-01-02T14:30:00Z"));
    CHECK(bars[0].close == doctest::Approx(296.24));
    CHECK(bars[0].amount == doctest::Approx(1250000.50));
    CHECK(bars[0].close_text == "296.24");
}

TEST_CASE("parse_minute_csv error rows carry line numbers") {
    CHECK_THROWS_WITH_AS(parse("time,close\n"), doctest::Contains("MissingColumn"), ParseError);

    try {
        parse(std::string(kHeader) + "A,2020-01-02T14:30:00Z,1.0,5\nA,2020-01-02T14:31:00Z,0,5\n");
        FAIL("expected NonPositivePrice");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("NonPositivePrice") != std::string::npos);
        CHECK(e.line == 3);
    }

    CHECK_THROWS_WITH_AS(parse(std::string(kHeader) + "A,2020-01-02 14:30:00,1.0,5\n"),
                         doctest::Contains("BadTimestamp"), ParseError);
    CHECK_THROWS_WITH_AS(parse(std::string(kHeader) + "A,2020-01-02T14:30:30Z,1.0,5\n"),
                         doctest::Contains("BadTimestamp"), ParseError);
    CHECK_THROWS_WITH_AS(parse(std::string(kHeader) + "A,2020-01-02T14:30:00Z,1.0,-5\n"),
                         doctest::Contains("NegativeAmount"), ParseError);
}

TEST_CASE("parse_minute_csv empty file with header") {
    CHECK(parse(kHeader).empty());
}

TEST_CASE("partition_days groups a full crypto session") {
    std::vector<MinuteBar> bars;
    std::int64_t day0 = parse_iso_utc("2021-03-05T00:00:00Z");
    for (int i = 0; i < 1440; ++i) bars.push_back(bar("BTC", day0 + i * 60, 100.0 + i * 0.001, 5.0));
    auto days = partition_days(bars, Venue::crypto());
    REQUIRE(days.size() == 1);
    CHECK(days[0].bars.size() == 1440);
    CHECK(days[0].date == day0 / 86400);
    CHECK_FALSE(days[0].prev_close.has_value());
}

TEST_CASE("partition_days drops stock pre-market bars") {
    // 2020-01-02 is EST (UTC-5): session 14:30-21:00 UTC.
    std::int64_t pre = parse_iso_utc("2020-01-02T13:00:00Z");
    std::int64_t open = parse_iso_utc("2020-01-02T14:30:00Z");
    std::int64_t last = parse_iso_utc("2020-01-02T20:59:00Z");
    std::int64_t post = parse_iso_utc("2020-01-02T21:00:00Z");
    std::vector<MinuteBar> bars{bar("A", pre, 10, 1), bar("A", open, 11, 1), bar("A", last, 12, 1),
                                bar("A", post, 13, 1)};
    auto days = partition_days(bars, Venue::stock());
    REQUIRE(days.size() == 1);
    REQUIRE(days[0].bars.size() == 2);
    CHECK(days[0].bars[0].minute_start == open);
    CHECK(days[0].bars[1].minute_start == last);
}

TEST_CASE("partition_days respects summer session offset") {
    // 2020-07-06 is EDT (UTC-4): 13:30 UTC is the open.
    std::int64_t open = parse_iso_utc("2020-07-06T13:30:00Z");
    std::int64_t before = open - 60;
    auto days = partition_days({bar("A", before, 9, 1), bar("A", open, 10, 1)}, Venue::stock());
    REQUIRE(days.size() == 1);
    CHECK(days[0].bars.size() == 1);
}

TEST_CASE("partition_days links prev_close across days") {
    std::int64_t d0 = parse_iso_utc("2021-03-05T00:00:00Z");
    std::int64_t d1 = parse_iso_utc("2021-03-06T00:00:00Z");
    std::vector<MinuteBar> bars{bar("X", d0, 100, 1), bar("X", d0 + 60, 101, 1),
                                bar("X", d1, 102, 1), bar("X", d1 + 60, 103, 1)};
    auto days = partition_days(bars, Venue::crypto());
    REQUIRE(days.size() == 2);
    CHECK_FALSE(days[0].prev_close.has_value());
    REQUIRE(days[1].prev_close.has_value());
    CHECK(*days[1].prev_close == doctest::Approx(101.0));
}

TEST_CASE("partition_days rejects unsorted input") {
    std::int64_t t0 = parse_iso_utc("2021-03-05T00:01:00Z");
    CHECK_THROWS_WITH(
        (void)partition_days({bar("X", t0, 1, 1), bar("X", t0 - 60, 1, 1)}, Venue::crypto()),
        doctest::Contains("UnsortedInput"));
}

TEST_CASE("partition_days re-partitioning is idempotent") {
    std::int64_t d0 = parse_iso_utc("2021-03-05T00:00:00Z");
    std::vector<MinuteBar> bars;
    for (const char* tk : {"AAA", "BBB"})
        for (int d = 0; d < 3; ++d)
            for (int i = 0; i < 40; ++i)
                bars.push_back(bar(tk, d0 + d * 86400 + i * 60, 100.0 + i, 2.0));
    auto days = partition_days(bars, Venue::crypto());

    std::vector<MinuteBar> flattened;
    for (const auto& d : days) flattened.insert(flattened.end(), d.bars.begin(), d.bars.end());
    auto again = partition_days(flattened, Venue::crypto());

    REQUIRE(days.size() == again.size());
    for (std::size_t i = 0; i < days.size(); ++i) {
        CHECK(days[i].ticker == again[i].ticker);
        CHECK(days[i].date == again[i].date);
        CHECK(days[i].bars.size() == again[i].bars.size());
        CHECK(days[i].prev_close == again[i].prev_close);
    }
}

TEST_CASE("minute_returns basic arithmetic") {
    TradingDay day;
    day.ticker = "X";
    int i = 0;
    for (double close : {100.0, 101.0, 99.99}) day.bars.push_back(bar("X", 60 * i++, close, 1));
    auto r = minute_returns(day);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.01));
    CHECK(r[1] == doctest::Approx(-0.01));
}

TEST_CASE("minute_returns uses prev_close when present") {
    TradingDay day;
    day.prev_close = 100.0;
    day.bars.push_back(bar("X", 0, 102.0, 1));
    auto r = minute_returns(day);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(0.02));
}

TEST_CASE("minute_returns constant closes give zeros") {
    TradingDay day;
    for (int i = 0; i < 5; ++i) day.bars.push_back(bar("X", i * 60, 50.0, 1));
    for (double v : minute_returns(day)) CHECK(v == 0.0);
}

TEST_CASE("minute_returns length contract") {
    TradingDay day;
    for (int i = 0; i < 10; ++i) day.bars.push_back(bar("X", i * 60, 50.0 + i, 1));
    CHECK(minute_returns(day).size() == 9);
    day.prev_close = 49.0;
    CHECK(minute_returns(day).size() == 10);

    TradingDay single;
    single.bars.push_back(bar("X", 0, 1, 1));
    CHECK_THROWS_WITH((void)minute_returns(single), doctest::Contains("TooFewBars"));
}

TEST_CASE("validate_day thresholds and duplicates") {
    TradingDay day;
    for (int i = 0; i < 390; ++i) day.bars.push_back(bar("X", i * 60, 100.0, 1));
    auto st = validate_day(day, 30);
    CHECK(st.valid);
    CHECK(st.effective_minutes == 389);

    TradingDay small;
    for (int i = 0; i < 10; ++i) small.bars.push_back(bar("X", i * 60, 100.0, 1));
    auto st2 = validate_day(small, 30);
    CHECK_FALSE(st2.valid);
    CHECK(st2.reason == "too few minutes");

    TradingDay dup;
    for (int i = 0; i < 40; ++i) dup.bars.push_back(bar("X", 0, 100.0, 1));
    auto st3 = validate_day(dup, 30);
    CHECK_FALSE(st3.valid);
    CHECK(st3.reason == "duplicate minute");
}

TEST_CASE("every retained stock bar lies inside the session window") {
    std::vector<MinuteBar> bars;
    std::int64_t base = parse_iso_utc("2020-01-02T12:00:00Z");
    for (int i = 0; i < 700; ++i) bars.push_back(bar("A", base + i * 60, 100.0, 1));
    auto days = partition_days(bars, Venue::stock());
    REQUIRE(!days.empty());
    for (const auto& d : days)
        for (const auto& b : d.bars) {
            std::int64_t local = b.minute_start + us_eastern_offset_sec(b.minute_start);
            int sec = static_cast<int>(local % 86400);
            CHECK(sec >= 9 * 3600 + 30 * 60);
            CHECK(sec < 16 * 3600);
        }
}
