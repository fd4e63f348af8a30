#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "liqarch/liquidity.hpp"
#include "liqarch/rng.hpp"

using namespace liqarch;
using namespace liqarch::liquidity;

namespace {

// Independent brute-force moments used to freeze describe() expectations.
struct OracleMoments {
    double mean, std, skew, kurt;
};

OracleMoments oracle_moments(const std::vector<double>& x) {
    double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        m2 += std::pow(v - mean, 2);
        m3 += std::pow(v - mean, 3);
        m4 += std::pow(v - mean, 4);
    }
    double var_pop = m2 / n;
    double g1 = (m3 / n) / std::pow(var_pop, 1.5);
    double skew = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    double s2 = m2 / (n - 1.0);
    double kurt = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * (m4 / (s2 * s2)) -
                  3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    return {mean, std::sqrt(s2), skew, kurt};
}

// Random day generator for the property tests.
struct DayData {
    std::vector<double> returns;
    std::vector<double> amounts;
};

DayData random_day(Rng& rng, int t) {
    DayData d;
    d.returns.resize(t);
    d.amounts.resize(t);
    for (int i = 0; i < t; ++i) {
        d.returns[i] = 0.001 * rng.gaussian();
        d.amounts[i] = rng.lognormal(8.0, 1.0);
    }
    return d;
}

}  // namespace

TEST_CASE("normalization_factor matches the hand-evaluated example") {
    // returns [0.01, -0.02], amounts [100, 300]:
    // |r_bar| = 0.015, A_bar = 200, ratios 4/3 and 8/9, eta = 2/(20/9) = 0.9.
    auto f = normalization_factor(std::vector<double>{0.01, -0.02},
                                  std::vector<double>{100.0, 300.0});
    CHECK(f.eta == doctest::Approx(0.9).epsilon(1e-12));
    REQUIRE(f.per_minute.size() == 2);
    CHECK(f.per_minute[0] == doctest::Approx(std::sqrt(1.2)).epsilon(1e-12));
    CHECK(f.per_minute[1] == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
    // the Eq. 1 constraint, exactly
    double sum = f.per_minute[0] * f.per_minute[0] + f.per_minute[1] * f.per_minute[1];
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("normalization_factor uniform day gives unit factors") {
    std::vector<double> r{0.01, -0.01, 0.01, -0.01};
    std::vector<double> a{5.0, 5.0, 5.0, 5.0};
    auto f = normalization_factor(r, a);
    CHECK(f.eta == doctest::Approx(1.0));
    for (double v : f.per_minute) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("normalization_factor amount-scale invariance") {
    Rng rng(11);
    auto d = random_day(rng, 120);
    auto base = normalization_factor(d.returns, d.amounts);
    for (double k : {1e-3, 1.0, 1e6}) {
        auto scaled = d.amounts;
        for (double& v : scaled) v *= k;
        auto f = normalization_factor(d.returns, scaled);
        CHECK(f.eta == doctest::Approx(base.eta).epsilon(1e-12));
        for (std::size_t i = 0; i < f.per_minute.size(); ++i)
            CHECK(f.per_minute[i] == doctest::Approx(base.per_minute[i]).epsilon(1e-12));
    }
}

TEST_CASE("normalization_factor error cases") {
    CHECK_THROWS_WITH((void)normalization_factor(std::vector<double>{0.0, 0.0},
                                                 std::vector<double>{1.0, 2.0}),
                      doctest::Contains("AllZeroReturns"));
    CHECK_THROWS_WITH((void)normalization_factor(std::vector<double>{0.01, 0.02},
                                                 std::vector<double>{0.0, 0.0}),
                      doctest::Contains("AllZeroAmounts"));
}

TEST_CASE("normalization_factor excludes trade-less minutes with nonzero return") {
    std::vector<double> r{0.01, -0.02, 0.03};
    std::vector<double> a{100.0, 300.0, 0.0};
    auto f = normalization_factor(r, a);
    CHECK(f.effective_T == 2);
    CHECK(f.excluded_minutes == 1);
    CHECK(f.per_minute[2] == 0.0);
    CHECK_FALSE(f.included[2]);
    // remaining minutes still satisfy the constraint
    double sum = 0;
    for (double v : f.per_minute) sum += v * v;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero-return minutes stay in effective_T with zero ratio") {
    std::vector<double> r{0.01, 0.0, -0.02};
    std::vector<double> a{100.0, 50.0, 300.0};
    auto f = normalization_factor(r, a);
    CHECK(f.effective_T == 3);
    CHECK(f.per_minute[1] == 0.0);
    double sum = 0;
    for (double v : f.per_minute) sum += v * v;
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("adjust_returns basics") {
    std::vector<double> r{0.01, -0.02};
    auto f = normalization_factor(r, std::vector<double>{100.0, 300.0});
    auto adj = adjust_returns(r, f);
    CHECK(adj[0] == doctest::Approx(0.01 * std::sqrt(1.2)).epsilon(1e-12));
    CHECK(adj[1] == doctest::Approx(-0.02 * std::sqrt(0.8)).epsilon(1e-12));

    LiquidityFactors unit;
    unit.per_minute = {1.0, 1.0};
    unit.included = {true, true};
    auto same = adjust_returns(r, unit);
    CHECK(same == r);

    CHECK_THROWS_WITH((void)adjust_returns(std::vector<double>{0.1}, f),
                      doctest::Contains("LengthMismatch"));
}

TEST_CASE("daily_aggregates compounding and volatility") {
    DailyRecord rec;
    std::vector<double> r{0.01, -0.02};
    daily_aggregates(r, r, rec);
    CHECK(rec.r == doctest::Approx(-0.0102).epsilon(1e-12));
    CHECK(rec.sigma == doctest::Approx(std::sqrt(2.0 * 0.000225)).epsilon(1e-12));

    DailyRecord zero;
    std::vector<double> z{0.0, 0.0, 0.0};
    daily_aggregates(z, z, zero);
    CHECK(zero.r == 0.0);
    CHECK(zero.sigma == 0.0);

    DailyRecord single;
    std::vector<double> one{0.02};
    daily_aggregates(one, one, single);
    CHECK(single.r == doctest::Approx(0.02));
    CHECK(single.sigma == 0.0);

    CHECK_THROWS_WITH(daily_aggregates(std::vector<double>{}, std::vector<double>{}, rec),
                      doctest::Contains("EmptyDay"));
}

TEST_CASE("liquidity_betas ratio, cap and degenerate rules") {
    DailyRecord rec;
    rec.r = 0.02;
    rec.r_liq = 0.01;
    rec.sigma = 0.03;
    rec.sigma_liq = 0.03;
    liquidity_betas(rec);
    CHECK(rec.beta_jump == doctest::Approx(2.0));
    CHECK(rec.beta_diff == doctest::Approx(1.0));
    CHECK_FALSE(rec.degenerate);

    DailyRecord capped;
    capped.r = 0.05;
    capped.r_liq = 0.001;
    capped.sigma = capped.sigma_liq = 0.01;
    liquidity_betas(capped);
    CHECK(capped.beta_jump == 10.0);

    DailyRecord zero_den;
    zero_den.r = 0.05;
    zero_den.r_liq = 0.0;
    zero_den.sigma = zero_den.sigma_liq = 0.01;
    liquidity_betas(zero_den);
    CHECK(zero_den.beta_jump == 10.0);
    CHECK(zero_den.degenerate);

    DailyRecord both_zero;
    liquidity_betas(both_zero);
    CHECK(both_zero.beta_jump == 1.0);
    CHECK(both_zero.beta_diff == 1.0);
}

TEST_CASE("describe matches brute-force oracle on 1..5") {
    std::vector<double> x{1, 2, 3, 4, 5};
    auto s = describe(x);
    auto o = oracle_moments(x);
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.std == doctest::Approx(o.std).epsilon(1e-12));
    CHECK(s.std == doctest::Approx(1.5811388300841898).epsilon(1e-12));
    CHECK(s.median == doctest::Approx(3.0));
    CHECK(s.skewness == doctest::Approx(0.0));
    CHECK(s.kurtosis == doctest::Approx(-1.2).epsilon(1e-12));
    CHECK(s.days_ge_1 == 5);
    CHECK(s.pct_ge_1 == doctest::Approx(1.0));
}

TEST_CASE("describe agrees with the oracle on random data") {
    Rng rng(3);
    std::vector<double> x;
    for (int i = 0; i < 257; ++i) x.push_back(rng.gaussian(0.3, 2.0));
    auto s = describe(x);
    auto o = oracle_moments(x);
    CHECK(s.mean == doctest::Approx(o.mean).epsilon(1e-12));
    CHECK(s.std == doctest::Approx(o.std).epsilon(1e-12));
    CHECK(s.skewness == doctest::Approx(o.skew).epsilon(1e-10));
    CHECK(s.kurtosis == doctest::Approx(o.kurt).epsilon(1e-10));
}

TEST_CASE("describe degenerate and threshold cases") {
    std::vector<double> c{2.5, 2.5, 2.5, 2.5};
    auto s = describe(c);
    CHECK(s.std == 0.0);
    CHECK(s.skewness == 0.0);
    CHECK(s.kurtosis == 0.0);

    auto s2 = describe(std::vector<double>{0.5, 1.5}, 1.0);
    CHECK(s2.days_ge_1 == 1);
    CHECK(s2.pct_ge_1 == doctest::Approx(0.5));

    CHECK_THROWS_WITH((void)describe(std::vector<double>{}), doctest::Contains("Empty"));
}

TEST_CASE("histogram clamps into the final bin") {
    std::vector<double> tens(7, 10.0);
    auto h = histogram(tens, 20, 10.0);
    CHECK(h.counts.back() == 7);
    for (std::size_t i = 0; i + 1 < h.counts.size(); ++i) CHECK(h.counts[i] == 0);
}

TEST_CASE("histogram bin arithmetic with clamp") {
    auto h = histogram(std::vector<double>{0.5, 9.9, 12.0}, 10, 10.0);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[9] == 2);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 3);
    CHECK_THROWS_WITH((void)histogram(std::vector<double>{}, 10, 10.0),
                      doctest::Contains("Empty"));
}

TEST_CASE("property: normalization exactness over random days") {
    Rng rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        auto d = random_day(rng, 60 + static_cast<int>(rng.uniform() * 300));
        auto f = normalization_factor(d.returns, d.amounts);
        double sum = 0.0;
        for (double v : f.per_minute) sum += v * v;
        CHECK(std::fabs(sum - f.effective_T) <= 1e-9 * f.effective_T);
    }
}

TEST_CASE("property: return-scale equivariance of factors") {
    Rng rng(5);
    auto d = random_day(rng, 90);
    auto base = normalization_factor(d.returns, d.amounts);
    for (double k : {0.5, 3.0, 1e3}) {
        auto scaled = d.returns;
        for (double& v : scaled) v *= k;
        auto f = normalization_factor(scaled, d.amounts);
        for (std::size_t i = 0; i < f.per_minute.size(); ++i)
            CHECK(f.per_minute[i] == doctest::Approx(base.per_minute[i]).epsilon(1e-12));
    }
}

TEST_CASE("property: beta consistency on non-degenerate days") {
    Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        auto d = random_day(rng, 200);
        marketdata::TradingDay day;
        day.ticker = "P";
        day.prev_close = 100.0;
        double px = 100.0;
        for (int i = 0; i < 200; ++i) {
            px *= 1.0 + d.returns[i];
            marketdata::MinuteBar b;
            b.ticker = "P";
            b.minute_start = i * 60;
            b.close = px;
            b.amount = d.amounts[i];
            day.bars.push_back(b);
        }
        auto rec = compute_daily_record(day);
        if (rec.degenerate || rec.beta_jump >= 10.0) continue;
        CHECK(std::fabs(std::fabs(rec.r) - rec.beta_jump * std::fabs(rec.r_liq)) <=
              1e-9 * std::fabs(rec.r));
    }
}

TEST_CASE("property: Eq-1/Eq-2 bridge on zero-mean days") {
    // Constructed days whose minute returns have exactly zero mean: the
    // liquidity-weighted variance of r equals the plain variance of r_liq.
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        int half = 40 + static_cast<int>(rng.uniform() * 40);
        std::vector<double> r, a;
        for (int i = 0; i < half; ++i) {
            double v = 0.002 * (0.2 + rng.uniform());
            r.push_back(v);
            r.push_back(-v);  // exact cancellation
            a.push_back(rng.lognormal(6.0, 0.8));
            a.push_back(rng.lognormal(6.0, 0.8));
        }
        auto f = normalization_factor(r, a);
        auto adj = adjust_returns(r, f);

        const double t = static_cast<double>(r.size());
        double mean_r = 0.0;
        for (double v : r) mean_r += v;
        mean_r /= t;
        REQUIRE(std::fabs(mean_r) < 1e-18);

        // Eq. 1 left side: weighted variance of r around its mean
        double lhs = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            lhs += f.per_minute[i] * f.per_minute[i] * (r[i] - mean_r) * (r[i] - mean_r);
        lhs /= t;
        // Eq. 2: plain second moment of the adjusted series (zero-mean day)
        double rhs = 0.0;
        for (double v : adj) rhs += v * v;
        rhs /= t;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("compute_daily_record flags degenerate days instead of throwing") {
    marketdata::TradingDay flat;
    flat.ticker = "F";
    flat.prev_close = 100.0;
    for (int i = 0; i < 50; ++i) {
        marketdata::MinuteBar b;
        b.ticker = "F";
        b.minute_start = i * 60;
        b.close = 100.0;
        b.amount = 5.0;
        flat.bars.push_back(b);
    }
    auto rec = compute_daily_record(flat);
    CHECK(rec.degenerate);
    CHECK(rec.beta_jump == 1.0);
    CHECK(rec.beta_diff == 1.0);
    CHECK(rec.r == 0.0);
}

TEST_CASE("parallel daily records match the serial reference") {
    Rng rng(7);
    std::vector<marketdata::TradingDay> days;
    for (int d = 0; d < 40; ++d) {
        marketdata::TradingDay day;
        day.ticker = "PAR";
        day.date = 18000 + d;
        day.prev_close = 100.0;
        double px = 100.0;
        for (int i = 0; i < 120; ++i) {
            px *= 1.0 + 0.001 * rng.gaussian();
            marketdata::MinuteBar b;
            b.ticker = "PAR";
            b.minute_start = day.date * 86400 + i * 60;
            b.close = px;
            b.amount = rng.lognormal(8.0, 1.0);
            day.bars.push_back(b);
        }
        days.push_back(std::move(day));
    }
    auto serial = compute_daily_records_serial(days);
    auto parallel = compute_daily_records(days, {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].r == parallel[i].r);
        CHECK(serial[i].r_liq == parallel[i].r_liq);
        CHECK(serial[i].sigma_liq == parallel[i].sigma_liq);
        CHECK(serial[i].beta_jump == parallel[i].beta_jump);
    }
}
