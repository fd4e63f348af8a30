#include "liqarch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liqarch/csv.hpp"
#include "liqarch/rng.hpp"
#include "liqarch/timeutil.hpp"

namespace liqarch::synth {

std::vector<double> gen_garch_series(double omega, double alpha, double beta, int n,
                                     std::uint64_t seed) {
    if (!(omega > 0.0) || alpha < 0.0 || beta < 0.0 || alpha + beta >= 1.0)
        throw std::invalid_argument("NonStationaryParams: need omega > 0, alpha + beta < 1");
    if (n < 1) throw std::invalid_argument("gen_garch_series: n must be >= 1");
    Rng rng(seed);
    std::vector<double> eps(n);
    double h = omega / (1.0 - alpha - beta);
    for (int t = 0; t < n; ++t) {
        eps[t] = std::sqrt(h) * rng.gaussian();
        h = omega + alpha * eps[t] * eps[t] + beta * h;
    }
    return eps;
}

namespace {

// Jump minutes drawn uniformly without replacement (partial Fisher-Yates).
std::vector<int> draw_jump_minutes(Rng& rng, int t_minutes, int n_jumps) {
    n_jumps = std::min(n_jumps, t_minutes);
    std::vector<int> idx(t_minutes);
    for (int i = 0; i < t_minutes; ++i) idx[i] = i;
    for (int i = 0; i < n_jumps; ++i) {
        int j = i + static_cast<int>(rng.uniform() * static_cast<double>(t_minutes - i));
        if (j >= t_minutes) j = t_minutes - 1;
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n_jumps);
    return idx;
}

// UTC second of the first session minute for a venue-local date.
std::int64_t session_start_utc(std::int64_t date, int t_minutes) {
    if (t_minutes == 390) {
        // 09:30 US/Eastern; offset probed at noon UTC of the same date.
        int offset = us_eastern_offset_sec(date * 86400 + 12 * 3600);
        return date * 86400 + (9 * 3600 + 30 * 60) - offset;
    }
    return date * 86400;
}

marketdata::TradingDay gen_day_core(const JumpParams& params, int t_minutes, Rng& rng,
                                    const std::string& ticker, std::int64_t date,
                                    double open_price, double minute_drift,
                                    double* jump_log_sum = nullptr) {
    marketdata::TradingDay day;
    day.ticker = ticker;
    day.date = date;
    day.prev_close = open_price;
    day.bars.reserve(t_minutes);

    int n_jumps = rng.poisson(params.intensity);
    std::vector<int> jump_at = draw_jump_minutes(rng, t_minutes, n_jumps);
    std::vector<bool> is_jump(t_minutes, false);
    for (int j : jump_at) is_jump[j] = true;

    std::int64_t start = session_start_utc(date, t_minutes);
    double price = open_price;
    for (int tau = 0; tau < t_minutes; ++tau) {
        // Jumps enter log-returns so prices stay positive.
        double lr = minute_drift + params.base_sigma * rng.gaussian();
        if (is_jump[tau]) {
            double jump = rng.gaussian(params.jump_mean, params.jump_sd);
            lr += jump;
            if (jump_log_sum) *jump_log_sum += jump;
        }
        price *= std::exp(lr);
        double amount = rng.lognormal(params.volume_mu, params.volume_sigma);
        if (params.volume_coupling != 0.0) {
            // Normalized so the amount keeps its dollar scale.
            double typical = params.base_sigma * 0.7978845608028654;  // E|N(0, s)|
            double activity = std::fabs(lr) / typical;
            amount *= std::pow(activity, params.volume_coupling);
        }
        if (is_jump[tau]) amount *= params.volume_spike;
        marketdata::MinuteBar bar;
        bar.ticker = ticker;
        bar.minute_start = start + static_cast<std::int64_t>(tau) * 60;
        bar.close = price;
        bar.amount = amount;
        day.bars.push_back(std::move(bar));
    }
    return day;
}

}  // namespace

marketdata::TradingDay gen_jump_day(const JumpParams& params, int t_minutes, std::uint64_t seed,
                                    const std::string& ticker, std::int64_t date,
                                    double open_price) {
    if (t_minutes != 390 && t_minutes != 1440)
        throw std::invalid_argument("gen_jump_day: T must be 390 or 1440");
    Rng rng(seed);
    return gen_day_core(params, t_minutes, rng, ticker, date, open_price, 0.0);
}

std::vector<marketdata::TradingDay> gen_universe(const std::vector<AssetParams>& assets,
                                                 const UniverseConfig& cfg) {
    if (assets.empty() || cfg.days < 1)
        throw std::invalid_argument("gen_universe: need >= 1 asset and >= 1 day");
    if (cfg.t_minutes != 390 && cfg.t_minutes != 1440)
        throw std::invalid_argument("gen_universe: T must be 390 or 1440");

    Rng master(cfg.seed);
    std::vector<marketdata::TradingDay> out;
    out.reserve(static_cast<std::size_t>(assets.size()) * cfg.days);

    for (std::size_t a = 0; a < assets.size(); ++a) {
        const AssetParams& ap = assets[a];
        Rng rng = master.child(a);

        const double t = static_cast<double>(cfg.t_minutes);
        double v = ap.day_omega > 0.0 && ap.day_alpha + ap.day_beta < 1.0
                       ? ap.day_omega / (1.0 - ap.day_alpha - ap.day_beta)
                       : t * ap.jump.base_sigma * ap.jump.base_sigma;
        double prev_total = ap.day_drift;      // drives next-day variance
        double prev_diffusive = ap.day_drift;  // drives the AR mean
        double price = 100.0;
        std::int64_t date = cfg.start_date;

        for (int d = 0; d < cfg.days; ++d) {
            if (cfg.t_minutes == 390) {
                // Stock venue: skip weekends.
                while (weekday_from_days(date) == 0 || weekday_from_days(date) == 6) ++date;
            }
            JumpParams jp = ap.jump;
            if (ap.day_omega > 0.0) {
                if (d > 0) {
                    double shock = prev_total - ap.day_drift;
                    v = ap.day_omega + ap.day_alpha * shock * shock + ap.day_beta * v;
                }
                jp.base_sigma = std::sqrt(v / t);
            }
            if (ap.intensity_override && d < static_cast<int>(ap.intensity_override->size()))
                jp.intensity = (*ap.intensity_override)[d];

            double mu_day = ap.day_drift + ap.day_ar * (prev_diffusive - ap.day_drift);
            double jump_sum = 0.0;
            marketdata::TradingDay day =
                gen_day_core(jp, cfg.t_minutes, rng, ap.ticker, date, price, mu_day / t, &jump_sum);

            double close = day.bars.back().close;
            // Liquidity jumps elevate next-day variance but carry no momentum:
            // the AR drift runs on the diffusive part only.
            prev_total = std::log(close / price);
            prev_diffusive = prev_total - jump_sum;
            price = close;
            out.push_back(std::move(day));
            ++date;
        }
    }
    return out;
}

void write_universe_csv(const std::string& path,
                        const std::vector<marketdata::TradingDay>& days) {
    std::vector<marketdata::MinuteBar> bars;
    for (const auto& d : days) bars.insert(bars.end(), d.bars.begin(), d.bars.end());
    marketdata::write_minute_csv(path, bars);
}

PlantedSeries plant_daily_jumps(std::span<const double> base_returns,
                                const DailyJumpParams& params) {
    if (!(params.target_beta_jump > 0.0) || !(params.target_beta_diff > 0.0))
        throw std::invalid_argument("plant_daily_jumps: targets must be > 0");
    const std::size_t n = base_returns.size();
    for (double v : base_returns)
        if (!std::isfinite(v)) throw std::invalid_argument("plant_daily_jumps: non-finite input");

    PlantedSeries s;
    s.planted.resize(n);
    s.adjusted.resize(n);
    s.mu.resize(n, 0.0);
    s.beta_jump.assign(n, 1.0);
    s.beta_diff.assign(n, 1.0);
    for (std::size_t t = 0; t < n; ++t) {
        bool jump_day = params.jump_every <= 0 ||
                        (t + 1) % static_cast<std::size_t>(params.jump_every) == 0;
        if (jump_day) {
            s.beta_jump[t] = params.target_beta_jump;
            s.beta_diff[t] = params.target_beta_diff;
        }
    }

    if (params.mu_override) {
        if (params.mu_override->size() != n)
            throw std::invalid_argument("plant_daily_jumps: mu override length mismatch");
        s.mu = *params.mu_override;
    } else {
        // Rolling AR(1)-implied mean: mu_t = phi_hat(t) * r_{t-1} with phi
        // estimated by OLS over the trailing window.
        for (std::size_t t = 1; t < n; ++t) {
            std::size_t lo = t > static_cast<std::size_t>(params.ar_window)
                                 ? t - static_cast<std::size_t>(params.ar_window)
                                 : 1;
            double num = 0.0, den = 0.0;
            for (std::size_t i = lo; i < t; ++i) {
                num += base_returns[i] * base_returns[i - 1];
                den += base_returns[i - 1] * base_returns[i - 1];
            }
            double phi = den > 0.0 ? num / den : 0.0;
            s.mu[t] = phi * base_returns[t - 1];
        }
    }

    for (std::size_t t = 0; t < n; ++t) {
        double jump = (s.beta_jump[t] - 1.0) * s.beta_diff[t] * s.mu[t];
        s.planted[t] = base_returns[t] + jump;
        s.adjusted[t] = s.planted[t] / s.beta_jump[t];
    }
    return s;
}

void write_fixture_truth_csv(const std::string& path, std::int64_t start_date,
                             const PlantedSeries& series) {
    CsvWriter w(path);
    w.row({"date", "planted_beta_jump", "planted_beta_diff"});
    for (std::size_t i = 0; i < series.planted.size(); ++i)
        w.row({format_date(start_date + static_cast<std::int64_t>(i)),
               format_double(series.beta_jump[i]), format_double(series.beta_diff[i])});
}

std::vector<AssetParams> high_jump_profile(int assets) {
    std::vector<AssetParams> out;
    for (int i = 0; i < assets; ++i) {
        AssetParams ap;
        char name[16];
        std::snprintf(name, sizeof(name), "HJ%02d", i);
        ap.ticker = name;
        ap.jump.intensity = 0.0;
        ap.jump.jump_mean = 0.0;
        ap.jump.jump_sd = 0.05;
        ap.jump.base_sigma = 5.5e-4;
        ap.jump.volume_mu = 10.0;
        ap.jump.volume_sigma = 0.25;
        ap.jump.volume_spike = 500.0;
        ap.jump.volume_coupling = 1.0;
        // Liquidity-shock days on a fixed cadence (phase staggered per
        // asset), three expected minute-jumps each; other days jump-free.
        std::vector<double> pattern(4000, 0.0);
        for (std::size_t d = i % 15; d < pattern.size(); d += 15) pattern[d] = 3.0;
        ap.intensity_override = std::move(pattern);
        ap.day_omega = 4e-5;
        ap.day_alpha = 0.10;
        ap.day_beta = 0.80;
        ap.day_ar = 0.20;
        ap.day_drift = 8e-4;
        out.push_back(std::move(ap));
    }
    return out;
}

std::vector<AssetParams> no_jump_profile(int assets) {
    std::vector<AssetParams> out = high_jump_profile(assets);
    for (int i = 0; i < assets; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "NJ%02d", i);
        out[i].ticker = name;
        out[i].jump.intensity = 0.0;
        out[i].jump.volume_spike = 1.0;
        out[i].intensity_override.reset();
        // Deep liquid market: volume tracks activity tightly, so the minute
        // illiquidity ratio stays near its equilibrium.
        out[i].jump.volume_sigma = 0.02;
    }
    return out;
}

}  // namespace liqarch::synth
