#include "liqarch/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liqarch::portfolio {

namespace {

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    double m = mean_of(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / (static_cast<double>(x.size()) - 1.0);
}

}  // namespace

RiskAversion market_lambda(std::span<const double> market_window, double lambda_floor) {
    if (market_window.size() < 30)
        throw std::invalid_argument("market_lambda: window must have >= 30 days");
    double var = sample_variance(market_window);
    if (!(var > 0.0)) throw std::invalid_argument("ZeroVariance: constant market window");
    double lam = mean_of(market_window) / var;
    return RiskAversion{std::max(lam, lambda_floor)};
}

MvWeights mv_weights(double mu_hat, double sigma2, const RiskAversion& lam) {
    if (!(sigma2 > 0.0) || !(lam.lambda > 0.0))
        throw std::invalid_argument("DomainError: mv_weights needs sigma2 > 0 and lambda > 0");
    double w = std::clamp(mu_hat / (lam.lambda * sigma2), 0.0, 1.0);
    return MvWeights{w, 1.0 - w};
}

std::vector<double> realized_portfolio_returns(std::span<const double> weights,
                                               std::span<const double> next_day_returns) {
    if (weights.size() != next_day_returns.size())
        throw std::invalid_argument("Misalignment: weights and settlement returns must pair up");
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] * next_day_returns[i];
    return out;
}

double sharpe_annualized(std::span<const double> daily_returns, int periods_per_year) {
    if (daily_returns.size() < 30)
        throw std::invalid_argument("sharpe_annualized: need >= 30 observations");
    double sd = std::sqrt(sample_variance(daily_returns));
    if (!(sd > 0.0)) throw std::invalid_argument("DegenerateVolatility");
    return mean_of(daily_returns) / sd * std::sqrt(static_cast<double>(periods_per_year));
}

TmvLamvResult run_tmv_lamv(const backtest::ForecastSeries& forecasts,
                           const std::vector<liquidity::DailyRecord>& records,
                           std::span<const double> universe_returns, int window_len,
                           const PortfolioConfig& cfg) {
    const int n = static_cast<int>(records.size());
    const int n_win = static_cast<int>(forecasts.dates.size());
    if (universe_returns.size() != records.size())
        throw std::invalid_argument("run_tmv_lamv: universe series must align with records");
    if (n_win != n - window_len)
        throw std::invalid_argument("run_tmv_lamv: forecasts do not align with records");

    TmvLamvResult out;
    out.tmv.ticker = out.lamv.ticker = records.empty() ? "" : records[0].ticker;
    out.tmv.name = "TMV";
    out.lamv.name = "LAMV";

    std::vector<double> r(n), rl(n);
    for (int i = 0; i < n; ++i) {
        r[i] = records[i].r;
        rl[i] = records[i].r_liq;
    }

    for (int w = 0; w < n_win; ++w) {
        const int lo = w, hi = w + window_len;  // window [lo, hi), settles on day hi
        std::span<const double> mkt(universe_returns.data() + lo,
                                    static_cast<std::size_t>(window_len));
        RiskAversion lam = market_lambda(mkt, cfg.lambda_floor);

        double var_reg = sample_variance(std::span<const double>(
            r.data() + lo, static_cast<std::size_t>(window_len)));
        double var_liq = sample_variance(std::span<const double>(
            rl.data() + lo, static_cast<std::size_t>(window_len)));

        MvWeights tw = mv_weights(forecasts.mu_hat_reg[w], var_reg, lam);
        MvWeights lw = mv_weights(forecasts.mu_hat_liq[w], var_liq, lam);

        out.tmv.dates.push_back(records[hi].date);
        out.lamv.dates.push_back(records[hi].date);
        out.tmv.weights.push_back(tw.w_asset);
        out.lamv.weights.push_back(lw.w_asset);
        // Both portfolios settle against realized regular returns.
        out.tmv.realized.push_back(tw.w_asset * r[hi]);
        out.lamv.realized.push_back(lw.w_asset * r[hi]);
    }

    for (PortfolioSeries* s : {&out.tmv, &out.lamv}) {
        double cum = 1.0;
        for (double v : s->realized) cum *= 1.0 + v;
        s->cumulative_return = cum - 1.0;
        s->sharpe_annualized = sharpe_annualized(s->realized, cfg.periods_per_year);
    }

    const double diff = out.lamv.sharpe_annualized - out.tmv.sharpe_annualized;
    constexpr double kTol = 1e-12;
    out.direction = diff > kTol ? SharpeDirection::Up
                                : (diff < -kTol ? SharpeDirection::Down : SharpeDirection::Flat);
    return out;
}

}  // namespace liqarch::portfolio
