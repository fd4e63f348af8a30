#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "liqarch/backtest.hpp"
#include "liqarch/liquidity.hpp"

namespace liqarch::portfolio {

struct RiskAversion {
    double lambda = 1e-4;
};

struct MvWeights {
    double w_asset = 0.0;  // in [0, 1]
    double w_rf = 1.0;     // 1 - w_asset
};

enum class SharpeDirection { Up, Down, Flat };

struct PortfolioSeries {
    std::string ticker;
    std::string name;  // "TMV" or "LAMV"
    std::vector<std::int64_t> dates;  // settlement day of each return
    std::vector<double> weights;      // weight decided the prior day
    std::vector<double> realized;     // w_t * r_{t+1}
    double cumulative_return = 0.0;
    double sharpe_annualized = 0.0;
};

struct TmvLamvResult {
    PortfolioSeries tmv;
    PortfolioSeries lamv;
    SharpeDirection direction = SharpeDirection::Flat;  // effect of adjustment
};

// lambda = mean / variance of the rolling equal-weight market window,
// floored so a negative-mean window cannot flip the optimization.
RiskAversion market_lambda(std::span<const double> market_window, double lambda_floor = 1e-4);

// Long-only two-asset mean-variance weight: w* = clamp(mu / (lambda sigma2), 0, 1).
MvWeights mv_weights(double mu_hat, double sigma2, const RiskAversion& lam);

// p_{t+1} = w_asset(t) * r_{t+1}; the risk-free leg contributes 0.
std::vector<double> realized_portfolio_returns(std::span<const double> weights,
                                               std::span<const double> next_day_returns);

double sharpe_annualized(std::span<const double> daily_returns, int periods_per_year);

struct PortfolioConfig {
    int periods_per_year = 365;  // 252 stocks / 365 crypto
    double lambda_floor = 1e-4;
};

// The TMV/LAMV pair for one asset. TMV sizes on the regular-path forecast
// against the window variance of r; LAMV on the adjusted-path forecast
// against the window variance of r_liq. Both settle on realized regular
// returns. universe_returns[d] is the equal-weight market return for the day
// aligned with records[d].
TmvLamvResult run_tmv_lamv(const backtest::ForecastSeries& forecasts,
                           const std::vector<liquidity::DailyRecord>& records,
                           std::span<const double> universe_returns, int window_len,
                           const PortfolioConfig& cfg = {});

}  // namespace liqarch::portfolio
