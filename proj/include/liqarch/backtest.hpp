#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "liqarch/econometrics.hpp"
#include "liqarch/liquidity.hpp"

namespace liqarch::backtest {

struct WindowSpec {
    int window_len = 365;  // 242 stocks / 365 crypto
    int p_max = 4;
    int q_max = 4;
    bool reselect_orders = true;  // re-run AIC selection every window
    int max_calendar_gap_days = 7;
};

// One fitted path (regular or liquidity-adjusted) for one window.
struct WindowFit {
    int p = 0;
    int q = 0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double loglik = 0.0;
    double mu_hat = 0.0;
    bool converged = false;
};

// Per-window paired panels for the regular vs. liquidity-adjusted models.
// All sequences share length n_days - window_len.
struct ComparisonPanel {
    std::string ticker;
    std::vector<std::int64_t> window_end_dates;  // last day inside each window
    std::vector<double> loglik_reg, loglik_liq;
    std::vector<double> a_reg, a_liq;
    std::vector<double> b_reg, b_liq;
    std::vector<WindowFit> fits_reg, fits_liq;
    std::vector<bool> converged;  // both paths converged
};

struct ForecastSeries {
    std::string ticker;
    std::vector<std::int64_t> dates;  // forecast target day (window end + 1)
    std::vector<double> mu_hat_reg;
    std::vector<double> mu_hat_liq;
};

struct RollingResult {
    ComparisonPanel panel;
    ForecastSeries forecasts;
};

// Half-open index windows [t - window_len, t) for t = window_len .. n-1.
std::vector<std::pair<int, int>> rolling_windows(int n_days, int window_len);

// Fits both paths over every window. Windows are independent work items;
// the OpenMP variant writes indexed slots so output is identical for any
// thread count. The serial variant is the reference used in tests and the
// benchmark.
RollingResult run_rolling(const std::vector<liquidity::DailyRecord>& records,
                          const WindowSpec& spec, int threads = 0);
RollingResult run_rolling_serial(const std::vector<liquidity::DailyRecord>& records,
                                 const WindowSpec& spec);

ComparisonPanel run_model_comparison(const std::vector<liquidity::DailyRecord>& records,
                                     const WindowSpec& spec, int threads = 0);
ForecastSeries forecast_series(const std::vector<liquidity::DailyRecord>& records,
                               const WindowSpec& spec, int threads = 0);

}  // namespace liqarch::backtest
