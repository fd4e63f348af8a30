#include "liqarch/backtest.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liqarch::backtest {

std::vector<std::pair<int, int>> rolling_windows(int n_days, int window_len) {
    if (window_len < 60) throw std::invalid_argument("WindowSpec: window_len must be >= 60");
    if (n_days <= window_len)
        throw std::invalid_argument("TooShortHistory: need more days than the window length");
    std::vector<std::pair<int, int>> w;
    w.reserve(n_days - window_len);
    for (int t = window_len; t <= n_days - 1; ++t) w.emplace_back(t - window_len, t);
    return w;
}

namespace {

void check_contiguous(const std::vector<liquidity::DailyRecord>& records, int max_gap) {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].ticker != records[0].ticker)
            throw std::invalid_argument("run_rolling: records must belong to one ticker");
        std::int64_t gap = records[i].date - records[i - 1].date;
        if (gap <= 0) throw std::invalid_argument("run_rolling: dates must be increasing");
        if (gap > max_gap)
            throw std::invalid_argument("run_rolling: calendar gap exceeds configured limit");
    }
}

WindowFit fit_path(std::span<const double> slice, const WindowSpec& spec,
                   const std::pair<int, int>* fixed_orders) {
    WindowFit wf;
    try {
        econometrics::ArmaGarchFit fit;
        if (fixed_orders) {
            fit.arma = econometrics::fit_arma(slice, fixed_orders->first, fixed_orders->second);
            fit.garch = econometrics::fit_garch11(fit.arma.residuals);
            fit.mean_forecast = econometrics::forecast_mean(fit.arma, slice);
        } else {
            fit = econometrics::fit_arma_garch(slice,
                                               econometrics::FitOptions{spec.p_max, spec.q_max});
        }
        wf.p = fit.arma.p;
        wf.q = fit.arma.q;
        wf.omega = fit.garch.omega;
        wf.alpha = fit.garch.alpha;
        wf.beta = fit.garch.beta;
        wf.loglik = fit.garch.loglik;
        wf.mu_hat = fit.mean_forecast;
        wf.converged = fit.arma.converged && fit.garch.converged;
    } catch (const std::exception&) {
        // Per-window failures leave a hole; downstream tests pair only
        // windows where both paths converged.
        wf.converged = false;
    }
    return wf;
}

RollingResult run_rolling_impl(const std::vector<liquidity::DailyRecord>& records,
                               const WindowSpec& spec, int threads, bool parallel) {
    check_contiguous(records, spec.max_calendar_gap_days);
    const int n = static_cast<int>(records.size());
    auto windows = rolling_windows(n, spec.window_len);
    const int n_win = static_cast<int>(windows.size());

    std::vector<double> reg(n), liq(n);
    for (int i = 0; i < n; ++i) {
        reg[i] = records[i].r;
        liq[i] = records[i].r_liq;
    }

    std::pair<int, int> fixed_reg{0, 0}, fixed_liq{0, 0};
    if (!spec.reselect_orders) {
        // Orders fixed per asset from the first window.
        std::span<const double> first_reg(reg.data() + windows[0].first,
                                          static_cast<std::size_t>(spec.window_len));
        std::span<const double> first_liq(liq.data() + windows[0].first,
                                          static_cast<std::size_t>(spec.window_len));
        fixed_reg = econometrics::select_arma(first_reg, spec.p_max, spec.q_max);
        fixed_liq = econometrics::select_arma(first_liq, spec.p_max, spec.q_max);
    }

    RollingResult out;
    out.panel.ticker = records[0].ticker;
    out.forecasts.ticker = records[0].ticker;
    out.panel.window_end_dates.resize(n_win);
    out.panel.fits_reg.resize(n_win);
    out.panel.fits_liq.resize(n_win);
    out.forecasts.dates.resize(n_win);

    auto do_window = [&](int w) {
        auto [lo, hi] = windows[w];
        std::span<const double> sreg(reg.data() + lo, static_cast<std::size_t>(hi - lo));
        std::span<const double> sliq(liq.data() + lo, static_cast<std::size_t>(hi - lo));
        out.panel.fits_reg[w] = fit_path(sreg, spec, spec.reselect_orders ? nullptr : &fixed_reg);
        out.panel.fits_liq[w] = fit_path(sliq, spec, spec.reselect_orders ? nullptr : &fixed_liq);
        out.panel.window_end_dates[w] = records[hi - 1].date;
        out.forecasts.dates[w] = records[hi].date;  // next trading day: the forecast target
    };

    if (parallel) {
#ifdef _OPENMP
        if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (int w = 0; w < n_win; ++w) do_window(w);
    } else {
        for (int w = 0; w < n_win; ++w) do_window(w);
    }

    out.panel.loglik_reg.resize(n_win);
    out.panel.loglik_liq.resize(n_win);
    out.panel.a_reg.resize(n_win);
    out.panel.a_liq.resize(n_win);
    out.panel.b_reg.resize(n_win);
    out.panel.b_liq.resize(n_win);
    out.panel.converged.resize(n_win);
    out.forecasts.mu_hat_reg.resize(n_win);
    out.forecasts.mu_hat_liq.resize(n_win);
    for (int w = 0; w < n_win; ++w) {
        const WindowFit& fr = out.panel.fits_reg[w];
        const WindowFit& fl = out.panel.fits_liq[w];
        out.panel.loglik_reg[w] = fr.loglik;
        out.panel.loglik_liq[w] = fl.loglik;
        out.panel.a_reg[w] = fr.alpha;
        out.panel.a_liq[w] = fl.alpha;
        out.panel.b_reg[w] = fr.beta;
        out.panel.b_liq[w] = fl.beta;
        out.panel.converged[w] = fr.converged && fl.converged;
        out.forecasts.mu_hat_reg[w] = fr.mu_hat;
        out.forecasts.mu_hat_liq[w] = fl.mu_hat;
    }
    return out;
}

}  // namespace

RollingResult run_rolling(const std::vector<liquidity::DailyRecord>& records,
                          const WindowSpec& spec, int threads) {
    return run_rolling_impl(records, spec, threads, true);
}

RollingResult run_rolling_serial(const std::vector<liquidity::DailyRecord>& records,
                                 const WindowSpec& spec) {
    return run_rolling_impl(records, spec, 0, false);
}

ComparisonPanel run_model_comparison(const std::vector<liquidity::DailyRecord>& records,
                                     const WindowSpec& spec, int threads) {
    return run_rolling(records, spec, threads).panel;
}

ForecastSeries forecast_series(const std::vector<liquidity::DailyRecord>& records,
                               const WindowSpec& spec, int threads) {
    return run_rolling(records, spec, threads).forecasts;
}

}  // namespace liqarch::backtest
