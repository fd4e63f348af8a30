#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "liqarch/marketdata.hpp"

namespace liqarch::liquidity {

// Per-day liquidity normalization. per_minute[i] is the factor multiplying
// minute return i; excluded minutes (traded amount zero but nonzero return)
// carry factor 0 and included[i] = false. The factors satisfy
// sum(per_minute^2 over included) = effective_T.
struct LiquidityFactors {
    double eta = 0.0;                // daily normalization factor, > 0
    std::vector<double> per_minute;  // sqrt(eta * ratio_tau), >= 0
    std::vector<bool> included;
    int effective_T = 0;
    int excluded_minutes = 0;
    bool all_zero_returns = false;
    bool all_zero_amounts = false;
};

struct DailyRecord {
    std::string ticker;
    std::int64_t date = 0;
    double r = 0.0;          // daily regular return
    double r_liq = 0.0;      // daily liquidity-adjusted return
    double sigma = 0.0;      // daily intraday volatility
    double sigma_liq = 0.0;  // liquidity-adjusted intraday volatility
    double beta_jump = 1.0;  // |r / r_liq|, capped
    double beta_diff = 1.0;  // sigma / sigma_liq, capped
    bool degenerate = false;
};

struct DescriptiveStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // sample, n-1
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    double skewness = 0.0;  // adjusted Fisher-Pearson
    double kurtosis = 0.0;  // excess, bias-adjusted
    std::size_t days_ge_1 = 0;
    double pct_ge_1 = 0.0;
};

struct Histogram {
    std::vector<double> bin_edges;  // bins+1 ascending edges over [0, cap]
    std::vector<std::size_t> counts;
    double cap = 10.0;
};

struct Config {
    double beta_cap = 10.0;
    int histogram_bins = 50;
};

// Eq. 1 normalization: ratio_tau = (|r|/|r_bar|)/(A/A_bar) with eta chosen so
// the included ratios sum to effective_T. Zero-return minutes contribute
// ratio 0 but stay in effective_T; zero-amount minutes with nonzero return
// are excluded entirely. Throws on all-zero returns / all-zero amounts.
LiquidityFactors normalization_factor(std::span<const double> returns,
                                      std::span<const double> amounts);

// r_liq_tau = factor_tau * r_tau (Eq. 3).
std::vector<double> adjust_returns(std::span<const double> returns, const LiquidityFactors& f);

// Daily compounding and intraday volatility: r_t = prod(1+r_tau) - 1,
// sigma_t = sqrt(T * population variance of minute returns).
void daily_aggregates(std::span<const double> returns, std::span<const double> adj_returns,
                      DailyRecord& rec);

// Liquidity jump/diffusion pair with cap and degenerate-denominator rules:
// denominator 0 with nonzero numerator -> cap; both zero -> 1.
void liquidity_betas(DailyRecord& rec, double cap = 10.0);

// Full per-day pipeline: minute returns -> factors -> adjusted returns ->
// aggregates -> betas. Degenerate days (all-zero returns, no usable minutes,
// or no liquidity information) come back flagged rather than as errors.
DailyRecord compute_daily_record(const marketdata::TradingDay& day, const Config& cfg = {});

// Batch over validated days; OpenMP-parallel with a serial reference kept
// for testing. Output order and values are independent of thread count.
std::vector<DailyRecord> compute_daily_records(const std::vector<marketdata::TradingDay>& days,
                                               const Config& cfg = {}, int threads = 0);
std::vector<DailyRecord> compute_daily_records_serial(
    const std::vector<marketdata::TradingDay>& days, const Config& cfg = {});

DescriptiveStats describe(std::span<const double> values, double threshold = 1.0);

Histogram histogram(std::span<const double> values, int bins, double cap = 10.0);

}  // namespace liqarch::liquidity
