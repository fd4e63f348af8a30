#include "liqarch/liquidity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liqarch::liquidity {

LiquidityFactors normalization_factor(std::span<const double> returns,
                                      std::span<const double> amounts) {
    if (returns.size() != amounts.size() || returns.empty())
        throw std::invalid_argument("normalization_factor: lengths must match and be >= 1");

    const std::size_t n = returns.size();
    LiquidityFactors f;
    f.per_minute.assign(n, 0.0);
    f.included.assign(n, true);

    bool any_nonzero_return = false;
    bool any_nonzero_amount = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (returns[i] != 0.0) any_nonzero_return = true;
        if (amounts[i] > 0.0) any_nonzero_amount = true;
    }
    if (!any_nonzero_return) {
        f.all_zero_returns = true;
        throw std::invalid_argument("AllZeroReturns");
    }
    if (!any_nonzero_amount) {
        f.all_zero_amounts = true;
        throw std::invalid_argument("AllZeroAmounts");
    }

    // A trade-less minute with a price move carries no liquidity information;
    // drop it from the day entirely.
    for (std::size_t i = 0; i < n; ++i) {
        if (amounts[i] <= 0.0 && returns[i] != 0.0) {
            f.included[i] = false;
            ++f.excluded_minutes;
        }
    }

    double abs_mean = 0.0, amt_mean = 0.0;
    int t_eff = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!f.included[i]) continue;
        abs_mean += std::fabs(returns[i]);
        amt_mean += amounts[i];
        ++t_eff;
    }
    f.effective_T = t_eff;
    if (t_eff == 0) throw std::invalid_argument("AllZeroAmounts");
    abs_mean /= t_eff;
    amt_mean /= t_eff;
    if (abs_mean == 0.0) throw std::invalid_argument("AllZeroReturns");

    double ratio_sum = 0.0;
    std::vector<double> ratio(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!f.included[i] || returns[i] == 0.0) continue;  // zero return -> ratio 0
        ratio[i] = (std::fabs(returns[i]) / abs_mean) / (amounts[i] / amt_mean);
        ratio_sum += ratio[i];
    }
    f.eta = static_cast<double>(t_eff) / ratio_sum;
    for (std::size_t i = 0; i < n; ++i)
        if (f.included[i]) f.per_minute[i] = std::sqrt(f.eta * ratio[i]);
    return f;
}

std::vector<double> adjust_returns(std::span<const double> returns, const LiquidityFactors& f) {
    if (returns.size() != f.per_minute.size())
        throw std::invalid_argument("LengthMismatch: returns vs factors");
    std::vector<double> out(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) out[i] = f.per_minute[i] * returns[i];
    return out;
}

namespace {

double population_variance(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(x.size());
}

double compound(std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= 1.0 + v;
    return p - 1.0;
}

}  // namespace

void daily_aggregates(std::span<const double> returns, std::span<const double> adj_returns,
                      DailyRecord& rec) {
    if (returns.empty() || returns.size() != adj_returns.size())
        throw std::invalid_argument("EmptyDay: daily aggregation needs matching nonempty series");
    const double t = static_cast<double>(returns.size());
    rec.r = compound(returns);
    rec.r_liq = compound(adj_returns);
    rec.sigma = std::sqrt(t * population_variance(returns));
    rec.sigma_liq = std::sqrt(t * population_variance(adj_returns));
}

namespace {

// Ratio with cap; denominator 0 encodes either extreme liquidity fluctuation
// (nonzero numerator -> cap) or the equilibrium case (both zero -> 1).
double capped_ratio(double num, double den, double cap, bool& degenerate) {
    if (den == 0.0) {
        degenerate = true;
        return num == 0.0 ? 1.0 : cap;
    }
    if (num == 0.0) degenerate = true;  // ratio 0 is outside (0, cap]
    return std::min(num / den, cap);
}

}  // namespace

void liquidity_betas(DailyRecord& rec, double cap) {
    bool degenerate = false;
    rec.beta_jump = capped_ratio(std::fabs(rec.r), std::fabs(rec.r_liq), cap, degenerate);
    rec.beta_diff = capped_ratio(rec.sigma, rec.sigma_liq, cap, degenerate);
    if (degenerate) rec.degenerate = true;
}

DailyRecord compute_daily_record(const marketdata::TradingDay& day, const Config& cfg) {
    DailyRecord rec;
    rec.ticker = day.ticker;
    rec.date = day.date;

    std::vector<double> returns = marketdata::minute_returns(day);
    std::vector<double> amounts;
    amounts.reserve(returns.size());
    // Amounts align with the bars that produced returns: all bars when
    // prev_close seeds the first return, else bars[1..].
    std::size_t first = day.prev_close ? 0 : 1;
    for (std::size_t i = first; i < day.bars.size(); ++i) amounts.push_back(day.bars[i].amount);

    LiquidityFactors f;
    try {
        f = normalization_factor(returns, amounts);
    } catch (const std::invalid_argument&) {
        // No liquidity information (all-zero returns or amounts): leave the
        // day unadjusted and flag it.
        rec.degenerate = true;
        daily_aggregates(returns, returns, rec);
        liquidity_betas(rec, cfg.beta_cap);
        rec.degenerate = true;
        return rec;
    }

    std::vector<double> adjusted = adjust_returns(returns, f);
    if (f.excluded_minutes > 0) {
        std::vector<double> kept_r, kept_a;
        kept_r.reserve(f.effective_T);
        kept_a.reserve(f.effective_T);
        for (std::size_t i = 0; i < returns.size(); ++i) {
            if (!f.included[i]) continue;
            kept_r.push_back(returns[i]);
            kept_a.push_back(adjusted[i]);
        }
        daily_aggregates(kept_r, kept_a, rec);
    } else {
        daily_aggregates(returns, adjusted, rec);
    }
    liquidity_betas(rec, cfg.beta_cap);
    return rec;
}

std::vector<DailyRecord> compute_daily_records_serial(
    const std::vector<marketdata::TradingDay>& days, const Config& cfg) {
    std::vector<DailyRecord> out(days.size());
    for (std::size_t i = 0; i < days.size(); ++i) out[i] = compute_daily_record(days[i], cfg);
    return out;
}

std::vector<DailyRecord> compute_daily_records(const std::vector<marketdata::TradingDay>& days,
                                               const Config& cfg, int threads) {
    std::vector<DailyRecord> out(days.size());
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
    const std::int64_t n = static_cast<std::int64_t>(days.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = compute_daily_record(days[static_cast<std::size_t>(i)], cfg);
#else
    (void)threads;
    out = compute_daily_records_serial(days, cfg);
#endif
    return out;
}

DescriptiveStats describe(std::span<const double> values, double threshold) {
    if (values.empty()) throw std::invalid_argument("Empty: describe needs values");
    DescriptiveStats s;
    const std::size_t n = values.size();
    s.count = n;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    s.mean = mean;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    double nn = static_cast<double>(n);
    double var_pop = m2 / nn;
    s.std = n > 1 ? std::sqrt(m2 / (nn - 1.0)) : 0.0;

    if (var_pop > 0.0 && n > 2) {
        double g1 = (m3 / nn) / std::pow(var_pop, 1.5);
        s.skewness = g1 * std::sqrt(nn * (nn - 1.0)) / (nn - 2.0);
    }
    if (var_pop > 0.0 && n > 3) {
        double s2 = m2 / (nn - 1.0);
        double num = nn * (nn + 1.0) / ((nn - 1.0) * (nn - 2.0) * (nn - 3.0)) * (m4 / (s2 * s2));
        s.kurtosis = num - 3.0 * (nn - 1.0) * (nn - 1.0) / ((nn - 2.0) * (nn - 3.0));
    }

    for (double v : values)
        if (v >= threshold) ++s.days_ge_1;
    s.pct_ge_1 = static_cast<double>(s.days_ge_1) / nn;
    return s;
}

Histogram histogram(std::span<const double> values, int bins, double cap) {
    if (values.empty()) throw std::invalid_argument("Empty: histogram needs values");
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    Histogram h;
    h.cap = cap;
    h.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[i] = cap * static_cast<double>(i) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    const double width = cap / static_cast<double>(bins);
    for (double v : values) {
        double c = std::clamp(v, 0.0, cap);
        int idx = std::min(static_cast<int>(c / width), bins - 1);
        ++h.counts[idx];
    }
    return h;
}

}  // namespace liqarch::liquidity
