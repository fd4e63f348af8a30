#include "liqarch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace liqarch::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x, double mean) {
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
    double x = nu / (nu + t * t);
    double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double f_sf(double f, double d1, double d2) {
    if (f <= 0.0) return 1.0;
    return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

namespace {

Significance significance_from_p(double p_two) {
    if (p_two < 0.01) return Significance::Pct1;
    if (p_two < 0.05) return Significance::Pct5;
    if (p_two < 0.10) return Significance::Pct10;
    return Significance::None;
}

}  // namespace

TestResult t_test_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("TooShort: each sample needs >= 2 observations");
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    const double mx = mean_of(x), my = mean_of(y);
    const double ssx = sum_sq_dev(x, mx), ssy = sum_sq_dev(y, my);

    TestResult r;
    r.dof = nx + ny - 2.0;
    double pooled = (ssx + ssy) / r.dof;
    if (pooled <= 0.0) {
        if (mx == my) {
            // Both samples constant and equal: statistic 0 by convention.
            r.statistic = 0.0;
            r.p_less = r.p_greater = 0.5;
            r.p_two_sided = 1.0;
            return r;
        }
        r.statistic = mx > my ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
    } else {
        r.statistic = (mx - my) / std::sqrt(pooled * (1.0 / nx + 1.0 / ny));
    }
    r.p_less = student_t_cdf(r.statistic, r.dof);
    r.p_greater = 1.0 - r.p_less;
    r.p_two_sided = 2.0 * std::min(r.p_less, r.p_greater);
    r.significance = significance_from_p(r.p_two_sided);
    // Two-stage reading: two-sided gate, then the directional alternative.
    if (r.significance != Significance::None)
        r.direction = r.p_less < r.p_greater ? Direction::Up : Direction::Down;
    return r;
}

namespace {

// OLS via normal equations and Cholesky; returns false when X'X is singular.
struct OlsFit {
    std::vector<double> coef;
    std::vector<double> se;
    double ssr = 0.0;
    int nobs = 0;
};

bool cholesky_solve(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& inv,
                    std::vector<double>& b) {
    const std::size_t k = a.size();
    std::vector<std::vector<double>> l(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t m = 0; m < j; ++m) s -= l[i][m] * l[j][m];
            if (i == j) {
                if (s <= 1e-12) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // solve L y = b, L' x = y
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t m = 0; m < i; ++m) s -= l[i][m] * y[m];
        y[i] = s / l[i][i];
    }
    for (std::size_t ii = k; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t m = ii + 1; m < k; ++m) s -= l[m][ii] * b[m];
        b[ii] = s / l[ii][ii];
    }
    // inverse of X'X via columns of identity
    inv.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t col = 0; col < k; ++col) {
        std::vector<double> e(k, 0.0);
        e[col] = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = e[i];
            for (std::size_t m = 0; m < i; ++m) s -= l[i][m] * e[m];
            e[i] = s / l[i][i];
        }
        for (std::size_t ii = k; ii-- > 0;) {
            double s = e[ii];
            for (std::size_t m = ii + 1; m < k; ++m) s -= l[m][ii] * e[m];
            e[ii] = s / l[ii][ii];
        }
        for (std::size_t i = 0; i < k; ++i) inv[i][col] = e[i];
    }
    return true;
}

bool ols(const std::vector<std::vector<double>>& rows, const std::vector<double>& y, OlsFit& fit) {
    const std::size_t n = rows.size();
    if (n == 0) return false;
    const std::size_t k = rows[0].size();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += rows[t][i] * y[t];
            for (std::size_t j = 0; j <= i; ++j) xtx[i][j] += rows[t][i] * rows[t][j];
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) xtx[i][j] = xtx[j][i];

    std::vector<std::vector<double>> inv;
    std::vector<double> beta = xty;
    if (!cholesky_solve(xtx, inv, beta)) return false;

    double ssr = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < k; ++i) pred += rows[t][i] * beta[i];
        double e = y[t] - pred;
        ssr += e * e;
    }
    if (n <= k) return false;
    double s2 = ssr / static_cast<double>(n - k);
    fit.coef = std::move(beta);
    fit.se.resize(k);
    for (std::size_t i = 0; i < k; ++i) fit.se[i] = std::sqrt(s2 * inv[i][i]);
    fit.ssr = ssr;
    fit.nobs = static_cast<int>(n);
    return true;
}

// Builds the ADF regression sample: dy_t on [1, y_{t-1}, dy_{t-1..k}],
// starting at `offset` differences in (offset >= k).
void adf_design(std::span<const double> y, int k, int offset,
                std::vector<std::vector<double>>& rows, std::vector<double>& dy_out) {
    const int n = static_cast<int>(y.size());
    rows.clear();
    dy_out.clear();
    for (int t = offset + 1; t < n; ++t) {
        std::vector<double> row;
        row.reserve(2 + k);
        row.push_back(1.0);
        row.push_back(y[t - 1]);
        for (int j = 1; j <= k; ++j) row.push_back(y[t - j] - y[t - j - 1]);
        rows.push_back(std::move(row));
        dy_out.push_back(y[t] - y[t - 1]);
    }
}

}  // namespace

AdfResult adf_test(std::span<const double> series, std::optional<int> max_lag) {
    const int n = static_cast<int>(series.size());
    if (n < 25) throw std::invalid_argument("TooShort: ADF needs >= 25 observations");

    int kmax = max_lag.value_or(
        static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25))));
    kmax = std::clamp(kmax, 0, n / 2 - 2);

    std::vector<std::vector<double>> rows;
    std::vector<double> dy;
    OlsFit fit;

    // Lag order by AIC over a common sample anchored at kmax.
    int best_k = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kmax; ++k) {
        adf_design(series, k, kmax, rows, dy);
        if (!ols(rows, dy, fit)) continue;
        double nobs = static_cast<double>(fit.nobs);
        double aic = nobs * std::log(fit.ssr / nobs) + 2.0 * static_cast<double>(k + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best_k = k;
        }
    }
    if (!std::isfinite(best_aic))
        throw std::invalid_argument("TooShort: degenerate ADF regression");

    // Final regression with the chosen lag on its maximal sample.
    adf_design(series, best_k, best_k, rows, dy);
    if (!ols(rows, dy, fit) || !(fit.se[1] > 0.0))
        throw std::invalid_argument("TooShort: degenerate ADF regression");

    AdfResult r;
    r.lag_used = best_k;
    r.statistic = fit.coef[1] / fit.se[1];
    r.reject_5pct = r.statistic < r.crit_5pct;
    return r;
}

AnovaResult anova_oneway(std::span<const std::span<const double>> groups) {
    if (groups.size() < 2) throw std::invalid_argument("TooFewGroups: ANOVA needs >= 2 groups");
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2)
            throw std::invalid_argument("TooFewGroups: each group needs >= 2 observations");
        total_n += g.size();
    }

    double grand = 0.0;
    for (const auto& g : groups)
        for (double v : g) grand += v;
    grand /= static_cast<double>(total_n);

    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double m = mean_of(g);
        ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        ssw += sum_sq_dev(g, m);
    }

    AnovaResult r;
    r.dof_between = static_cast<int>(groups.size()) - 1;
    r.dof_within = static_cast<int>(total_n - groups.size());
    double msb = ssb / r.dof_between;
    double msw = ssw / r.dof_within;
    if (msw <= 0.0) {
        r.f_statistic = ssb <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        r.p_value = ssb <= 0.0 ? 1.0 : 0.0;
        return r;
    }
    r.f_statistic = msb / msw;
    r.p_value = f_sf(r.f_statistic, r.dof_between, r.dof_within);
    return r;
}

}  // namespace liqarch::stats
