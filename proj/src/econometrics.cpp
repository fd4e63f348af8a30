#include "liqarch/econometrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "liqarch/nelder_mead.hpp"

namespace liqarch::econometrics {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kStationarityMargin = 1e-6;

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / (static_cast<double>(x.size()) - 1.0);
}

double css(std::span<const double> series, std::span<const double> phi,
           std::span<const double> theta, std::vector<double>& eps) {
    const std::size_t n = series.size();
    const std::size_t p = phi.size(), q = theta.size();
    eps.assign(n, 0.0);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < p && i < t; ++i) pred += phi[i] * series[t - 1 - i];
        for (std::size_t j = 0; j < q && j < t; ++j) pred += theta[j] * eps[t - 1 - j];
        eps[t] = series[t] - pred;
        acc += eps[t] * eps[t];
        if (!std::isfinite(acc)) return std::numeric_limits<double>::max();
    }
    return acc;
}

}  // namespace

std::vector<double> arma_residuals(std::span<const double> series, std::span<const double> phi,
                                   std::span<const double> theta) {
    std::vector<double> eps;
    css(series, phi, theta, eps);
    return eps;
}

ArmaFit fit_arma(std::span<const double> series, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("fit_arma: negative order");
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(20 + p + q))
        throw std::invalid_argument("TooShort: need >= 20 + p + q observations");
    for (double v : series)
        if (!std::isfinite(v)) throw std::invalid_argument("NonFinite: series");

    ArmaFit fit;
    fit.p = p;
    fit.q = q;
    fit.phi.assign(p, 0.0);
    fit.theta.assign(q, 0.0);

    const int dim = p + q;
    if (dim == 0) {
        fit.residuals.assign(series.begin(), series.end());
        fit.converged = true;
    } else {
        std::vector<double> scratch;
        auto obj = [&](const std::vector<double>& x) {
            std::span<const double> ph(x.data(), p);
            std::span<const double> th(x.data() + p, q);
            return css(series, ph, th, scratch);
        };
        std::vector<double> start(dim, 0.0), step(dim, 0.1);
        NmResult nm = nelder_mead(obj, start, step, 400 * dim + 600, 1e-10);
        for (int i = 0; i < p; ++i) fit.phi[i] = nm.x[i];
        for (int j = 0; j < q; ++j) fit.theta[j] = nm.x[p + j];
        fit.converged = nm.converged;
        fit.residuals = arma_residuals(series, fit.phi, fit.theta);
    }

    double rss = 0.0;
    for (double e : fit.residuals) rss += e * e;
    double s2 = rss / static_cast<double>(n);
    if (!(s2 > 1e-300)) s2 = 1e-300;  // degenerate (constant-zero) series
    fit.sigma2 = s2;
    fit.loglik = -0.5 * static_cast<double>(n) * (std::log(kTwoPi) + std::log(s2) + 1.0);
    fit.aic = 2.0 * (p + q + 1) - 2.0 * fit.loglik;
    return fit;
}

std::pair<int, int> select_arma(std::span<const double> series, int p_max, int q_max) {
    double best_aic = std::numeric_limits<double>::infinity();
    int best_p = -1, best_q = -1;
    // Ascending p+q (then p) so equal-AIC ties resolve to the smaller model.
    for (int s = 0; s <= p_max + q_max; ++s) {
        for (int p = 0; p <= std::min(s, p_max); ++p) {
            int q = s - p;
            if (q > q_max) continue;
            ArmaFit f = fit_arma(series, p, q);
            if (!f.converged) continue;
            if (f.aic < best_aic) {
                best_aic = f.aic;
                best_p = p;
                best_q = q;
            }
        }
    }
    if (best_p < 0) throw std::runtime_error("AllFailed: no ARMA order converged");
    return {best_p, best_q};
}

std::vector<double> garch_cond_var(std::span<const double> residuals, double omega, double alpha,
                                   double beta) {
    const std::size_t n = residuals.size();
    std::vector<double> h(n);
    double s2 = sample_variance(residuals);
    h[0] = s2;
    for (std::size_t t = 1; t < n; ++t)
        h[t] = omega + alpha * residuals[t - 1] * residuals[t - 1] + beta * h[t - 1];
    return h;
}

double loglik_garch(std::span<const double> residuals, double omega, double alpha, double beta) {
    if (!(omega > 0.0) || alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("DomainError: need omega > 0, alpha >= 0, beta >= 0");
    if (residuals.size() < 2) throw std::invalid_argument("DomainError: too few residuals");
    double s2 = sample_variance(residuals);
    if (!(s2 > 0.0)) throw std::invalid_argument("DomainError: zero residual variance");

    double h = s2;
    double ll = -0.5 * (std::log(kTwoPi) + std::log(h) + residuals[0] * residuals[0] / h);
    for (std::size_t t = 1; t < residuals.size(); ++t) {
        h = omega + alpha * residuals[t - 1] * residuals[t - 1] + beta * h;
        ll -= 0.5 * (std::log(kTwoPi) + std::log(h) + residuals[t] * residuals[t] / h);
    }
    return ll;
}

namespace {

// Unconstrained parameterization: omega = exp(u0); (alpha, beta) from a
// softmax with a slack component, scaled into the open simplex
// {a >= 0, b >= 0, a + b <= 1 - margin}.
struct GarchParams {
    double omega, alpha, beta;
};

GarchParams garch_from_u(const std::vector<double>& u) {
    double e1 = std::exp(u[1]), e2 = std::exp(u[2]);
    double denom = 1.0 + e1 + e2;
    double m = 1.0 - kStationarityMargin;
    return {std::exp(u[0]), m * e1 / denom, m * e2 / denom};
}

std::vector<double> garch_to_u(double omega, double alpha, double beta) {
    double m = 1.0 - kStationarityMargin;
    double slack = 1.0 - (alpha + beta) / m;
    return {std::log(omega), std::log(alpha / m / slack), std::log(beta / m / slack)};
}

}  // namespace

GarchFit fit_garch11(std::span<const double> residuals) {
    if (residuals.size() < 50)
        throw std::invalid_argument("TooShort: GARCH fit needs >= 50 residuals");
    double s2 = sample_variance(residuals);
    if (!(s2 > 0.0)) throw std::invalid_argument("DegenerateVariance");

    const double omega0 = 0.05 * s2, alpha0 = 0.05, beta0 = 0.90;

    auto obj = [&](const std::vector<double>& u) {
        GarchParams p = garch_from_u(u);
        if (!std::isfinite(p.omega) || !(p.omega > 0.0))
            return std::numeric_limits<double>::max();
        double ll = loglik_garch(residuals, p.omega, p.alpha, p.beta);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
    };

    std::vector<double> start = garch_to_u(omega0, alpha0, beta0);
    NmResult nm = nelder_mead(obj, start, {0.5, 0.5, 0.5}, 2000, 1e-8);

    GarchFit fit;
    GarchParams p = garch_from_u(nm.x);
    fit.omega = p.omega;
    fit.alpha = p.alpha;
    fit.beta = p.beta;
    fit.loglik = -nm.fx;
    fit.loglik_start = loglik_garch(residuals, omega0, alpha0, beta0);
    fit.converged = nm.converged;
    fit.cond_var = garch_cond_var(residuals, p.omega, p.alpha, p.beta);
    return fit;
}

double forecast_mean(const ArmaFit& fit, std::span<const double> history) {
    if (history.size() < static_cast<std::size_t>(fit.p) ||
        fit.residuals.size() < static_cast<std::size_t>(fit.q))
        throw std::invalid_argument("TooShort: forecast needs max(p, q) past values");
    double mu = 0.0;
    for (int i = 0; i < fit.p; ++i) mu += fit.phi[i] * history[history.size() - 1 - i];
    for (int j = 0; j < fit.q; ++j) mu += fit.theta[j] * fit.residuals[fit.residuals.size() - 1 - j];
    return mu;
}

ArmaGarchFit fit_arma_garch(std::span<const double> series, const FitOptions& opts) {
    auto [p, q] = select_arma(series, opts.p_max, opts.q_max);
    ArmaGarchFit out;
    out.arma = fit_arma(series, p, q);
    out.garch = fit_garch11(out.arma.residuals);
    out.mean_forecast = forecast_mean(out.arma, series);
    return out;
}

}  // namespace liqarch::econometrics
