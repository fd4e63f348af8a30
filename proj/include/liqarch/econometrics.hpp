#pragma once

#include <span>
#include <utility>
#include <vector>

namespace liqarch::econometrics {

// ARMA(p,q) fit without intercept: r_t = sum phi_i r_{t-i} + sum theta_j
// eps_{t-j} + eps_t, estimated by conditional sum of squares with zero
// pre-sample values.
struct ArmaFit {
    int p = 0;
    int q = 0;
    std::vector<double> phi;
    std::vector<double> theta;
    std::vector<double> residuals;  // same length as the input series
    double sigma2 = 0.0;            // CSS / n
    double loglik = 0.0;            // Gaussian conditional log-likelihood
    double aic = 0.0;               // 2k - 2 loglik, k = p + q + 1
    bool converged = false;
};

// GARCH(1,1) on residuals: sigma2_t = omega + alpha eps_{t-1}^2 + beta
// sigma2_{t-1}, Gaussian quasi-likelihood, sigma2_1 = sample variance.
struct GarchFit {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double loglik = 0.0;
    double loglik_start = 0.0;  // likelihood at the standard starting point
    std::vector<double> cond_var;
    bool converged = false;
};

struct ArmaGarchFit {
    ArmaFit arma;
    GarchFit garch;
    double mean_forecast = 0.0;  // one-step-ahead conditional mean
};

struct FitOptions {
    int p_max = 4;
    int q_max = 4;
};

// CSS residual recursion for given coefficients (pre-sample terms zero).
std::vector<double> arma_residuals(std::span<const double> series,
                                   std::span<const double> phi, std::span<const double> theta);

ArmaFit fit_arma(std::span<const double> series, int p, int q);

// Minimal-AIC order over the (p_max+1) x (q_max+1) grid of converged fits;
// ties break toward smaller p+q, then smaller p.
std::pair<int, int> select_arma(std::span<const double> series, int p_max = 4, int q_max = 4);

// Gaussian log-likelihood of the GARCH(1,1) recursion. Throws
// std::invalid_argument on parameter/variance domain violations.
double loglik_garch(std::span<const double> residuals, double omega, double alpha, double beta);

// Conditional-variance path for given parameters.
std::vector<double> garch_cond_var(std::span<const double> residuals, double omega, double alpha,
                                   double beta);

GarchFit fit_garch11(std::span<const double> residuals);

// mu_hat_{t+1} from the fitted coefficients, the history tail and the fit's
// stored residual tail.
double forecast_mean(const ArmaFit& fit, std::span<const double> history);

ArmaGarchFit fit_arma_garch(std::span<const double> series, const FitOptions& opts = {});

}  // namespace liqarch::econometrics
