#pragma once

#include <optional>
#include <span>

namespace liqarch::stats {

enum class Significance { None, Pct10, Pct5, Pct1 };
enum class Direction { Up, Down, NoChange };

// Pooled two-sample t-test evaluated under all three alternatives. The
// direction reads the tables' convention for paired panels x = regular,
// y = adjusted: a significant "less" alternative (mean x < mean y) means the
// adjustment increased the quantity.
struct TestResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_two_sided = 1.0;
    double p_less = 0.5;     // P(T <= t)
    double p_greater = 0.5;  // P(T >= t)
    Significance significance = Significance::None;
    Direction direction = Direction::NoChange;
};

struct AdfResult {
    double statistic = 0.0;
    int lag_used = 0;
    bool reject_5pct = false;
    double crit_1pct = -3.43;
    double crit_5pct = -2.86;
    double crit_10pct = -2.57;
};

struct AnovaResult {
    double f_statistic = 0.0;
    int dof_between = 0;
    int dof_within = 0;
    double p_value = 1.0;
};

// Regularized incomplete beta I_x(a, b) by continued fraction; ~1e-12.
double incomplete_beta(double a, double b, double x);

// Student-t distribution function P(T <= t) with dof nu.
double student_t_cdf(double t, double nu);

// Upper-tail F probability P(F >= f) with (d1, d2) dof.
double f_sf(double f, double d1, double d2);

TestResult t_test_two_sample(std::span<const double> x, std::span<const double> y);

// Augmented Dickey-Fuller with constant, no trend; lag order by AIC up to
// max_lag (default floor(12 * (n/100)^0.25)); large-sample constant-case
// critical values.
AdfResult adf_test(std::span<const double> series, std::optional<int> max_lag = std::nullopt);

AnovaResult anova_oneway(std::span<const std::span<const double>> groups);

}  // namespace liqarch::stats
