#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liqarch/marketdata.hpp"

namespace liqarch::synth {

// Minute-level jump-diffusion day: Poisson jump count, Gaussian jump sizes on
// uniformly placed minutes, lognormal traded amounts with a multiplicative
// spike on jump minutes.
struct JumpParams {
    double intensity = 0.0;    // Poisson mean jumps per day
    double jump_mean = 0.0;    // per-jump log-return mean
    double jump_sd = 0.0;      // per-jump log-return sd
    double base_sigma = 1e-3;  // diffusive minute log-return sd
    double volume_mu = 10.0;   // lognormal amount parameters
    double volume_sigma = 0.5;
    double volume_spike = 1.0;  // amount multiplier on jump minutes
    // Exponent coupling traded amount to |return|: 0 decouples volume from
    // price moves (manipulated/thin markets); 1 makes dollar volume track
    // activity, flattening the minute illiquidity ratio (liquid markets).
    double volume_coupling = 0.0;
};

// Daily-jump planting: r_t' = r_t + (beta_r - 1) * beta_sigma * mu_t, with
// r_t' / beta_r the known liquidity-adjusted ground truth.
struct DailyJumpParams {
    double target_beta_jump = 1.0;
    double target_beta_diff = 1.0;
    // mu_t source: rolling AR(1)-implied mean of the base series unless an
    // explicit mean series is supplied.
    std::optional<std::vector<double>> mu_override;
    int ar_window = 60;
    // 0 plants the jump term on every day; k > 0 on every k-th day only,
    // with the other days left at the beta = 1 equilibrium.
    int jump_every = 0;
};

// Seeded GARCH(1,1) innovation series; sigma_1^2 = omega / (1 - a - b).
std::vector<double> gen_garch_series(double omega, double alpha, double beta, int n,
                                     std::uint64_t seed);

marketdata::TradingDay gen_jump_day(const JumpParams& params, int t_minutes, std::uint64_t seed,
                                    const std::string& ticker = "SYN",
                                    std::int64_t date = 18262 /* 2020-01-01 */,
                                    double open_price = 100.0);

// Per-asset generator config for gen_universe. The optional daily GARCH block
// modulates base_sigma day to day, driven by the previous day's realized
// return, so daily aggregates carry genuine volatility clustering. The
// optional AR term adds a momentum component to each day's drift.
struct AssetParams {
    std::string ticker = "SYN";
    JumpParams jump;
    double day_omega = 0.0;  // daily-variance recursion; 0 disables
    double day_alpha = 0.0;
    double day_beta = 0.0;
    double day_ar = 0.0;           // AR(1) coefficient on daily log-return drift
    double day_drift = 0.0;        // constant daily log-return drift
    std::optional<std::vector<double>> intensity_override;  // per-day intensity hook
};

struct UniverseConfig {
    int days = 500;
    int t_minutes = 1440;
    std::int64_t start_date = 18262;  // 2020-01-01
    std::uint64_t seed = 1;
};

std::vector<marketdata::TradingDay> gen_universe(const std::vector<AssetParams>& assets,
                                                 const UniverseConfig& cfg);

// Writes a universe in the minute-bar CSV schema.
void write_universe_csv(const std::string& path,
                        const std::vector<marketdata::TradingDay>& days);

struct PlantedSeries {
    std::vector<double> planted;       // r_t' with the jump term added
    std::vector<double> adjusted;      // ground truth r_t' / beta_r
    std::vector<double> mu;            // mu_t actually used
    std::vector<double> beta_jump;     // per-day planted beta_r
    std::vector<double> beta_diff;     // per-day planted beta_sigma
};

// Plants Eq.-style deterministic daily jumps on a base return series.
PlantedSeries plant_daily_jumps(std::span<const double> base_returns,
                                const DailyJumpParams& params);

// fixture_truth.csv: date, planted_beta_jump, planted_beta_diff.
void write_fixture_truth_csv(const std::string& path, std::int64_t start_date,
                             const PlantedSeries& series);

// Canned profiles used by the CLI and the acceptance fixture.
std::vector<AssetParams> high_jump_profile(int assets);
std::vector<AssetParams> no_jump_profile(int assets);

}  // namespace liqarch::synth
