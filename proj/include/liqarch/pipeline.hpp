#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "liqarch/backtest.hpp"
#include "liqarch/liquidity.hpp"
#include "liqarch/marketdata.hpp"
#include "liqarch/portfolio.hpp"

namespace liqarch::pipeline {

// exit code 1
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit code 2
struct PipelineError : std::runtime_error {
    PipelineError(const std::string& stage_name, const std::string& msg)
        : std::runtime_error(stage_name + ": " + msg), stage(stage_name) {}
    std::string stage;
};

struct RunConfig {
    std::string venue = "crypto";  // "stock" | "crypto"
    std::vector<std::string> inputs;
    std::string output_dir = "out";
    int window_len = 0;  // 0 -> venue default (242 stock / 365 crypto)
    int p_max = 4;
    int q_max = 4;
    int min_minutes = 30;
    double beta_cap = 10.0;
    int histogram_bins = 50;
    int annualization_days = 0;  // 0 -> venue default (252 stock / 365 crypto)
    double lambda_floor = 1e-4;
    std::uint64_t seed = 1;
    int threads = 0;
    bool reselect_orders = true;
    int max_calendar_gap_days = 7;

    marketdata::Venue resolved_venue() const;
    int resolved_window_len() const;
    int resolved_annualization() const;
};

// Flat TOML subset: `key = value` lines, # comments, strings, numbers,
// booleans and string arrays. Unknown keys are configuration errors.
RunConfig load_config(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& raw_value);

// Stage functions communicate through CSV files under cfg.output_dir so the
// `run` command and standalone chaining produce byte-identical artifacts.
void stage_ingest(const RunConfig& cfg);     // -> bars.csv
void stage_liquidity(const RunConfig& cfg);  // -> daily_records.csv, stats, histograms
void stage_backtest(const RunConfig& cfg);   // -> window_fits.csv, forecasts.csv
void stage_report(const RunConfig& cfg);     // -> ttests.csv, adf.csv, anova.csv
void stage_portfolio(const RunConfig& cfg);  // -> portfolio.csv, portfolio_daily.csv
void stage_fit(const RunConfig& cfg, const std::string& ticker,
               const std::string& series);  // -> fits.csv
void write_manifest(const RunConfig& cfg);  // -> run_manifest.json

int run_pipeline(const RunConfig& cfg);

// Readers for the intermediate artifacts (also used by tests).
std::vector<liquidity::DailyRecord> read_daily_records(const std::string& path);
std::map<std::string, backtest::ForecastSeries> read_forecasts(const std::string& path);

}  // namespace liqarch::pipeline
