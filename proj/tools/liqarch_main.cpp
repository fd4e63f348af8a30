// liqarch: liquidity-adjusted return/volatility pipeline.
//
// Subcommands mirror the pipeline stages and are composable through the
// output directory: `run` chains them exactly as standalone invocations
// would, producing byte-identical artifacts.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liqarch/pipeline.hpp"
#include "liqarch/synth.hpp"

namespace {

using liqarch::pipeline::ConfigError;
using liqarch::pipeline::PipelineError;
using liqarch::pipeline::RunConfig;

void add_common_overrides(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "TOML config file");
    cmd->add_option("--venue", cfg.venue, "stock or crypto");
    cmd->add_option("--input", cfg.inputs, "input minute-bar CSV file(s)");
    cmd->add_option("--output-dir", cfg.output_dir, "artifact directory");
    cmd->add_option("--window-len", cfg.window_len, "rolling window length in days");
    cmd->add_option("--p-max", cfg.p_max, "max AR order");
    cmd->add_option("--q-max", cfg.q_max, "max MA order");
    cmd->add_option("--min-minutes", cfg.min_minutes, "minimum usable minutes per day");
    cmd->add_option("--beta-cap", cfg.beta_cap, "liquidity beta cap");
    cmd->add_option("--histogram-bins", cfg.histogram_bins, "histogram bin count");
    cmd->add_option("--annualization-days", cfg.annualization_days, "periods per year");
    cmd->add_option("--lambda-floor", cfg.lambda_floor, "risk-aversion floor");
    cmd->add_option("--seed", cfg.seed, "generator seed");
    cmd->add_option("--threads", cfg.threads, "worker thread bound (0 = hardware)");
    cmd->add_flag("--no-reselect-orders", [&cfg](std::int64_t) { cfg.reselect_orders = false; },
                  "fix ARMA orders per asset from the first window");
}

RunConfig finalize_config(const RunConfig& overrides, const std::string& config_path,
                          const CLI::App* cmd) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = liqarch::pipeline::load_config(config_path);
    // CLI flags win over file values.
    auto taken = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    if (taken("--venue")) cfg.venue = overrides.venue;
    if (taken("--input")) cfg.inputs = overrides.inputs;
    if (taken("--output-dir")) cfg.output_dir = overrides.output_dir;
    if (taken("--window-len")) cfg.window_len = overrides.window_len;
    if (taken("--p-max")) cfg.p_max = overrides.p_max;
    if (taken("--q-max")) cfg.q_max = overrides.q_max;
    if (taken("--min-minutes")) cfg.min_minutes = overrides.min_minutes;
    if (taken("--beta-cap")) cfg.beta_cap = overrides.beta_cap;
    if (taken("--histogram-bins")) cfg.histogram_bins = overrides.histogram_bins;
    if (taken("--annualization-days")) cfg.annualization_days = overrides.annualization_days;
    if (taken("--lambda-floor")) cfg.lambda_floor = overrides.lambda_floor;
    if (taken("--seed")) cfg.seed = overrides.seed;
    if (taken("--threads")) cfg.threads = overrides.threads;
    if (taken("--no-reselect-orders")) cfg.reselect_orders = false;
    if (cfg.threads == 0) {
        if (const char* env = std::getenv("LIQARCH_THREADS")) cfg.threads = std::atoi(env);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liquidity-adjusted ARMA-GARCH pipeline"};
    app.require_subcommand(1);

    struct SubState {
        RunConfig overrides;
        std::string config_path;
        CLI::App* cmd = nullptr;
    };
    std::map<std::string, SubState> subs;
    for (const char* name : {"ingest", "liquidity", "fit", "backtest", "report", "portfolio",
                             "synth", "run"}) {
        auto& st = subs[name];
        st.cmd = app.add_subcommand(name, std::string("stage: ") + name);
        add_common_overrides(st.cmd, st.overrides, st.config_path);
    }

    // fit-specific options
    std::string fit_ticker, fit_series = "r";
    subs["fit"].cmd->add_option("--ticker", fit_ticker, "ticker to fit")->required();
    subs["fit"].cmd->add_option("--series", fit_series, "r or r_liq");

    // synth-specific options
    int synth_assets = 3, synth_days = 500;
    std::string synth_profile = "highjump";
    bool synth_plant_daily = false;
    auto* synth_cmd = subs["synth"].cmd;
    synth_cmd->add_option("--assets", synth_assets, "asset count");
    synth_cmd->add_option("--days", synth_days, "days per asset");
    synth_cmd->add_option("--profile", synth_profile, "highjump | nojump");
    synth_cmd->add_flag("--plant-daily", synth_plant_daily,
                        "also emit a planted daily-jump fixture with its truth file");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, st] : subs) {
            if (!st.cmd->parsed()) continue;
            RunConfig cfg = finalize_config(st.overrides, st.config_path, st.cmd);
            namespace pl = liqarch::pipeline;
            if (name == "ingest") pl::stage_ingest(cfg);
            else if (name == "liquidity") pl::stage_liquidity(cfg);
            else if (name == "fit") pl::stage_fit(cfg, fit_ticker, fit_series);
            else if (name == "backtest") pl::stage_backtest(cfg);
            else if (name == "report") pl::stage_report(cfg);
            else if (name == "portfolio") pl::stage_portfolio(cfg);
            else if (name == "run") pl::run_pipeline(cfg);
            else if (name == "synth") {
                namespace sy = liqarch::synth;
                std::filesystem::create_directories(cfg.output_dir);
                auto assets = synth_profile == "nojump" ? sy::no_jump_profile(synth_assets)
                                                        : sy::high_jump_profile(synth_assets);
                sy::UniverseConfig ucfg;
                ucfg.days = synth_days;
                ucfg.t_minutes = cfg.venue == "stock" ? 390 : 1440;
                ucfg.seed = cfg.seed;
                auto days = sy::gen_universe(assets, ucfg);
                sy::write_universe_csv(
                    (std::filesystem::path(cfg.output_dir) / "bars_synth.csv").string(), days);
                if (synth_plant_daily) {
                    auto base = sy::gen_garch_series(0.05, 0.10, 0.85, synth_days, cfg.seed);
                    sy::DailyJumpParams dj;
                    dj.target_beta_jump = 2.0;
                    dj.target_beta_diff = 1.2;
                    auto planted = sy::plant_daily_jumps(base, dj);
                    sy::write_fixture_truth_csv(
                        (std::filesystem::path(cfg.output_dir) / "fixture_truth.csv").string(),
                        ucfg.start_date, planted);
                }
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
