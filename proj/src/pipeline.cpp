#include "liqarch/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "liqarch/csv.hpp"
#include "liqarch/econometrics.hpp"
#include "liqarch/stats.hpp"
#include "liqarch/timeutil.hpp"

namespace fs = std::filesystem;

namespace liqarch::pipeline {

namespace {

constexpr const char* kVersion = "0.1.0";

double to_double(const std::string& s, const std::string& what) {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw PipelineError("read", "bad number in " + what + ": " + s);
    return v;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

std::string direction_text(stats::Direction d) {
    switch (d) {
        case stats::Direction::Up: return "up";
        case stats::Direction::Down: return "down";
        default: return "none";
    }
}

std::string significance_text(stats::Significance s) {
    switch (s) {
        case stats::Significance::Pct1: return "***";
        case stats::Significance::Pct5: return "**";
        case stats::Significance::Pct10: return "*";
        default: return "";
    }
}

}  // namespace

marketdata::Venue RunConfig::resolved_venue() const {
    if (venue == "stock") return marketdata::Venue::stock();
    if (venue == "crypto") return marketdata::Venue::crypto();
    throw ConfigError("venue must be \"stock\" or \"crypto\": " + venue);
}

int RunConfig::resolved_window_len() const {
    if (window_len > 0) return window_len;
    return venue == "stock" ? 242 : 365;
}

int RunConfig::resolved_annualization() const {
    if (annualization_days > 0) return annualization_days;
    return venue == "stock" ? 252 : 365;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string parse_toml_string(const std::string& v) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        throw ConfigError("expected quoted string: " + v);
    return v.substr(1, v.size() - 2);
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& raw) {
    auto as_int = [&](const std::string& v) {
        long long out;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("bad integer for " + key + ": " + v);
        return out;
    };
    auto as_double = [&](const std::string& v) {
        double out;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("bad number for " + key + ": " + v);
        return out;
    };
    auto as_bool = [&](const std::string& v) {
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError("bad boolean for " + key + ": " + v);
    };

    if (key == "venue") cfg.venue = parse_toml_string(raw);
    else if (key == "input") {
        cfg.inputs.clear();
        if (!raw.empty() && raw.front() == '[') {
            if (raw.back() != ']') throw ConfigError("unterminated array for input");
            std::string body = raw.substr(1, raw.size() - 2);
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = strip(item);
                if (!item.empty()) cfg.inputs.push_back(parse_toml_string(item));
            }
        } else {
            cfg.inputs.push_back(parse_toml_string(raw));
        }
    } else if (key == "output_dir") cfg.output_dir = parse_toml_string(raw);
    else if (key == "window_len") cfg.window_len = static_cast<int>(as_int(raw));
    else if (key == "p_max") cfg.p_max = static_cast<int>(as_int(raw));
    else if (key == "q_max") cfg.q_max = static_cast<int>(as_int(raw));
    else if (key == "min_minutes") cfg.min_minutes = static_cast<int>(as_int(raw));
    else if (key == "beta_cap") cfg.beta_cap = as_double(raw);
    else if (key == "histogram_bins") cfg.histogram_bins = static_cast<int>(as_int(raw));
    else if (key == "annualization_days") cfg.annualization_days = static_cast<int>(as_int(raw));
    else if (key == "lambda_floor") cfg.lambda_floor = as_double(raw);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_int(raw));
    else if (key == "threads") cfg.threads = static_cast<int>(as_int(raw));
    else if (key == "reselect_orders") cfg.reselect_orders = as_bool(raw);
    else if (key == "max_calendar_gap_days")
        cfg.max_calendar_gap_days = static_cast<int>(as_int(raw));
    else throw ConfigError("unknown config key: " + key);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_config_line(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

namespace {

void validate_paths(const RunConfig& cfg) {
    if (cfg.inputs.empty()) throw ConfigError("no input files configured");
    for (const auto& p : cfg.inputs)
        if (!fs::exists(p)) throw ConfigError("input path does not exist: " + p);
    if (!(cfg.beta_cap > 0.0)) throw ConfigError("beta_cap must be > 0");
    fs::create_directories(cfg.output_dir);
}

std::vector<marketdata::TradingDay> load_valid_days(const RunConfig& cfg,
                                                    const std::string& bars_path) {
    auto bars = marketdata::parse_minute_csv_file(bars_path);
    auto days = marketdata::partition_days(bars, cfg.resolved_venue());
    std::vector<marketdata::TradingDay> valid;
    for (auto& d : days)
        if (marketdata::validate_day(d, cfg.min_minutes).valid) valid.push_back(std::move(d));
    return valid;
}

}  // namespace

void stage_ingest(const RunConfig& cfg) {
    validate_paths(cfg);
    std::vector<marketdata::MinuteBar> all;
    try {
        for (const auto& p : cfg.inputs) {
            auto bars = marketdata::parse_minute_csv_file(p);
            all.insert(all.end(), std::make_move_iterator(bars.begin()),
                       std::make_move_iterator(bars.end()));
        }
        std::stable_sort(all.begin(), all.end(),
                         [](const marketdata::MinuteBar& a, const marketdata::MinuteBar& b) {
                             return a.ticker != b.ticker ? a.ticker < b.ticker
                                                         : a.minute_start < b.minute_start;
                         });
        auto days = marketdata::partition_days(all, cfg.resolved_venue());
        std::vector<marketdata::MinuteBar> retained;
        for (const auto& d : days) {
            if (!marketdata::validate_day(d, cfg.min_minutes).valid) continue;
            retained.insert(retained.end(), d.bars.begin(), d.bars.end());
        }
        marketdata::write_minute_csv(out_path(cfg, "bars.csv"), retained);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError("ingest", e.what());
    }
}

void stage_liquidity(const RunConfig& cfg) {
    try {
        auto days = load_valid_days(cfg, out_path(cfg, "bars.csv"));
        liquidity::Config lcfg{cfg.beta_cap, cfg.histogram_bins};
        auto records = liquidity::compute_daily_records(days, lcfg, cfg.threads);

        {
            CsvWriter w(out_path(cfg, "daily_records.csv"));
            w.row({"ticker", "date", "r", "r_liq", "sigma", "sigma_liq", "beta_jump", "beta_diff",
                   "degenerate"});
            for (const auto& r : records)
                w.row({r.ticker, format_date(r.date), format_double(r.r), format_double(r.r_liq),
                       format_double(r.sigma), format_double(r.sigma_liq),
                       format_double(r.beta_jump), format_double(r.beta_diff),
                       r.degenerate ? "1" : "0"});
        }

        std::map<std::string, std::map<std::string, std::vector<double>>> by_ticker;
        for (const auto& r : records) {
            auto& m = by_ticker[r.ticker];
            m["r"].push_back(r.r);
            m["r_liq"].push_back(r.r_liq);
            m["sigma"].push_back(r.sigma);
            m["sigma_liq"].push_back(r.sigma_liq);
            m["beta_jump"].push_back(r.beta_jump);
            m["beta_diff"].push_back(r.beta_diff);
        }
        const std::vector<std::string> measures{"r",     "r_liq",     "sigma",
                                                "sigma_liq", "beta_jump", "beta_diff"};
        {
            CsvWriter w(out_path(cfg, "descriptive_stats.csv"));
            w.row({"ticker", "measure", "count", "mean", "std", "min", "median", "max",
                   "skewness", "kurtosis", "days_ge_1", "pct_ge_1"});
            for (const auto& [ticker, m] : by_ticker) {
                for (const auto& meas : measures) {
                    auto st = liquidity::describe(m.at(meas));
                    w.row({ticker, meas, std::to_string(st.count), format_double(st.mean),
                           format_double(st.std), format_double(st.min), format_double(st.median),
                           format_double(st.max), format_double(st.skewness),
                           format_double(st.kurtosis), std::to_string(st.days_ge_1),
                           format_double(st.pct_ge_1)});
                }
            }
        }
        for (const std::string meas : {"beta_jump", "beta_diff"}) {
            CsvWriter w(out_path(cfg, "histogram_" + meas + ".csv"));
            w.row({"ticker", "bin_left", "bin_right", "count"});
            for (const auto& [ticker, m] : by_ticker) {
                auto h = liquidity::histogram(m.at(meas), cfg.histogram_bins, cfg.beta_cap);
                for (std::size_t i = 0; i < h.counts.size(); ++i)
                    w.row({ticker, format_double(h.bin_edges[i]), format_double(h.bin_edges[i + 1]),
                           std::to_string(h.counts[i])});
            }
        }
    } catch (const std::exception& e) {
        throw PipelineError("liquidity", e.what());
    }
}

std::vector<liquidity::DailyRecord> read_daily_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PipelineError("read", "cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<liquidity::DailyRecord> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 9) throw PipelineError("read", "bad daily_records row: " + line);
        liquidity::DailyRecord r;
        r.ticker = f[0];
        r.date = parse_date(f[1]);
        r.r = to_double(f[2], "daily_records");
        r.r_liq = to_double(f[3], "daily_records");
        r.sigma = to_double(f[4], "daily_records");
        r.sigma_liq = to_double(f[5], "daily_records");
        r.beta_jump = to_double(f[6], "daily_records");
        r.beta_diff = to_double(f[7], "daily_records");
        r.degenerate = f[8] == "1";
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::map<std::string, std::vector<liquidity::DailyRecord>> records_by_ticker(
    const std::string& path) {
    std::map<std::string, std::vector<liquidity::DailyRecord>> by;
    for (auto& r : read_daily_records(path)) by[r.ticker].push_back(std::move(r));
    return by;
}

}  // namespace

void stage_backtest(const RunConfig& cfg) {
    try {
        auto by = records_by_ticker(out_path(cfg, "daily_records.csv"));
        backtest::WindowSpec spec{cfg.resolved_window_len(), cfg.p_max, cfg.q_max,
                                  cfg.reselect_orders, cfg.max_calendar_gap_days};
        CsvWriter wf(out_path(cfg, "window_fits.csv"));
        wf.row({"ticker", "window_end", "path", "p", "q", "omega", "alpha", "beta", "loglik",
                "converged"});
        CsvWriter fc(out_path(cfg, "forecasts.csv"));
        fc.row({"ticker", "date", "mu_hat_reg", "mu_hat_liq"});

        for (const auto& [ticker, recs] : by) {
            auto res = backtest::run_rolling(recs, spec, cfg.threads);
            const auto& p = res.panel;
            for (std::size_t w = 0; w < p.window_end_dates.size(); ++w) {
                auto emit = [&](const char* path_name, const backtest::WindowFit& f) {
                    wf.row({ticker, format_date(p.window_end_dates[w]), path_name,
                            std::to_string(f.p), std::to_string(f.q), format_double(f.omega),
                            format_double(f.alpha), format_double(f.beta),
                            format_double(f.loglik), f.converged ? "1" : "0"});
                };
                emit("reg", p.fits_reg[w]);
                emit("liq", p.fits_liq[w]);
                fc.row({ticker, format_date(res.forecasts.dates[w]),
                        format_double(res.forecasts.mu_hat_reg[w]),
                        format_double(res.forecasts.mu_hat_liq[w])});
            }
        }
    } catch (const std::exception& e) {
        throw PipelineError("backtest", e.what());
    }
}

std::map<std::string, backtest::ForecastSeries> read_forecasts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PipelineError("read", "cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::map<std::string, backtest::ForecastSeries> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 4) throw PipelineError("read", "bad forecasts row: " + line);
        auto& fs_series = out[f[0]];
        fs_series.ticker = f[0];
        fs_series.dates.push_back(parse_date(f[1]));
        fs_series.mu_hat_reg.push_back(to_double(f[2], "forecasts"));
        fs_series.mu_hat_liq.push_back(to_double(f[3], "forecasts"));
    }
    return out;
}

namespace {

struct PanelRows {
    std::vector<double> loglik_reg, loglik_liq, a_reg, a_liq, b_reg, b_liq;
};

// Pairs only windows where both paths converged.
std::map<std::string, PanelRows> read_window_fits_paired(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PipelineError("read", "cannot open " + path);
    std::string line;
    std::getline(in, line);
    struct Fit {
        double a, b, ll;
        bool conv;
        bool seen = false;
    };
    std::map<std::string, std::map<std::string, std::pair<Fit, Fit>>> grid;  // ticker -> end -> (reg, liq)
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 10) throw PipelineError("read", "bad window_fits row: " + line);
        Fit fit{to_double(f[6], "window_fits"), to_double(f[7], "window_fits"),
                to_double(f[8], "window_fits"), f[9] == "1", true};
        auto& cell = grid[f[0]][f[1]];
        (f[2] == "reg" ? cell.first : cell.second) = fit;
    }
    std::map<std::string, PanelRows> out;
    for (const auto& [ticker, ends] : grid) {
        PanelRows rows;
        for (const auto& [end, pair] : ends) {
            if (!pair.first.seen || !pair.second.seen) continue;
            if (!pair.first.conv || !pair.second.conv) continue;
            rows.loglik_reg.push_back(pair.first.ll);
            rows.loglik_liq.push_back(pair.second.ll);
            rows.a_reg.push_back(pair.first.a);
            rows.a_liq.push_back(pair.second.a);
            rows.b_reg.push_back(pair.first.b);
            rows.b_liq.push_back(pair.second.b);
        }
        out[ticker] = std::move(rows);
    }
    return out;
}

}  // namespace

void stage_report(const RunConfig& cfg) {
    try {
        auto panels = read_window_fits_paired(out_path(cfg, "window_fits.csv"));
        {
            CsvWriter w(out_path(cfg, "ttests.csv"));
            w.row({"ticker", "panel", "T", "dof", "p_two_sided", "p_less", "p_greater", "sig",
                   "direction"});
            for (const auto& [ticker, rows] : panels) {
                auto emit = [&](const char* panel, const std::vector<double>& x,
                                const std::vector<double>& y) {
                    if (x.size() < 2) return;
                    auto t = stats::t_test_two_sample(x, y);
                    w.row({ticker, panel, format_double(t.statistic), format_double(t.dof),
                           format_double(t.p_two_sided), format_double(t.p_less),
                           format_double(t.p_greater), significance_text(t.significance),
                           direction_text(t.direction)});
                };
                emit("loglik", rows.loglik_reg, rows.loglik_liq);
                emit("a", rows.a_reg, rows.a_liq);
                emit("b", rows.b_reg, rows.b_liq);
            }
        }

        auto by = records_by_ticker(out_path(cfg, "daily_records.csv"));
        {
            CsvWriter w(out_path(cfg, "adf.csv"));
            w.row({"ticker", "series", "statistic", "lag", "reject_5pct"});
            for (const auto& [ticker, recs] : by) {
                std::vector<double> r, rl;
                for (const auto& rec : recs) {
                    r.push_back(rec.r);
                    rl.push_back(rec.r_liq);
                }
                auto emit = [&](const char* name, const std::vector<double>& s) {
                    auto a = stats::adf_test(s);
                    w.row({ticker, name, format_double(a.statistic), std::to_string(a.lag_used),
                           a.reject_5pct ? "1" : "0"});
                };
                emit("r", r);
                emit("r_liq", rl);
            }
        }
        {
            CsvWriter w(out_path(cfg, "anova.csv"));
            w.row({"measure", "f_statistic", "dof_between", "dof_within", "p_value"});
            if (by.size() >= 2) {
                for (const std::string meas : {"beta_jump", "beta_diff"}) {
                    std::vector<std::vector<double>> groups;
                    for (const auto& [ticker, recs] : by) {
                        std::vector<double> g;
                        for (const auto& rec : recs)
                            g.push_back(meas == "beta_jump" ? rec.beta_jump : rec.beta_diff);
                        groups.push_back(std::move(g));
                    }
                    std::vector<std::span<const double>> views(groups.begin(), groups.end());
                    auto a = stats::anova_oneway(views);
                    w.row({meas, format_double(a.f_statistic), std::to_string(a.dof_between),
                           std::to_string(a.dof_within), format_double(a.p_value)});
                }
            }
        }
    } catch (const std::exception& e) {
        throw PipelineError("report", e.what());
    }
}

void stage_portfolio(const RunConfig& cfg) {
    try {
        auto by = records_by_ticker(out_path(cfg, "daily_records.csv"));
        auto forecasts = read_forecasts(out_path(cfg, "forecasts.csv"));

        // Equal-weight market return per date across the run's universe.
        std::map<std::int64_t, std::pair<double, int>> mkt;
        for (const auto& [ticker, recs] : by)
            for (const auto& r : recs) {
                auto& cell = mkt[r.date];
                cell.first += r.r;
                cell.second += 1;
            }

        portfolio::PortfolioConfig pcfg{cfg.resolved_annualization(), cfg.lambda_floor};
        const int window_len = cfg.resolved_window_len();

        CsvWriter ws(out_path(cfg, "portfolio.csv"));
        ws.row({"ticker", "portfolio", "sharpe_annualized", "direction"});
        CsvWriter wd(out_path(cfg, "portfolio_daily.csv"));
        wd.row({"ticker", "date", "portfolio", "weight", "realized_return"});

        for (const auto& [ticker, recs] : by) {
            auto it = forecasts.find(ticker);
            if (it == forecasts.end()) continue;
            std::vector<double> universe;
            universe.reserve(recs.size());
            for (const auto& r : recs) {
                const auto& cell = mkt.at(r.date);
                universe.push_back(cell.first / cell.second);
            }
            auto res = portfolio::run_tmv_lamv(it->second, recs, universe, window_len, pcfg);
            const char* dir = res.direction == portfolio::SharpeDirection::Up
                                  ? "up"
                                  : (res.direction == portfolio::SharpeDirection::Down ? "down"
                                                                                       : "none");
            ws.row({ticker, "TMV", format_double(res.tmv.sharpe_annualized), dir});
            ws.row({ticker, "LAMV", format_double(res.lamv.sharpe_annualized), dir});
            for (const auto* s : {&res.tmv, &res.lamv})
                for (std::size_t i = 0; i < s->dates.size(); ++i)
                    wd.row({ticker, format_date(s->dates[i]), s->name,
                            format_double(s->weights[i]), format_double(s->realized[i])});
        }
    } catch (const std::exception& e) {
        throw PipelineError("portfolio", e.what());
    }
}

void stage_fit(const RunConfig& cfg, const std::string& ticker, const std::string& series) {
    try {
        auto by = records_by_ticker(out_path(cfg, "daily_records.csv"));
        auto it = by.find(ticker);
        if (it == by.end()) throw PipelineError("fit", "unknown ticker: " + ticker);
        std::vector<double> x;
        for (const auto& r : it->second) x.push_back(series == "r_liq" ? r.r_liq : r.r);
        auto fit = econometrics::fit_arma_garch(x, econometrics::FitOptions{cfg.p_max, cfg.q_max});

        CsvWriter w(out_path(cfg, "fits.csv"));
        std::vector<std::string> header{"ticker", "series", "p", "q"};
        for (int i = 1; i <= cfg.p_max; ++i) header.push_back("phi" + std::to_string(i));
        for (int j = 1; j <= cfg.q_max; ++j) header.push_back("theta" + std::to_string(j));
        header.insert(header.end(), {"omega", "alpha", "beta", "loglik", "aic", "converged"});
        w.row(header);
        std::vector<std::string> row{ticker, series, std::to_string(fit.arma.p),
                                     std::to_string(fit.arma.q)};
        for (int i = 0; i < cfg.p_max; ++i)
            row.push_back(i < fit.arma.p ? format_double(fit.arma.phi[i]) : "");
        for (int j = 0; j < cfg.q_max; ++j)
            row.push_back(j < fit.arma.q ? format_double(fit.arma.theta[j]) : "");
        row.insert(row.end(),
                   {format_double(fit.garch.omega), format_double(fit.garch.alpha),
                    format_double(fit.garch.beta), format_double(fit.garch.loglik),
                    format_double(fit.arma.aic),
                    fit.arma.converged && fit.garch.converged ? "1" : "0"});
        w.row(row);
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError("fit", e.what());
    }
}

void write_manifest(const RunConfig& cfg) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = {{"venue", cfg.venue},
                   {"inputs", cfg.inputs},
                   {"output_dir", cfg.output_dir},
                   {"window_len", cfg.resolved_window_len()},
                   {"p_max", cfg.p_max},
                   {"q_max", cfg.q_max},
                   {"min_minutes", cfg.min_minutes},
                   {"beta_cap", cfg.beta_cap},
                   {"histogram_bins", cfg.histogram_bins},
                   {"annualization_days", cfg.resolved_annualization()},
                   {"lambda_floor", cfg.lambda_floor},
                   {"seed", cfg.seed},
                   {"reselect_orders", cfg.reselect_orders}};
    nlohmann::json rows;
    for (const char* name : {"bars.csv", "daily_records.csv", "window_fits.csv", "forecasts.csv",
                             "ttests.csv", "portfolio.csv"}) {
        fs::path p = fs::path(cfg.output_dir) / name;
        if (!fs::exists(p)) continue;
        std::ifstream in(p);
        std::size_t count = 0;
        std::string line;
        while (std::getline(in, line)) ++count;
        rows[name] = count > 0 ? count - 1 : 0;  // minus header
    }
    j["rows"] = rows;
    std::ofstream out(out_path(cfg, "run_manifest.json"), std::ios::binary);
    out << j.dump(2) << "\n";
}

int run_pipeline(const RunConfig& cfg) {
    stage_ingest(cfg);
    stage_liquidity(cfg);
    stage_backtest(cfg);
    stage_report(cfg);
    stage_portfolio(cfg);
    write_manifest(cfg);
    return 0;
}

}  // namespace liqarch::pipeline
