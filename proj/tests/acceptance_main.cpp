// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion pins its tolerance and runtime budget in
// code; all inputs are seeded and deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "liqarch/backtest.hpp"
#include "liqarch/csv.hpp"
#include "liqarch/econometrics.hpp"
#include "liqarch/liquidity.hpp"
#include "liqarch/marketdata.hpp"
#include "liqarch/portfolio.hpp"
#include "liqarch/rng.hpp"
#include "liqarch/stats.hpp"
#include "liqarch/synth.hpp"

using namespace liqarch;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string name, double budget_sec)
        : number_(number), name_(std::move(name)), budget_sec_(budget_sec),
          start_(std::chrono::steady_clock::now()) {}

    void expect(bool ok, const std::string& detail) {
        if (!ok) {
            failed_details_.push_back(detail);
        }
    }

    ~Criterion() {
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                         .count();
        bool ok = failed_details_.empty();
        if (budget_sec_ > 0.0 && sec > budget_sec_) {
            ok = false;
            failed_details_.push_back("runtime " + std::to_string(sec) + "s over budget " +
                                      std::to_string(budget_sec_) + "s");
        }
        std::printf("%s  %2d. %s (%.1fs)\n", ok ? "PASS" : "FAIL", number_, name_.c_str(), sec);
        if (!ok) {
            for (const auto& d : failed_details_) std::printf("        - %s\n", d.c_str());
            ++g_failures;
        }
    }

private:
    int number_;
    std::string name_;
    double budget_sec_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> failed_details_;
};

marketdata::TradingDay random_synth_day(Rng& rng, int idx) {
    synth::JumpParams p;
    p.intensity = rng.uniform() * 3.0;
    p.jump_sd = 0.005 + 0.05 * rng.uniform();
    p.base_sigma = 2e-4 + 1e-3 * rng.uniform();
    p.volume_sigma = 0.1 + 0.8 * rng.uniform();
    p.volume_spike = 1.0 + 400.0 * rng.uniform();
    p.volume_coupling = rng.uniform() < 0.5 ? 0.0 : 1.0;
    int t = rng.uniform() < 0.5 ? 390 : 1440;
    return synth::gen_jump_day(p, t, rng.next_u64(), "ACC", 18262 + idx);
}

void criterion_1_2_3() {
    std::vector<marketdata::TradingDay> days;
    {
        Criterion c(1, "normalization exactness on 1000 random synthetic days", 10.0);
        Rng rng(101);
        int checked = 0;
        for (int i = 0; i < 1000; ++i) {
            auto day = random_synth_day(rng, i);
            auto returns = marketdata::minute_returns(day);
            std::vector<double> amounts;
            for (std::size_t b = 0; b < day.bars.size(); ++b)
                amounts.push_back(day.bars[b].amount);
            auto f = liquidity::normalization_factor(returns, amounts);
            double sum = 0.0;
            for (double v : f.per_minute) sum += v * v;
            if (std::fabs(sum - f.effective_T) > 1e-9 * f.effective_T)
                c.expect(false, "day " + std::to_string(i) + " constraint violated");
            ++checked;
            days.push_back(std::move(day));
        }
        c.expect(checked == 1000, "generated fewer than 1000 days");
    }
    {
        Criterion c(2, "amount-scale invariance within 1e-12", 0.0);
        for (std::size_t i = 0; i < days.size(); i += 25) {
            auto base = liquidity::compute_daily_record(days[i]);
            for (double k : {1e-3, 1.0, 1e6}) {
                auto scaled = days[i];
                for (auto& bar : scaled.bars) bar.amount *= k;
                auto rec = liquidity::compute_daily_record(scaled);
                auto close = [](double a, double b) {
                    double denom = std::max({std::fabs(a), std::fabs(b), 1e-30});
                    return std::fabs(a - b) / denom <= 1e-12;
                };
                if (!close(rec.r_liq, base.r_liq) || !close(rec.sigma_liq, base.sigma_liq) ||
                    !close(rec.beta_jump, base.beta_jump) ||
                    !close(rec.beta_diff, base.beta_diff))
                    c.expect(false, "day " + std::to_string(i) + " drifted at k=" +
                                        format_double(k));
            }
        }
    }
    {
        Criterion c(3, "beta identity |r| = beta_jump * |r_liq| within 1e-9", 0.0);
        int used = 0;
        for (const auto& day : days) {
            auto rec = liquidity::compute_daily_record(day);
            if (rec.degenerate || rec.beta_jump >= 10.0) continue;
            ++used;
            if (std::fabs(std::fabs(rec.r) - rec.beta_jump * std::fabs(rec.r_liq)) >
                1e-9 * std::fabs(rec.r))
                c.expect(false, "identity violated on a non-degenerate day");
        }
        c.expect(used > 500, "too few non-degenerate days exercised");
    }
}

void criterion_4() {
    Criterion c(4, "GARCH recovery (omega .05, a .10, b .85, n 5000, 20 seeds)", 60.0);
    double ea = 0.0, eb = 0.0;
    for (int s = 0; s < 20; ++s) {
        auto eps = synth::gen_garch_series(0.05, 0.10, 0.85, 5000, 7000 + s);
        auto fit = econometrics::fit_garch11(eps);
        ea += std::fabs(fit.alpha - 0.10);
        eb += std::fabs(fit.beta - 0.85);
        c.expect(fit.loglik >= fit.loglik_start,
                 "seed " + std::to_string(s) + ": optimum below starting point");
    }
    c.expect(ea / 20.0 <= 0.05, "mean absolute error on a exceeds 0.05");
    c.expect(eb / 20.0 <= 0.05, "mean absolute error on b exceeds 0.05");
}

void criterion_5() {
    Criterion c(5, "AIC order selection (AR(1) phi .8 and white noise)", 0.0);
    int ar_hits = 0, null_hits = 0;
    for (int s = 0; s < 20; ++s) {
        Rng rng(9000 + s);
        std::vector<double> ar(1000), noise(1000);
        double prev = 0.0;
        for (int i = 0; i < 1000; ++i) {
            prev = 0.8 * prev + rng.gaussian();
            ar[i] = prev;
            noise[i] = rng.gaussian();
        }
        auto [p_ar, q_ar] = econometrics::select_arma(ar, 4, 4);
        (void)q_ar;
        if (p_ar >= 1) ++ar_hits;
        auto [p_n, q_n] = econometrics::select_arma(noise, 4, 4);
        if (p_n == 0 && q_n == 0) ++null_hits;
    }
    c.expect(ar_hits >= 18, "AR(1): p >= 1 selected only " + std::to_string(ar_hits) + "/20");
    c.expect(null_hits >= 12, "white noise: (0,0) selected only " + std::to_string(null_hits) +
                                  "/20");
}

void criterion_6() {
    Criterion c(6, "window counts and t-test dof match the published setups", 0.0);
    c.expect(backtest::rolling_windows(2652, 242).size() == 2410, "2652/242 window count");
    c.expect(backtest::rolling_windows(1577, 365).size() == 1212, "1577/365 window count");
    Rng rng(1);
    std::vector<double> x(2410), y(2410);
    for (auto& v : x) v = rng.gaussian();
    for (auto& v : y) v = rng.gaussian();
    c.expect(stats::t_test_two_sample(x, y).dof == 4818.0, "dof for n=2410 per side");
    std::vector<double> a(1212), b(1212);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = rng.gaussian();
    c.expect(stats::t_test_two_sample(a, b).dof == 2422.0, "dof for n=1212 per side");
}

void criterion_7() {
    Criterion c(7, "ADF size (random walk ~5%) and power (noise >= 95%)", 60.0);
    Rng master(777);
    int reject_rw = 0, reject_noise = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng = master.child(rep);
        std::vector<double> noise(500), rw(500);
        double acc = 0.0;
        for (int i = 0; i < 500; ++i) {
            noise[i] = rng.gaussian();
            acc += rng.gaussian();
            rw[i] = acc;
        }
        if (stats::adf_test(noise).reject_5pct) ++reject_noise;
        if (stats::adf_test(rw).reject_5pct) ++reject_rw;
    }
    c.expect(reject_noise >= 95, "power " + std::to_string(reject_noise) + "% below 95%");
    c.expect(reject_rw >= 2 && reject_rw <= 8,
             "size " + std::to_string(reject_rw) + "% outside 5% +/- 3%");
}

void criterion_8() {
    Criterion c(8, "closed-form MV weight beats a 1e-3 grid on 10000 instances", 0.0);
    Rng rng(31415);
    long violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        double mu = rng.gaussian(0.0, 0.01);
        double lam = 0.05 + 12.0 * rng.uniform();
        double s2 = 1e-6 + 0.002 * rng.uniform();
        double w = portfolio::mv_weights(mu, s2, portfolio::RiskAversion{lam}).w_asset;
        double best = w * mu - 0.5 * lam * w * w * s2;
        for (int g = 0; g <= 1000; ++g) {
            double x = g / 1000.0;
            if (x * mu - 0.5 * lam * x * x * s2 > best + 1e-15) {
                ++violations;
                break;
            }
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " grid points beat the closed form");
}

void criterion_9() {
    Criterion c(9, "directional mechanism: high-jump Up + LAMV edge, no-jump flat", 600.0);
    for (int profile = 0; profile < 2; ++profile) {
        const bool high_jump = profile == 0;
        const int n_assets = high_jump ? 3 : 2;
        auto assets =
            high_jump ? synth::high_jump_profile(n_assets) : synth::no_jump_profile(n_assets);
        synth::UniverseConfig ucfg;
        ucfg.days = 480;
        ucfg.seed = 20240808;
        auto tdays = synth::gen_universe(assets, ucfg);
        auto recs = liquidity::compute_daily_records(tdays, {}, 0);

        std::map<std::string, std::vector<liquidity::DailyRecord>> by;
        for (auto& r : recs) by[r.ticker].push_back(r);
        std::map<std::int64_t, std::pair<double, int>> mkt;
        for (auto& r : recs) {
            mkt[r.date].first += r.r;
            mkt[r.date].second += 1;
        }

        double sum_tmv = 0.0, sum_lamv = 0.0;
        for (auto& [ticker, rv] : by) {
            backtest::WindowSpec spec;
            spec.window_len = 365;
            auto res = backtest::run_rolling(rv, spec, 0);
            std::vector<double> a_reg, a_liq;
            for (std::size_t w = 0; w < res.panel.converged.size(); ++w) {
                if (!res.panel.converged[w]) continue;
                a_reg.push_back(res.panel.a_reg[w]);
                a_liq.push_back(res.panel.a_liq[w]);
            }
            auto t = stats::t_test_two_sample(a_reg, a_liq);
            if (high_jump) {
                c.expect(t.direction == stats::Direction::Up && t.p_less < 0.05,
                         ticker + ": shock-coefficient test not Up at 5%");
                std::vector<double> universe;
                for (auto& r : rv) universe.push_back(mkt[r.date].first / mkt[r.date].second);
                auto pf = portfolio::run_tmv_lamv(res.forecasts, rv, universe, 365, {});
                sum_tmv += pf.tmv.sharpe_annualized;
                sum_lamv += pf.lamv.sharpe_annualized;
            } else {
                c.expect(t.direction != stats::Direction::Up,
                         ticker + ": no-jump universe reported Up");
            }
        }
        if (high_jump)
            c.expect(sum_lamv >= sum_tmv, "mean LAMV Sharpe below mean TMV Sharpe");
    }
}

void criterion_10() {
    Criterion c(10, "byte-identical runs across reruns and thread counts", 0.0);
#ifndef LIQARCH_BIN
    c.expect(false, "CLI binary path not wired");
#else
    fs::path dir = fs::temp_directory_path() / "liqarch_acceptance_run";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string bin = LIQARCH_BIN;
    auto cli = [&](const std::string& args) {
        std::string cmd = bin + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    c.expect(cli("synth --assets 2 --days 140 --seed 4242 --output-dir " +
                 (dir / "fixture").string()) == 0,
             "synth subcommand failed");
    std::string input = (dir / "fixture" / "bars_synth.csv").string();
    std::string common = " --input " + input +
                         " --venue crypto --window-len 120 --p-max 1 --q-max 1";
    c.expect(cli("run --threads 1 --output-dir " + (dir / "r1").string() + common) == 0,
             "run 1 failed");
    c.expect(cli("run --threads 1 --output-dir " + (dir / "r2").string() + common) == 0,
             "run 2 failed");
    c.expect(cli("run --threads 8 --output-dir " + (dir / "r8").string() + common) == 0,
             "run with 8 threads failed");

    for (const char* name :
         {"bars.csv", "daily_records.csv", "descriptive_stats.csv", "window_fits.csv",
          "forecasts.csv", "ttests.csv", "adf.csv", "anova.csv", "portfolio.csv",
          "portfolio_daily.csv", "histogram_beta_jump.csv", "histogram_beta_diff.csv"}) {
        std::string a = read_file((dir / "r1" / name).string());
        c.expect(a == read_file((dir / "r2" / name).string()),
                 std::string(name) + " differs across reruns");
        c.expect(a == read_file((dir / "r8" / name).string()),
                 std::string(name) + " differs across thread counts");
    }
    fs::remove_all(dir);
#endif
}

}  // namespace

int main() {
    criterion_1_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
