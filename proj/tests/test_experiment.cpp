#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "risnet/experiment.hpp"
#include "risnet/validation.hpp"

namespace {

using namespace risnet;

KeyValues parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string report_value(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    }
    return {};
}

TEST(ParseGrid, RangesListsAndScalars) {
    const auto g = parse_grid("0:5:40");
    ASSERT_EQ(g.size(), 9u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 40.0);
    EXPECT_EQ(parse_grid("0:0.1:1").size(), 11u);
    EXPECT_EQ(parse_grid("-10:2.5:0").size(), 5u);
    EXPECT_EQ(parse_grid("1, 2,3"), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(parse_grid("30"), (std::vector<double>{30}));
    EXPECT_THROW(parse_grid("0:0:10"), std::invalid_argument);
    EXPECT_THROW(parse_grid("10:1:0"), std::invalid_argument);
    EXPECT_THROW(parse_grid("0:5"), std::invalid_argument);
    EXPECT_THROW(parse_grid("abc"), std::invalid_argument);
    EXPECT_THROW(parse_grid("1,2x"), std::invalid_argument);
}

TEST(CsvFormat, TenSignificantDigitsAndSentinel) {
    EXPECT_EQ(format_cell(1.0 / 3.0), "0.3333333333");
    EXPECT_EQ(format_cell(123456789012.0), "1.23456789e+11");
    EXPECT_EQ(format_cell(std::nullopt), "NA");
    EXPECT_EQ(format_cell(std::nan("")), "NA");
    EXPECT_EQ(format_cell(HUGE_VAL), "NA");

    CurveTable t;
    t.columns = {"mc_k1_n3", "mc_k1_n3_stderr", "exact_k1_n3"};
    t.sweep = {0.0, 5.0};
    t.rows = {{0.5, 0.01, std::nullopt}, {0.25, 0.02, 0.2}};
    EXPECT_EQ(t.to_csv(), "sweep,mc_k1_n3,mc_k1_n3_stderr,exact_k1_n3\n0,0.5,0.01,NA\n5,0.25,0.02,0.2\n");
}

TEST(ParseConfig, CommentsBlanksAndOverrides) {
    const auto kv = parse_text("# header\n\n  trials = 5000  # inline\nseed=3\nseed = 4\n");
    EXPECT_EQ(kv.at("trials"), "5000");
    EXPECT_EQ(kv.at("seed"), "4");
    EXPECT_EQ(kv.size(), 2u);
    EXPECT_THROW(parse_text("trials 5000\n"), std::invalid_argument);
    EXPECT_THROW(parse_text(" = 3\n"), std::invalid_argument);
}

TEST(ApplySettings, RejectsUnknownKeysAndBadValues) {
    auto p = make_preset("fig2");
    RunOptions run;
    EXPECT_THROW(apply_settings({{"trails", "1000"}}, p, run), std::invalid_argument);
    EXPECT_THROW(apply_settings({{"trials", "999"}}, p, run), std::invalid_argument);
    EXPECT_THROW(apply_settings({{"seed", "-1"}}, p, run), std::invalid_argument);
    EXPECT_THROW(apply_settings({{"methods", "mc,magic"}}, p, run), std::invalid_argument);
    EXPECT_THROW(apply_settings({{"series", "3-3"}}, p, run), std::invalid_argument);
    EXPECT_THROW(apply_settings({{"fit_rule", "median"}}, p, run), std::invalid_argument);
}

TEST(ApplySettings, FlagsOverrideConfigFile) {
    auto p = make_preset("fig2");
    RunOptions run;
    apply_settings(parse_text("trials = 2000\nseed = 5\nthreshold_db = 15\n"), p, run);
    apply_settings({{"seed", "9"}}, p, run);
    EXPECT_EQ(run.trials, 2000u);
    EXPECT_EQ(run.seed, 9u);
    EXPECT_EQ(p.threshold_db, 15.0);
}

TEST(ApplySettings, ShorthandKeys) {
    auto p = make_preset("fig2");
    RunOptions run;
    apply_settings({{"k", "1,4"}, {"snr_db", "10:10:30"}}, p, run);
    EXPECT_EQ(p.series, (std::vector<Series>{{1, 3}, {4, 3}}));
    EXPECT_EQ(p.grid, (std::vector<double>{10, 20, 30}));
    apply_settings({{"n", "2,5"}}, p, run);
    EXPECT_EQ(p.series, (std::vector<Series>{{1, 2}, {4, 2}, {1, 5}, {4, 5}}));

    auto k_sweep = make_preset("fig6");
    apply_settings({{"k", "2:2:8"}, {"snr_db", "20"}}, k_sweep, run);
    EXPECT_EQ(k_sweep.grid, (std::vector<double>{2, 4, 6, 8}));
    EXPECT_EQ(k_sweep.avg_snr_db, 20.0);
    EXPECT_EQ(k_sweep.series.size(), 2u);

    apply_settings({{"theta", "auto"}}, k_sweep, run);
    EXPECT_TRUE(k_sweep.optimize_theta);
}

TEST(Presets, FigureSettings) {
    const auto fig2 = make_preset("fig2");
    EXPECT_EQ(fig2.threshold_db, 20.0);
    EXPECT_EQ(fig2.series, (std::vector<Series>{{1, 3}, {2, 3}, {3, 3}}));
    EXPECT_EQ(fig2.methods,
              (std::vector<Method>{Method::mc, Method::exact, Method::asymptotic, Method::relay_mc}));
    EXPECT_EQ(fig2.metric, Metric::outage);

    const auto fig4 = make_preset("fig4");
    for (const auto& s : fig4.series) EXPECT_EQ(s.k * s.n, 6);

    const auto fig5 = make_preset("fig5");
    EXPECT_EQ(fig5.metric, Metric::sum_rate);
    for (const auto& s : fig5.series) EXPECT_EQ(s.k, 5);

    const auto fig6 = make_preset("fig6");
    EXPECT_EQ(fig6.sweep, SweepVar::num_ris);
    EXPECT_EQ(fig6.series, (std::vector<Series>{{1, 10}, {1, 15}}));
    EXPECT_EQ(fig6.methods, (std::vector<Method>{Method::mc, Method::evt, Method::relay_mc}));
    EXPECT_EQ(fig6.avg_snr_db, 10.0);

    for (const auto& name : preset_names()) EXPECT_NO_THROW(make_preset(name).validate());
    EXPECT_THROW(make_preset("fig7"), std::invalid_argument);
}

TEST(Presets, RoundTripThroughConfigText) {
    for (const auto& name : preset_names()) {
        auto original = make_preset(name);
        original.theta = 0.1 + 1e-13;
        original.threshold_db = 20.0 / 3.0;
        ExperimentPreset restored;
        RunOptions run;
        apply_settings(parse_text(to_config(original)), restored, run);
        EXPECT_EQ(restored, original) << name;
    }
    auto auto_theta = make_preset("fig6");
    auto_theta.optimize_theta = true;
    auto_theta.fit_rule = KgFitRule::fourth_moment;
    auto_theta.relay_prelog = 1.0;
    ExperimentPreset restored;
    RunOptions run;
    apply_settings(parse_text(to_config(auto_theta)), restored, run);
    EXPECT_EQ(restored, auto_theta);
}

TEST(Presets, ValidationRejectsInconsistentBlocks) {
    auto p = make_preset("fig2");
    p.grid = {10, 5};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = make_preset("fig2");
    p.methods = {Method::evt};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = make_preset("fig6");
    p.methods = {Method::exact};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.methods = {};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = make_preset("fig6");
    p.grid = {1.5, 3};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = make_preset("fig2");
    p.relay_prelog = 0.7;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = make_preset("fig2");
    p.mg_order = 65;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(RunPreset, SchemaAndDeterminism) {
    const auto p = make_preset("fig2");
    RunOptions run{2000, 17, 1};
    const auto table = evaluate_preset(p, run);
    ASSERT_EQ(table.rows.size(), p.grid.size());
    EXPECT_EQ(table.columns.size(), p.series.size() * 6);
    EXPECT_EQ(table.columns[0], "mc_k1_n3");
    EXPECT_EQ(table.columns[1], "mc_k1_n3_stderr");
    EXPECT_EQ(table.columns[2], "exact_k1_n3");

    const std::string csv = table.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')).rfind("sweep,mc_k1_n3,mc_k1_n3_stderr,", 0), 0u);
    EXPECT_EQ(run_preset(p, run), csv);
    run.workers = 3;
    EXPECT_EQ(run_preset(p, run), csv);
    run.seed = 18;
    EXPECT_NE(run_preset(p, run), csv);
}

TEST(RunPreset, SharedStreamsKeepCurvesOrdered) {
    const auto p = make_preset("fig2");
    const auto t = evaluate_preset(p, {5000, 3, 0});
    const auto k1 = t.column("mc_k1_n3"), k2 = t.column("mc_k2_n3"), k3 = t.column("mc_k3_n3");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        EXPECT_GE(*t.rows[r][k1], *t.rows[r][k2]);
        EXPECT_GE(*t.rows[r][k2], *t.rows[r][k3]);
        if (r > 0) EXPECT_LE(*t.rows[r][k1], *t.rows[r - 1][k1]);
    }
}

TEST(RunPreset, SumRateSweepOverK) {
    auto p = make_preset("fig6");
    p.grid = {2, 5};
    const auto t = evaluate_preset(p, {2000, 1, 0});
    EXPECT_EQ(t.columns[0], "mc_n10");
    const auto evt = t.column("evt_n10");
    const auto expected = asymptotic_sum_rate(5, 10, db_to_linear(10.0), ChernoffParams(kDefaultTheta));
    EXPECT_DOUBLE_EQ(*t.rows[1][evt], expected.sum_rate_full);
    EXPECT_GT(*t.rows[1][t.column("mc_n10")], *t.rows[1][t.column("relay_mc_n10")]);
}

TEST(FitReport, SingleElementAndDeterminism) {
    const RunOptions run{kDefaultTrials, 7, 0};
    const auto one = fit_report(1, run, kDefaultMgOrder, KgFitRule::inverse_power, 20000);
    EXPECT_EQ(report_value(one, "l"), "1");
    EXPECT_EQ(report_value(one, "m"), "1");
    EXPECT_EQ(report_value(one, "omega"), "1");

    const auto three = fit_report(3, run);
    EXPECT_NEAR(std::stod(report_value(three, "omega")), 6.701102, 1e-6);
    EXPECT_LT(std::stod(report_value(three, "ks_distance")), 0.02);
    EXPECT_LT(std::abs(std::stod(report_value(three, "mean_rel_error"))), 0.005);
    EXPECT_EQ(fit_report(3, run), three);
    EXPECT_NE(three.find("i,weight,shape,rate,mixing\n0,"), std::string::npos);
}

TEST(Validation, QuickLevelPasses) {
    const auto report = run_validation(ValidationLevel::quick);
    EXPECT_TRUE(report.passed()) << report.to_text();
    EXPECT_GE(report.checks.size(), 10u);
    EXPECT_EQ(parse_validation_level("full"), ValidationLevel::full);
    EXPECT_THROW(parse_validation_level("slow"), std::invalid_argument);
}

}  // namespace
