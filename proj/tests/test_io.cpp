#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mrwbandit/experiment.hpp"
#include "mrwbandit/io.hpp"
#include "mrwbandit/svg.hpp"

using namespace mrwb;

namespace {

AdversaryConfig defaults(Round T, std::size_t k, std::uint64_t seed) {
    AdversaryConfig c;
    c.horizon = T;
    c.arms = k;
    c.seed = seed;
    return c;
}

std::vector<std::string> data_rows(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        const auto line = text.substr(start, end - start);
        if (!line.empty() && line[0] != '#') out.push_back(line);
        start = end == std::string::npos ? text.size() : end + 1;
    }
    return out;
}

ExperimentConfig small_sweep() {
    ExperimentConfig c;
    c.horizons = {64, 128, 256};
    c.policies = {"exp3:auto", "betc:tau=auto"};
    c.trials = 5;
    c.seed = 9;
    return c;
}

}  // namespace

TEST(Numbers, ShortestRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(parse_double(format_number(v)), v);
    }
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.25), "0.25");
    EXPECT_EQ(format_number(3.0), "3");
}

TEST(Numbers, RejectGarbage) {
    EXPECT_THROW(parse_double("0.5x"), FormatError);
    EXPECT_THROW(parse_double(""), FormatError);
    EXPECT_THROW(parse_u64("-1"), FormatError);
    EXPECT_EQ(parse_u64("18446744073709551615"), 18446744073709551615ull);
}

TEST(Files, SidecarPath) {
    EXPECT_EQ(sidecar_path("out/losses.csv"), std::filesystem::path("out/losses.meta.json"));
}

TEST(Files, MetadataLine) {
    Json j;
    j["T"] = 4;
    EXPECT_EQ(metadata_line(j), "# mrwbandit 0.1.0 {\"T\":4}\n");
}

TEST(Trajectory, CsvRoundTrip) {
    const auto tr = sample_trajectory(ParentFunction::mrw(), 100, 0.1, 3);
    const auto text = trajectory_csv(tr);
    const auto rows = data_rows(text);
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows[0], "t,w");
    EXPECT_EQ(rows[1], "0,0");
    const auto points = parse_trajectory_csv(text);
    ASSERT_EQ(points.size(), 101u);
    for (Round t = 0; t <= 100; ++t) {
        EXPECT_EQ(points[t].t, t);
        EXPECT_EQ(points[t].w, tr.values[t]);
    }
    const auto meta = trajectory_metadata(tr);
    EXPECT_EQ(meta["kind"], "mrw");
    EXPECT_EQ(meta["T"], 100);
    EXPECT_EQ(meta["sigma"], 0.1);
    EXPECT_EQ(meta["seed"], 3);
}

TEST(Losses, RowCountAndRoundTrip) {
    const auto seq = generate(defaults(50, 3, 8));
    const auto text = loss_csv(seq);
    const auto rows = data_rows(text);
    EXPECT_EQ(rows.size(), 50u * 3 + 1);
    EXPECT_EQ(rows[0], "t,x,loss");
    EXPECT_EQ(text.rfind("# mrwbandit 0.1.0 {", 0), 0u);

    const auto meta = loss_metadata(seq);
    const auto back = parse_loss_csv(text, meta);
    EXPECT_EQ(back.best_arm(), seq.best_arm());
    for (Round t = 1; t <= 50; ++t)
        for (Action x = 1; x <= 3; ++x) ASSERT_EQ(back.loss(t, x), seq.loss(t, x));
    EXPECT_EQ(data_rows(loss_csv(back)), rows);
}

TEST(Losses, MetadataFlagsOverrides) {
    auto cfg = defaults(16, 2, 1);
    EXPECT_EQ(loss_metadata(generate(cfg))["overridden"], false);
    cfg.forced_best_arm = 2;
    const auto meta = loss_metadata(generate(cfg));
    EXPECT_EQ(meta["overridden"], true);
    EXPECT_EQ(meta["chi"], 2);
    for (const char* key : {"T", "k", "c", "epsilon", "sigma", "variant", "seed"}) EXPECT_TRUE(meta.contains(key));
}

TEST(Losses, ParseErrorsCarryLineNumbers) {
    const std::string head = "# comment\nt,x,loss\n";
    try {
        parse_loss_csv(head + "1,1,0.5\n1,2,abc\n");
        ADD_FAILURE();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_loss_csv(head + "1,1,0.5\n2,2,0.5\n"), FormatError);  // incomplete grid
    EXPECT_THROW(parse_loss_csv("t,w\n0,0\n"), FormatError);
    EXPECT_THROW(parse_loss_csv(head + "1,1,1.5\n1,2,0.5\n"), FormatError);
    EXPECT_THROW(parse_loss_csv(head + "1,1,0.5\n1,1,0.5\n"), FormatError);  // duplicate cell
}

TEST(Results, CsvRoundTrip) {
    std::vector<ResultRow> rows(2);
    rows[0] = {0, 11, 64, 2, 1.0, "exp3:auto", 12.5, 12.75, 30, 31.25, 33};
    rows[1] = {1, 12, 64, 2, 1.0, "exp3:auto", 10.0, std::nullopt, 28, 30.0, std::nullopt};
    Json params;
    params["seed"] = 3;
    const auto text = results_csv(params, rows);
    const auto lines = data_rows(text);
    EXPECT_EQ(lines[0], results_header());
    EXPECT_EQ(lines[2], "1,12,64,2,1,exp3:auto,10,,28,30,");
    const auto back = parse_results_csv(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].regret_unclipped, 12.75);
    EXPECT_EQ(back[0].plays_of_best_arm, std::size_t{33});
    EXPECT_FALSE(back[1].regret_unclipped);
    EXPECT_EQ(results_csv(params, back), text);
}

TEST(Results, SchemaMismatch) {
    EXPECT_THROW(parse_results_csv("t,w\n0,0\n"), FormatError);
    EXPECT_THROW(parse_results_csv(std::string(results_header()) + "\n1,2,3\n"), FormatError);
}

TEST(Config, RoundTrip) {
    auto c = small_sweep();
    c.switch_costs = {1.0, 8.0};
    c.epsilon_override = 0.05;
    c.forced_best_arm = 2;
    c.emit.actions = true;
    c.output_dir = "runs/a";
    const auto j = to_json(c);
    const auto back = parse_experiment_config(j);
    EXPECT_EQ(back, c);
    EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Config, ScalarHorizonAndDefaults) {
    const auto c = parse_experiment_config(Json::parse(R"({"adversary": {"T": 1024}, "seed": 1})"));
    EXPECT_EQ(c.horizons, std::vector<Round>{1024});
    EXPECT_EQ(c.arms, 2u);
    EXPECT_EQ(c.switch_costs, std::vector<double>{1.0});
    EXPECT_EQ(c.variant, LossVariant::Clipped);
    EXPECT_EQ(c.process, ParentKind::Mrw);
    EXPECT_FALSE(c.adversary(1024, 1.0).overridden());
}

TEST(Config, StrictParsing) {
    const char* bad[] = {
        R"({"adversary": {"T": 64}, "trials": 2, "colour": 1})",
        R"({"adversary": {"T": 64, "K": 2}})",
        R"({"adversary": {"T": "64"}})",
        R"({"adversary": {"T": 1}})",
        R"({"adversary": {"T": 64}, "policies": ["ucb"]})",
        R"({"adversary": {"T": 64}, "trials": 0})",
        R"({"adversary": {"T": 64, "variant": "gaussian"}})",
        R"({"policies": ["exp3:auto"]})",
        R"([1, 2])",
    };
    for (const char* text : bad) EXPECT_THROW(parse_experiment_config(Json::parse(text)), std::invalid_argument) << text;
}

TEST(Sweep, RowCountOrderAndPairing) {
    const auto rows = run_sweep(small_sweep(), 2);
    ASSERT_EQ(rows.size(), 30u);
    EXPECT_EQ(rows[0].horizon, 64u);
    EXPECT_EQ(rows[0].policy, "exp3:auto");
    EXPECT_EQ(rows[5].policy, "betc:tau=auto");
    EXPECT_EQ(rows[29].horizon, 256u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(rows[i].outcome.adversary_seed, rows[i + 5].outcome.adversary_seed);
    for (const auto& r : rows) ASSERT_TRUE(r.outcome.result);
}

TEST(Sweep, DeterministicAndJobIndependent) {
    Json params;
    const auto a = results_csv(params, result_rows(run_sweep(small_sweep(), 1)));
    const auto b = results_csv(params, result_rows(run_sweep(small_sweep(), 4)));
    EXPECT_EQ(a, b);
    auto other = small_sweep();
    other.seed = 10;
    EXPECT_NE(a, results_csv(params, result_rows(run_sweep(other, 1))));
}

TEST(Sweep, RequiresSeed) {
    auto c = small_sweep();
    c.seed.reset();
    EXPECT_THROW(run_sweep(c, 1), std::invalid_argument);
}

TEST(Summary, RecoversInjectedExponent) {
    std::vector<ResultRow> rows;
    for (Round T : {100u, 200u, 400u, 800u, 1600u}) {
        for (std::size_t trial = 0; trial < 3; ++trial) {
            ResultRow r;
            r.trial = trial;
            r.horizon = T;
            r.arms = 2;
            r.switch_cost = 1.0;
            r.policy = "stub";
            r.regret = 2.0 * std::pow(static_cast<double>(T), 0.7);
            r.switches = T / 10;
            rows.push_back(r);
        }
    }
    const auto s = summarize_results(rows);
    ASSERT_EQ(s.size(), 1u);
    ASSERT_TRUE(s[0].regret_fit);
    EXPECT_NEAR(s[0].regret_fit->slope, 0.7, 1e-9);
    EXPECT_NEAR(s[0].switch_fit->slope, 1.0, 1e-9);
    EXPECT_EQ(s[0].regret.size(), 5u);
}

TEST(Summary, NonFiniteBecomesNull) {
    std::vector<ResultRow> rows(2);
    rows[0] = {0, 1, 64, 2, 1.0, "p", 1.0, std::nullopt, 1, 0.0, std::nullopt};
    rows[1] = {0, 1, 128, 2, 1.0, "p", 2.0, std::nullopt, 1, 0.0, std::nullopt};
    const auto j = summary_json(summarize_results(rows));
    EXPECT_TRUE(j[0]["regret_fit"]["slope_se"].is_null());
    EXPECT_TRUE(Json::parse(j.dump()).is_array());
}

TEST(Svg, SeriesAndSlopeAnnotation) {
    PlotSpec spec;
    spec.log_x = spec.log_y = true;
    for (double b : {0.5, 2.0 / 3.0}) {
        PlotSeries s;
        s.label = "slope<" + std::to_string(b) + ">";
        for (double x : {256.0, 512.0, 1024.0}) {
            s.x.push_back(x);
            s.y.push_back(std::pow(x, b));
            s.yerr.push_back(1.0);
        }
        s.slope = b;
        spec.series.push_back(s);
    }
    const auto svg = render_svg(spec);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    const std::regex group("<g class=\"series\"");
    EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), group), std::sregex_iterator()), 2);
    EXPECT_NE(svg.find("data-slope=\"0.667\""), std::string::npos);
    EXPECT_NE(svg.find("data-slope=\"0.500\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"errorbar\""), std::string::npos);
    EXPECT_NE(svg.find("slope&lt;"), std::string::npos);
    EXPECT_EQ(svg.find("slope<0"), std::string::npos);
}

TEST(Svg, FlatTrajectory) {
    PlotSpec spec;
    spec.markers = false;
    PlotSeries s;
    const auto tr = sample_trajectory(ParentFunction::mrw(), 64, 0.0, 1);
    for (Round t = 0; t <= 64; ++t) {
        s.x.push_back(static_cast<double>(t));
        s.y.push_back(tr.values[t]);
    }
    spec.series.push_back(s);
    const auto svg = render_svg(spec);
    const auto start = svg.find("points=\"") + 8;
    const auto points = svg.substr(start, svg.find('"', start) - start);
    std::set<std::string> ys;
    const std::regex pair("[0-9.]+,([0-9.]+)");
    for (auto it = std::sregex_iterator(points.begin(), points.end(), pair); it != std::sregex_iterator(); ++it)
        ys.insert((*it)[1]);
    EXPECT_EQ(ys.size(), 1u);
}

TEST(Svg, RejectsRaggedSeries) {
    PlotSpec spec;
    spec.series.push_back({"bad", {1, 2}, {1}, {}, std::nullopt});
    EXPECT_THROW(render_svg(spec), std::invalid_argument);
}
