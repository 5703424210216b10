#include <catch2/catch_amalgamated.hpp>

#include "bahc/benchmark.hpp"
#include "bahc/json_io.hpp"

using namespace bahc;

namespace {

SimConfig tiny_config() {
    SimConfig cfg;
    cfg.d = 5;
    cfg.c_values = {2, 3};
    cfg.n_values = {20};
    cfg.distributions = {Distribution::gaussian(), Distribution::student(3)};
    cfg.replications = 4;
    cfg.methods = {parse_method("bayescorr"), parse_method("bayescorrauto"),
                   parse_method("averageabs"), parse_method("bic")};
    cfg.master_seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("parse_method") {
    REQUIRE(parse_method("bayescov").measure == Measure::BayesCov);
    REQUIRE_FALSE(parse_method("bayescov").auto_stop);
    REQUIRE(parse_method("bayescorrauto").auto_stop);
    REQUIRE(parse_method("bicauto").measure == Measure::Bic);
    const MethodSpec ward = parse_method("wardabs");
    REQUIRE(ward.measure == Measure::LinkWard);
    REQUIRE(ward.use_abs);
    REQUIRE_THROWS_AS(parse_method("wardauto"), InvalidArgumentError);
    REQUIRE_THROWS_AS(parse_method("bayescovabs"), InvalidArgumentError);
    REQUIRE_THROWS_AS(parse_method("nope"), InvalidArgumentError);
}

TEST_CASE("zero replications produce an empty table") {
    SimConfig cfg = tiny_config();
    cfg.replications = 0;
    REQUIRE(run_benchmark(cfg).empty());
    const std::string csv = results_to_csv(run_benchmark(cfg));
    REQUIRE(csv == "d,c,n,distribution,method,replication,adjusted_rand,rand,exact,auto_k,error\n");
}

TEST_CASE("row count and canonical ordering") {
    const SimConfig cfg = tiny_config();
    const auto results = run_benchmark(cfg);
    REQUIRE(results.size() == 2u * 1u * 2u * 4u * 4u);
    std::size_t idx = 0;
    for (int c : cfg.c_values)
        for (int n : cfg.n_values)
            for (const auto& dist : cfg.distributions)
                for (int rep = 0; rep < cfg.replications; ++rep)
                    for (const auto& m : cfg.methods) {
                        const SimResult& r = results[idx++];
                        REQUIRE(r.c == c);
                        REQUIRE(r.n == n);
                        REQUIRE(r.distribution == dist.name());
                        REQUIRE(r.replication == rep);
                        REQUIRE(r.method == m.name);
                        REQUIRE(r.ok);
                        REQUIRE(r.adjusted_rand <= 1.0);
                        if (m.auto_stop) REQUIRE(r.auto_k.has_value());
                        else REQUIRE_FALSE(r.auto_k.has_value());
                    }
}

TEST_CASE("identical master seeds give identical tables regardless of threads") {
    const SimConfig cfg = tiny_config();
    setenv("BAHC_THREADS", "1", 1);
    const auto a = run_benchmark(cfg);
    setenv("BAHC_THREADS", "4", 1);
    const auto b = run_benchmark(cfg);
    unsetenv("BAHC_THREADS");
    REQUIRE(results_to_csv(a) == results_to_csv(b));

    SimConfig other = cfg;
    other.master_seed = 100;
    REQUIRE(results_to_csv(run_benchmark(other)) != results_to_csv(a));
}

TEST_CASE("summaries pool per method") {
    const SimConfig cfg = tiny_config();
    const auto results = run_benchmark(cfg);
    const auto sums = summarize(results, cfg.methods);
    REQUIRE(sums.size() == cfg.methods.size());
    for (const auto& s : sums) {
        REQUIRE(s.runs == 16);
        REQUIRE(s.failures == 0);
        REQUIRE(s.min_adj_rand <= s.p05_adj_rand);
        REQUIRE(s.p05_adj_rand <= s.p25_adj_rand);
        REQUIRE(s.p25_adj_rand <= s.median_adj_rand);
        REQUIRE(s.exact_proportion >= 0.0);
        REQUIRE(s.exact_proportion <= 1.0);
    }
    const std::string csv = summary_to_csv(sums);
    REQUIRE(csv.find("bayescorrauto,") != std::string::npos);
}

TEST_CASE("failures are recorded per row, not fatal") {
    SimConfig cfg = tiny_config();
    cfg.d = 6;
    cfg.n_values = {4};  // n_eff = 3 < D: plug-in measures must fail
    cfg.methods = {parse_method("infomut"), parse_method("bayescorr")};
    cfg.replications = 2;
    const auto results = run_benchmark(cfg);
    REQUIRE(results.size() == 2u * 2u * 2u * 2u);
    int mi_fail = 0, bayes_ok = 0;
    for (const auto& r : results) {
        if (r.method == "infomut") {
            REQUIRE_FALSE(r.ok);
            REQUIRE_FALSE(r.error.empty());
            ++mi_fail;
        }
        if (r.method == "bayescorr" && r.ok) ++bayes_ok;
    }
    REQUIRE(mi_fail == 8);
    REQUIRE(bayes_ok == 8);
    const auto sums = summarize(results, cfg.methods);
    REQUIRE(sums[0].failures == 8);
}

TEST_CASE("SimConfig JSON parsing with field-level errors") {
    const auto j = json::parse(R"({
        "d": 5, "c_values": [2], "n_values": [20],
        "distributions": ["gaussian", "student3"],
        "replications": 1, "methods": ["bayescov", "wardabs"],
        "master_seed": 7
    })");
    const SimConfig cfg = sim_config_from_json(j);
    REQUIRE(cfg.d == 5);
    REQUIRE(cfg.distributions[1].name() == "student3");
    REQUIRE(cfg.methods[1].measure == Measure::LinkWard);

    auto bad = j;
    bad.erase("n_values");
    REQUIRE_THROWS_WITH(sim_config_from_json(bad), Catch::Matchers::ContainsSubstring("n_values"));
    bad = j;
    bad["distributions"] = {"triangular"};
    REQUIRE_THROWS_WITH(sim_config_from_json(bad), Catch::Matchers::ContainsSubstring("triangular"));
    bad = j;
    bad["c_values"] = {9};
    REQUIRE_THROWS_AS(sim_config_from_json(bad), InvalidArgumentError);
}

TEST_CASE("built-in grids") {
    const SimConfig desk = desk_scale_config(10);
    REQUIRE(desk.d == 10);
    REQUIRE(desk.replications == 100);
    REQUIRE(desk.n_values == std::vector<int>{10, 90, 170});

    const SimConfig full = full_grid_config(6);
    REQUIRE(full.replications == 500);
    REQUIRE(full.c_values.size() == 6);
    REQUIRE(full.n_values.size() == 8);
    REQUIRE(full.distributions.size() == 4);
    REQUIRE(full.distributions[1].name() == "student1");
}

TEST_CASE("quantile interpolation") {
    REQUIRE(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
    REQUIRE(quantile({1.0, 2.0, 3.0}, 0.5) == 2.0);
    REQUIRE(quantile({5.0}, 0.05) == 5.0);
    REQUIRE(quantile({1.0, 3.0}, 0.25) == 1.5);
}
