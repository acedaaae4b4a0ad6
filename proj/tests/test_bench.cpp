#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "saikry/bench.hpp"

using namespace saikry;

namespace {

bool records_equal_except_time(const std::vector<BenchRecord>& a,
                               const std::vector<BenchRecord>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].vector_index != b[i].vector_index) return false;
        if (a[i].delta_used != b[i].delta_used) return false;
        if (a[i].arnoldi_iters != b[i].arnoldi_iters) return false;
        if (a[i].lu_count != b[i].lu_count) return false;
        if (a[i].residual_norm != b[i].residual_norm) return false;
    }
    return true;
}

RunConfig small_config(const std::string& strategy) {
    RunConfig cfg;
    cfg.problem = "conv_diff";
    cfg.n = 10;
    cfg.t = 1e-4;
    cfg.tol = 1e-5;
    cfg.max_iters = 200;
    cfg.strategy = strategy;
    cfg.num_vectors = 4;
    cfg.K = 8;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing with comments and overrides", "[bench]") {
    std::istringstream is(
        "# a comment\n"
        "problem = aniso\n"
        "n = 32   # inline comment\n"
        "t = 0.1\n"
        "strategy = incremental\n"
        "\n"
        "seed = 7\n");
    RunConfig cfg = parse_config(is);
    CHECK(cfg.problem == "aniso");
    CHECK(cfg.n == 32);
    CHECK(cfg.t == 0.1);
    CHECK(cfg.strategy == "incremental");
    CHECK(cfg.seed == 7);
    CHECK(cfg.fixed_delta_value() == 0.07);
    CHECK(cfg.interval_hi_value() == 0.07);

    apply_config_entry(cfg, "fixed_delta", "0.05");
    CHECK(cfg.fixed_delta_value() == 0.05);
    CHECK_THROWS_AS(apply_config_entry(cfg, "nope", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "t", "abc"), ConfigError);

    std::istringstream bad("just a line\n");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("config validation", "[bench]") {
    RunConfig cfg;
    cfg.problem = "bogus";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.strategy = "bogus";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.t = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.interval_lo = 0.2;  // above the default hi
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("csv round trip is exact", "[bench]") {
    std::vector<BenchRecord> records{
        {1, 0.1, 88, 1, 0.012345678901234567, 9.87e-7, 0.012345678901234567},
        {2, 0.1, 90, 1, 1.0 / 3.0, 1e-300, 0.345678901234567891},
    };
    BenchSummary summary;
    summary.problem = "conv_diff";
    summary.n = 200;
    summary.t = 1e-4;
    summary.tol = 1e-6;
    summary.seed = 42;
    summary.strategy = "fixed";
    summary.num_vectors = 2;
    summary.mean_arnoldi_iters = 89.0;
    summary.total_arnoldi_iters = 178;
    summary.total_lu = 1;
    summary.total_time_s = 0.36;
    summary.delta_star = 0.04321;
    summary.brent_evals = 17;
    summary.unconverged = {2};

    std::stringstream ss;
    emit_csv(records, summary, ss);
    const std::string text = ss.str();
    CHECK(text.rfind(kCsvHeader, 0) == 0);

    std::istringstream is(text);
    const BenchResult parsed = parse_csv(is);
    REQUIRE(parsed.records.size() == 2);
    CHECK(parsed.records[0] == records[0]);
    CHECK(parsed.records[1] == records[1]);
    CHECK(parsed.summary.problem == "conv_diff");
    CHECK(parsed.summary.t == 1e-4);
    CHECK(parsed.summary.seed == 42);
    CHECK(parsed.summary.delta_star == 0.04321);
    CHECK(parsed.summary.brent_evals == 17);
    CHECK(parsed.summary.unconverged == std::vector<int>{2});
}

TEST_CASE("csv emit with no records is header plus summary", "[bench]") {
    std::stringstream ss;
    emit_csv({}, BenchSummary{}, ss);
    std::string first;
    std::getline(ss, first);
    CHECK(first == kCsvHeader);
}

TEST_CASE("csv parser rejects bad header", "[bench]") {
    std::istringstream is("wrong,header\n");
    CHECK_THROWS(parse_csv(is));
}

TEST_CASE("run_benchmark with zero vectors", "[bench]") {
    RunConfig cfg = small_config("fixed");
    cfg.num_vectors = 0;
    const BenchResult r = run_benchmark(cfg);
    CHECK(r.records.empty());
    CHECK(r.summary.total_arnoldi_iters == 0);
    CHECK(r.summary.mean_arnoldi_iters == 0.0);
}

TEST_CASE("fixed strategy accounting", "[bench]") {
    const BenchResult r = run_benchmark(small_config("fixed"));
    REQUIRE(r.records.size() == 4);
    CHECK(r.summary.total_lu == 1);
    double prev = 0.0;
    for (const BenchRecord& rec : r.records) {
        CHECK(rec.lu_count == 1);
        CHECK(rec.delta_used == 0.1);
        CHECK(rec.residual_norm < 1e-5);
        CHECK(rec.cumulative_time_s >= prev);
        prev = rec.cumulative_time_s;
    }
    CHECK(r.summary.unconverged.empty());
}

TEST_CASE("optimize_and_run strategy accounting", "[bench]") {
    const BenchResult r = run_benchmark(small_config("optimize_and_run"));
    REQUIRE(r.records.size() == 5);  // record 0 + 4 vectors
    CHECK(r.records[0].vector_index == 0);
    REQUIRE(r.summary.brent_evals.has_value());
    CHECK(r.records[0].lu_count == *r.summary.brent_evals);
    CHECK(r.summary.total_lu == *r.summary.brent_evals + 1);
    REQUIRE(r.summary.delta_star.has_value());
    CHECK(*r.summary.delta_star >= 0.01);
    CHECK(*r.summary.delta_star <= 0.1);
    for (size_t i = 1; i < r.records.size(); ++i)
        CHECK(r.records[i].delta_used == *r.summary.delta_star);
}

TEST_CASE("incremental strategy accounting", "[bench]") {
    const BenchResult r = run_benchmark(small_config("incremental"));
    REQUIRE(r.records.size() == 4);
    REQUIRE(r.summary.phase1_length.has_value());
    // With only 4 vectors the bracket cannot close (needs 14 halvings):
    // every vector is phase 1 and pays its own factorization.
    CHECK(*r.summary.phase1_length == 4);
    CHECK(r.summary.total_lu == 4);
    CHECK(r.records[0].delta_used == interval_midpoint(ShiftInterval{0.01, 0.1}));
}

TEST_CASE("run_benchmark is deterministic modulo time columns", "[bench]") {
    for (const char* strategy : {"fixed", "optimize_and_run", "incremental"}) {
        const BenchResult a = run_benchmark(small_config(strategy));
        const BenchResult b = run_benchmark(small_config(strategy));
        INFO(strategy);
        CHECK(records_equal_except_time(a.records, b.records));
        CHECK(a.summary.total_arnoldi_iters == b.summary.total_arnoldi_iters);
    }
}

TEST_CASE("crossover trivial cases", "[bench]") {
    auto make = [](std::vector<double> times, std::vector<int> iters,
                   bool with_offset_record) {
        BenchResult r;
        r.summary.problem = "conv_diff";
        r.summary.n = 10;
        r.summary.t = 1e-4;
        r.summary.tol = 1e-5;
        r.summary.seed = 5;
        r.summary.strategy = with_offset_record ? "optimize_and_run" : "fixed";
        if (with_offset_record) r.records.push_back({0, 0.05, 0, 3, 0.0, 0.0, 0.0});
        double cum = 0.0;
        for (size_t i = 0; i < times.size(); ++i) {
            cum = times[i];
            r.records.push_back({static_cast<int>(i) + 1, 0.1, iters[i], 1, 0.0, 1e-7, cum});
        }
        return r;
    };

    // Adaptive strictly cheaper from vector 1, zero offset.
    const BenchResult fixed = make({1.0, 2.0, 3.0}, {10, 10, 10}, false);
    const BenchResult cheap = make({0.5, 1.0, 1.5}, {5, 5, 5}, true);
    const CrossoverReport rep = crossover_report(fixed, cheap);
    REQUIRE(rep.m_min_time.has_value());
    CHECK(*rep.m_min_time == 1);
    REQUIRE(rep.m_min_iters.has_value());
    CHECK(*rep.m_min_iters == 1);

    // Identical curves: no crossover.
    const CrossoverReport none = crossover_report(fixed, make({1.0, 2.0, 3.0}, {10, 10, 10}, true));
    CHECK_FALSE(none.m_min_time.has_value());
    CHECK_FALSE(none.m_min_iters.has_value());
    CHECK(none.table.find("m_min_time = none") != std::string::npos);

    // Mismatched configurations are rejected.
    BenchResult other = make({0.5}, {5}, true);
    other.summary.seed = 99;
    CHECK_THROWS_AS(crossover_report(fixed, other), ConfigError);
    CHECK_THROWS_AS(crossover_report(cheap, fixed), ConfigError);
}

TEST_CASE("crossover charges the optimization offset", "[bench]") {
    BenchResult fixed, adaptive;
    for (BenchResult* r : {&fixed, &adaptive}) {
        r->summary.problem = "conv_diff";
        r->summary.n = 10;
        r->summary.t = 1e-4;
        r->summary.tol = 1e-5;
        r->summary.seed = 1;
    }
    fixed.summary.strategy = "fixed";
    adaptive.summary.strategy = "optimize_and_run";
    // Fixed: 10 iterations per vector. Adaptive: 6 per vector but a 30
    // iteration optimization offset -> crossover at vector 8
    // (fixed 8*10 = 80 > 30 + 8*6 = 78).
    adaptive.records.push_back({0, 0.05, 30, 3, 0.0, 0.0, 0.0});
    double fc = 0.0, ac = 0.0;
    for (int i = 1; i <= 10; ++i) {
        fc += 1.0;
        ac += 0.6;
        fixed.records.push_back({i, 0.1, 10, 1, 0.0, 1e-7, fc});
        adaptive.records.push_back({i, 0.05, 6, 4, 0.0, 1e-7, ac});
    }
    const CrossoverReport rep = crossover_report(fixed, adaptive);
    REQUIRE(rep.m_min_iters.has_value());
    CHECK(*rep.m_min_iters == 8);
}
