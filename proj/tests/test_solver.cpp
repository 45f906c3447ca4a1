#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "bandsat/generator.hpp"
#include "bandsat/solver.hpp"
#include "support/oracles.hpp"

using namespace bandsat;

namespace {

SolveConfig step_config(uint64_t steps, uint64_t seed = 1) {
    SolveConfig cfg;
    cfg.max_steps = steps;
    cfg.cutoff = 60.0;  // generous; the step budget is the real limit
    cfg.seed = seed;
    return cfg;
}

InstanceSpec bench_spec(int vars) {
    InstanceSpec spec;
    spec.num_vars = vars;
    spec.num_hard = vars + vars / 3;
    spec.num_soft = 3 * vars;
    spec.len_min = 2;
    spec.len_max = 3;
    spec.weight_max = 9;
    spec.planted = true;
    return spec;
}

} // namespace

TEST_CASE("config validation rejects out-of-range parameters") {
    SolveConfig cfg;
    cfg.k = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.d = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.gamma = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.gamma = 1.5;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.arm_num = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.lambda = -0.5;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.cutoff = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sample_one = cfg.sample_all = true;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("variant names map onto the expected flags") {
    SolveConfig base;
    REQUIRE(apply_variant(base, "sample1").sample_one);
    REQUIRE(apply_variant(base, "sampleall").sample_all);
    REQUIRE(apply_variant(base, "nodelay").no_delay);
    REQUIRE(apply_variant(base, "nobinary").no_binary);
    REQUIRE(apply_variant(base, "fast").fast);
    SolveConfig same = apply_variant(base, "default");
    REQUIRE_FALSE(same.sample_one);
    REQUIRE_THROWS_AS(apply_variant(base, "bogus"), std::invalid_argument);
}

TEST_CASE("bms_pick returns the only candidate") {
    // single positive-score variable: falsified soft unit (x1)
    Formula f = parse_wcnf("5 1 0\nh 2 0\n");
    SearchState s(f, Model{0, 1});
    REQUIRE(s.good_vars().size() == 1);
    Rng rng(1);
    for (int i = 0; i < 10; ++i) REQUIRE(bms_pick(s, 15, rng) == 1);
}

TEST_CASE("bms_pick with k=1 samples uniformly") {
    // two falsified soft units give vars 1 and 2 positive scores
    Formula f = parse_wcnf("5 1 0\n5 2 0\n");
    SearchState s(f, Model{0, 0});
    REQUIRE(s.good_vars().size() == 2);
    Rng rng(8);
    int first = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i)
        if (bms_pick(s, 1, rng) == 1) ++first;
    REQUIRE(first > 1700);
    REQUIRE(first < 2300);
}

TEST_CASE("bms_pick prefers the higher score at the documented rate") {
    // scores: x1 -> +5, x2 -> +9 (falsified soft units, dyn weight = weight)
    Formula f = parse_wcnf("5 1 0\n9 2 0\n");
    SearchState s(f, Model{0, 0});
    REQUIRE(s.score(1) == 5);
    REQUIRE(s.score(2) == 9);
    Rng rng(31415);
    const int trials = 10000;
    const int k = 15;
    int higher = 0;
    for (int i = 0; i < trials; ++i)
        if (bms_pick(s, k, rng) == 2) ++higher;
    // x2 wins unless it is never sampled: P = 1 - 2^-k exactly; allow the
    // documented slack of one extra miss probability plus three sigma
    double p = 1.0 - std::pow(0.5, k);
    double sigma = std::sqrt(p * (1.0 - p) / trials);
    double bound = 1.0 - 2.0 * std::pow(0.5, k) - 3.0 * sigma;
    REQUIRE((double)higher / trials >= bound);
}

TEST_CASE("bms_pick breaks score ties toward the least recently flipped") {
    Formula f = parse_wcnf("5 1 0\n5 2 0\n5 3 0\n");
    SearchState s(f, Model{0, 0, 0});
    s.flip(1);
    s.flip(1);  // ages: x1 newest, x2/x3 untouched (age 0)
    REQUIRE(s.score(1) == 5);
    Rng rng(4);
    for (int i = 0; i < 50; ++i) REQUIRE(bms_pick(s, 40, rng) != 1);
}

TEST_CASE("solve finds the brute-force optimum of the documented instance") {
    // hard (x1), soft (~x1, w=2), soft (x2, w=1): optimum cost 2
    Formula f = parse_wcnf("h 1 0\n2 -1 0\n1 2 0\n");
    REQUIRE(testing::enumerate_optimum(f) == Cost::of(2));
    SolveResult res = solve(f, step_config(20000));
    REQUIRE(res.status == SolveStatus::Feasible);
    REQUIRE(res.best_cost == Cost::of(2));
    REQUIRE(validate_model(f, res.best_assignment) == Cost::of(2));
}

TEST_CASE("an all-satisfiable instance exits early at cost zero") {
    Formula f = parse_wcnf("h 1 2 0\n3 1 0\n");
    SolveConfig cfg = step_config(1000000);
    SolveResult res = solve(f, cfg);
    REQUIRE(res.best_cost == Cost::of(0));
    REQUIRE(res.steps < 1000000);  // early exit, not budget exhaustion
    REQUIRE(validate_model(f, res.best_assignment) == Cost::of(0));
}

TEST_CASE("contradictory hard clauses report no feasible assignment") {
    Formula f = parse_wcnf("h 1 0\nh -1 0\n");
    SolveConfig cfg;
    cfg.cutoff = 0.1;
    cfg.seed = 3;
    SolveResult res = solve(f, cfg);
    REQUIRE(res.status == SolveStatus::NoFeasibleFound);
    REQUIRE_FALSE(res.best_cost.finite());
    REQUIRE(res.trace.empty());
    REQUIRE(res.stats.arm_picks == 0);
}

TEST_CASE("hard-only satisfiable instances never touch the bandit") {
    Formula f = parse_wcnf("h 1 2 0\nh -1 2 0\nh 1 -2 0\n");
    SolveResult res = solve(f, step_config(100000));
    REQUIRE(res.best_cost == Cost::of(0));
    REQUIRE(res.stats.arm_picks == 0);
    REQUIRE(res.local_optima == 0);
}

TEST_CASE("solve matches exhaustive enumeration on random planted instances") {
    Rng rng(606);
    int solved = 0;
    const int n = 12;
    for (int i = 0; i < n; ++i) {
        GeneratedInstance inst = generate_instance(bench_spec(14), rng);
        Cost optimum = testing::enumerate_optimum(inst.formula);
        REQUIRE(optimum.finite());  // planted => feasible
        SolveResult res = solve(inst.formula, step_config(300000, /*seed=*/i + 1));
        REQUIRE(res.best_cost.finite());
        REQUIRE(validate_model(inst.formula, res.best_assignment) == res.best_cost);
        REQUIRE(optimum <= res.best_cost);
        if (res.best_cost == optimum) ++solved;
    }
    REQUIRE(solved >= n - 1);
}

TEST_CASE("the improvement trace is strictly decreasing and consistent") {
    Rng rng(99);
    GeneratedInstance inst = generate_instance(bench_spec(20), rng);
    SolveResult res = solve(inst.formula, step_config(200000));
    REQUIRE_FALSE(res.trace.empty());
    for (size_t i = 1; i < res.trace.size(); ++i) {
        REQUIRE(res.trace[i].cost < res.trace[i - 1].cost);
        REQUIRE(res.trace[i].steps >= res.trace[i - 1].steps);
    }
    REQUIRE(res.trace.back().cost == res.best_cost.value());
    REQUIRE(res.time_to_best <= res.total_seconds);
    // every feasible local optimum pulled exactly one arm
    REQUIRE(res.stats.arm_picks == res.local_optima);
    REQUIRE(res.stats.weight_updates == res.stats.arm_picks + res.stats.hard_clause_picks);
}

TEST_CASE("identical seed and step budget reproduce the run exactly") {
    Rng rng(1234);
    GeneratedInstance inst = generate_instance(bench_spec(24), rng);
    SolveConfig cfg = step_config(150000, 42);
    SolveResult a = solve(inst.formula, cfg);
    SolveResult b = solve(inst.formula, cfg);
    REQUIRE(a.best_cost == b.best_cost);
    REQUIRE(a.best_assignment == b.best_assignment);
    REQUIRE(a.steps == b.steps);
    REQUIRE(a.local_optima == b.local_optima);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        REQUIRE(a.trace[i].cost == b.trace[i].cost);
        REQUIRE(a.trace[i].steps == b.trace[i].steps);
    }

}

TEST_CASE("the fast variant stops at the first feasible assignment") {
    Rng rng(31);
    GeneratedInstance inst = generate_instance(bench_spec(24), rng);
    SolveConfig cfg = step_config(200000);
    SolveConfig fast = apply_variant(cfg, "fast");
    SolveResult full = solve(inst.formula, cfg);
    SolveResult quick = solve(inst.formula, fast);
    REQUIRE(quick.status == SolveStatus::Feasible);
    REQUIRE(quick.steps <= full.steps);
    REQUIRE(full.best_cost <= quick.best_cost);
    REQUIRE(validate_model(inst.formula, quick.best_assignment) == quick.best_cost);
}

TEST_CASE("callback observes each improvement as it happens") {
    Rng rng(12);
    GeneratedInstance inst = generate_instance(bench_spec(18), rng);
    std::vector<uint64_t> seen;
    SolveResult res = solve(inst.formula, step_config(100000),
                            [&](const Improvement& imp) { seen.push_back(imp.cost); });
    REQUIRE(seen.size() == res.trace.size());
    for (size_t i = 0; i < seen.size(); ++i) REQUIRE(seen[i] == res.trace[i].cost);
}

TEST_CASE("ablation variants still reach the documented optimum") {
    Formula f = parse_wcnf("h 1 0\n2 -1 0\n1 2 0\n");
    for (const char* name : {"sample1", "sampleall", "nodelay", "nobinary"}) {
        SolveConfig cfg = apply_variant(step_config(30000, 9), name);
        SolveResult res = solve(f, cfg);
        INFO(name);
        REQUIRE(res.best_cost == Cost::of(2));
    }
}
