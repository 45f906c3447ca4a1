#pragma once

#include <cassert>
#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bandsat/bandit.hpp"
#include "bandsat/decimation.hpp"
#include "bandsat/rng.hpp"
#include "bandsat/state.hpp"
#include "bandsat/wcnf.hpp"

namespace bandsat {

struct SolveConfig {
    int k = 15;              // BMS samples
    int d = 20;              // reward delay window
    double gamma = 0.9;      // reward discount
    int arm_num = 20;        // sampled arms per pick
    double lambda = 1.0;     // exploration bias
    double cutoff = 300.0;   // wall-clock seconds, decimation included
    uint64_t seed = 1;
    uint64_t max_steps = 0;  // 0 = no step budget; use for bit-reproducible runs

    double sp = 0.0003;                 // smoothing probability
    uint64_t soft_cap = 100;            // falsified soft weight headroom above initial
    uint64_t soft_weight_init_cap = 100;

    bool sample_one = false;  // arm_num := 1 (uniform random falsified soft clause)
    bool sample_all = false;  // scan every falsified arm instead of sampling
    bool no_delay = false;    // d := 1
    bool no_binary = false;   // decimation skips binary-clause priority
    bool fast = false;        // return the first feasible assignment found

    void validate() const {
        if (k < 1) throw std::invalid_argument("k must be >= 1");
        if (d < 1) throw std::invalid_argument("d must be >= 1");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
        if (arm_num < 1) throw std::invalid_argument("arm_num must be >= 1");
        if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
        if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
        if (!(sp >= 0.0 && sp <= 1.0)) throw std::invalid_argument("sp must be in [0, 1]");
        if (sample_one && sample_all)
            throw std::invalid_argument("sample_one and sample_all are mutually exclusive");
    }
};

inline constexpr std::string_view kVariantNames[] = {"default", "sample1",  "sampleall",
                                                     "nodelay", "nobinary", "fast"};

// Applies one of the named configuration variants.
inline SolveConfig apply_variant(SolveConfig cfg, std::string_view variant) {
    if (variant == "default") return cfg;
    if (variant == "sample1")
        cfg.sample_one = true;
    else if (variant == "sampleall")
        cfg.sample_all = true;
    else if (variant == "nodelay")
        cfg.no_delay = true;
    else if (variant == "nobinary")
        cfg.no_binary = true;
    else if (variant == "fast")
        cfg.fast = true;
    else
        throw std::invalid_argument("unknown variant: " + std::string(variant));
    return cfg;
}

enum class SolveStatus : uint8_t { Feasible, NoFeasibleFound };

struct Improvement {
    double seconds;  // wall clock; excluded from determinism comparisons
    uint64_t steps;
    uint64_t cost;
};

struct SolveStats {
    uint64_t weight_updates = 0;     // update_clause_weights calls (local optima)
    uint64_t hard_clause_picks = 0;  // infeasible local optima escapes
    uint64_t arm_picks = 0;          // feasible local optima escapes (= N)
};

struct SolveResult {
    SolveStatus status = SolveStatus::NoFeasibleFound;
    Cost best_cost = Cost::infeasible();
    Model best_assignment;
    double time_to_best = 0.0;
    double total_seconds = 0.0;
    uint64_t steps = 0;
    uint64_t local_optima = 0;  // N, feasible local optima encountered
    std::vector<Improvement> trace;
    SolveStats stats;
};

using ImprovementCallback = std::function<void(const Improvement&)>;

// BMS: k uniform samples with replacement from the positive-score variables,
// returning the best-scoring one; score ties go to the least recently
// flipped, residual ties to the first sampled.
inline int bms_pick(const SearchState& s, int k, Rng& rng) {
    const DenseSet& good = s.good_vars();
    assert(!good.empty());
    int best = good.sample(rng);
    for (int i = 1; i < k; ++i) {
        int v = good.sample(rng);
        if (s.score(v) > s.score(best) ||
            (s.score(v) == s.score(best) && s.flip_age(v) < s.flip_age(best)))
            best = v;
    }
    return best;
}

// Highest-score variable of a clause; ties to the least recently flipped,
// then to the smallest index.
inline int best_var_in_clause(const SearchState& s, const Clause& c) {
    int best = c.lits[0].var;
    for (size_t i = 1; i < c.lits.size(); ++i) {
        int v = c.lits[i].var;
        if (s.score(v) > s.score(best) ||
            (s.score(v) == s.score(best) &&
             (s.flip_age(v) < s.flip_age(best) ||
              (s.flip_age(v) == s.flip_age(best) && v < best))))
            best = v;
    }
    return best;
}

// The main search loop. Starts from the decimation assignment, flips one
// variable per step: BMS over positive-score variables while any exist;
// otherwise updates clause weights, then satisfies a random falsified hard
// clause, or — at a feasible local optimum — rewards the recent arms and
// pulls a new one to choose the soft clause to satisfy. Stops at the wall
// cutoff (checked every 1024 steps), the step budget, or a zero-cost
// incumbent. Identical (formula, config) with a step budget reproduce the
// run bit for bit.
inline SolveResult solve(const Formula& f, const SolveConfig& cfg,
                         const ImprovementCallback& on_improvement = {}) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    Rng rng(cfg.seed);
    Model initial = decimate(f, rng, DecimationOptions{cfg.no_binary});
    SearchState state(f, initial, WeightingParams{cfg.sp, cfg.soft_cap, cfg.soft_weight_init_cap});

    const int window = cfg.no_delay ? 1 : cfg.d;
    const int arm_num = cfg.sample_one ? 1 : cfg.arm_num;
    BanditState bandit(f.num_soft(), window);

    SolveResult res;
    const auto consider_best = [&] {
        if (!state.update_best()) return;
        Improvement imp{elapsed(), state.steps(), state.best_cost().value()};
        res.time_to_best = imp.seconds;
        res.trace.push_back(imp);
        if (on_improvement) on_improvement(imp);
    };

    while (true) {
        if ((state.steps() & 1023) == 0 && elapsed() >= cfg.cutoff) break;
        if (cfg.max_steps != 0 && state.steps() >= cfg.max_steps) break;

        consider_best();
        if (state.best_cost() == Cost::of(0)) break;          // every clause satisfied
        if (cfg.fast && state.cost_now().finite()) break;     // first feasible assignment

        int flip_var;
        if (!state.good_vars().empty()) {
            flip_var = bms_pick(state, cfg.k, rng);
        } else {
            state.update_clause_weights(rng);
            ++res.stats.weight_updates;
            const Clause* target;
            if (!state.falsified_hard().empty()) {
                target = &f.clause(state.falsified_hard().sample(rng));
                ++res.stats.hard_clause_picks;
            } else {
                // feasible local optimum: credit the window, then pull
                if (bandit.last_feasible_cost) {
                    double r = reward(*bandit.last_feasible_cost, state.cost_now().value(),
                                      state.best_cost().value());
                    bandit.update_estimated_values(r, cfg.gamma);
                }
                bandit.record_feasible_optimum();
                bandit.last_feasible_cost = state.cost_now().value();
                int arm = bandit.pick_arm(state.falsified_soft(), arm_num, cfg.lambda,
                                          cfg.sample_all, rng);
                ++res.stats.arm_picks;
                target = &f.soft_clause(arm);
            }
            flip_var = best_var_in_clause(state, *target);
        }
        state.flip(flip_var);
    }
    consider_best();  // the assignment left by the very last flip counts too

    res.status = state.best_cost().finite() ? SolveStatus::Feasible : SolveStatus::NoFeasibleFound;
    res.best_cost = state.best_cost();
    res.best_assignment = state.best_assignment();
    res.steps = state.steps();
    res.local_optima = bandit.optima();
    res.total_seconds = elapsed();
    return res;
}

} // namespace bandsat
