#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

#include "bandsat/dense_set.hpp"
#include "bandsat/rng.hpp"
#include "bandsat/wcnf.hpp"

namespace bandsat {

// Clause weighting constants (SATLike-family falsified-increase scheme with
// probabilistic smoothing). Initial dynamic weights: 1 for hard clauses,
// min(original weight, soft_weight_init_cap) for soft clauses. At a local
// optimum, with probability smooth_probability every satisfied clause above
// its initial weight decays by 1; otherwise every falsified clause gains 1,
// soft clauses capped at initial + soft_cap.
struct WeightingParams {
    double smooth_probability = 0.0003;
    uint64_t soft_cap = 100;
    uint64_t soft_weight_init_cap = 100;
};

// Incremental search state over a fixed Formula: current assignment,
// per-clause satisfied-literal counts, dynamic clause weights, per-variable
// flip scores, and the falsified-clause registries, all updated in
// O(occurrences) per flip.
//
// Invariants (checked against from-scratch reconstruction in tests):
//  - sat_count(c) = number of true literals of c;
//  - sat_var(c) is the single satisfying variable whenever sat_count(c) == 1;
//  - score(v) = total dynamic weight gained by flipping v
//             = sum over falsified clauses containing v of dyn_weight
//             - sum over clauses critically satisfied by v of dyn_weight;
//  - good_vars() = { v : score(v) > 0 };
//  - falsified_hard() holds clause ids, falsified_soft() holds soft ids;
//  - cost_now() uses original soft weights only, never dynamic ones.
class SearchState {
public:
    SearchState(const Formula& f, const Model& initial, WeightingParams wp = {})
        : f_(&f),
          wp_(wp),
          assign_(f.num_vars() + 1, 0),
          sat_count_(f.num_clauses(), 0),
          sat_var_(f.num_clauses(), 0),
          dyn_weight_(f.num_clauses(), 0),
          init_weight_(f.num_clauses(), 0),
          score_(f.num_vars() + 1, 0),
          flip_age_(f.num_vars() + 1, 0),
          good_vars_(f.num_vars() + 1),
          falsified_hard_(f.num_clauses()),
          falsified_soft_(f.num_soft()) {
        assert((int)initial.size() == f.num_vars());
        for (int v = 1; v <= f.num_vars(); ++v) assign_[v] = initial[v - 1];

        for (const Clause& c : f.clauses()) {
            int64_t w = 1;
            if (c.is_soft()) w = (int64_t)std::min(c.weight, wp_.soft_weight_init_cap);
            init_weight_[c.id] = w;
            dyn_weight_[c.id] = w;

            int count = 0;
            for (Lit l : c.lits) {
                if (lit_true(l)) {
                    ++count;
                    sat_var_[c.id] = l.var;
                }
            }
            sat_count_[c.id] = count;
            if (count == 0) enter_falsified(c);
        }
        for (const Clause& c : f.clauses()) {
            if (sat_count_[c.id] == 0) {
                for (Lit l : c.lits) score_[l.var] += dyn_weight_[c.id];
            } else if (sat_count_[c.id] == 1) {
                score_[sat_var_[c.id]] -= dyn_weight_[c.id];
            }
        }
        for (int v = 1; v <= f.num_vars(); ++v)
            if (score_[v] > 0) good_vars_.insert(v);
    }

    const Formula& formula() const { return *f_; }
    bool value(int var) const { return assign_[var] != 0; }
    Model model() const { return Model(assign_.begin() + 1, assign_.end()); }
    int sat_count(int clause_id) const { return sat_count_[clause_id]; }
    int sat_var(int clause_id) const { return sat_var_[clause_id]; }  // valid iff sat_count == 1
    int64_t dyn_weight(int clause_id) const { return dyn_weight_[clause_id]; }
    int64_t initial_dyn_weight(int clause_id) const { return init_weight_[clause_id]; }
    int64_t score(int var) const { return score_[var]; }
    int64_t flip_age(int var) const { return flip_age_[var]; }
    uint64_t steps() const { return steps_; }
    const DenseSet& good_vars() const { return good_vars_; }
    const DenseSet& falsified_hard() const { return falsified_hard_; }
    const DenseSet& falsified_soft() const { return falsified_soft_; }

    Cost cost_now() const {
        return falsified_hard_.empty() ? Cost::of(falsified_soft_weight_) : Cost::infeasible();
    }

    Cost best_cost() const { return best_cost_; }
    const Model& best_assignment() const { return best_assignment_; }

    // Records the current assignment as the incumbent when it improves.
    bool update_best() {
        Cost now = cost_now();
        if (!(now < best_cost_)) return false;
        best_cost_ = now;
        best_assignment_ = model();
        return true;
    }

    void flip(int var) {
        assert(var >= 1 && var <= f_->num_vars());
        const int64_t old_score = score_[var];
        assign_[var] ^= 1;
        const bool now = value(var);

        for (int cid : f_->occurrences(Lit{var, !now})) {  // literal of var that became true
            const int64_t w = dyn_weight_[cid];
            int old_count = sat_count_[cid]++;
            if (old_count == 0) {
                leave_falsified(f_->clause(cid));
                for (Lit l : f_->clause(cid).lits)
                    if (l.var != var) bump_score(l.var, -w);
                sat_var_[cid] = var;
            } else if (old_count == 1) {
                bump_score(sat_var_[cid], +w);
            }
        }
        for (int cid : f_->occurrences(Lit{var, now})) {  // literal of var that became false
            const int64_t w = dyn_weight_[cid];
            int new_count = --sat_count_[cid];
            assert(new_count >= 0);
            if (new_count == 0) {
                enter_falsified(f_->clause(cid));
                for (Lit l : f_->clause(cid).lits)
                    if (l.var != var) bump_score(l.var, +w);
            } else if (new_count == 1) {
                for (Lit l : f_->clause(cid).lits) {
                    if (l.var != var && lit_true(l)) {
                        sat_var_[cid] = l.var;
                        bump_score(l.var, -w);
                        break;
                    }
                }
            }
        }

        // Every make contribution of var turned into a break one and vice
        // versa, so its score is exactly negated.
        score_[var] = -old_score;
        refresh_good(var);
        flip_age_[var] = (int64_t)++steps_;
    }

    // One weighting step at a local optimum. Draws exactly once from rng to
    // choose between smoothing and the falsified-weight increase.
    void update_clause_weights(Rng& rng) {
        if (rng.chance(wp_.smooth_probability))
            smooth_weights();
        else
            increase_falsified_weights();
    }

    // Every satisfied clause strictly above its initial weight decays by one.
    void smooth_weights() {
        for (int cid = 0; cid < f_->num_clauses(); ++cid) {
            if (sat_count_[cid] == 0 || dyn_weight_[cid] <= init_weight_[cid]) continue;
            dyn_weight_[cid] -= 1;
            if (sat_count_[cid] == 1) bump_score(sat_var_[cid], +1);
        }
    }

    // Every falsified clause gains one; soft clauses stop at initial + cap.
    void increase_falsified_weights() {
        for (int cid : falsified_hard_.items()) {
            dyn_weight_[cid] += 1;
            for (Lit l : f_->clause(cid).lits) bump_score(l.var, +1);
        }
        for (int sid : falsified_soft_.items()) {
            const Clause& c = f_->soft_clause(sid);
            if (dyn_weight_[c.id] >= init_weight_[c.id] + (int64_t)wp_.soft_cap) continue;
            dyn_weight_[c.id] += 1;
            for (Lit l : c.lits) bump_score(l.var, +1);
        }
    }

private:
    bool lit_true(Lit l) const { return (assign_[l.var] != 0) != l.neg; }

    void enter_falsified(const Clause& c) {
        if (c.is_hard()) {
            falsified_hard_.insert(c.id);
        } else {
            falsified_soft_.insert(c.soft_id);
            falsified_soft_weight_ += c.weight;
        }
    }

    void leave_falsified(const Clause& c) {
        if (c.is_hard()) {
            falsified_hard_.erase(c.id);
        } else {
            falsified_soft_.erase(c.soft_id);
            assert(falsified_soft_weight_ >= c.weight);
            falsified_soft_weight_ -= c.weight;
        }
    }

    void bump_score(int var, int64_t delta) {
        score_[var] += delta;
        refresh_good(var);
    }

    void refresh_good(int var) {
        if (score_[var] > 0)
            good_vars_.insert(var);
        else
            good_vars_.erase(var);
    }

    const Formula* f_;
    WeightingParams wp_;
    std::vector<uint8_t> assign_;      // 1-based
    std::vector<int32_t> sat_count_;   // per clause
    std::vector<int32_t> sat_var_;     // per clause, critical variable when sat_count == 1
    std::vector<int64_t> dyn_weight_;  // per clause
    std::vector<int64_t> init_weight_; // per clause, smoothing floor / cap base
    std::vector<int64_t> score_;       // 1-based
    std::vector<int64_t> flip_age_;    // 1-based, step of last flip
    DenseSet good_vars_;
    DenseSet falsified_hard_;          // clause ids
    DenseSet falsified_soft_;          // soft ids
    uint64_t falsified_soft_weight_ = 0;
    uint64_t steps_ = 0;
    Model best_assignment_;
    Cost best_cost_ = Cost::infeasible();
};

} // namespace bandsat
