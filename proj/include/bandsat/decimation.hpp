#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "bandsat/dense_set.hpp"
#include "bandsat/rng.hpp"
#include "bandsat/wcnf.hpp"

namespace bandsat {

enum class DecimationBranch : uint8_t {
    HardUnit,
    SoftUnit,
    HardBinary,
    SoftBinary,
    FreeVariable,
};

struct DecimationOptions {
    bool no_binary = false;  // skip the two binary-clause branches
};

// One decimation iteration, for instrumented runs: registry sizes before the
// decision, the branch taken, and the resulting assignment.
struct DecimationStep {
    int hard_units;
    int soft_units;
    int hard_binaries;
    int soft_binaries;
    DecimationBranch branch;
    int clause_id;  // -1 for FreeVariable
    int var;
    bool set_true;
};

// Residual formula under a partial assignment. A clause is alive until it
// has a true literal (satisfied) or no unassigned literal left (falsified;
// decimation carries on and leaves repair to the search). The four
// unit/binary registries track residual lengths of alive clauses exactly,
// so clauses shortened by simplification enter them too.
class DecimationState {
public:
    explicit DecimationState(const Formula& f)
        : f_(&f),
          value_(f.num_vars() + 1, -1),
          alive_(f.num_clauses(), 1),
          residual_(f.num_clauses(), 0),
          hard_units_(f.num_clauses()),
          soft_units_(f.num_clauses()),
          hard_binaries_(f.num_clauses()),
          soft_binaries_(f.num_clauses()),
          unassigned_(f.num_vars() + 1) {
        for (int v = 1; v <= f.num_vars(); ++v) unassigned_.insert(v);
        for (const Clause& c : f.clauses()) {
            residual_[c.id] = (int32_t)c.lits.size();
            enter_registry(c.id, residual_[c.id]);
        }
    }

    bool complete() const { return unassigned_.empty(); }
    int assigned_value(int var) const { return value_[var]; }  // -1 unset
    bool alive(int clause_id) const { return alive_[clause_id] != 0; }
    int residual_len(int clause_id) const { return residual_[clause_id]; }
    const DenseSet& hard_units() const { return hard_units_; }
    const DenseSet& soft_units() const { return soft_units_; }
    const DenseSet& hard_binaries() const { return hard_binaries_; }
    const DenseSet& soft_binaries() const { return soft_binaries_; }
    const DenseSet& unassigned() const { return unassigned_; }

    Model model() const {
        Model m(f_->num_vars());
        for (int v = 1; v <= f_->num_vars(); ++v) m[v - 1] = value_[v] == 1 ? 1 : 0;
        return m;
    }

    // The single unassigned literal of an alive unit clause.
    Lit unit_literal(int clause_id) const {
        assert(alive(clause_id) && residual_[clause_id] == 1);
        for (Lit l : f_->clause(clause_id).lits)
            if (value_[l.var] == -1) return l;
        assert(false);
        return Lit{0, false};
    }

    // Total original weight of alive soft clauses that satisfying l would satisfy.
    uint64_t soft_gain(Lit l) const {
        uint64_t gain = 0;
        for (int cid : f_->occurrences(l)) {
            const Clause& c = f_->clause(cid);
            if (alive_[cid] && c.is_soft()) gain += c.weight;
        }
        return gain;
    }

    // Of the two unassigned literals of an alive binary clause, the one whose
    // satisfaction satisfies the larger total original soft weight; ties are
    // broken uniformly at random (one rng draw, only on a tie).
    Lit greedy_pick(int clause_id, Rng& rng) const {
        assert(alive(clause_id) && residual_[clause_id] == 2);
        Lit picks[2] = {Lit{0, false}, Lit{0, false}};
        int n = 0;
        for (Lit l : f_->clause(clause_id).lits)
            if (value_[l.var] == -1) picks[n++] = l;
        assert(n == 2);
        uint64_t g0 = soft_gain(picks[0]);
        uint64_t g1 = soft_gain(picks[1]);
        if (g0 > g1) return picks[0];
        if (g1 > g0) return picks[1];
        return picks[rng.below(2)];
    }

    // Assigns var and simplifies: satisfied clauses die, the others shrink
    // and migrate between the unit/binary registries.
    void assign(int var, bool set_true) {
        assert(value_[var] == -1);
        value_[var] = set_true ? 1 : 0;
        unassigned_.erase(var);
        for (int cid : f_->occurrences(Lit{var, !set_true})) {  // literal now true
            if (!alive_[cid]) continue;
            leave_registry(cid, residual_[cid]);
            alive_[cid] = 0;
        }
        for (int cid : f_->occurrences(Lit{var, set_true})) {  // literal now false
            if (!alive_[cid]) continue;
            leave_registry(cid, residual_[cid]);
            int len = --residual_[cid];
            if (len == 0)
                alive_[cid] = 0;  // falsified; search will repair
            else
                enter_registry(cid, len);
        }
    }

private:
    void enter_registry(int cid, int len) {
        if (len > 2) return;
        bool hard = f_->clause(cid).is_hard();
        if (len == 1)
            (hard ? hard_units_ : soft_units_).insert(cid);
        else if (len == 2)
            (hard ? hard_binaries_ : soft_binaries_).insert(cid);
    }

    void leave_registry(int cid, int len) {
        if (len > 2) return;
        bool hard = f_->clause(cid).is_hard();
        if (len == 1)
            (hard ? hard_units_ : soft_units_).erase(cid);
        else if (len == 2)
            (hard ? hard_binaries_ : soft_binaries_).erase(cid);
    }

    const Formula* f_;
    std::vector<int8_t> value_;  // 1-based, -1 unset
    std::vector<uint8_t> alive_;
    std::vector<int32_t> residual_;  // unassigned literals per alive clause
    DenseSet hard_units_, soft_units_, hard_binaries_, soft_binaries_;
    DenseSet unassigned_;
};

// Builds the initial assignment by decimation with short-clause priority:
// hard unit > soft unit > hard binary > soft binary > random variable with a
// random value. Unit clauses are satisfied outright; binary clauses satisfy
// the greedily chosen literal. Assigns every variable exactly once; the
// result may falsify hard clauses (the search phase repairs that).
inline Model decimate(const Formula& f, Rng& rng, const DecimationOptions& opt = {},
                      std::vector<DecimationStep>* trace = nullptr) {
    DecimationState d(f);
    while (!d.complete()) {
        DecimationStep step{d.hard_units().size(),    d.soft_units().size(),
                            d.hard_binaries().size(), d.soft_binaries().size(),
                            DecimationBranch::FreeVariable,
                            -1, 0, false};
        if (!d.hard_units().empty()) {
            int cid = d.hard_units().sample(rng);
            Lit l = d.unit_literal(cid);
            step.branch = DecimationBranch::HardUnit;
            step.clause_id = cid;
            step.var = l.var;
            step.set_true = !l.neg;
        } else if (!d.soft_units().empty()) {
            int cid = d.soft_units().sample(rng);
            Lit l = d.unit_literal(cid);
            step.branch = DecimationBranch::SoftUnit;
            step.clause_id = cid;
            step.var = l.var;
            step.set_true = !l.neg;
        } else if (!opt.no_binary && !d.hard_binaries().empty()) {
            int cid = d.hard_binaries().sample(rng);
            Lit l = d.greedy_pick(cid, rng);
            step.branch = DecimationBranch::HardBinary;
            step.clause_id = cid;
            step.var = l.var;
            step.set_true = !l.neg;
        } else if (!opt.no_binary && !d.soft_binaries().empty()) {
            int cid = d.soft_binaries().sample(rng);
            Lit l = d.greedy_pick(cid, rng);
            step.branch = DecimationBranch::SoftBinary;
            step.clause_id = cid;
            step.var = l.var;
            step.set_true = !l.neg;
        } else {
            step.var = d.unassigned().sample(rng);
            step.set_true = rng.below(2) != 0;
        }
        d.assign(step.var, step.set_true);
        if (trace) trace->push_back(step);
    }
    return d.model();
}

} // namespace bandsat
