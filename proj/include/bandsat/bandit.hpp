#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bandsat/dense_set.hpp"
#include "bandsat/rng.hpp"

namespace bandsat {

// Normalized reward for reaching the feasible local optimum of cost_now from
// the previous one of cost_prev, given the incumbent cost_best:
//
//     r = (cost_prev - cost_now) / (cost_prev - cost_best + 1)
//
// The same absolute improvement earns more the closer the search already is
// to the incumbent. r < 1 always; r <= 0 when nothing improved.
inline double reward(uint64_t cost_prev, uint64_t cost_now, uint64_t cost_best) {
    assert(cost_best <= cost_prev && cost_best <= cost_now);
    return ((double)cost_prev - (double)cost_now) / ((double)(cost_prev - cost_best) + 1.0);
}

// One arm per soft clause. Arms keep an estimated value V (init 1) and a
// pull count t (init 0); N counts feasible local optima. A FIFO window of
// the most recent pulls receives geometrically discounted shares of each
// reward, newest arm undiscounted.
class BanditState {
public:
    BanditState(int num_arms, int window_capacity)
        : values_(num_arms, 1.0), pulls_(num_arms, 0), window_capacity_(window_capacity) {
        assert(window_capacity >= 1);
    }

    int num_arms() const { return (int)values_.size(); }
    double estimated_value(int arm) const { return values_[arm]; }
    void set_estimated_value(int arm, double v) { values_[arm] = v; }
    uint64_t pull_count(int arm) const { return pulls_[arm]; }
    uint64_t optima() const { return optima_; }
    void record_feasible_optimum() { ++optima_; }
    std::span<const int32_t> window() const { return window_; }  // oldest to newest

    // Cost of the previous feasible local optimum; empty until the first one
    // is recorded, during which the value update is skipped.
    std::optional<uint64_t> last_feasible_cost;

    static double ucb_from(double value, double ln_n, uint64_t pull_count, double lambda) {
        return value + lambda * std::sqrt(ln_n / (double)(pull_count + 1));
    }

    // Upper confidence bound of arm; requires at least one recorded optimum
    // so the logarithm is defined (ln 1 = 0).
    double ucb(int arm, double lambda) const {
        assert(optima_ >= 1);
        return ucb_from(values_[arm], std::log((double)optima_), pulls_[arm], lambda);
    }

    // Selects the arm to pull among the currently falsified soft clauses:
    // arm_num draws with replacement, keeping the first-encountered highest
    // UCB. With sample_all, every falsified arm is scanned exactly once
    // instead (no rng draws). Increments the winner's pull count and pushes
    // it into the reward window.
    int pick_arm(const DenseSet& falsified_soft, int arm_num, double lambda, bool sample_all,
                 Rng& rng) {
        assert(!falsified_soft.empty());
        assert(optima_ >= 1);
        const double ln_n = std::log((double)optima_);
        int best = -1;
        double best_ucb = 0.0;
        if (sample_all) {
            for (int arm : falsified_soft.items()) {
                double u = ucb_from(values_[arm], ln_n, pulls_[arm], lambda);
                if (best < 0 || u > best_ucb) {
                    best = arm;
                    best_ucb = u;
                }
            }
        } else {
            for (int i = 0; i < arm_num; ++i) {
                int arm = falsified_soft.sample(rng);
                double u = ucb_from(values_[arm], ln_n, pulls_[arm], lambda);
                if (best < 0 || u > best_ucb) {
                    best = arm;
                    best_ucb = u;
                }
            }
        }
        ++pulls_[best];
        window_.push_back(best);
        if ((int)window_.size() > window_capacity_) window_.erase(window_.begin());
        return best;
    }

    // Credits the windowed arms with discounted shares of r: with m arms in
    // pull order, the j-th oldest gains gamma^(m-j) * r, the newest gains r.
    // Arms pulled several times within the window gain once per position.
    void update_estimated_values(double r, double gamma) {
        double factor = 1.0;
        for (int j = (int)window_.size() - 1; j >= 0; --j) {
            values_[window_[j]] += factor * r;
            factor *= gamma;
        }
    }

private:
    std::vector<double> values_;
    std::vector<uint64_t> pulls_;
    std::vector<int32_t> window_;  // FIFO of pulled arms, oldest first
    int window_capacity_;
    uint64_t optima_ = 0;  // N
};

} // namespace bandsat
