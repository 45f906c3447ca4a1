#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "bandsat/rng.hpp"

namespace bandsat {

// Dense set of integers from a fixed universe [0, n): O(1) insert, erase,
// membership and uniform sampling (the swap-remove array + position index
// idiom). Iteration order depends on the operation history but is
// deterministic for a fixed sequence of calls.
class DenseSet {
public:
    DenseSet() = default;
    explicit DenseSet(int universe) : pos_(universe, -1) {}

    int size() const { return (int)items_.size(); }
    bool empty() const { return items_.empty(); }

    bool contains(int x) const {
        assert(x >= 0 && x < (int)pos_.size());
        return pos_[x] >= 0;
    }

    void insert(int x) {
        if (contains(x)) return;
        pos_[x] = (int)items_.size();
        items_.push_back(x);
    }

    void erase(int x) {
        if (!contains(x)) return;
        int i = pos_[x];
        int last = items_.back();
        items_[i] = last;
        pos_[last] = i;
        items_.pop_back();
        pos_[x] = -1;
    }

    int at(int i) const {
        assert(i >= 0 && i < size());
        return items_[i];
    }

    int sample(Rng& rng) const {
        assert(!empty());
        return items_[rng.below(items_.size())];
    }

    std::span<const int32_t> items() const { return items_; }

private:
    std::vector<int32_t> items_;
    std::vector<int32_t> pos_;
};

} // namespace bandsat
