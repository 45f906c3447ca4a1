#pragma once

#include <cassert>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandsat/rng.hpp"
#include "bandsat/wcnf.hpp"

namespace bandsat {

// Random (W)PMS instance shape. Clause lengths are uniform in
// [len_min, len_max] with distinct variables per clause; soft weights are
// uniform in [weight_min, weight_max]. With planted set, every hard clause
// is patched to contain at least one literal true under a hidden assignment,
// so a feasible solution is guaranteed to exist.
struct InstanceSpec {
    int num_vars = 0;
    int num_hard = 0;
    int num_soft = 0;
    int len_min = 3;
    int len_max = 3;
    uint64_t weight_min = 1;
    uint64_t weight_max = 1;
    bool planted = true;

    void validate() const {
        if (num_vars < 1) throw std::invalid_argument("num_vars must be >= 1");
        if (num_hard < 0 || num_soft < 0) throw std::invalid_argument("negative clause count");
        if (num_soft == 0 && num_hard == 0) throw std::invalid_argument("no clauses requested");
        if (len_min < 1 || len_min > len_max) throw std::invalid_argument("bad clause length range");
        if (len_max > num_vars) throw std::invalid_argument("clause length exceeds num_vars");
        if (weight_min < 1 || weight_min > weight_max)
            throw std::invalid_argument("bad weight range");
    }
};

struct GeneratedInstance {
    Formula formula;
    Model planted;  // empty when the spec is not planted
};

namespace detail {

inline std::vector<Lit> random_clause(const InstanceSpec& spec, Rng& rng,
                                      std::vector<int32_t>& scratch) {
    int len = spec.len_min + (int)rng.below((uint64_t)(spec.len_max - spec.len_min + 1));
    scratch.clear();
    while ((int)scratch.size() < len) {
        int v = 1 + (int)rng.below((uint64_t)spec.num_vars);
        bool dup = false;
        for (int32_t u : scratch) dup = dup || u == v;
        if (!dup) scratch.push_back(v);
    }
    std::vector<Lit> lits;
    lits.reserve(len);
    for (int32_t v : scratch) lits.push_back(Lit{v, rng.coin()});
    return lits;
}

} // namespace detail

inline GeneratedInstance generate_instance(const InstanceSpec& spec, Rng& rng) {
    spec.validate();
    GeneratedInstance out;
    Model hidden;
    if (spec.planted) {
        hidden.resize(spec.num_vars);
        for (auto& b : hidden) b = rng.coin() ? 1 : 0;
    }
    std::vector<ClauseSpec> clauses;
    clauses.reserve(spec.num_hard + spec.num_soft);
    std::vector<int32_t> scratch;
    for (int i = 0; i < spec.num_hard; ++i) {
        ClauseSpec c;
        c.lits = detail::random_clause(spec, rng, scratch);
        if (spec.planted) {
            bool sat = false;
            for (Lit l : c.lits) sat = sat || lit_true_under(l, hidden);
            if (!sat) {
                size_t fix = rng.below(c.lits.size());
                c.lits[fix].neg = hidden[c.lits[fix].var - 1] == 0;
            }
        }
        clauses.push_back(std::move(c));
    }
    for (int i = 0; i < spec.num_soft; ++i) {
        ClauseSpec c;
        c.lits = detail::random_clause(spec, rng, scratch);
        c.weight = spec.weight_min + rng.below(spec.weight_max - spec.weight_min + 1);
        clauses.push_back(std::move(c));
    }
    out.formula = make_formula(spec.num_vars, clauses);
    out.planted = std::move(hidden);
    return out;
}

// Writes `count` instances of the given shape as classic-dialect WCNF files
// <prefix>_NNN.wcnf under dir; the same spec and seed reproduce the same
// files byte for byte.
inline std::vector<std::filesystem::path> generate_files(const InstanceSpec& spec, int count,
                                                         uint64_t seed,
                                                         const std::filesystem::path& dir,
                                                         const std::string& prefix = "gen") {
    spec.validate();
    std::filesystem::create_directories(dir);
    Rng rng(seed);
    std::vector<std::filesystem::path> paths;
    for (int i = 0; i < count; ++i) {
        GeneratedInstance inst = generate_instance(spec, rng);
        char name[64];
        snprintf(name, sizeof(name), "%s_%03d.wcnf", prefix.c_str(), i);
        std::filesystem::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << serialize_wcnf(inst.formula);
        paths.push_back(p);
    }
    return paths;
}

} // namespace bandsat
