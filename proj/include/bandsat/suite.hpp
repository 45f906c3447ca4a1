#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "bandsat/scoring.hpp"
#include "bandsat/solver.hpp"
#include "bandsat/wcnf.hpp"

namespace bandsat {

struct SuiteOptions {
    std::vector<std::string> variants{"default"};
    std::vector<uint64_t> seeds{1};
    SolveConfig base;  // cutoff/max_steps/parameters shared by every run
    int jobs = 1;
};

inline std::vector<std::filesystem::path> list_wcnf_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string name = e.path().filename().string();
        if (name.ends_with(".wcnf") || name.ends_with(".wcnf.gz")) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Runs every (instance, variant, seed) combination as an independent solve.
// Tasks execute on a bounded worker pool but results are ordered by task
// key, so reruns with the same seeds produce identical records up to the
// wall-clock fields. Instances that fail to parse yield one error record
// each and never abort the suite.
inline std::vector<RunRecord> run_suite(const std::vector<std::filesystem::path>& files,
                                        const SuiteOptions& opt) {
    for (const std::string& v : opt.variants)
        apply_variant(opt.base, v).validate();  // reject bad names before any thread starts

    struct Loaded {
        std::string id;
        std::shared_ptr<const Formula> formula;  // null when parsing failed
        std::string error;
    };
    std::vector<Loaded> loaded;
    loaded.reserve(files.size());
    for (const auto& path : files) {
        Loaded l;
        l.id = path.filename().string();
        try {
            l.formula = std::make_shared<const Formula>(load_wcnf(path.string()));
        } catch (const ParseError& e) {
            l.error = e.what();
        }
        loaded.push_back(std::move(l));
    }

    struct Task {
        const Loaded* inst;
        std::string variant;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const Loaded& l : loaded) {
        if (!l.error.empty()) continue;
        for (const std::string& variant : opt.variants)
            for (uint64_t seed : opt.seeds) tasks.push_back(Task{&l, variant, seed});
    }

    std::vector<RunRecord> task_records(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            SolveConfig cfg = apply_variant(opt.base, t.variant);
            cfg.seed = t.seed;
            SolveResult res = solve(*t.inst->formula, cfg);
            RunRecord rec;
            rec.instance = t.inst->id;
            rec.variant = t.variant;
            rec.seed = t.seed;
            rec.best_cost = res.best_cost;
            rec.time_to_best = res.time_to_best;
            rec.cutoff = cfg.cutoff;
            rec.steps = res.steps;
            rec.local_optima = res.local_optima;
            task_records[i] = std::move(rec);
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Merge in input order: per instance either its error record or the
    // per-variant/seed block.
    std::vector<RunRecord> out;
    out.reserve(loaded.size() + tasks.size());
    size_t cursor = 0;
    for (const Loaded& l : loaded) {
        if (!l.error.empty()) {
            RunRecord rec;
            rec.instance = l.id;
            rec.error = l.error;
            out.push_back(std::move(rec));
            continue;
        }
        size_t block = opt.variants.size() * opt.seeds.size();
        for (size_t k = 0; k < block; ++k) out.push_back(std::move(task_records[cursor++]));
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace bandsat
