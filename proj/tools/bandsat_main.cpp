// Local-search (W)PMS solver CLI. Prints "o <cost>" on each improvement,
// a final "s" status line, and a "v <bitstring>" model in the MaxSAT
// Evaluation convention.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandsat/bandsat.hpp"

namespace {

std::string model_bits(const bandsat::Model& m) {
    std::string s;
    s.reserve(m.size());
    for (uint8_t b : m) s += b ? '1' : '0';
    return s;
}

nlohmann::ordered_json result_json(const std::string& instance, const bandsat::SolveConfig& cfg,
                                   const std::string& variant, const bandsat::SolveResult& res) {
    nlohmann::ordered_json j;
    j["instance"] = instance;
    j["variant"] = variant;
    j["config"] = {{"k", cfg.k},
                   {"d", cfg.d},
                   {"gamma", cfg.gamma},
                   {"arm_num", cfg.arm_num},
                   {"lambda", cfg.lambda},
                   {"cutoff", cfg.cutoff},
                   {"seed", cfg.seed},
                   {"max_steps", cfg.max_steps},
                   {"sp", cfg.sp},
                   {"soft_cap", cfg.soft_cap},
                   {"soft_weight_init_cap", cfg.soft_weight_init_cap}};
    j["status"] = res.status == bandsat::SolveStatus::Feasible ? "feasible" : "no_feasible_found";
    if (res.best_cost.finite())
        j["best_cost"] = res.best_cost.value();
    else
        j["best_cost"] = nullptr;
    j["steps"] = res.steps;
    j["local_optima"] = res.local_optima;
    j["time_to_best"] = res.time_to_best;
    j["total_seconds"] = res.total_seconds;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto& imp : res.trace)
        trace.push_back({{"seconds", imp.seconds}, {"steps", imp.steps}, {"cost", imp.cost}});
    j["trace"] = trace;
    if (res.best_cost.finite()) j["model"] = model_bits(res.best_assignment);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bandsat: bandit-guided stochastic local search for (weighted) partial MaxSAT"};

    std::string path;
    std::string variant = "default";
    std::string json_path;
    bandsat::SolveConfig cfg;

    app.add_option("instance", path, "WCNF instance (classic or h-line dialect, optionally gzipped)")
        ->required();
    app.add_option("--cutoff", cfg.cutoff, "wall-clock cutoff in seconds")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--k", cfg.k, "BMS samples per pick")->capture_default_str();
    app.add_option("--d", cfg.d, "reward delay window")->capture_default_str();
    app.add_option("--gamma", cfg.gamma, "reward discount factor")->capture_default_str();
    app.add_option("--armnum", cfg.arm_num, "sampled arms per pick")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "UCB exploration bias")->capture_default_str();
    app.add_option("--sp", cfg.sp, "clause-weight smoothing probability")->capture_default_str();
    app.add_option("--soft-cap", cfg.soft_cap, "soft dynamic-weight headroom")->capture_default_str();
    app.add_option("--variant", variant, "default|sample1|sampleall|nodelay|nobinary|fast")
        ->capture_default_str();
    app.add_option("--max-steps", cfg.max_steps, "flip budget (0 = none); makes runs reproducible")
        ->capture_default_str();
    app.add_option("--json", json_path, "write the result as JSON to this path");

    CLI11_PARSE(app, argc, argv);

    bandsat::Formula formula;
    try {
        formula = bandsat::load_wcnf(path);
        cfg = bandsat::apply_variant(cfg, variant);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::printf("c bandsat  vars=%d hard=%d soft=%d total_soft_weight=%llu\n", formula.num_vars(),
                formula.num_hard(), formula.num_soft(),
                (unsigned long long)formula.total_soft_weight());

    auto res = bandsat::solve(formula, cfg, [](const bandsat::Improvement& imp) {
        std::printf("o %llu\n", (unsigned long long)imp.cost);
        std::fflush(stdout);
    });

    if (!res.best_cost.finite()) {
        std::printf("s UNKNOWN\n");
    } else {
        // A cost-0 incumbent satisfies every clause and cannot be improved.
        std::printf("s %s\n", res.best_cost.value() == 0 ? "OPTIMUM FOUND" : "SATISFIABLE");
        std::printf("v %s\n", model_bits(res.best_assignment).c_str());
    }
    std::printf("c steps=%llu local_optima=%llu time_to_best=%.3f total=%.3f\n",
                (unsigned long long)res.steps, (unsigned long long)res.local_optima,
                res.time_to_best, res.total_seconds);

    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << json_path << "\n";
            return 1;
        }
        out << result_json(path, cfg, variant, res).dump(2) << "\n";
    }
    return 0;
}
