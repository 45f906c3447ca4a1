// Acceptance suite: runs each shipping criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bandsat/bandsat.hpp"
#include "support/oracles.hpp"

using namespace bandsat;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %2d: %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, pass, detail, secs);
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// --- criterion 1: incremental state equals from-scratch reconstruction ----

bool incremental_state_oracle(std::string& detail) {
    Rng rng(20240501);
    int checks = 0;
    for (int inst = 0; inst < 200; ++inst) {
        InstanceSpec spec;
        spec.num_vars = 5 + (int)rng.below(56);       // <= 60
        spec.num_hard = 1 + (int)rng.below(60);
        spec.num_soft = 1 + (int)rng.below(240);      // <= 300 clauses total
        if (spec.num_hard + spec.num_soft > 300) spec.num_soft = 300 - spec.num_hard;
        spec.len_min = 1;
        spec.len_max = std::min(4, spec.num_vars);
        spec.weight_max = rng.coin() ? 1 : 50;
        spec.planted = rng.coin();
        GeneratedInstance gi = generate_instance(spec, rng);
        const Formula& f = gi.formula;

        Model m(f.num_vars());
        for (auto& b : m) b = rng.coin();
        WeightingParams wp;
        wp.smooth_probability = 0.3;  // exercise both weighting branches
        wp.soft_cap = 10;
        SearchState s(f, m, wp);
        std::string why;
        for (int step = 0; step < 1000; ++step) {
            s.flip(1 + (int)rng.below((uint64_t)f.num_vars()));
            if (step % 10 == 9) s.update_clause_weights(rng);  // forced, off-optimum
            if (!testing::state_matches_oracle(s, &why)) {
                detail = "instance " + std::to_string(inst) + " step " + std::to_string(step) +
                         ": " + why;
                return false;
            }
            ++checks;
        }
    }
    detail = std::to_string(checks) + " exact state comparisons";
    return true;
}

// --- criterion 2: brute-force optimality on planted 18-var instances ------

bool brute_force_optimality(std::string& detail) {
    Rng rng(777);
    InstanceSpec spec;
    spec.num_vars = 18;
    spec.num_hard = 20;
    spec.num_soft = 40;
    spec.len_min = 1;  // unit and binary softs conflict, so optima are nonzero
    spec.len_max = 3;
    spec.weight_min = 1;
    spec.weight_max = 10;
    spec.planted = true;

    int matched = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        GeneratedInstance gi = generate_instance(spec, rng);
        Cost optimum = testing::enumerate_optimum(gi.formula);
        if (!optimum.finite()) {
            detail = "planted instance came out infeasible";
            return false;
        }
        SolveConfig cfg;  // paper-default parameters
        cfg.cutoff = 5.0;
        cfg.max_steps = 2000000;
        cfg.seed = 1000 + i;
        SolveResult res = solve(gi.formula, cfg);
        if (!res.best_cost.finite() ||
            validate_model(gi.formula, res.best_assignment) != res.best_cost) {
            detail = "instance " + std::to_string(i) + ": model does not revalidate";
            return false;
        }
        if (res.best_cost < optimum) {
            detail = "instance " + std::to_string(i) + ": cost below the enumerated optimum";
            return false;
        }
        if (res.best_cost == optimum) ++matched;
    }
    detail = std::to_string(matched) + "/" + std::to_string(total) + " optima (need >= 48)";
    return matched >= 48;  // >= 95%
}

// --- criterion 3: reward formula exactness ---------------------------------

bool reward_exactness(std::string& detail) {
    double r1 = reward(1000, 990, 980);
    double r2 = reward(20, 10, 10);
    bool ok = close(r1, 10.0 / 21.0, 1e-12) && close(r2, 10.0 / 11.0, 1e-12);
    std::ostringstream os;
    os << "r(1000,990,980)=" << r1 << " r(20,10,10)=" << r2;
    detail = os.str();
    return ok;
}

// --- criterion 4: delayed discounted update exactness ----------------------

bool delayed_update_exactness(std::string& detail) {
    const double r = 0.735;
    for (double gamma : {0.5, 0.9, 1.0}) {
        for (int m = 1; m <= 8; ++m) {
            BanditState b(10, 8);
            b.record_feasible_optimum();
            Rng rng(5);
            for (int j = 0; j < m; ++j) {
                DenseSet only(10);
                only.insert(j);
                b.pick_arm(only, 1, 1.0, false, rng);
            }
            b.update_estimated_values(r, gamma);
            double mass = 0.0, expected_mass = 0.0;
            for (int j = 0; j < m; ++j) {
                double expect = std::pow(gamma, m - 1 - j) * r;  // j=0 oldest
                double got = b.estimated_value(j) - 1.0;
                if (!close(got, expect, 1e-12)) {
                    std::ostringstream os;
                    os << "gamma=" << gamma << " m=" << m << " arm " << j << ": got " << got
                       << " want " << expect;
                    detail = os.str();
                    return false;
                }
                mass += got;
            }
            for (int j = 0; j < m; ++j) expected_mass += std::pow(gamma, j) * r;
            if (!close(mass, expected_mass, 1e-12)) {
                detail = "geometric mass mismatch";
                return false;
            }
        }
    }
    detail = "per-arm shares and geometric totals exact for gamma in {0.5, 0.9, 1.0}";
    return true;
}

// --- criterion 5: UCB exactness and monotonicity ----------------------------

bool ucb_exactness(std::string& detail) {
    BanditState b(1, 4);
    b.record_feasible_optimum();  // N = 1
    if (!close(b.ucb(0, 1.0), 1.0, 1e-12)) {
        detail = "N=1 baseline UCB != 1";
        return false;
    }
    if (!close(BanditState::ucb_from(0.5, 4.0, 3, 1.0), 1.5, 1e-12)) {
        detail = "injected-log example != 1.5";
        return false;
    }
    if (!close(BanditState::ucb_from(0.8, 7.0, 11, 0.0), 0.8, 1e-12)) {
        detail = "lambda=0 is not pure exploitation";
        return false;
    }
    for (double v : {0.0, 0.3, 1.0, 2.5})
        for (uint64_t n : {2, 3, 10, 1000})
            for (double lambda : {0.25, 1.0, 4.0}) {
                double prev = BanditState::ucb_from(v, std::log((double)n), 0, lambda);
                for (uint64_t t = 1; t <= 32; ++t) {
                    double cur = BanditState::ucb_from(v, std::log((double)n), t, lambda);
                    if (!(cur < prev)) {
                        detail = "UCB not strictly decreasing in t";
                        return false;
                    }
                    prev = cur;
                }
            }
    detail = "examples exact; strictly decreasing in t over the (V, N, lambda) grid";
    return true;
}

// --- criterion 6: decimation priority trace ---------------------------------

bool decimation_priority(std::string& detail) {
    Rng rng(4242);
    int iterations = 0;
    for (int inst = 0; inst < 100; ++inst) {
        InstanceSpec spec;
        spec.num_vars = 5 + (int)rng.below(36);
        spec.num_hard = 2 + (int)rng.below(25);
        spec.num_soft = 2 + (int)rng.below(40);
        spec.len_min = 1;
        spec.len_max = std::min(3, spec.num_vars);
        spec.weight_max = 8;
        spec.planted = false;
        GeneratedInstance gi = generate_instance(spec, rng);

        std::vector<DecimationStep> trace;
        Model m = decimate(gi.formula, rng, {}, &trace);
        if ((int)trace.size() != spec.num_vars || (int)m.size() != spec.num_vars) {
            detail = "instance " + std::to_string(inst) + ": not exactly num_vars iterations";
            return false;
        }
        std::vector<bool> assigned(spec.num_vars + 1, false);
        for (const DecimationStep& s : trace) {
            if (assigned[s.var]) {
                detail = "variable assigned twice";
                return false;
            }
            assigned[s.var] = true;
            DecimationBranch want;
            if (s.hard_units > 0)
                want = DecimationBranch::HardUnit;
            else if (s.soft_units > 0)
                want = DecimationBranch::SoftUnit;
            else if (s.hard_binaries > 0)
                want = DecimationBranch::HardBinary;
            else if (s.soft_binaries > 0)
                want = DecimationBranch::SoftBinary;
            else
                want = DecimationBranch::FreeVariable;
            if (s.branch != want) {
                detail = "instance " + std::to_string(inst) + ": priority order violated";
                return false;
            }
            ++iterations;
        }
    }
    detail = std::to_string(iterations) + " iterations certified over 100 instances";
    return true;
}

// --- criterion 7: MSE scoring function ---------------------------------------

bool mse_scoring(std::string& detail) {
    auto s1 = mse_score(9, {Cost::of(9), Cost::of(19)});
    if (!close(s1[0], 1.0, 1e-12) || !close(s1[1], 0.5, 1e-12)) {
        detail = "hand example (9; 9,19) wrong";
        return false;
    }
    auto s2 = mse_score(std::nullopt, {Cost::of(3), Cost::infeasible()});
    if (!close(s2[0], 1.0, 1e-12) || s2[1] != 0.0) {
        detail = "infeasible must score exactly 0";
        return false;
    }
    auto s3 = mse_score(5, {Cost::of(5), Cost::of(5)});
    if (!close(s3[0], 1.0, 1e-12) || !close(s3[1], 1.0, 1e-12)) {
        detail = "all-at-best must score 1";
        return false;
    }
    Rng rng(9);
    for (int i = 0; i < 5000; ++i) {
        std::vector<Cost> costs;
        int n = 1 + (int)rng.below(6);
        for (int j = 0; j < n; ++j)
            costs.push_back(rng.below(4) == 0 ? Cost::infeasible() : Cost::of(rng.below(500)));
        std::optional<uint64_t> bks;
        if (rng.coin()) bks = rng.below(500);
        auto s = mse_score(bks, costs);
        for (size_t j = 0; j < s.size(); ++j) {
            if (s[j] < 0.0 || s[j] > 1.0) {
                detail = "score escaped [0,1]";
                return false;
            }
            if (!costs[j].finite() && s[j] != 0.0) {
                detail = "infeasible entry scored nonzero";
                return false;
            }
        }
    }
    detail = "hand examples exact; 5000 random score vectors stayed in [0,1]";
    return true;
}

// --- criterion 8: determinism -------------------------------------------------

std::string strip_timing(const std::string& jsonl) {
    std::string out;
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::ordered_json::parse(line);
        j.erase("timing");
        out += j.dump();
        out += '\n';
    }
    return out;
}

bool determinism(std::string& detail) {
    Rng rng(321);
    InstanceSpec spec;
    spec.num_vars = 30;
    spec.num_hard = 40;
    spec.num_soft = 90;
    spec.len_min = 2;
    spec.len_max = 3;
    spec.weight_max = 10;
    GeneratedInstance gi = generate_instance(spec, rng);
    SolveConfig cfg;
    cfg.max_steps = 200000;
    cfg.cutoff = 30.0;
    cfg.seed = 7;
    SolveResult a = solve(gi.formula, cfg);
    SolveResult b = solve(gi.formula, cfg);
    if (!(a.best_cost == b.best_cost) || a.best_assignment != b.best_assignment ||
        a.steps != b.steps || a.local_optima != b.local_optima ||
        a.trace.size() != b.trace.size()) {
        detail = "two identical solve runs diverged";
        return false;
    }
    for (size_t i = 0; i < a.trace.size(); ++i)
        if (a.trace[i].cost != b.trace[i].cost || a.trace[i].steps != b.trace[i].steps) {
            detail = "improvement traces diverged";
            return false;
        }

    fs::path dir = fs::temp_directory_path() /
                   ("bandsat_accept_det_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    InstanceSpec small = spec;
    small.num_vars = 16;
    small.num_hard = 14;
    small.num_soft = 30;
    generate_files(small, 4, 11, dir);
    SuiteOptions opt;
    opt.variants = {"default", "nodelay"};
    opt.seeds = {1, 2};
    opt.base.cutoff = 10.0;
    opt.base.max_steps = 30000;
    opt.jobs = 3;
    auto r1 = run_suite(list_wcnf_files(dir), opt);
    auto r2 = run_suite(list_wcnf_files(dir), opt);
    fs::remove_all(dir);
    if (strip_timing(records_to_jsonl(r1)) != strip_timing(records_to_jsonl(r2))) {
        detail = "suite reruns differ beyond wall-clock fields";
        return false;
    }
    detail = "solve traces and suite JSON-lines identical across reruns";
    return true;
}

// --- criterion 9: ablation methodology at desk scale --------------------------

bool ablation_report(std::string& detail) {
    fs::path dir = fs::temp_directory_path() /
                   ("bandsat_accept_abl_" + std::to_string(std::random_device{}()));
    fs::path out = fs::current_path() / "acceptance-ablation";  // kept for inspection
    InstanceSpec spec;
    spec.num_vars = 40;
    spec.num_hard = 60;
    spec.num_soft = 130;
    spec.len_min = 2;
    spec.len_max = 3;
    spec.weight_min = 1;
    spec.weight_max = 10;
    spec.planted = true;
    generate_files(spec, 100, 20240502, dir);  // the bundled seeded suite

    SuiteOptions opt;
    opt.variants = {"default", "sample1", "nodelay", "nobinary"};
    opt.seeds = {1};
    opt.base.cutoff = 5.0;
    opt.base.max_steps = 200000;  // reproducible step budget under the 5 s cap
    opt.jobs = 4;
    auto records = run_suite(list_wcnf_files(dir), opt);
    if (records.size() != 400) {
        detail = "expected 400 records, got " + std::to_string(records.size());
        fs::remove_all(dir);
        return false;
    }
    ScoreReport rep = build_report(records);
    std::string table = format_report(rep, "ablation-40v");
    fs::create_directories(out);
    write_text_file(out / "records.jsonl", records_to_jsonl(records));
    write_text_file(out / "score.json", report_to_json(rep).dump(2) + "\n");
    write_text_file(out / "table.txt", table);

    bool shaped = rep.variants.size() == 4 && rep.instances.size() == 100 &&
                  table.find("#win.") != std::string::npos &&
                  table.find("default") != std::string::npos &&
                  table.find("sample1") != std::string::npos &&
                  table.find("nodelay") != std::string::npos &&
                  table.find("nobinary") != std::string::npos;
    fs::remove_all(dir);
    if (!shaped) {
        detail = "report missing variants or table columns";
        return false;
    }

    double mean_default = rep.mean_cost[0].value_or(1e18);
    double mean_sample1 = rep.mean_cost[1].value_or(1e18);
    std::ostringstream os;
    os << "table + JSON emitted; mean cost default=" << mean_default
       << " sample1=" << mean_sample1;
    if (mean_default > mean_sample1)
        os << "  WARNING: default did not beat sample1 (soft check, not a failure)";
    detail = os.str();
    return true;
}

// --- criterion 10: golden corpus parsing --------------------------------------

bool golden_corpus(std::string& detail) {
    fs::path dir = fs::path(TESTS_DATA_DIR) / "golden";
    int pairs = 0, files = 0;
    for (int i = 0;; ++i) {
        char cname[32], mname[32];
        snprintf(cname, sizeof(cname), "c%02d.wcnf", i);
        snprintf(mname, sizeof(mname), "m%02d.wcnf", i);
        fs::path classic = dir / cname;
        if (!fs::exists(classic)) classic = dir / (std::string(cname) + ".gz");
        fs::path modern = dir / mname;
        if (!fs::exists(classic) || !fs::exists(modern)) break;
        Formula fc = load_wcnf(classic.string());
        Formula fm = load_wcnf(modern.string());
        files += 2;
        if (!(fc == fm)) {
            detail = std::string("dialect pair ") + cname + "/" + mname + " parsed unequal";
            return false;
        }
        if (!(parse_wcnf(serialize_wcnf(fc)) == fc)) {
            detail = std::string("serialize/parse not identity on ") + cname;
            return false;
        }
        ++pairs;
    }
    detail = std::to_string(files) + " files in " + std::to_string(pairs) + " dialect pairs";
    return pairs >= 10;
}

} // namespace

int main() {
    std::printf("bandsat acceptance suite\n");
    criterion(1, "incremental-state oracle", incremental_state_oracle);
    criterion(2, "brute-force optimality", brute_force_optimality);
    criterion(3, "reward exactness", reward_exactness);
    criterion(4, "delayed-update exactness", delayed_update_exactness);
    criterion(5, "ucb exactness", ucb_exactness);
    criterion(6, "decimation priority trace", decimation_priority);
    criterion(7, "mse scoring", mse_scoring);
    criterion(8, "determinism", determinism);
    criterion(9, "ablation report", ablation_report);
    criterion(10, "golden corpus parsing", golden_corpus);
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
