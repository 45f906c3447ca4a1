// Benchmark harness: runs solver variants over an instance directory,
// scores recorded runs, and generates random (W)PMS suites.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandsat/bandsat.hpp"

namespace fs = std::filesystem;
using namespace bandsat;

namespace {

std::map<std::string, uint64_t> load_best_known(const std::string& path) {
    std::map<std::string, uint64_t> bks;
    if (path.empty()) return bks;
    auto j = nlohmann::json::parse(read_text_file(path));
    for (auto it = j.begin(); it != j.end(); ++it) bks[it.key()] = it.value().get<uint64_t>();
    return bks;
}

int cmd_run(const std::string& instances_dir, const std::vector<std::string>& variants,
            const std::vector<uint64_t>& seeds, double cutoff, uint64_t max_steps, int jobs,
            const std::string& out_dir, const std::string& bks_path) {
    SuiteOptions opt;
    opt.variants = variants;
    opt.seeds = seeds;
    opt.base.cutoff = cutoff;
    opt.base.max_steps = max_steps;
    opt.jobs = jobs;
    for (const auto& v : variants) apply_variant(opt.base, v);  // validates names up front

    auto files = list_wcnf_files(instances_dir);
    if (files.empty()) {
        std::cerr << "error: no .wcnf files under " << instances_dir << "\n";
        return 1;
    }
    std::cout << "c running " << files.size() << " instances x " << variants.size()
              << " variants x " << seeds.size() << " seeds (jobs=" << jobs << ")\n";

    auto records = run_suite(files, opt);
    auto report = build_report(records, load_best_known(bks_path));
    std::string table = format_report(report, fs::path(instances_dir).filename().string());

    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "records.jsonl", records_to_jsonl(records));
    write_text_file(fs::path(out_dir) / "score.json", report_to_json(report).dump(2) + "\n");
    write_text_file(fs::path(out_dir) / "table.txt", table);
    std::cout << table;
    std::cout << "c wrote records.jsonl, score.json, table.txt to " << out_dir << "\n";
    return 0;
}

int cmd_score(const std::string& records_path, const std::string& bks_path,
              const std::string& out_dir) {
    auto records = records_from_jsonl(read_text_file(records_path));
    auto report = build_report(records, load_best_known(bks_path));
    std::string table = format_report(report);
    std::cout << table;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "score.json", report_to_json(report).dump(2) + "\n");
        write_text_file(fs::path(out_dir) / "table.txt", table);
    }
    return 0;
}

int cmd_gen(const InstanceSpec& spec, int count, uint64_t seed, const std::string& out_dir,
            const std::string& prefix) {
    auto paths = generate_files(spec, count, seed, out_dir, prefix);
    std::cout << "c wrote " << paths.size() << " instances to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bandsat-bench: benchmark runner, scorer and instance generator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "solve every instance with every variant and seed");
    std::string instances_dir, out_dir = "bench-out", bks_path;
    std::vector<std::string> variants{"default"};
    std::vector<uint64_t> seeds{1};
    double cutoff = 300.0;
    uint64_t max_steps = 0;
    int jobs = 1;
    run->add_option("--instances", instances_dir, "directory of .wcnf / .wcnf.gz files")
        ->required();
    run->add_option("--variants", variants,
                    "variants to run: default sample1 sampleall nodelay nobinary fast")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--seeds", seeds, "RNG seeds, one run per seed")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--cutoff", cutoff, "wall-clock cutoff per run, seconds")
        ->capture_default_str();
    run->add_option("--max-steps", max_steps, "flip budget per run (0 = none)")
        ->capture_default_str();
    run->add_option("--jobs", jobs, "parallel workers")->capture_default_str();
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--bks", bks_path, "best-known costs JSON {\"instance\": cost}");

    // score
    auto* score = app.add_subcommand("score", "score an existing records.jsonl");
    std::string records_path, score_out, score_bks;
    score->add_option("--records", records_path, "records.jsonl path")->required();
    score->add_option("--bks", score_bks, "best-known costs JSON");
    score->add_option("--out", score_out, "also write score.json and table.txt here");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance suite");
    InstanceSpec spec;
    int count = 10;
    uint64_t gen_seed = 1;
    std::string gen_out = "instances", prefix = "gen";
    gen->add_option("--count", count, "number of instances")->capture_default_str();
    gen->add_option("--vars", spec.num_vars, "variables per instance")->required();
    gen->add_option("--hard", spec.num_hard, "hard clauses")->required();
    gen->add_option("--soft", spec.num_soft, "soft clauses")->required();
    gen->add_option("--len-min", spec.len_min, "minimum clause length")->capture_default_str();
    gen->add_option("--len-max", spec.len_max, "maximum clause length")->capture_default_str();
    gen->add_option("--wmin", spec.weight_min, "minimum soft weight")->capture_default_str();
    gen->add_option("--wmax", spec.weight_max, "maximum soft weight")->capture_default_str();
    gen->add_flag("--planted,!--no-planted", spec.planted,
                  "plant a hidden assignment satisfying the hard part")
        ->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->capture_default_str();
    gen->add_option("--prefix", prefix, "file name prefix")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(instances_dir, variants, seeds, cutoff, max_steps, jobs, out_dir,
                           bks_path);
        if (score->parsed()) return cmd_score(records_path, score_bks, score_out);
        if (gen->parsed()) return cmd_gen(spec, count, gen_seed, gen_out, prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
