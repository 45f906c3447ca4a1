#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandsat/wcnf.hpp"

namespace bandsat {

// One solver execution (or one failed instance, when error is non-empty).
struct RunRecord {
    std::string instance;
    std::string variant;
    uint64_t seed = 0;
    Cost best_cost = Cost::infeasible();
    double time_to_best = 0.0;
    double cutoff = 0.0;
    uint64_t steps = 0;
    uint64_t local_optima = 0;
    std::string error;

    bool failed() const { return !error.empty(); }
};

// Incomplete-track scoring: with best = min over the best-known cost (when
// present) and all finite solver costs, solver i scores (best+1)/(cost_i+1)
// when feasible and 0 otherwise. All-infeasible instances score 0 across the
// board.
inline std::vector<double> mse_score(std::optional<uint64_t> best_known,
                                     const std::vector<Cost>& costs) {
    std::optional<uint64_t> best = best_known;
    for (Cost c : costs)
        if (c.finite() && (!best || c.value() < *best)) best = c.value();
    std::vector<double> scores(costs.size(), 0.0);
    if (!best) return scores;
    for (size_t i = 0; i < costs.size(); ++i)
        if (costs[i].finite())
            scores[i] = ((double)*best + 1.0) / ((double)costs[i].value() + 1.0);
    return scores;
}

struct WinStats {
    int wins = 0;
    std::optional<double> mean_time;  // over won instances; absent when none
};

// #win. per solver over a cost matrix [instance][solver]: a solver wins an
// instance when its cost is finite and matches the minimum finite cost
// there; ties award a win to every tied solver. mean_time averages the
// matching per-instance times over each solver's won instances.
inline std::vector<WinStats> count_wins(const std::vector<std::vector<Cost>>& costs,
                                        const std::vector<std::vector<double>>& times) {
    size_t num_solvers = costs.empty() ? 0 : costs[0].size();
    std::vector<WinStats> out(num_solvers);
    std::vector<double> time_sum(num_solvers, 0.0);
    for (size_t inst = 0; inst < costs.size(); ++inst) {
        Cost best = Cost::infeasible();
        for (Cost c : costs[inst]) best = std::min(best, c);
        if (!best.finite()) continue;
        for (size_t s = 0; s < num_solvers; ++s) {
            if (costs[inst][s] == best) {
                out[s].wins += 1;
                time_sum[s] += times[inst][s];
            }
        }
    }
    for (size_t s = 0; s < num_solvers; ++s)
        if (out[s].wins > 0) out[s].mean_time = time_sum[s] / out[s].wins;
    return out;
}

struct ScoreReport {
    std::vector<std::string> variants;
    std::vector<std::string> instances;
    std::vector<std::vector<Cost>> costs;     // [instance][variant], from the best seed
    std::vector<std::vector<double>> times;   // [instance][variant]
    std::vector<std::vector<double>> scores;  // [instance][variant]
    std::vector<double> mean_score;           // per variant
    std::vector<WinStats> wins;               // per variant
    std::vector<std::optional<double>> mean_cost;  // per variant, over feasible instances
    std::vector<int> feasible_count;          // per variant
    int num_errors = 0;
};

// Aggregates raw records into the per-variant evaluation. Multiple seeds of
// one (instance, variant) pair collapse to the best (lowest-cost) run, ties
// by earlier time-to-best. Failed instances are counted and excluded;
// a variant missing from an instance is treated as infeasible there.
inline ScoreReport build_report(const std::vector<RunRecord>& records,
                                const std::map<std::string, uint64_t>& best_known = {}) {
    ScoreReport rep;
    std::map<std::string, size_t> variant_of;
    std::map<std::string, size_t> instance_of;
    for (const RunRecord& r : records) {
        if (r.failed()) {
            rep.num_errors += 1;
            continue;
        }
        if (!variant_of.count(r.variant)) {
            variant_of[r.variant] = rep.variants.size();
            rep.variants.push_back(r.variant);
        }
        if (!instance_of.count(r.instance)) {
            instance_of[r.instance] = rep.instances.size();
            rep.instances.push_back(r.instance);
        }
    }
    size_t nv = rep.variants.size();
    size_t ni = rep.instances.size();
    rep.costs.assign(ni, std::vector<Cost>(nv, Cost::infeasible()));
    rep.times.assign(ni, std::vector<double>(nv, 0.0));
    std::vector<std::vector<bool>> seen(ni, std::vector<bool>(nv, false));
    for (const RunRecord& r : records) {
        if (r.failed()) continue;
        size_t i = instance_of[r.instance];
        size_t v = variant_of[r.variant];
        bool better = !seen[i][v] || r.best_cost < rep.costs[i][v] ||
                      (r.best_cost == rep.costs[i][v] && r.time_to_best < rep.times[i][v]);
        if (better) {
            rep.costs[i][v] = r.best_cost;
            rep.times[i][v] = r.time_to_best;
        }
        seen[i][v] = true;
    }

    rep.scores.assign(ni, {});
    rep.mean_score.assign(nv, 0.0);
    for (size_t i = 0; i < ni; ++i) {
        std::optional<uint64_t> bks;
        if (auto it = best_known.find(rep.instances[i]); it != best_known.end()) bks = it->second;
        rep.scores[i] = mse_score(bks, rep.costs[i]);
        for (size_t v = 0; v < nv; ++v) rep.mean_score[v] += rep.scores[i][v];
    }
    for (size_t v = 0; v < nv; ++v)
        if (ni > 0) rep.mean_score[v] /= (double)ni;

    rep.wins = count_wins(rep.costs, rep.times);

    rep.mean_cost.assign(nv, std::nullopt);
    rep.feasible_count.assign(nv, 0);
    std::vector<double> cost_sum(nv, 0.0);
    for (size_t i = 0; i < ni; ++i)
        for (size_t v = 0; v < nv; ++v)
            if (rep.costs[i][v].finite()) {
                rep.feasible_count[v] += 1;
                cost_sum[v] += (double)rep.costs[i][v].value();
            }
    for (size_t v = 0; v < nv; ++v)
        if (rep.feasible_count[v] > 0) rep.mean_cost[v] = cost_sum[v] / rep.feasible_count[v];

    return rep;
}

namespace detail {

inline std::string fixed2(double x) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

inline std::string fixed4(double x) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

inline void pad_to(std::string& s, size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
}

} // namespace detail

// Aligned text table: a benchmark row with per-variant (#win., time)
// column pairs, followed by a per-variant summary (mean score, mean cost,
// feasible count).
inline std::string format_report(const ScoreReport& rep, const std::string& benchmark = "suite") {
    std::ostringstream out;
    out << "# ties award a win to every tied solver; time is mean seconds to the winning cost\n";
    const size_t name_w = std::max<size_t>(benchmark.size() + 2, 12);
    const size_t col_w = 18;

    std::string h1(name_w + 8, ' ');
    std::string h2 = "Benchmark";
    detail::pad_to(h2, name_w);
    h2 += "  #inst.";
    for (const std::string& v : rep.variants) {
        std::string cell = v;
        detail::pad_to(cell, col_w);
        h1 += "  " + cell;
        std::string sub = "  #win.      time";
        detail::pad_to(sub, col_w);
        h2 += "  " + sub;
    }
    out << h1 << '\n' << h2 << '\n';

    std::string row = benchmark;
    detail::pad_to(row, name_w);
    {
        std::string n = std::to_string(rep.instances.size());
        while (n.size() < 8) n.insert(n.begin(), ' ');
        row += n;
    }
    for (size_t v = 0; v < rep.variants.size(); ++v) {
        std::string wins = std::to_string(rep.wins[v].wins);
        while (wins.size() < 7) wins.insert(wins.begin(), ' ');
        std::string t = rep.wins[v].mean_time ? detail::fixed2(*rep.wins[v].mean_time) : "-";
        while (t.size() < 9) t.insert(t.begin(), ' ');
        std::string cell = wins + "  " + t;
        detail::pad_to(cell, col_w);
        row += "  " + cell;
    }
    out << row << '\n';

    out << '\n';
    out << "variant        mean-score   mean-cost   feasible\n";
    for (size_t v = 0; v < rep.variants.size(); ++v) {
        std::string name = rep.variants[v];
        detail::pad_to(name, 13);
        std::string score = detail::fixed4(rep.mean_score[v]);
        while (score.size() < 10) score.insert(score.begin(), ' ');
        std::string cost = rep.mean_cost[v] ? detail::fixed2(*rep.mean_cost[v]) : "-";
        while (cost.size() < 11) cost.insert(cost.begin(), ' ');
        std::string feas = std::to_string(rep.feasible_count[v]) + "/" +
                           std::to_string(rep.instances.size());
        while (feas.size() < 10) feas.insert(feas.begin(), ' ');
        out << name << ' ' << score << ' ' << cost << ' ' << feas << '\n';
    }
    if (rep.num_errors > 0) out << "errors: " << rep.num_errors << " instance(s) skipped\n";
    return out.str();
}

// JSON-lines encoding. Deterministic fields come first; wall-clock readings
// live in the trailing "timing" object so byte comparisons can strip it.
inline nlohmann::ordered_json record_to_json(const RunRecord& r) {
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    if (r.failed()) {
        j["error"] = r.error;
        return j;
    }
    j["variant"] = r.variant;
    j["seed"] = r.seed;
    j["status"] = r.best_cost.finite() ? "feasible" : "infeasible";
    if (r.best_cost.finite())
        j["best_cost"] = r.best_cost.value();
    else
        j["best_cost"] = nullptr;
    j["steps"] = r.steps;
    j["local_optima"] = r.local_optima;
    j["cutoff"] = r.cutoff;
    j["timing"] = {{"time_to_best", r.time_to_best}};
    return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.instance = j.at("instance").get<std::string>();
    if (j.contains("error")) {
        r.error = j.at("error").get<std::string>();
        return r;
    }
    r.variant = j.at("variant").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    if (j.at("best_cost").is_null())
        r.best_cost = Cost::infeasible();
    else
        r.best_cost = Cost::of(j.at("best_cost").get<uint64_t>());
    r.steps = j.at("steps").get<uint64_t>();
    r.local_optima = j.at("local_optima").get<uint64_t>();
    r.cutoff = j.at("cutoff").get<double>();
    if (j.contains("timing")) r.time_to_best = j.at("timing").at("time_to_best").get<double>();
    return r;
}

inline std::string records_to_jsonl(const std::vector<RunRecord>& records) {
    std::string out;
    for (const RunRecord& r : records) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<RunRecord> records_from_jsonl(const std::string& text) {
    std::vector<RunRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(record_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

inline nlohmann::ordered_json report_to_json(const ScoreReport& rep) {
    nlohmann::ordered_json j;
    j["tie_policy"] = "ties award a win to every tied solver";
    j["num_instances"] = rep.instances.size();
    j["num_errors"] = rep.num_errors;
    nlohmann::ordered_json per_variant = nlohmann::ordered_json::array();
    for (size_t v = 0; v < rep.variants.size(); ++v) {
        nlohmann::ordered_json e;
        e["variant"] = rep.variants[v];
        e["wins"] = rep.wins[v].wins;
        if (rep.wins[v].mean_time)
            e["mean_time_to_win"] = *rep.wins[v].mean_time;
        else
            e["mean_time_to_win"] = nullptr;
        e["mean_score"] = rep.mean_score[v];
        if (rep.mean_cost[v])
            e["mean_cost"] = *rep.mean_cost[v];
        else
            e["mean_cost"] = nullptr;
        e["feasible"] = rep.feasible_count[v];
        per_variant.push_back(e);
    }
    j["per_variant"] = per_variant;
    nlohmann::ordered_json per_instance = nlohmann::ordered_json::array();
    for (size_t i = 0; i < rep.instances.size(); ++i) {
        nlohmann::ordered_json e;
        e["instance"] = rep.instances[i];
        nlohmann::ordered_json scores;
        nlohmann::ordered_json costs;
        for (size_t v = 0; v < rep.variants.size(); ++v) {
            scores[rep.variants[v]] = rep.scores[i][v];
            if (rep.costs[i][v].finite())
                costs[rep.variants[v]] = rep.costs[i][v].value();
            else
                costs[rep.variants[v]] = nullptr;
        }
        e["scores"] = scores;
        e["costs"] = costs;
        per_instance.push_back(e);
    }
    j["per_instance"] = per_instance;
    return j;
}

} // namespace bandsat
