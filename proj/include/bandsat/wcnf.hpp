#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

namespace bandsat {

// A complete assignment: value of variable v (1-based) lives at index v-1.
using Model = std::vector<uint8_t>;

struct Lit {
    int32_t var;  // 1-based
    bool neg;
    friend bool operator==(const Lit&, const Lit&) = default;
};

// Encoded index for per-literal tables: positive literal of v at 2v, negative at 2v+1.
inline int lit_index(Lit l) { return 2 * l.var + (l.neg ? 1 : 0); }

inline bool lit_true_under(Lit l, std::span<const uint8_t> model) {
    return (model[l.var - 1] != 0) != l.neg;
}

enum class Kind : uint8_t { Hard, Soft };

struct Clause {
    std::vector<Lit> lits;
    Kind kind = Kind::Hard;
    uint64_t weight = 0;   // >= 1 iff soft, 0 for hard
    int32_t id = -1;       // dense over all kept clauses, in input order
    int32_t soft_id = -1;  // dense over soft clauses, -1 for hard

    bool is_hard() const { return kind == Kind::Hard; }
    bool is_soft() const { return kind == Kind::Soft; }
};

// Cost of an assignment: total original weight of falsified soft clauses,
// or the infeasible sentinel when a hard clause is falsified. The sentinel
// compares greater than every finite cost and has no numeric value, so
// arithmetic on it is impossible by construction.
class Cost {
public:
    Cost() = default;  // infeasible

    static Cost infeasible() { return Cost(); }
    static Cost of(uint64_t v) {
        Cost c;
        c.finite_ = true;
        c.value_ = v;
        return c;
    }

    bool finite() const { return finite_; }
    uint64_t value() const {
        assert(finite_);
        return value_;
    }

    friend bool operator==(const Cost& a, const Cost& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend bool operator<(const Cost& a, const Cost& b) {
        if (a.finite_ != b.finite_) return a.finite_;
        return a.finite_ && a.value_ < b.value_;
    }
    friend bool operator<=(const Cost& a, const Cost& b) { return a < b || a == b; }
    friend bool operator>(const Cost& a, const Cost& b) { return b < a; }
    friend bool operator>=(const Cost& a, const Cost& b) { return b <= a; }

private:
    bool finite_ = false;
    uint64_t value_ = 0;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One clause as it appears in the input; weight absent for hard clauses.
struct ClauseSpec {
    std::vector<Lit> lits;
    std::optional<uint64_t> weight;
};

// Immutable (W)PMS instance. Shareable across threads after construction.
class Formula {
public:
    int num_vars() const { return num_vars_; }
    int num_clauses() const { return (int)clauses_.size(); }
    int num_hard() const { return num_hard_; }
    int num_soft() const { return num_soft_; }
    uint64_t total_soft_weight() const { return total_soft_weight_; }

    // Weight of soft tautologies removed during normalization; satisfied by
    // every assignment, so it never appears in any cost.
    uint64_t dropped_soft_weight() const { return dropped_soft_weight_; }

    const Clause& clause(int id) const { return clauses_[id]; }
    std::span<const Clause> clauses() const { return clauses_; }
    const Clause& soft_clause(int soft_id) const { return clauses_[soft_ids_[soft_id]]; }

    // Ids of clauses containing l.
    std::span<const int32_t> occurrences(Lit l) const { return occ_[lit_index(l)]; }

    // Structural equality: variable count plus per-clause kind, weight and
    // literal sequence. Dropped-tautology bookkeeping is excluded.
    friend bool operator==(const Formula& a, const Formula& b) {
        if (a.num_vars_ != b.num_vars_ || a.clauses_.size() != b.clauses_.size()) return false;
        for (size_t i = 0; i < a.clauses_.size(); ++i) {
            const Clause& x = a.clauses_[i];
            const Clause& y = b.clauses_[i];
            if (x.kind != y.kind || x.weight != y.weight || x.lits != y.lits) return false;
        }
        return true;
    }

    friend Formula make_formula(int num_vars, const std::vector<ClauseSpec>& specs);

private:
    int num_vars_ = 0;
    int num_hard_ = 0;
    int num_soft_ = 0;
    uint64_t total_soft_weight_ = 0;
    uint64_t dropped_soft_weight_ = 0;
    std::vector<Clause> clauses_;
    std::vector<int32_t> soft_ids_;             // soft_id -> clause id
    std::vector<std::vector<int32_t>> occ_;     // lit_index -> clause ids
};

// Normalizes and indexes the given clauses: duplicate literals are removed,
// tautologies (x and ~x in one clause) are dropped (soft tautology weight is
// recorded as permanently satisfied), ids are assigned densely in input
// order. Throws ParseError on empty clauses, out-of-range variables,
// zero soft weights, or total soft weight overflow.
inline Formula make_formula(int num_vars, const std::vector<ClauseSpec>& specs) {
    if (num_vars < 0) throw ParseError("negative variable count");
    Formula f;
    f.num_vars_ = num_vars;
    f.occ_.assign(2 * (num_vars + 1), {});
    f.clauses_.reserve(specs.size());

    std::vector<Lit> kept;
    for (const ClauseSpec& spec : specs) {
        if (spec.lits.empty()) throw ParseError("clause with zero literals");
        if (spec.weight && *spec.weight == 0) throw ParseError("soft clause weight must be positive");

        kept.clear();
        bool tautology = false;
        for (Lit l : spec.lits) {
            if (l.var < 1 || l.var > num_vars) throw ParseError("literal index out of declared range");
            bool dup = false;
            for (Lit k : kept) {
                if (k.var != l.var) continue;
                if (k.neg == l.neg) {
                    dup = true;  // duplicate literal, drop silently
                } else {
                    tautology = true;
                }
                break;
            }
            if (tautology) break;
            if (!dup) kept.push_back(l);
        }
        if (tautology) {
            if (spec.weight) {
                if (f.dropped_soft_weight_ > std::numeric_limits<uint64_t>::max() - *spec.weight)
                    throw ParseError("total soft weight overflows 64 bits");
                f.dropped_soft_weight_ += *spec.weight;
            }
            continue;
        }

        Clause c;
        c.lits = kept;
        c.id = (int32_t)f.clauses_.size();
        if (spec.weight) {
            c.kind = Kind::Soft;
            c.weight = *spec.weight;
            c.soft_id = f.num_soft_++;
            f.soft_ids_.push_back(c.id);
            if (f.total_soft_weight_ > std::numeric_limits<uint64_t>::max() - c.weight)
                throw ParseError("total soft weight overflows 64 bits");
            f.total_soft_weight_ += c.weight;
        } else {
            c.kind = Kind::Hard;
            f.num_hard_++;
        }
        for (Lit l : c.lits) f.occ_[lit_index(l)].push_back(c.id);
        f.clauses_.push_back(std::move(c));
    }
    return f;
}

inline bool looks_gzipped(std::string_view bytes) {
    return bytes.size() >= 2 && (uint8_t)bytes[0] == 0x1f && (uint8_t)bytes[1] == 0x8b;
}

inline std::string gunzip(std::string_view bytes) {
    z_stream strm{};
    if (inflateInit2(&strm, 15 + 32) != Z_OK) throw ParseError("zlib init failed");
    std::string out;
    std::vector<char> buf(1 << 16);
    strm.next_in = (Bytef*)bytes.data();
    strm.avail_in = (uInt)bytes.size();
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = (Bytef*)buf.data();
        strm.avail_out = (uInt)buf.size();
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw ParseError("corrupt gzip stream");
        }
        out.append(buf.data(), buf.size() - strm.avail_out);
        if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0) {
            inflateEnd(&strm);
            throw ParseError("truncated gzip stream");
        }
    }
    inflateEnd(&strm);
    return out;
}

namespace detail {

inline std::string_view next_token(std::string_view& line) {
    size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    std::string_view tok = line.substr(i, j - i);
    line.remove_prefix(j);
    return tok;
}

inline uint64_t parse_weight(std::string_view tok, const char* what = "clause weight") {
    if (!tok.empty() && tok[0] == '-')
        throw ParseError(std::string(what) + " must be positive");
    uint64_t w = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec == std::errc::result_out_of_range)
        throw ParseError(std::string(what) + " overflows 64 bits");
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what);
    if (w == 0) throw ParseError(std::string(what) + " must be positive");
    return w;
}

inline int64_t parse_int(std::string_view tok, const char* what) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what);
    return v;
}

// Reads "<lits...> 0" from the rest of a clause line.
inline void parse_literals(std::string_view rest, std::vector<Lit>& out) {
    out.clear();
    bool terminated = false;
    while (true) {
        std::string_view tok = next_token(rest);
        if (tok.empty()) break;
        if (terminated) throw ParseError("tokens after clause terminator");
        int64_t v = parse_int(tok, "literal");
        if (v == 0) {
            terminated = true;
            continue;
        }
        if (v > std::numeric_limits<int32_t>::max() || v < -(int64_t)std::numeric_limits<int32_t>::max())
            throw ParseError("literal index out of range");
        out.push_back(Lit{(int32_t)(v < 0 ? -v : v), v < 0});
    }
    if (!terminated) throw ParseError("missing clause terminator");
}

} // namespace detail

// Parses either WCNF dialect, auto-detected:
//  - classic: "p wcnf <nvars> <nclauses> <top>" header; every clause line is
//    "<weight> <lits...> 0", weight >= top marks a hard clause;
//  - modern (MSE 2022+): no header; "h <lits...> 0" is hard, otherwise
//    "<weight> <lits...> 0" is soft. Variable count is the largest index seen.
// Comment lines start with 'c'. Gzipped input is detected by magic bytes.
inline Formula parse_wcnf(std::string_view text) {
    std::string inflated;
    if (looks_gzipped(text)) {
        inflated = gunzip(text);
        text = inflated;
    }

    bool classic = false;
    bool saw_header = false;
    int declared_vars = 0;
    uint64_t top = 0;
    int max_var = 0;
    std::vector<ClauseSpec> specs;
    std::vector<Lit> lits;

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::string_view rest = line;
        std::string_view first = detail::next_token(rest);
        if (first.empty() || first[0] == 'c') continue;

        if (first == "p") {
            if (saw_header || !specs.empty()) throw ParseError("malformed header: misplaced p line");
            std::string_view fmt = detail::next_token(rest);
            if (fmt != "wcnf") throw ParseError("malformed header: expected wcnf");
            int64_t nv = detail::parse_int(detail::next_token(rest), "header variable count");
            detail::parse_int(detail::next_token(rest), "header clause count");  // advisory only
            std::string_view top_tok = detail::next_token(rest);
            if (top_tok.empty()) throw ParseError("malformed header: missing top");
            top = detail::parse_weight(top_tok, "header top");
            if (!detail::next_token(rest).empty()) throw ParseError("malformed header: trailing tokens");
            if (nv < 0 || nv > std::numeric_limits<int32_t>::max())
                throw ParseError("malformed header: bad variable count");
            declared_vars = (int)nv;
            saw_header = true;
            classic = true;
            continue;
        }

        ClauseSpec spec;
        if (classic) {
            uint64_t w = detail::parse_weight(first);
            detail::parse_literals(rest, lits);
            if (w < top) spec.weight = w;  // weight >= top marks hard
        } else {
            if (first == "h") {
                detail::parse_literals(rest, lits);
            } else {
                spec.weight = detail::parse_weight(first);
                detail::parse_literals(rest, lits);
            }
        }
        if (lits.empty()) throw ParseError("clause with zero literals");
        for (Lit l : lits) {
            if (classic && l.var > declared_vars) throw ParseError("literal index out of declared range");
            max_var = std::max(max_var, (int)l.var);
        }
        spec.lits = lits;
        specs.push_back(std::move(spec));
    }

    return make_formula(classic ? declared_vars : max_var, specs);
}

inline Formula load_wcnf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_wcnf(bytes);
}

// Classic dialect with top = total soft weight + 1, clauses in id order.
// parse_wcnf(serialize_wcnf(f)) reproduces f exactly.
inline std::string serialize_wcnf(const Formula& f) {
    uint64_t top = f.total_soft_weight() + 1;
    std::string out = "p wcnf " + std::to_string(f.num_vars()) + ' ' +
                      std::to_string(f.num_clauses()) + ' ' + std::to_string(top) + '\n';
    for (const Clause& c : f.clauses()) {
        out += std::to_string(c.is_hard() ? top : c.weight);
        for (Lit l : c.lits) {
            out += ' ';
            if (l.neg) out += '-';
            out += std::to_string(l.var);
        }
        out += " 0\n";
    }
    return out;
}

// Cost of a complete assignment under f; infeasible when any hard clause
// has no true literal.
inline Cost validate_model(const Formula& f, std::span<const uint8_t> model) {
    if ((int)model.size() != f.num_vars())
        throw std::invalid_argument("model length does not match variable count");
    uint64_t falsified_soft = 0;
    for (const Clause& c : f.clauses()) {
        bool sat = false;
        for (Lit l : c.lits) {
            if (lit_true_under(l, model)) {
                sat = true;
                break;
            }
        }
        if (sat) continue;
        if (c.is_hard()) return Cost::infeasible();
        falsified_soft += c.weight;
    }
    return Cost::of(falsified_soft);
}

} // namespace bandsat
