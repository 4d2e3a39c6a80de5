#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapred/rng.hpp"
#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

/// Clause literals are signed 1-based variable indices, DIMACS style.
using clause = std::vector<int>;

struct cnf_formula {
    int num_vars = 0;
    std::vector<clause> clauses;
    bool normalized = false; // every variable occurs in at most 3 clauses

    int num_clauses() const { return static_cast<int>(clauses.size()); }

    bool operator==(const cnf_formula& o) const {
        return num_vars == o.num_vars && clauses == o.clauses;
    }
};

inline std::vector<int> occurrence_counts(const cnf_formula& f) {
    std::vector<int> occ(static_cast<size_t>(f.num_vars) + 1, 0);
    for (const clause& c : f.clauses)
        for (int lit : c) ++occ[static_cast<size_t>(std::abs(lit))];
    return occ;
}

inline bool occurrences_bounded(const cnf_formula& f, int bound = 3) {
    auto occ = occurrence_counts(f);
    for (size_t v = 1; v < occ.size(); ++v)
        if (occ[v] > bound) return false;
    return true;
}

/// DIMACS CNF parser. Comment lines start with 'c'; clauses are
/// 0-terminated token streams and may span lines. Duplicate literals within
/// a clause are dropped; a clause holding both x and -x, more than 3
/// distinct literals, or an out-of-range variable is a parse error.
inline cnf_formula parse_dimacs(const std::string& text) {
    token_reader tr(text);

    // header
    for (;;) {
        if (tr.eof()) throw parse_error("missing 'p cnf' header");
        std::string t = tr.peek();
        if (t == "c") {
            tr.next("comment");
            tr.skip_line();
            continue;
        }
        break;
    }
    tr.expect("p");
    tr.expect("cnf");
    i64 n = tr.next_int("variable count");
    i64 m = tr.next_int("clause count");
    if (n < 0 || m < 0)
        throw parse_error("line " + std::to_string(tr.line()) + ": negative header counts");

    cnf_formula f;
    f.num_vars = static_cast<int>(n);

    clause cur;
    while (static_cast<i64>(f.clauses.size()) < m) {
        if (tr.eof())
            throw parse_error("line " + std::to_string(tr.line()) + ": expected " +
                              std::to_string(m) + " clauses, got " +
                              std::to_string(f.clauses.size()));
        std::string t = tr.peek();
        if (t == "c") {
            tr.next("comment");
            tr.skip_line();
            continue;
        }
        i64 lit = tr.next_int("literal");
        if (lit == 0) {
            f.clauses.push_back(cur);
            cur.clear();
            continue;
        }
        if (lit < -n || lit > n)
            throw parse_error("line " + std::to_string(tr.line()) + ": literal " +
                              std::to_string(lit) + " out of range (n=" + std::to_string(n) + ")");
        int l = static_cast<int>(lit);
        if (std::find(cur.begin(), cur.end(), l) != cur.end()) continue; // duplicate
        if (std::find(cur.begin(), cur.end(), -l) != cur.end())
            throw parse_error("line " + std::to_string(tr.line()) + ": clause contains both " +
                              std::to_string(std::abs(l)) + " and its negation");
        if (cur.size() == 3)
            throw parse_error("line " + std::to_string(tr.line()) +
                              ": clause has more than 3 distinct literals");
        cur.push_back(l);
    }
    if (!cur.empty())
        throw parse_error("line " + std::to_string(tr.line()) + ": unterminated clause at end of input");

    f.normalized = occurrences_bounded(f);
    return f;
}

/// Canonical DIMACS writer; parse(write(f)) == f and write(parse(s)) == s
/// for canonical s.
inline std::string write_dimacs(const cnf_formula& f) {
    std::string out = "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const clause& c : f.clauses) {
        for (int lit : c) {
            out += std::to_string(lit);
            out.push_back(' ');
        }
        out += "0\n";
    }
    return out;
}

/// Tovey rewrite: every variable with c > 3 occurrences is replaced by c
/// fresh copies, one per occurrence, tied together by the implication cycle
/// (-x^i v x^{i+1 mod c}). Output has <= 3 occurrences per variable and at
/// most 3m + n variables, and is equisatisfiable with the input.
inline cnf_formula tovey_normalize(const cnf_formula& f) {
    auto occ = occurrence_counts(f);

    cnf_formula out;
    out.num_vars = f.num_vars;
    out.clauses = f.clauses;

    std::vector<clause> cycle_clauses;
    for (int v = 1; v <= f.num_vars; ++v) {
        int c = occ[static_cast<size_t>(v)];
        if (c <= 3) continue;
        std::vector<int> copies(static_cast<size_t>(c));
        for (int i = 0; i < c; ++i) copies[static_cast<size_t>(i)] = ++out.num_vars;
        int seen = 0;
        for (clause& cl : out.clauses) {
            for (int& lit : cl) {
                if (std::abs(lit) != v) continue;
                int copy = copies[static_cast<size_t>(seen++)];
                lit = lit > 0 ? copy : -copy;
            }
        }
        for (int i = 0; i < c; ++i)
            cycle_clauses.push_back({-copies[static_cast<size_t>(i)],
                                     copies[static_cast<size_t>((i + 1) % c)]});
    }
    out.clauses.insert(out.clauses.end(), cycle_clauses.begin(), cycle_clauses.end());
    out.normalized = true;
    return out;
}

/// Assignment indexed by variable (1-based); entry v is the value of x_v.
using assignment = std::vector<bool>;

inline bool satisfies(const cnf_formula& f, const assignment& a) {
    for (const clause& c : f.clauses) {
        bool sat = false;
        for (int lit : c) {
            bool val = a[static_cast<size_t>(std::abs(lit))];
            if ((lit > 0) == val) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

/// Exhaustive SAT oracle. Assignments are enumerated in increasing
/// binary-counter order with variable 1 as the lowest bit, and the first
/// model found is returned.
inline std::optional<assignment> sat_bruteforce(const cnf_formula& f, int var_limit = 24) {
    if (f.num_vars > var_limit)
        throw budget_error("sat_bruteforce: " + std::to_string(f.num_vars) +
                           " variables exceed limit " + std::to_string(var_limit));
    u64 total = u64{1} << f.num_vars;
    assignment a(static_cast<size_t>(f.num_vars) + 1, false);
    for (u64 mask = 0; mask < total; ++mask) {
        for (int v = 1; v <= f.num_vars; ++v) a[static_cast<size_t>(v)] = (mask >> (v - 1)) & 1;
        if (satisfies(f, a)) return a;
    }
    return std::nullopt;
}

/// Deterministic generator of random 3-CNFs in which every variable occurs
/// in at most 3 clauses (so the formulas are already in normalized shape).
inline cnf_formula random_occ3_formula(int num_vars, int num_clauses, rng& r) {
    cnf_formula f;
    f.num_vars = num_vars;
    std::vector<int> budget(static_cast<size_t>(num_vars) + 1, 3);
    for (int i = 0; i < num_clauses; ++i) {
        std::vector<int> avail;
        for (int v = 1; v <= num_vars; ++v)
            if (budget[static_cast<size_t>(v)] > 0) avail.push_back(v);
        if (avail.size() < 3) break;
        clause c;
        for (int j = 0; j < 3; ++j) {
            size_t idx = static_cast<size_t>(r.below(avail.size()));
            int v = avail[idx];
            avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(idx));
            --budget[static_cast<size_t>(v)];
            c.push_back(r.coin() ? v : -v);
        }
        std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
        f.clauses.push_back(c);
    }
    f.normalized = true;
    return f;
}

} // namespace gapred
