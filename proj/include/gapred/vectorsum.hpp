#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapred/cnf.hpp"
#include "gapred/field.hpp"
#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

struct vectorsum_instance {
    std::uint32_t p = 5;
    size_t d = 0;
    std::vector<std::vector<field_vec>> groups; // k groups of d-dimensional vectors
    field_vec target;                           // zero throughout the pipeline
    bool has_empty_group = false;               // some part was unsatisfiable

    size_t k() const { return groups.size(); }

    size_t total_vectors() const {
        size_t n = 0;
        for (const auto& g : groups) n += g.size();
        return n;
    }
};

/// Clause partition bookkeeping for the SAT-to-VectorSum encoding.
/// Variables in exactly two parts get one vector coordinate, variables in
/// exactly three parts get two; everything else needs no consistency check.
struct partition_layout {
    size_t k = 0;
    std::vector<std::pair<int, int>> part_range; // [first,last] clause indices, 0-based, per part
    std::vector<std::vector<int>> parts_of_var;  // 1-based var -> sorted part ids containing it
    std::vector<int> x_vars;                     // exactly 2 parts
    std::vector<int> y_vars;                     // exactly 3 parts
    std::map<int, size_t> coord_of_var;          // first coordinate owned by the variable
    size_t d = 0;                                // |X| + 2|Y|

    bool in_x(int v) const {
        return parts_of_var[static_cast<size_t>(v)].size() == 2;
    }
    bool in_y(int v) const {
        return parts_of_var[static_cast<size_t>(v)].size() == 3;
    }
};

/// Contiguous deterministic split of the clauses into k nearly equal parts;
/// the first (m mod k) parts take the extra clause.
inline partition_layout partition_clauses(const cnf_formula& f, size_t k) {
    if (!occurrences_bounded(f))
        throw verify_error("partition_clauses requires a formula with <= 3 occurrences per variable");
    size_t m = f.clauses.size();
    if (k == 0 || k > m)
        throw verify_error("partition_clauses: k=" + std::to_string(k) + " exceeds clause count " +
                           std::to_string(m));

    partition_layout L;
    L.k = k;
    size_t base = m / k, extra = m % k, pos = 0;
    for (size_t i = 0; i < k; ++i) {
        size_t len = base + (i < extra ? 1 : 0);
        L.part_range.emplace_back(static_cast<int>(pos), static_cast<int>(pos + len - 1));
        pos += len;
    }

    L.parts_of_var.assign(static_cast<size_t>(f.num_vars) + 1, {});
    for (size_t i = 0; i < k; ++i) {
        auto [lo, hi] = L.part_range[i];
        for (int ci = lo; ci <= hi; ++ci)
            for (int lit : f.clauses[static_cast<size_t>(ci)]) {
                auto& ps = L.parts_of_var[static_cast<size_t>(std::abs(lit))];
                if (ps.empty() || ps.back() != static_cast<int>(i)) ps.push_back(static_cast<int>(i));
            }
    }

    for (int v = 1; v <= f.num_vars; ++v) {
        size_t cnt = L.parts_of_var[static_cast<size_t>(v)].size();
        if (cnt == 2) {
            L.coord_of_var[v] = L.d;
            L.x_vars.push_back(v);
            L.d += 1;
        } else if (cnt == 3) {
            L.coord_of_var[v] = L.d;
            L.y_vars.push_back(v);
            L.d += 2;
        }
    }
    return L;
}

namespace detail {

inline std::vector<int> part_vars(const cnf_formula& f, const partition_layout& L, size_t i) {
    std::vector<int> vars;
    auto [lo, hi] = L.part_range[i];
    for (int ci = lo; ci <= hi; ++ci)
        for (int lit : f.clauses[static_cast<size_t>(ci)]) vars.push_back(std::abs(lit));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

} // namespace detail

/// Vectors of part i: one per distinct restriction, to the checked
/// variables, of an assignment satisfying every clause of the part.
/// The sign pattern depends on the rank of part i among the parts the
/// variable appears in: X-variables contribute +1 at the first part and -1
/// at the second; Y-variables contribute (1,1), (-1,0), (0,-1).
inline std::vector<field_vec> encode_part(const cnf_formula& f, const partition_layout& L, size_t i,
                                          size_t var_limit = 20) {
    prime_field F(5);
    std::vector<int> zvars = detail::part_vars(f, L, i);
    if (zvars.size() > var_limit)
        throw budget_error("encode_part: part " + std::to_string(i) + " has " +
                           std::to_string(zvars.size()) + " variables, limit " +
                           std::to_string(var_limit));

    auto [lo, hi] = L.part_range[i];
    std::vector<field_vec> out;
    u64 total = u64{1} << zvars.size();
    for (u64 mask = 0; mask < total; ++mask) {
        std::map<int, bool> tau;
        for (size_t j = 0; j < zvars.size(); ++j) tau[zvars[j]] = (mask >> j) & 1;

        bool ok = true;
        for (int ci = lo; ci <= hi && ok; ++ci) {
            bool sat = false;
            for (int lit : f.clauses[static_cast<size_t>(ci)])
                if ((lit > 0) == tau[std::abs(lit)]) {
                    sat = true;
                    break;
                }
            ok = sat;
        }
        if (!ok) continue;

        field_vec v(L.d);
        for (int x : zvars) {
            auto& ps = L.parts_of_var[static_cast<size_t>(x)];
            auto it = L.coord_of_var.find(x);
            if (it == L.coord_of_var.end()) continue; // 0/1-part variable, no coordinate
            size_t c0 = it->second;
            int rank = static_cast<int>(std::find(ps.begin(), ps.end(), static_cast<int>(i)) - ps.begin());
            if (!tau[x]) continue; // zero contribution
            if (L.in_x(x)) {
                v[c0] = rank == 0 ? 1 : F.neg(1);
            } else { // Y variable, two coordinates
                if (rank == 0) {
                    v[c0] = 1;
                    v[c0 + 1] = 1;
                } else if (rank == 1) {
                    v[c0] = F.neg(1);
                } else {
                    v[c0 + 1] = F.neg(1);
                }
            }
        }
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

inline vectorsum_instance reduce_sat_to_vectorsum(const cnf_formula& f, size_t k,
                                                  size_t var_limit = 20) {
    partition_layout L = partition_clauses(f, k);
    vectorsum_instance inst;
    inst.p = 5;
    inst.d = L.d;
    inst.target = field_vec(L.d);
    for (size_t i = 0; i < k; ++i) {
        inst.groups.push_back(encode_part(f, L, i, var_limit));
        if (inst.groups.back().empty()) inst.has_empty_group = true;
    }
    return inst;
}

/// Maps a satisfying assignment to the zero-sum witness it induces (one
/// vector index per group). Throws if some induced vector is missing, which
/// would indicate an encoding bug.
inline std::vector<size_t> transport_witness(const cnf_formula& f, const partition_layout& L,
                                             const vectorsum_instance& inst, const assignment& a) {
    prime_field F(5);
    std::vector<size_t> w;
    for (size_t i = 0; i < L.k; ++i) {
        field_vec v(L.d);
        for (int x : detail::part_vars(f, L, i)) {
            auto it = L.coord_of_var.find(x);
            if (it == L.coord_of_var.end() || !a[static_cast<size_t>(x)]) continue;
            auto& ps = L.parts_of_var[static_cast<size_t>(x)];
            size_t c0 = it->second;
            int rank = static_cast<int>(std::find(ps.begin(), ps.end(), static_cast<int>(i)) - ps.begin());
            if (L.in_x(x)) {
                v[c0] = rank == 0 ? 1 : F.neg(1);
            } else {
                if (rank == 0) {
                    v[c0] = 1;
                    v[c0 + 1] = 1;
                } else if (rank == 1) {
                    v[c0] = F.neg(1);
                } else {
                    v[c0 + 1] = F.neg(1);
                }
            }
        }
        auto it = std::find(inst.groups[i].begin(), inst.groups[i].end(), v);
        if (it == inst.groups[i].end())
            throw verify_error("transport_witness: induced vector absent from group " + std::to_string(i));
        w.push_back(static_cast<size_t>(it - inst.groups[i].begin()));
    }
    return w;
}

struct gadget_report {
    bool p3 = true; // no vector is a nonzero scalar multiple of another in its group
    bool p4 = true; // u-w != a*(w-v) for distinct triples and nonzero a
    std::string witness;
    bool ok() const { return p3 && p4; }
};

inline gadget_report check_gadget_properties(const vectorsum_instance& inst, u64 budget = 100000000) {
    prime_field F(inst.p);
    u64 cost = 0;
    for (const auto& g : inst.groups) {
        u64 s = g.size();
        cost += s * s * s * inst.p;
    }
    if (cost > budget)
        throw budget_error("check_gadget_properties: enumeration cost " + std::to_string(cost) +
                           " exceeds budget " + std::to_string(budget));

    gadget_report rep;
    for (size_t i = 0; i < inst.groups.size() && rep.ok(); ++i) {
        const auto& g = inst.groups[i];
        for (size_t a = 0; a < g.size() && rep.ok(); ++a)
            for (size_t b = 0; b < g.size() && rep.ok(); ++b) {
                if (a == b) continue;
                for (residue s = 1; s < inst.p; ++s)
                    if (g[a] == F.vec_scale(s, g[b])) {
                        rep.p3 = false;
                        rep.witness = "group " + std::to_string(i) + ": vector " + std::to_string(a) +
                                      " = " + std::to_string(s) + " * vector " + std::to_string(b);
                        break;
                    }
            }
        for (size_t a = 0; a < g.size() && rep.ok(); ++a)
            for (size_t b = 0; b < g.size() && rep.ok(); ++b)
                for (size_t c = 0; c < g.size() && rep.ok(); ++c) {
                    if (a == b || b == c || a == c) continue;
                    field_vec lhs = F.vec_sub(g[a], g[c]);
                    field_vec rhs = F.vec_sub(g[c], g[b]);
                    for (residue s = 1; s < inst.p; ++s)
                        if (lhs == F.vec_scale(s, rhs)) {
                            rep.p4 = false;
                            rep.witness = "group " + std::to_string(i) + ": (u,v,w)=(" +
                                          std::to_string(a) + "," + std::to_string(b) + "," +
                                          std::to_string(c) + "), a=" + std::to_string(s);
                            break;
                        }
                }
    }
    return rep;
}

/// Exhaustive solver; returns the lexicographically first witness (one
/// vector index per group, group 0 most significant) whose sum equals the
/// target, or nullopt.
inline std::optional<std::vector<size_t>> solve_vectorsum_bruteforce(const vectorsum_instance& inst,
                                                                     u64 budget = 10000000) {
    size_t k = inst.k();
    u128 space = 1;
    for (const auto& g : inst.groups) {
        if (g.empty()) return std::nullopt;
        space *= g.size();
        if (space > budget)
            throw budget_error("solve_vectorsum_bruteforce: search space exceeds budget " +
                               std::to_string(budget));
    }

    prime_field F(inst.p);
    std::vector<size_t> idx(k, 0);
    std::vector<field_vec> prefix(k + 1); // prefix[i] = sum of first i chosen vectors
    prefix[0] = field_vec(inst.d);
    size_t level = 0;
    for (;;) {
        if (level == k) {
            if (prefix[k] == inst.target) return idx;
            // backtrack to deepest level with an unexplored option
            for (;;) {
                if (level == 0) return std::nullopt;
                --level;
                if (++idx[level] < inst.groups[level].size()) break;
            }
            continue;
        }
        if (idx[level] >= inst.groups[level].size()) {
            for (;;) {
                if (level == 0) return std::nullopt;
                --level;
                if (++idx[level] < inst.groups[level].size()) break;
            }
            continue;
        }
        prefix[level + 1] = F.vec_add(prefix[level], inst.groups[level][idx[level]]);
        ++level;
        if (level < k) idx[level] = 0;
    }
}

// -- instance file format --------------------------------------------------

inline std::string write_vectorsum(const vectorsum_instance& inst) {
    std::string out = "vectorsum\n";
    out += "field " + std::to_string(inst.p) + "\n";
    out += "k " + std::to_string(inst.k()) + "\n";
    out += "d " + std::to_string(inst.d) + "\n";
    out += "target";
    for (size_t j = 0; j < inst.d; ++j) out += " " + std::to_string(inst.target[j]);
    out += "\n";
    for (size_t i = 0; i < inst.k(); ++i) {
        out += "group " + std::to_string(i) + " size " + std::to_string(inst.groups[i].size()) + "\n";
        for (const field_vec& v : inst.groups[i]) {
            for (size_t j = 0; j < inst.d; ++j) {
                if (j) out.push_back(' ');
                out += std::to_string(v[j]);
            }
            out.push_back('\n');
        }
    }
    out += "end\n";
    return out;
}

/// Body parser starting at the 'vectorsum' keyword; reused by composite
/// formats that embed an instance.
inline vectorsum_instance parse_vectorsum_body(token_reader& tr) {
    tr.expect("vectorsum");
    tr.expect("field");
    vectorsum_instance inst;
    inst.p = static_cast<std::uint32_t>(tr.next_u64("field modulus"));
    prime_field F(inst.p); // validates primality
    tr.expect("k");
    size_t k = tr.next_u64("group count");
    tr.expect("d");
    inst.d = tr.next_u64("dimension");
    tr.expect("target");
    inst.target = field_vec(inst.d);
    for (size_t j = 0; j < inst.d; ++j) {
        u64 r = tr.next_u64("target entry");
        if (r >= inst.p) throw parse_error("residue " + std::to_string(r) + " not reduced mod p");
        inst.target[j] = static_cast<residue>(r);
    }
    for (size_t i = 0; i < k; ++i) {
        tr.expect("group");
        u64 gi = tr.next_u64("group index");
        if (gi != i) throw parse_error("group indices must be consecutive from 0");
        tr.expect("size");
        u64 sz = tr.next_u64("group size");
        std::vector<field_vec> g;
        for (u64 r = 0; r < sz; ++r) {
            field_vec v(inst.d);
            for (size_t j = 0; j < inst.d; ++j) {
                u64 x = tr.next_u64("vector entry");
                if (x >= inst.p) throw parse_error("residue " + std::to_string(x) + " not reduced mod p");
                v[j] = static_cast<residue>(x);
            }
            g.push_back(v);
        }
        if (g.empty()) inst.has_empty_group = true;
        inst.groups.push_back(std::move(g));
    }
    tr.expect("end");
    return inst;
}

inline vectorsum_instance parse_vectorsum(const std::string& text) {
    token_reader tr(text);
    return parse_vectorsum_body(tr);
}

} // namespace gapred
