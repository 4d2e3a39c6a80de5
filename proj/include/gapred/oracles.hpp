#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapred/grouped_graph.hpp"
#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

struct clique_witness {
    std::vector<vertex_ref> selected; // at most one per covered group, sorted by group
    bool exact = true;                // false when the search budget ran out (lower bound only)

    u64 covered() const { return selected.size(); }
};

/// Maximum-cardinality selection of pairwise-adjacent vertices, at most one
/// per group. Deterministic branch and bound: groups ascending, vertices
/// ascending, pick before skip, first best kept (lexicographically smallest
/// maximum witness). Budget counts search nodes; when exceeded the best
/// witness so far is returned flagged as a lower bound.
inline clique_witness max_grouped_clique(const grouped_graph& g, u64 budget = 50000000) {
    u64 k = g.group_count();
    clique_witness best;
    std::vector<vertex_ref> cur;
    u64 nodes = 0;
    bool truncated = false;

    auto compatible = [&](const vertex_ref& v) {
        for (const vertex_ref& u : cur)
            if (!g.adjacent(u, v)) return false;
        return true;
    };

    // recursive lambda via explicit stack-free recursion
    auto rec = [&](auto&& self, u64 group) -> void {
        if (truncated) return;
        if (best.covered() == k) return; // cannot improve
        if (cur.size() + (k - group) <= best.covered()) return;
        if (group == k) {
            if (cur.size() > best.covered()) best.selected = cur;
            return;
        }
        if (++nodes > budget) {
            truncated = true;
            return;
        }
        for (u128 r = 0; r < g.group_size(group); ++r) {
            vertex_ref v{group, r};
            if (!compatible(v)) continue;
            cur.push_back(v);
            self(self, group + 1);
            cur.pop_back();
            if (truncated || best.covered() == k) return;
        }
        self(self, group + 1); // skip this group
    };
    rec(rec, 0);

    best.exact = !truncated;
    // re-check the witness against the adjacency oracle
    for (size_t i = 0; i < best.selected.size(); ++i)
        for (size_t j = i + 1; j < best.selected.size(); ++j)
            if (!g.adjacent(best.selected[i], best.selected[j]))
                throw verify_error("max_grouped_clique produced an invalid witness");
    return best;
}

struct biclique_witness {
    std::vector<vertex_ref> left, right; // group-sorted selections
    bool exact = true;

    u64 size() const { return std::min<u64>(left.size(), right.size()); }
};

/// Maximum balanced biclique over one-per-group selections: maximizes
/// min(|L|,|R|) where every chosen left vertex is cross-adjacent to every
/// chosen right vertex. Left side is searched; for a fixed left selection
/// the right side decomposes per group. Works for any type exposing
/// k_left/k_right, left_size/right_size and cross_adjacent.
template <typename B>
biclique_witness max_grouped_biclique(const B& b, u64 budget = 50000000) {
    u64 kl = b.k_left(), kr = b.k_right();
    u64 ceiling = std::min(kl, kr);
    biclique_witness best; // (0,0) by convention when no cross edge exists
    std::vector<vertex_ref> cur;
    u64 nodes = 0;
    bool truncated = false;

    // lexicographically first right-side vertex per coverable group, given
    // the current left selection; right picks never constrain each other
    auto right_cover = [&](std::vector<vertex_ref>* out) {
        u64 cover = 0;
        for (u64 j = 0; j < kr; ++j) {
            for (u128 rb = 0; rb < b.right_size(j); ++rb) {
                bool ok = true;
                for (const vertex_ref& u : cur)
                    if (!b.cross_adjacent(u.group, u.rank, j, rb)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    ++cover;
                    if (out) out->push_back({j, rb});
                    break;
                }
            }
        }
        return cover;
    };

    auto rec = [&](auto&& self, u64 group) -> void {
        if (truncated || best.size() == ceiling) return;
        u64 rcov = right_cover(nullptr);
        u64 value = std::min<u64>(cur.size(), rcov);
        if (value > best.size()) {
            best.left = cur;
            best.right.clear();
            right_cover(&best.right);
        }
        // right cover only shrinks as the left selection grows
        u64 bound = std::min<u64>(cur.size() + (kl - group), rcov);
        if (bound <= best.size() || group == kl) return;
        if (++nodes > budget) {
            truncated = true;
            return;
        }
        for (u128 r = 0; r < b.left_size(group); ++r) {
            cur.push_back({group, r});
            self(self, group + 1);
            cur.pop_back();
            if (truncated || best.size() == ceiling) return;
        }
        self(self, group + 1);
    };
    rec(rec, 0);
    best.exact = !truncated;

    for (const vertex_ref& u : best.left)
        for (const vertex_ref& w : best.right)
            if (!b.cross_adjacent(u.group, u.rank, w.group, w.rank))
                throw verify_error("max_grouped_biclique produced an invalid witness");
    return best;
}

struct densest_witness {
    std::vector<vertex_ref> selected; // exactly one per group
    u64 edges = 0;
    bool exact = true;
};

/// Exact maximum induced edge count over selections of one vertex per
/// group. `cross_only` restricts the count to edges between groups of
/// different side tags.
inline densest_witness densest_grouped_subgraph(const grouped_graph& g, u64 budget = 50000000,
                                                bool cross_only = false) {
    u64 k = g.group_count();
    for (u64 i = 0; i < k; ++i)
        if (g.group_size(i) == 0) throw verify_error("densest selection impossible: empty group");

    auto counts_edge = [&](u64 ga, u64 gb) {
        return !cross_only || g.side(ga) != g.side(gb);
    };

    densest_witness best;
    bool have_best = false;
    std::vector<vertex_ref> cur;
    std::vector<u64> gain(k + 1, 0); // edges added by each chosen vertex
    u64 nodes = 0;
    bool truncated = false;

    auto rec = [&](auto&& self, u64 group, u64 edges) -> void {
        if (truncated) return;
        // optimistic completion: every remaining pair could be an edge
        u64 rem = k - group;
        u64 optimistic = edges + rem * static_cast<u64>(cur.size()) + rem * (rem - 1) / 2;
        if (have_best && optimistic <= best.edges) return;
        if (group == k) {
            if (!have_best || edges > best.edges) {
                best.selected = cur;
                best.edges = edges;
                have_best = true;
            }
            return;
        }
        if (++nodes > budget) {
            truncated = true;
            return;
        }
        for (u128 r = 0; r < g.group_size(group); ++r) {
            vertex_ref v{group, r};
            u64 add = 0;
            for (const vertex_ref& u : cur)
                if (counts_edge(u.group, v.group) && g.adjacent(u, v)) ++add;
            cur.push_back(v);
            self(self, group + 1, edges + add);
            cur.pop_back();
            if (truncated) return;
        }
    };
    rec(rec, 0, 0);
    best.exact = !truncated;

    // recount the witness edges through the adjacency oracle
    u64 recount = 0;
    for (size_t i = 0; i < best.selected.size(); ++i)
        for (size_t j = i + 1; j < best.selected.size(); ++j)
            if (counts_edge(best.selected[i].group, best.selected[j].group) &&
                g.adjacent(best.selected[i], best.selected[j]))
                ++recount;
    if (recount != best.edges)
        throw verify_error("densest_grouped_subgraph produced an inconsistent witness");
    return best;
}

// -- witness report files ------------------------------------------------

inline std::string write_witness(const clique_witness& w) {
    std::string out = "witness\n";
    out += "covered " + std::to_string(w.covered()) + "\n";
    out += std::string("exact ") + (w.exact ? "yes" : "lower-bound-only") + "\n";
    for (const vertex_ref& v : w.selected)
        out += "group " + std::to_string(v.group) + " vertex " + u128_to_string(v.rank) + "\n";
    out += "end\n";
    return out;
}

inline clique_witness parse_witness(const std::string& text) {
    token_reader tr(text);
    tr.expect("witness");
    tr.expect("covered");
    u64 covered = tr.next_u64("covered count");
    tr.expect("exact");
    std::string ex = tr.next("exact flag");
    clique_witness w;
    w.exact = ex == "yes";
    for (u64 i = 0; i < covered; ++i) {
        tr.expect("group");
        u64 g = tr.next_u64("group id");
        tr.expect("vertex");
        u128 r = u128_from_string(tr.next("vertex rank"));
        w.selected.push_back({g, r});
    }
    tr.expect("end");
    return w;
}

} // namespace gapred
