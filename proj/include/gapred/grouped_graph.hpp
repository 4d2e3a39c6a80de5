#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

struct vertex_ref {
    u64 group = 0;
    u128 rank = 0;

    bool operator==(const vertex_ref& o) const { return group == o.group && rank == o.rank; }
    bool operator<(const vertex_ref& o) const {
        return group != o.group ? group < o.group : rank < o.rank;
    }
};

/// Multipartite graph with each group an independent set. Adjacency is an
/// oracle; implementations may be implicit (never enumerating vertices).
class grouped_graph {
public:
    virtual ~grouped_graph() = default;

    virtual u64 group_count() const = 0;
    virtual u128 group_size(u64 g) const = 0;

    /// Symmetric, irreflexive, and false whenever both endpoints share a group.
    virtual bool adjacent(const vertex_ref& a, const vertex_ref& b) const = 0;

    /// 'L' / 'R' for bipartite-shaped exports, '-' otherwise.
    virtual char side(u64 g) const {
        (void)g;
        return '-';
    }

    u128 total_vertices() const {
        u128 t = 0;
        for (u64 g = 0; g < group_count(); ++g) t += group_size(g);
        return t;
    }
};

/// Explicit sizes plus an edge set over flat vertex ids.
class materialized_graph final : public grouped_graph {
public:
    materialized_graph() = default;

    materialized_graph(std::vector<u64> sizes, std::vector<char> sides = {})
        : sizes_(std::move(sizes)), sides_(std::move(sides)) {
        if (sides_.empty()) sides_.assign(sizes_.size(), '-');
        rebuild_offsets();
    }

    u64 group_count() const override { return sizes_.size(); }
    u128 group_size(u64 g) const override { return sizes_[g]; }
    char side(u64 g) const override { return sides_[g]; }

    u64 flat_id(const vertex_ref& v) const { return offsets_[v.group] + static_cast<u64>(v.rank); }

    vertex_ref from_flat(u64 id) const {
        u64 g = 0;
        while (g + 1 < offsets_.size() && offsets_[g + 1] <= id) ++g;
        return {g, id - offsets_[g]};
    }

    u64 vertex_total() const { return offsets_.empty() ? 0 : offsets_.back() + sizes_.back(); }

    void add_edge(const vertex_ref& a, const vertex_ref& b) {
        if (a.group == b.group) throw verify_error("edge inside a group");
        edges_.insert(key(flat_id(a), flat_id(b)));
    }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        return edges_.count(key(flat_id(a), flat_id(b))) > 0;
    }

    const std::unordered_set<u64>& edge_keys() const { return edges_; }

    static std::pair<u64, u64> key_pair(u64 k) { return {k >> 32, k & 0xffffffffULL}; }

private:
    static u64 key(u64 x, u64 y) {
        if (x > y) std::swap(x, y);
        if (y >= (u64{1} << 32)) throw budget_error("materialized graph too large for flat edge keys");
        return (x << 32) | y;
    }

    void rebuild_offsets() {
        offsets_.clear();
        u64 acc = 0;
        for (u64 s : sizes_) {
            offsets_.push_back(acc);
            acc += s;
        }
    }

    std::vector<u64> sizes_;
    std::vector<char> sides_;
    std::vector<u64> offsets_;
    std::unordered_set<u64> edges_;
};

/// Deterministic structural copy of any grouped graph; pair enumeration is
/// quadratic in the vertex count, so both budgets apply.
inline materialized_graph materialize(const grouped_graph& g, u64 vertex_budget = 1000000,
                                      u64 pair_budget = 100000000) {
    u128 total = g.total_vertices();
    if (total > vertex_budget)
        throw budget_error("materialize: " + u128_to_string(total) + " vertices exceed budget " +
                           std::to_string(vertex_budget));
    u64 n = static_cast<u64>(total);
    if (n > 1 && static_cast<u128>(n) * (n - 1) / 2 > pair_budget)
        throw budget_error("materialize: pair enumeration exceeds budget " + std::to_string(pair_budget));

    std::vector<u64> sizes;
    std::vector<char> sides;
    for (u64 gi = 0; gi < g.group_count(); ++gi) {
        sizes.push_back(static_cast<u64>(g.group_size(gi)));
        sides.push_back(g.side(gi));
    }
    materialized_graph out(sizes, sides);

    for (u64 ga = 0; ga < g.group_count(); ++ga)
        for (u64 gb = ga + 1; gb < g.group_count(); ++gb)
            for (u128 ra = 0; ra < g.group_size(ga); ++ra)
                for (u128 rb = 0; rb < g.group_size(gb); ++rb) {
                    vertex_ref a{ga, ra}, b{gb, rb};
                    if (g.adjacent(a, b)) out.add_edge(a, b);
                }
    return out;
}

/// Complete multipartite adjacency among the first `clique_groups` groups;
/// all other vertices are isolated. Max clique size is exactly
/// `clique_groups` (or 1 when some groups are left out and nonempty).
class planted_graph final : public grouped_graph {
public:
    planted_graph(u64 k, u64 size, u64 clique_groups)
        : k_(k), size_(size), clique_groups_(clique_groups) {}

    u64 group_count() const override { return k_; }
    u128 group_size(u64) const override { return size_; }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        return a.group < clique_groups_ && b.group < clique_groups_;
    }

private:
    u64 k_, size_, clique_groups_;
};

// -- text format -------------------------------------------------------------

inline std::string write_grouped_graph(const materialized_graph& g) {
    std::string out = "grouped\n";
    out += "groups " + std::to_string(g.group_count()) + "\n";
    for (u64 gi = 0; gi < g.group_count(); ++gi)
        out += "group " + std::to_string(gi) + " size " + u128_to_string(g.group_size(gi)) + " side " +
               g.side(gi) + "\n";
    std::vector<u64> keys(g.edge_keys().begin(), g.edge_keys().end());
    std::sort(keys.begin(), keys.end());
    out += "edges " + std::to_string(keys.size()) + "\n";
    for (u64 k : keys) {
        auto [a, b] = materialized_graph::key_pair(k);
        out += std::to_string(a) + " " + std::to_string(b) + "\n";
    }
    out += "end\n";
    return out;
}

inline materialized_graph parse_grouped_graph(const std::string& text) {
    token_reader tr(text);
    tr.expect("grouped");
    tr.expect("groups");
    u64 k = tr.next_u64("group count");
    std::vector<u64> sizes;
    std::vector<char> sides;
    for (u64 i = 0; i < k; ++i) {
        tr.expect("group");
        if (tr.next_u64("group index") != i) throw parse_error("group indices must be consecutive");
        tr.expect("size");
        sizes.push_back(tr.next_u64("group size"));
        tr.expect("side");
        std::string s = tr.next("side tag");
        if (s != "L" && s != "R" && s != "-") throw parse_error("side tag must be L, R or -");
        sides.push_back(s[0]);
    }
    materialized_graph g(sizes, sides);
    tr.expect("edges");
    u64 ecount = tr.next_u64("edge count");
    for (u64 e = 0; e < ecount; ++e) {
        u64 a = tr.next_u64("edge endpoint");
        u64 b = tr.next_u64("edge endpoint");
        if (a >= g.vertex_total() || b >= g.vertex_total())
            throw parse_error("edge endpoint out of range");
        g.add_edge(g.from_flat(a), g.from_flat(b));
    }
    tr.expect("end");
    return g;
}

} // namespace gapred
