#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gapred/grouped_graph.hpp"
#include "gapred/rng.hpp"
#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

/// Bipartite grouped instance: k_left + k_right groups, only cross edges.
class biclique_instance {
public:
    virtual ~biclique_instance() = default;
    virtual u64 k_left() const = 0;
    virtual u64 k_right() const = 0;
    virtual u128 left_size(u64 i) const = 0;
    virtual u128 right_size(u64 j) const = 0;
    virtual bool cross_adjacent(u64 i, u128 a, u64 j, u128 b) const = 0;
};

/// Both sides are copies of the source groups; cross groups inherit the
/// source adjacency, and a group faces its own copy through the identity.
class clique_biclique final : public biclique_instance {
public:
    explicit clique_biclique(std::shared_ptr<const grouped_graph> g) : g_(std::move(g)) {}

    u64 k_left() const override { return g_->group_count(); }
    u64 k_right() const override { return g_->group_count(); }
    u128 left_size(u64 i) const override { return g_->group_size(i); }
    u128 right_size(u64 j) const override { return g_->group_size(j); }

    bool cross_adjacent(u64 i, u128 a, u64 j, u128 b) const override {
        if (i == j) return a == b; // same vertex on both sides
        return g_->adjacent({i, a}, {j, b});
    }

    const grouped_graph& source() const { return *g_; }

private:
    std::shared_ptr<const grouped_graph> g_;
};

/// Biclique read back from a side-tagged grouped-graph file.
class materialized_biclique final : public biclique_instance {
public:
    explicit materialized_biclique(materialized_graph g) : g_(std::move(g)) {
        for (u64 i = 0; i < g_.group_count(); ++i) {
            if (g_.side(i) == 'L') left_.push_back(i);
            else if (g_.side(i) == 'R') right_.push_back(i);
            else throw parse_error("biclique groups must carry side tag L or R");
        }
    }

    u64 k_left() const override { return left_.size(); }
    u64 k_right() const override { return right_.size(); }
    u128 left_size(u64 i) const override { return g_.group_size(left_[i]); }
    u128 right_size(u64 j) const override { return g_.group_size(right_[j]); }
    bool cross_adjacent(u64 i, u128 a, u64 j, u128 b) const override {
        return g_.adjacent({left_[i], a}, {right_[j], b});
    }

    const materialized_graph& graph() const { return g_; }

private:
    materialized_graph g_;
    std::vector<u64> left_, right_;
};

/// Materializes a biclique into the side-tagged grouped-graph format.
inline materialized_graph materialize_biclique(const biclique_instance& b,
                                               u64 vertex_budget = 1000000,
                                               u64 pair_budget = 100000000) {
    u128 total = 0;
    std::vector<u64> sizes;
    std::vector<char> sides;
    for (u64 i = 0; i < b.k_left(); ++i) {
        total += b.left_size(i);
        sizes.push_back(static_cast<u64>(b.left_size(i)));
        sides.push_back('L');
    }
    for (u64 j = 0; j < b.k_right(); ++j) {
        total += b.right_size(j);
        sizes.push_back(static_cast<u64>(b.right_size(j)));
        sides.push_back('R');
    }
    if (total > vertex_budget)
        throw budget_error("materialize_biclique: " + u128_to_string(total) +
                           " vertices exceed budget " + std::to_string(vertex_budget));
    u128 pairs = 0;
    for (u64 i = 0; i < b.k_left(); ++i)
        for (u64 j = 0; j < b.k_right(); ++j) pairs += b.left_size(i) * b.right_size(j);
    if (pairs > pair_budget)
        throw budget_error("materialize_biclique: cross-pair enumeration exceeds budget");

    materialized_graph g(sizes, sides);
    for (u64 i = 0; i < b.k_left(); ++i)
        for (u64 j = 0; j < b.k_right(); ++j)
            for (u128 a = 0; a < b.left_size(i); ++a)
                for (u128 w = 0; w < b.right_size(j); ++w)
                    if (b.cross_adjacent(i, a, j, w))
                        g.add_edge({i, a}, {b.k_left() + j, w});
    return g;
}

// -- dispersers ----------------------------------------------------------------

struct disperser {
    u64 m = 0, k = 0, ell = 0, r = 0;
    double eps = 0;
    enum class status { unverified, exact, montecarlo } verified = status::unverified;
    u64 mc_trials = 0;
    std::vector<std::vector<u64>> subsets; // k sorted ell-subsets of [0, m)
};

/// ceil(3m / (eps r)), the subset size of the probabilistic construction.
inline u64 disperser_ell(u64 m, u64 r, double eps) {
    return static_cast<u64>(std::ceil(3.0 * static_cast<double>(m) /
                                      (eps * static_cast<double>(r)) -
                                      1e-9));
}

inline disperser make_disperser(u64 m, u64 k, u64 r, double eps, u64 seed) {
    if (m == 0 || k == 0 || r == 0 || eps <= 0 || eps >= 1)
        throw verify_error("make_disperser: need m,k,r >= 1 and eps in (0,1)");
    disperser d;
    d.m = m;
    d.k = k;
    d.r = r;
    d.eps = eps;
    d.ell = disperser_ell(m, r, eps);
    if (d.ell > m)
        throw verify_error("make_disperser: ell = ceil(3m/(eps r)) = " + std::to_string(d.ell) +
                           " exceeds m = " + std::to_string(m) +
                           "; these parameters admit no such subset family");
    if (std::log(static_cast<double>(k)) > static_cast<double>(m) / static_cast<double>(r) + 1e-12)
        throw verify_error("make_disperser: requires ln k <= m/r");
    rng g(derive_seed(seed, "disperser"));
    for (u64 i = 0; i < k; ++i) d.subsets.push_back(g.subset(m, d.ell));
    return d;
}

struct disperser_report {
    bool ok = true;
    u64 checked = 0;
    std::vector<u64> violating; // r subset indices whose union is too small
};

inline u128 binomial_u128(u64 n, u64 r) {
    if (r > n) return 0;
    u128 acc = 1;
    for (u64 i = 1; i <= r; ++i) {
        acc = acc * (n - r + i);
        acc /= i;
    }
    return acc;
}

/// Exact check of the union property over all r-subsets of the collection.
inline disperser_report verify_disperser_exact(disperser& d, u64 budget = 10000000) {
    if (binomial_u128(d.k, d.r) > budget)
        throw budget_error("verify_disperser: C(k,r) exceeds budget; use monte-carlo mode");
    double need = (1.0 - d.eps) * static_cast<double>(d.m);
    disperser_report rep;
    std::vector<u64> idx(d.r);
    for (u64 i = 0; i < d.r; ++i) idx[i] = i;
    std::vector<char> mark(d.m);
    for (;;) {
        std::fill(mark.begin(), mark.end(), 0);
        u64 usize = 0;
        for (u64 i : idx)
            for (u64 x : d.subsets[i])
                if (!mark[x]) {
                    mark[x] = 1;
                    ++usize;
                }
        ++rep.checked;
        if (static_cast<double>(usize) < need - 1e-9) {
            rep.ok = false;
            rep.violating = idx;
            break;
        }
        // next r-combination of [0, k)
        u64 i = d.r;
        while (i > 0 && idx[i - 1] == d.k - d.r + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (u64 j = i; j < d.r; ++j) idx[j] = idx[j - 1] + 1;
    }
    d.verified = rep.ok ? disperser::status::exact : disperser::status::unverified;
    return rep;
}

inline disperser_report verify_disperser_montecarlo(disperser& d, u64 trials, u64 seed) {
    rng g(seed);
    double need = (1.0 - d.eps) * static_cast<double>(d.m);
    disperser_report rep;
    std::vector<char> mark(d.m);
    for (u64 t = 0; t < trials; ++t) {
        std::vector<u64> idx = g.subset(d.k, d.r);
        std::fill(mark.begin(), mark.end(), 0);
        u64 usize = 0;
        for (u64 i : idx)
            for (u64 x : d.subsets[i])
                if (!mark[x]) {
                    mark[x] = 1;
                    ++usize;
                }
        ++rep.checked;
        if (static_cast<double>(usize) < need - 1e-9) {
            rep.ok = false;
            rep.violating = idx;
            break;
        }
    }
    if (rep.ok && d.verified != disperser::status::exact) {
        d.verified = disperser::status::montecarlo;
        d.mc_trials = trials;
    }
    return rep;
}

// -- disperser-based compression -------------------------------------------------

/// Groups are indexed by the disperser subsets; a vertex is a tuple of
/// source-side vertices along its subset, and a cross edge requires every
/// constituent pair to be cross-adjacent in the source.
class compressed_biclique final : public biclique_instance {
public:
    compressed_biclique(std::shared_ptr<const biclique_instance> src, disperser d)
        : src_(std::move(src)), d_(std::move(d)) {
        if (d_.verified == disperser::status::unverified)
            throw verify_error("compressed_biclique: refuse to compress with an unverified disperser");
        if (d_.m != src_->k_left() || d_.m != src_->k_right())
            throw verify_error("compressed_biclique: disperser ground set must match group count");
    }

    u64 k_left() const override { return d_.k; }
    u64 k_right() const override { return d_.k; }

    u128 left_size(u64 i) const override { return side_size(i, true); }
    u128 right_size(u64 j) const override { return side_size(j, false); }

    std::vector<vertex_ref> decode_left(u64 i, u128 rank) const { return decode(i, rank, true); }
    std::vector<vertex_ref> decode_right(u64 j, u128 rank) const { return decode(j, rank, false); }

    bool cross_adjacent(u64 i, u128 a, u64 j, u128 b) const override {
        std::vector<vertex_ref> lt = decode(i, a, true);
        std::vector<vertex_ref> rt = decode(j, b, false);
        for (const vertex_ref& u : lt)
            for (const vertex_ref& w : rt)
                if (!src_->cross_adjacent(u.group, u.rank, w.group, w.rank)) return false;
        return true;
    }

    const disperser& disp() const { return d_; }
    const biclique_instance& source() const { return *src_; }

private:
    u128 side_size(u64 i, bool left) const {
        u128 s = 1;
        for (u64 g : d_.subsets[i]) {
            s *= left ? src_->left_size(g) : src_->right_size(g);
            if (s > (u128{1} << 100))
                throw budget_error("compressed group size overflows the rank space");
        }
        return s;
    }

    std::vector<vertex_ref> decode(u64 i, u128 rank, bool left) const {
        const auto& sub = d_.subsets[i];
        std::vector<vertex_ref> tup(sub.size());
        for (size_t pos = sub.size(); pos > 0; --pos) {
            u64 g = sub[pos - 1];
            u128 sz = left ? src_->left_size(g) : src_->right_size(g);
            tup[pos - 1] = {g, rank % sz};
            rank /= sz;
        }
        return tup;
    }

    std::shared_ptr<const biclique_instance> src_;
    disperser d_;
};

// -- densest k-subgraph framing ---------------------------------------------------

/// 2k groups: the left side then the right side. Same-side vertices of
/// different groups are always linked; cross-side pairs follow the biclique.
class densest_view final : public grouped_graph {
public:
    explicit densest_view(std::shared_ptr<const biclique_instance> b) : b_(std::move(b)) {}

    u64 group_count() const override { return b_->k_left() + b_->k_right(); }
    u128 group_size(u64 g) const override {
        return g < b_->k_left() ? b_->left_size(g) : b_->right_size(g - b_->k_left());
    }
    char side(u64 g) const override { return g < b_->k_left() ? 'L' : 'R'; }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        bool al = a.group < b_->k_left(), bl = b.group < b_->k_left();
        if (al == bl) return true; // same side, different groups
        const vertex_ref& l = al ? a : b;
        const vertex_ref& r = al ? b : a;
        return b_->cross_adjacent(l.group, l.rank, r.group - b_->k_left(), r.rank);
    }

private:
    std::shared_ptr<const biclique_instance> b_;
};

// -- Kovari-Sos-Turan ---------------------------------------------------------------

/// (1/2) (a-1)^{1/a} n^{2-1/a} + (1/2)(a-1) n
inline double kst_bound(u64 n, u64 a) {
    if (a < 2) throw verify_error("kst_bound needs a >= 2");
    double da = static_cast<double>(a), dn = static_cast<double>(n);
    return 0.5 * std::pow(da - 1.0, 1.0 / da) * std::pow(dn, 2.0 - 1.0 / da) +
           0.5 * (da - 1.0) * dn;
}

/// edges <= n^{3/2}/2 + n/2, decided in exact integer arithmetic.
inline bool kst_check_a2(u64 n, u64 edges) {
    if (2 * edges <= n) return true;
    u128 lhs = static_cast<u128>(2 * edges - n);
    return lhs * lhs <= pow_u128(n, 3);
}

/// Maximum edge count of a K_{2,2}-free graph on n vertices, by
/// branch-and-bound over the edge list. K_{2,2}-freeness is equivalent to
/// every vertex pair having at most one common neighbor, so a candidate
/// edge (u,v) is admissible iff no pair (v,x) with x ~ u and no pair (u,x)
/// with x ~ v already shares a neighbor. Common-neighbor counts are
/// maintained incrementally.
inline u64 kst_max_edges_a2(u64 n) {
    if (n < 2) return 0;
    std::vector<std::pair<u64, u64>> cand;
    for (u64 u = 0; u < n; ++u)
        for (u64 v = u + 1; v < n; ++v) cand.emplace_back(u, v);
    std::vector<std::vector<u64>> nbr(n);
    std::vector<std::vector<std::uint8_t>> cn(n, std::vector<std::uint8_t>(n, 0));
    u64 best = 0;

    auto admissible = [&](u64 u, u64 v) {
        for (u64 x : nbr[u])
            if (cn[v][x] > 0) return false;
        for (u64 x : nbr[v])
            if (cn[u][x] > 0) return false;
        return true;
    };
    auto apply = [&](u64 u, u64 v, int delta) {
        for (u64 x : nbr[u])
            if (x != v) {
                cn[v][x] = static_cast<std::uint8_t>(cn[v][x] + delta);
                cn[x][v] = cn[v][x];
            }
        for (u64 x : nbr[v])
            if (x != u) {
                cn[u][x] = static_cast<std::uint8_t>(cn[u][x] + delta);
                cn[x][u] = cn[u][x];
            }
    };

    auto rec = [&](auto&& self, size_t i, u64 edges) -> void {
        if (edges + (cand.size() - i) <= best) return;
        if (i == cand.size()) {
            best = std::max(best, edges);
            return;
        }
        auto [u, v] = cand[i];
        if (admissible(u, v)) {
            apply(u, v, +1);
            nbr[u].push_back(v);
            nbr[v].push_back(u);
            self(self, i + 1, edges + 1);
            nbr[u].pop_back();
            nbr[v].pop_back();
            apply(u, v, -1);
        }
        self(self, i + 1, edges);
    };
    rec(rec, 0, 0);
    return best;
}

// -- disperser file format -----------------------------------------------------------

inline std::string write_disperser(const disperser& d) {
    std::string out = "disperser\n";
    out += "m " + std::to_string(d.m) + " k " + std::to_string(d.k) + " ell " + std::to_string(d.ell) +
           " r " + std::to_string(d.r) + " eps " + double_to_text(d.eps) + "\n";
    out += "verified ";
    switch (d.verified) {
        case disperser::status::exact: out += "exact"; break;
        case disperser::status::montecarlo: out += "montecarlo:" + std::to_string(d.mc_trials); break;
        case disperser::status::unverified: out += "unverified"; break;
    }
    out += "\n";
    for (const auto& s : d.subsets) {
        for (size_t i = 0; i < s.size(); ++i) {
            if (i) out.push_back(' ');
            out += std::to_string(s[i]);
        }
        out.push_back('\n');
    }
    out += "end\n";
    return out;
}

inline disperser parse_disperser(const std::string& text) {
    token_reader tr(text);
    tr.expect("disperser");
    disperser d;
    tr.expect("m");
    d.m = tr.next_u64("m");
    tr.expect("k");
    d.k = tr.next_u64("k");
    tr.expect("ell");
    d.ell = tr.next_u64("ell");
    tr.expect("r");
    d.r = tr.next_u64("r");
    tr.expect("eps");
    d.eps = tr.next_double("eps");
    tr.expect("verified");
    std::string v = tr.next("verification status");
    if (v == "exact") d.verified = disperser::status::exact;
    else if (v == "unverified") d.verified = disperser::status::unverified;
    else if (v.rfind("montecarlo:", 0) == 0) {
        d.verified = disperser::status::montecarlo;
        d.mc_trials = static_cast<u64>(std::stoull(v.substr(11)));
    } else
        throw parse_error("bad verification status '" + v + "'");
    for (u64 i = 0; i < d.k; ++i) {
        std::vector<u64> s;
        for (u64 j = 0; j < d.ell; ++j) {
            u64 x = tr.next_u64("subset element");
            if (x >= d.m) throw parse_error("subset element out of range");
            s.push_back(x);
        }
        for (size_t j = 1; j < s.size(); ++j)
            if (s[j] <= s[j - 1]) throw parse_error("subset elements must be strictly increasing");
        d.subsets.push_back(std::move(s));
    }
    tr.expect("end");
    return d;
}

} // namespace gapred
