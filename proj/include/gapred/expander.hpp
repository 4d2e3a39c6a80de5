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

/// Undirected d-regular multigraph given by its rotation map; self-loops
/// and parallel edges are allowed. lambda is the certified second singular
/// value of the normalized adjacency matrix on the all-ones complement.
struct regular_graph {
    u64 n = 0;
    u64 d = 0;
    // rotation[v*d + p] = (w, q); applying it twice is the identity
    std::vector<std::pair<u64, u64>> rotation;
    double lambda = -1; // negative until certified

    std::pair<u64, u64> rotate(u64 v, u64 port) const { return rotation[v * d + port]; }

    void check_involution() const {
        for (u64 v = 0; v < n; ++v)
            for (u64 p = 0; p < d; ++p) {
                auto [w, q] = rotate(v, p);
                if (w >= n || q >= d || rotate(w, q) != std::make_pair(v, p))
                    throw verify_error("rotation map is not an involution at (" + std::to_string(v) +
                                       "," + std::to_string(p) + ")");
            }
    }

    /// Normalized adjacency: entry (i,j) is the edge multiplicity over d.
    std::vector<double> normalized_adjacency() const {
        std::vector<double> A(n * n, 0.0);
        for (u64 v = 0; v < n; ++v)
            for (u64 p = 0; p < d; ++p) {
                auto [w, q] = rotate(v, p);
                (void)q;
                A[v * n + w] += 1.0 / static_cast<double>(d);
            }
        return A;
    }
};

namespace detail {

/// Cyclic Jacobi eigensolver for a dense symmetric matrix; returns all
/// eigenvalues. Plenty for the desk sizes this project certifies.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> A, u64 n, double tol = 1e-13) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (u64 i = 0; i < n; ++i)
            for (u64 j = i + 1; j < n; ++j) off += A[i * n + j] * A[i * n + j];
        if (off < tol * tol) break;
        for (u64 p = 0; p < n; ++p)
            for (u64 q = p + 1; q < n; ++q) {
                double apq = A[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = A[p * n + p], aqq = A[q * n + q];
                double theta = (aqq - app) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (u64 k = 0; k < n; ++k) {
                    double akp = A[k * n + p], akq = A[k * n + q];
                    A[k * n + p] = c * akp - s * akq;
                    A[k * n + q] = s * akp + c * akq;
                }
                for (u64 k = 0; k < n; ++k) {
                    double apk = A[p * n + k], aqk = A[q * n + k];
                    A[p * n + k] = c * apk - s * aqk;
                    A[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (u64 i = 0; i < n; ++i) eig[i] = A[i * n + i];
    return eig;
}

inline double power_iteration_abs_max(const std::vector<double>& B, u64 n, double tol, u64 max_iter) {
    // largest |eigenvalue| of symmetric B via shifted iterations on B+I and B-I
    auto dominant = [&](double shift) {
        std::vector<double> v(n), w(n);
        for (u64 i = 0; i < n; ++i) v[i] = 1.0 + std::sin(static_cast<double>(i + 1));
        double prev = 0;
        for (u64 it = 0; it < max_iter; ++it) {
            for (u64 i = 0; i < n; ++i) {
                double acc = shift * v[i];
                for (u64 j = 0; j < n; ++j) acc += B[i * n + j] * v[j];
                w[i] = acc;
            }
            double norm = 0;
            for (double x : w) norm += x * x;
            norm = std::sqrt(norm);
            if (norm == 0) return 0.0;
            for (u64 i = 0; i < n; ++i) v[i] = w[i] / norm;
            if (std::abs(norm - prev) < tol) return norm;
            prev = norm;
        }
        throw verify_error("power iteration did not converge, residual " +
                           double_to_text(std::abs(prev)));
    };
    double hi = dominant(1.0) - 1.0;  // max eigenvalue
    double lo = 1.0 - dominant(-1.0); // min eigenvalue
    return std::max(std::abs(hi), std::abs(lo));
}

} // namespace detail

/// Second singular value on the complement of the all-ones vector, computed
/// on B = A - J/n (the all-ones direction is projected to eigenvalue 0).
/// Dense symmetric eigendecomposition up to n = 2048, power iteration above.
inline double spectral_lambda(const regular_graph& g, u64 dense_limit = 2048) {
    std::vector<double> B = g.normalized_adjacency();
    double inv_n = 1.0 / static_cast<double>(g.n);
    for (u64 i = 0; i < g.n; ++i)
        for (u64 j = 0; j < g.n; ++j) B[i * g.n + j] -= inv_n;
    if (g.n <= dense_limit) {
        double best = 0;
        for (double e : detail::jacobi_eigenvalues(std::move(B), g.n)) best = std::max(best, std::abs(e));
        return best;
    }
    return detail::power_iteration_abs_max(B, g.n, 1e-10, 200000);
}

inline regular_graph certify(regular_graph g) {
    g.check_involution();
    g.lambda = spectral_lambda(g);
    return g;
}

inline regular_graph complete_graph(u64 n) {
    if (n < 2) throw verify_error("complete graph needs n >= 2");
    regular_graph g;
    g.n = n;
    g.d = n - 1;
    g.rotation.resize(n * g.d);
    for (u64 v = 0; v < n; ++v)
        for (u64 p = 0; p < g.d; ++p) {
            u64 w = p < v ? p : p + 1;
            u64 q = v < w ? v : v - 1;
            g.rotation[v * g.d + p] = {w, q};
        }
    return certify(g);
}

inline regular_graph cycle_graph(u64 n) {
    if (n < 2) throw verify_error("cycle needs n >= 2");
    regular_graph g;
    g.n = n;
    g.d = 2;
    g.rotation.resize(n * 2);
    for (u64 v = 0; v < n; ++v) {
        g.rotation[v * 2 + 1] = {(v + 1) % n, 0};
        g.rotation[v * 2 + 0] = {(v + n - 1) % n, 1};
    }
    return certify(g);
}

inline regular_graph disjoint_union(const regular_graph& a, const regular_graph& b) {
    if (a.d != b.d) throw verify_error("disjoint union needs equal degrees");
    regular_graph g;
    g.n = a.n + b.n;
    g.d = a.d;
    g.rotation = a.rotation;
    for (auto [w, q] : b.rotation) g.rotation.emplace_back(w + a.n, q);
    return certify(g);
}

/// Configuration-model d-regular multigraph: the n*d port stubs are paired
/// by a seeded uniform matching.
inline regular_graph random_regular(u64 n, u64 d, u64 seed) {
    if ((n * d) % 2 != 0) throw verify_error("random_regular: n*d must be even");
    if (n <= d) throw verify_error("random_regular: need n > d");
    std::vector<std::pair<u64, u64>> stubs;
    for (u64 v = 0; v < n; ++v)
        for (u64 p = 0; p < d; ++p) stubs.emplace_back(v, p);
    rng r(derive_seed(seed, "expander"));
    r.shuffle(stubs);
    regular_graph g;
    g.n = n;
    g.d = d;
    g.rotation.resize(n * d);
    for (size_t i = 0; i < stubs.size(); i += 2) {
        auto [v, p] = stubs[i];
        auto [w, q] = stubs[i + 1];
        g.rotation[v * d + p] = {w, q};
        g.rotation[w * d + q] = {v, p};
    }
    return certify(g);
}

/// Exact fraction of labeled length-t walks (uniform start, uniform port
/// each step) that stay inside B. Counted by integer DP over steps.
inline fraction walk_hitting_fraction(const regular_graph& g, const std::set<u64>& B, u64 t,
                                      u64 budget = 100000000) {
    if (t == 0) throw verify_error("walk length must be >= 1");
    u128 denom = g.n * pow_u128(g.d, static_cast<unsigned>(t - 1));
    if (denom > budget)
        throw budget_error("walk_hitting_fraction: " + u128_to_string(denom) +
                           " walks exceed budget; use the monte-carlo mode");

    std::vector<u64> cnt(g.n, 0);
    for (u64 v : B) {
        if (v >= g.n) throw verify_error("walk_hitting_fraction: vertex out of range");
        cnt[v] = 1;
    }
    for (u64 step = 1; step < t; ++step) {
        std::vector<u64> next(g.n, 0);
        for (u64 v = 0; v < g.n; ++v) {
            if (cnt[v] == 0) continue;
            for (u64 p = 0; p < g.d; ++p) {
                u64 w = g.rotate(v, p).first;
                if (B.count(w)) next[w] += cnt[v];
            }
        }
        cnt.swap(next);
    }
    u64 stay = 0;
    for (u64 v = 0; v < g.n; ++v) stay += cnt[v];
    return fraction{stay, static_cast<u64>(denom)};
}

inline double walk_hitting_montecarlo(const regular_graph& g, const std::set<u64>& B, u64 t,
                                      u64 trials, u64 seed) {
    rng r(seed);
    u64 hits = 0;
    for (u64 i = 0; i < trials; ++i) {
        u64 v = r.below(g.n);
        bool inside = B.count(v) > 0;
        for (u64 s = 1; s < t && inside; ++s) {
            v = g.rotate(v, r.below(g.d)).first;
            inside = B.count(v) > 0;
        }
        if (inside) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

/// k * d^(t-1) * ((1-lambda)*sqrt(eps) + lambda)^(t-1)
inline double soundness_bound(u64 k, u64 d, u64 t, double lambda, double eps) {
    if (eps < 0 || eps > 1 || lambda < 0 || lambda > 1)
        throw verify_error("soundness_bound: eps and lambda must lie in [0,1]");
    double base = (1.0 - lambda) * std::sqrt(eps) + lambda;
    return static_cast<double>(k) * std::pow(static_cast<double>(d), static_cast<double>(t - 1)) *
           std::pow(base, static_cast<double>(t - 1));
}

/// Gap-amplifying product. Groups are labeled length-t walks on H (start
/// vertex plus t-1 port choices, k*d^(t-1) of them); a group's vertices are
/// the tuples drawn from the walked-through groups of the base graph; two
/// vertices of different groups are adjacent iff the union of their entries
/// is a clique in the base graph.
class product_graph final : public grouped_graph {
public:
    product_graph(std::shared_ptr<const grouped_graph> base, regular_graph h, u64 t)
        : base_(std::move(base)), h_(std::move(h)), t_(t) {
        if (t_ == 0) throw verify_error("product needs t >= 1");
        if (h_.n != base_->group_count())
            throw verify_error("expander vertex count " + std::to_string(h_.n) +
                               " differs from group count " + std::to_string(base_->group_count()));
        walks_per_start_ = pow_u64_checked(h_.d, static_cast<unsigned>(t_ - 1));
    }

    u64 group_count() const override { return h_.n * walks_per_start_; }

    /// base-group sequence visited by the walk with this index
    std::vector<u64> walk_groups(u64 gid) const {
        u64 start = gid / walks_per_start_;
        u64 ports = gid % walks_per_start_;
        std::vector<u64> seq{start};
        u64 v = start;
        for (u64 s = 1; s < t_; ++s) {
            u64 digit = ports / pow_u64_checked(h_.d, static_cast<unsigned>(t_ - 1 - s));
            ports %= pow_u64_checked(h_.d, static_cast<unsigned>(t_ - 1 - s));
            v = h_.rotate(v, digit).first;
            seq.push_back(v);
        }
        return seq;
    }

    u128 group_size(u64 gid) const override {
        u128 s = 1;
        for (u64 c : walk_groups(gid)) s *= base_->group_size(c);
        return s;
    }

    std::vector<vertex_ref> tuple(u64 gid, u128 rank) const {
        std::vector<u64> seq = walk_groups(gid);
        std::vector<vertex_ref> tup(seq.size());
        for (size_t i = seq.size(); i > 0; --i) {
            u128 sz = base_->group_size(seq[i - 1]);
            tup[i - 1] = {seq[i - 1], rank % sz};
            rank /= sz;
        }
        return tup;
    }

    u128 tuple_rank(u64 gid, const std::vector<vertex_ref>& tup) const {
        std::vector<u64> seq = walk_groups(gid);
        u128 rank = 0;
        for (size_t i = 0; i < seq.size(); ++i) {
            if (tup[i].group != seq[i]) throw verify_error("tuple does not match walk groups");
            rank = rank * base_->group_size(seq[i]) + tup[i].rank;
        }
        return rank;
    }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        std::vector<vertex_ref> u = tuple(a.group, a.rank);
        std::vector<vertex_ref> w = tuple(b.group, b.rank);
        u.insert(u.end(), w.begin(), w.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = i + 1; j < u.size(); ++j)
                if (!base_->adjacent(u[i], u[j])) return false;
        return true;
    }

    const regular_graph& expander() const { return h_; }
    u64 t() const { return t_; }

private:
    std::shared_ptr<const grouped_graph> base_;
    regular_graph h_;
    u64 t_;
    u64 walks_per_start_;
};

/// Plain t-fold power for comparison with the expander product: groups are
/// all t-tuples of base groups (k^t of them), with the same tuple vertices
/// and the same union-is-a-clique adjacency.
class tensor_product_graph final : public grouped_graph {
public:
    tensor_product_graph(std::shared_ptr<const grouped_graph> base, u64 t)
        : base_(std::move(base)), t_(t) {
        if (t_ == 0) throw verify_error("tensor product needs t >= 1");
        groups_ = pow_u64_checked(base_->group_count(), static_cast<unsigned>(t_));
    }

    u64 group_count() const override { return groups_; }

    std::vector<u64> tuple_groups(u64 gid) const {
        std::vector<u64> seq(t_);
        for (size_t i = t_; i > 0; --i) {
            seq[i - 1] = gid % base_->group_count();
            gid /= base_->group_count();
        }
        return seq;
    }

    u128 group_size(u64 gid) const override {
        u128 s = 1;
        for (u64 c : tuple_groups(gid)) s *= base_->group_size(c);
        return s;
    }

    std::vector<vertex_ref> tuple(u64 gid, u128 rank) const {
        std::vector<u64> seq = tuple_groups(gid);
        std::vector<vertex_ref> tup(seq.size());
        for (size_t i = seq.size(); i > 0; --i) {
            u128 sz = base_->group_size(seq[i - 1]);
            tup[i - 1] = {seq[i - 1], rank % sz};
            rank /= sz;
        }
        return tup;
    }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        std::vector<vertex_ref> u = tuple(a.group, a.rank);
        std::vector<vertex_ref> w = tuple(b.group, b.rank);
        u.insert(u.end(), w.begin(), w.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = i + 1; j < u.size(); ++j)
                if (!base_->adjacent(u[i], u[j])) return false;
        return true;
    }

private:
    std::shared_ptr<const grouped_graph> base_;
    u64 t_;
    u64 groups_;
};

// -- rotation-map file format ------------------------------------------------

inline std::string write_regular_graph(const regular_graph& g) {
    std::string out = std::to_string(g.n) + " " + std::to_string(g.d) + "\n";
    for (u64 v = 0; v < g.n; ++v)
        for (u64 p = 0; p < g.d; ++p) {
            auto [w, q] = g.rotate(v, p);
            out += std::to_string(v) + " " + std::to_string(p) + " " + std::to_string(w) + " " +
                   std::to_string(q) + "\n";
        }
    return out;
}

inline regular_graph parse_regular_graph(const std::string& text) {
    token_reader tr(text);
    regular_graph g;
    g.n = tr.next_u64("vertex count");
    g.d = tr.next_u64("degree");
    g.rotation.assign(g.n * g.d, {0, 0});
    for (u64 i = 0; i < g.n * g.d; ++i) {
        u64 v = tr.next_u64("vertex");
        u64 p = tr.next_u64("port");
        u64 w = tr.next_u64("vertex");
        u64 q = tr.next_u64("port");
        if (v >= g.n || w >= g.n || p >= g.d || q >= g.d) throw parse_error("rotation entry out of range");
        g.rotation[v * g.d + p] = {w, q};
    }
    return certify(g);
}

} // namespace gapred
