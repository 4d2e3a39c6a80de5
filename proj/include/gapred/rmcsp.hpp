#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gapred/field.hpp"
#include "gapred/grouped_graph.hpp"
#include "gapred/ldt.hpp"
#include "gapred/rng.hpp"
#include "gapred/util.hpp"
#include "gapred/vectorsum.hpp"

namespace gapred {

/// VectorSum instance equipped with the ell projection matrices. The CSP
/// variable space is F^{2k}: a point packs (alpha, beta), alpha-major.
struct rmcsp_instance {
    vectorsum_instance source;
    size_t ell = 0;
    std::vector<field_mat> mats; // ell matrices of shape k x d

    size_t k() const { return source.k(); }
    std::uint32_t p() const { return source.p; }
};

inline size_t default_ell(const vectorsum_instance& src) {
    size_t n = std::max<size_t>(src.total_vectors(), 1);
    size_t lg = 0;
    while ((size_t{1} << lg) < n) ++lg; // ceil(log2 n), log2(1) = 0
    return 2 * src.k() + 4 * lg;
}

struct matrix_property_report {
    bool prop1 = true, prop2 = true, prop3 = true;
    std::string prop1_scope; // "full" or the scoped description
    std::string witness;
    bool ok() const { return prop1 && prop2 && prop3; }
};

/// Precomputed evaluation context shared by the verifier, the graph and the
/// full-clique decision procedure: all f(alpha, v) values and the per-alpha
/// neighbor value sets.
struct rm_context {
    prime_field F;
    size_t k, d, ell;
    u64 pk, p2k, p3k, p4k;
    std::vector<field_vec> alphas; // all alpha in F^k by rank
    // fvals[u][vi][alpha_rank] = f(alpha, V_u[vi])
    std::vector<std::vector<std::vector<field_vec>>> fvals;
    // neighbor_sets[u][alpha_rank] = sorted distinct f-values over V_u
    std::vector<std::vector<std::vector<field_vec>>> neighbor_sets;
    ldt_params ld; // degree-2 coefficients

    explicit rm_context(const rmcsp_instance& inst)
        : F(inst.p()),
          k(inst.k()),
          d(inst.source.d),
          ell(inst.ell),
          pk(pow_u64_checked(inst.p(), static_cast<unsigned>(k))),
          p2k(pow_u64_checked(inst.p(), static_cast<unsigned>(2 * k))),
          p3k(pow_u64_checked(inst.p(), static_cast<unsigned>(3 * k))),
          p4k(pow_u64_checked(inst.p(), static_cast<unsigned>(4 * k))),
          ld(ldt_coefficients(2, F)) {
        alphas.reserve(pk);
        for (u64 r = 0; r < pk; ++r) alphas.push_back(point_unrank(F, k, r));
        fvals.resize(k);
        neighbor_sets.resize(k);
        for (size_t u = 0; u < k; ++u) {
            const auto& group = inst.source.groups[u];
            fvals[u].resize(group.size());
            neighbor_sets[u].assign(pk, {});
            for (size_t vi = 0; vi < group.size(); ++vi) {
                fvals[u][vi].reserve(pk);
                for (u64 ar = 0; ar < pk; ++ar)
                    fvals[u][vi].push_back(bilinear_map(F, alphas[ar], group[vi], inst.mats));
            }
            for (u64 ar = 0; ar < pk; ++ar) {
                auto& s = neighbor_sets[u][ar];
                for (size_t vi = 0; vi < group.size(); ++vi) s.push_back(fvals[u][vi][ar]);
                std::sort(s.begin(), s.end());
                s.erase(std::unique(s.begin(), s.end()), s.end());
            }
        }
    }

    bool in_neighbor_set(size_t u, u64 alpha_rank, const field_vec& val) const {
        const auto& s = neighbor_sets[u][alpha_rank];
        return std::binary_search(s.begin(), s.end(), val);
    }

    u64 pack_point(u64 alpha_rank, u64 beta_rank) const { return alpha_rank * pk + beta_rank; }
    u64 alpha_of(u64 point) const { return point / pk; }
    u64 beta_of(u64 point) const { return point % pk; }
};

inline matrix_property_report verify_matrix_properties(const std::vector<field_mat>& mats,
                                                       const vectorsum_instance& src,
                                                       u64 budget = 10000000) {
    prime_field F(src.p);
    size_t k = src.k(), d = src.d;
    matrix_property_report rep;

    // property 1: every nonzero v in scope has some A_i v != 0
    auto killed = [&](const field_vec& v) {
        for (const field_mat& A : mats)
            if (!F.mat_vec(A, v).is_zero()) return false;
        return true;
    };
    std::vector<field_vec> scope;
    u128 full = d == 0 ? 1 : pow_u128(src.p, static_cast<unsigned>(d));
    if (full <= budget) {
        rep.prop1_scope = "full";
        for (u128 r = 1; r < full && rep.prop1; ++r) {
            field_vec v = point_unrank(F, d, static_cast<u64>(r));
            if (killed(v)) {
                rep.prop1 = false;
                rep.witness = "prop1: all matrices annihilate " + vec_to_text(v);
            }
        }
    } else {
        // scoped verification: group vectors, within-group differences, and
        // all one-per-group sums when the product of sizes is affordable
        rep.prop1_scope = "scoped:vectors,differences";
        for (const auto& g : src.groups) {
            for (const field_vec& v : g) scope.push_back(v);
            for (size_t a = 0; a < g.size(); ++a)
                for (size_t b = a + 1; b < g.size(); ++b) scope.push_back(F.vec_sub(g[a], g[b]));
        }
        u128 combos = 1;
        bool sums_ok = true;
        for (const auto& g : src.groups) {
            combos *= std::max<size_t>(g.size(), 1);
            if (combos > budget) {
                sums_ok = false;
                break;
            }
        }
        if (sums_ok && !src.has_empty_group) {
            rep.prop1_scope += ",sums";
            std::vector<size_t> idx(k, 0);
            for (;;) {
                field_vec s(d);
                for (size_t i = 0; i < k; ++i) s = F.vec_add(s, src.groups[i][idx[i]]);
                scope.push_back(s);
                size_t lvl = k;
                while (lvl > 0 && ++idx[lvl - 1] == src.groups[lvl - 1].size()) idx[--lvl] = 0;
                if (lvl == 0) break;
            }
        }
        for (const field_vec& v : scope) {
            if (v.is_zero()) continue;
            if (killed(v)) {
                rep.prop1 = false;
                rep.witness = "prop1: all matrices annihilate " + vec_to_text(v);
                break;
            }
        }
    }

    // properties 2 and 3 quantify over alpha in F^k; precompute f tables
    u64 pk = pow_u64_checked(src.p, static_cast<unsigned>(k));
    {
        u128 cost2 = 0, cost3 = 0;
        for (const auto& g : src.groups) {
            u128 s = g.size();
            cost2 += s * s / 2 * pk;
            cost3 += s * s * s * pk * pk;
        }
        if (cost2 > budget)
            throw budget_error("verify_matrix_properties: prop2 enumeration exceeds budget");
        if (cost3 > budget)
            throw budget_error("verify_matrix_properties: prop3 enumeration exceeds budget");
    }
    std::vector<field_vec> alphas;
    for (u64 r = 0; r < pk; ++r) alphas.push_back(point_unrank(F, k, r));
    std::vector<std::vector<std::vector<field_vec>>> fv(k);
    for (size_t u = 0; u < k; ++u) {
        fv[u].resize(src.groups[u].size());
        for (size_t vi = 0; vi < src.groups[u].size(); ++vi) {
            fv[u][vi].reserve(pk);
            for (u64 ar = 0; ar < pk; ++ar)
                fv[u][vi].push_back(bilinear_map(F, alphas[ar], src.groups[u][vi], mats));
        }
    }

    for (size_t u = 0; u < k && rep.prop2; ++u)
        for (size_t a = 0; a < src.groups[u].size() && rep.prop2; ++a)
            for (size_t b = a + 1; b < src.groups[u].size() && rep.prop2; ++b)
                for (u64 ar = 1; ar < pk; ++ar)
                    if (fv[u][a][ar] == fv[u][b][ar]) {
                        rep.prop2 = false;
                        rep.witness = "prop2: group " + std::to_string(u) + " vectors " +
                                      std::to_string(a) + "," + std::to_string(b) + " agree at alpha " +
                                      vec_to_text(alphas[ar]);
                        break;
                    }

    // alpha = alpha' = 0 makes both sides vanish for every triple, so that
    // single degenerate pair is excluded; it is also the one pair the
    // uniqueness arguments downstream never consult.
    for (size_t u = 0; u < k && rep.prop3; ++u) {
        size_t s = src.groups[u].size();
        for (size_t a = 0; a < s && rep.prop3; ++a)
            for (size_t b = 0; b < s && rep.prop3; ++b)
                for (size_t c = 0; c < s && rep.prop3; ++c) {
                    if (a == b || b == c || a == c) continue;
                    for (u64 a1 = 0; a1 < pk && rep.prop3; ++a1)
                        for (u64 a2 = 0; a2 < pk; ++a2) {
                            if (a1 == 0 && a2 == 0) continue;
                            u64 a12 = point_rank(F, F.vec_add(alphas[a1], alphas[a2]));
                            if (F.vec_add(fv[u][a][a1], fv[u][b][a2]) == fv[u][c][a12]) {
                                rep.prop3 = false;
                                rep.witness = "prop3: group " + std::to_string(u) + " triple (" +
                                              std::to_string(a) + "," + std::to_string(b) + "," +
                                              std::to_string(c) + ") at alphas " + vec_to_text(alphas[a1]) +
                                              " / " + vec_to_text(alphas[a2]);
                                break;
                            }
                        }
                }
    }
    return rep;
}

/// Rejection-sampled matrices: uniform k x d matrices over F_p, redrawn
/// until the three properties verify. Deterministic for a given seed.
inline std::vector<field_mat> sample_matrices(const vectorsum_instance& src, size_t ell, u64 seed,
                                              u64 max_retries = 100, u64 budget = 10000000) {
    if (ell == 0) throw verify_error("sample_matrices: ell must be >= 1");
    prime_field F(src.p);
    rng r(derive_seed(seed, "matrices"));
    u64 fail1 = 0, fail2 = 0, fail3 = 0;
    for (u64 attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<field_mat> mats;
        for (size_t i = 0; i < ell; ++i) {
            field_mat A(src.k(), src.d);
            for (auto& x : A.a) x = static_cast<residue>(r.below(src.p));
            mats.push_back(std::move(A));
        }
        auto rep = verify_matrix_properties(mats, src, budget);
        if (rep.ok()) return mats;
        if (!rep.prop1) ++fail1;
        if (!rep.prop2) ++fail2;
        if (!rep.prop3) ++fail3;
    }
    throw sampling_error("sample_matrices: no draw passed after " + std::to_string(max_retries) +
                         " retries (prop1 failures " + std::to_string(fail1) + ", prop2 " +
                         std::to_string(fail2) + ", prop3 " + std::to_string(fail3) + ")");
}

inline rmcsp_instance make_rmcsp(vectorsum_instance src, size_t ell, u64 seed,
                                 u64 max_retries = 100, u64 budget = 10000000) {
    rmcsp_instance inst;
    inst.mats = sample_matrices(src, ell, seed, max_retries, budget);
    inst.source = std::move(src);
    inst.ell = ell;
    return inst;
}

// -- tests -------------------------------------------------------------------

enum class rm_kind { low_degree, linearity_alpha, linearity_beta, neighbor, wrap };

struct rm_test {
    rm_kind kind;
    u64 a = 0, b = 0;  // alpha / beta anchor ranks
    u64 c1 = 0, c2 = 0; // kind-specific: line directions, or alpha'/beta'
    size_t u = 0;       // neighbor group
};

inline u64 test_count(const rmcsp_instance& inst, rm_kind kind) {
    u64 pk = pow_u64_checked(inst.p(), static_cast<unsigned>(inst.k()));
    u64 p2k = pk * pk;
    switch (kind) {
        case rm_kind::low_degree: return p2k * p2k;
        case rm_kind::linearity_alpha:
        case rm_kind::linearity_beta: return p2k * pk;
        case rm_kind::neighbor: return inst.k() * p2k;
        case rm_kind::wrap: return p2k;
    }
    return 0;
}

inline rm_test test_at(const rmcsp_instance& inst, rm_kind kind, u64 idx) {
    u64 pk = pow_u64_checked(inst.p(), static_cast<unsigned>(inst.k()));
    rm_test t;
    t.kind = kind;
    switch (kind) {
        case rm_kind::low_degree:
            t.c2 = idx % pk; idx /= pk;
            t.c1 = idx % pk; idx /= pk;
            t.b = idx % pk; idx /= pk;
            t.a = idx;
            break;
        case rm_kind::linearity_alpha:
            t.b = idx % pk; idx /= pk;
            t.c1 = idx % pk; idx /= pk;
            t.a = idx;
            break;
        case rm_kind::linearity_beta:
            t.c2 = idx % pk; idx /= pk;
            t.b = idx % pk; idx /= pk;
            t.a = idx;
            break;
        case rm_kind::neighbor:
            t.b = idx % pk; idx /= pk;
            t.a = idx % pk; idx /= pk;
            t.u = idx;
            break;
        case rm_kind::wrap:
            t.b = idx % pk; idx /= pk;
            t.a = idx;
            break;
    }
    return t;
}

/// Points a test queries, with the coefficient each occurrence carries in
/// the test's linear predicate (neighbor/wrap use the difference form).
struct test_constraint {
    std::vector<u64> points;      // distinct, ascending
    std::vector<residue> coeffs;  // aggregated per point; zero rows kept
    int pivot = -1;               // last index with nonzero coefficient
};

namespace rmdetail {

inline test_constraint aggregate(const prime_field& F, std::vector<std::pair<u64, residue>> occ) {
    std::sort(occ.begin(), occ.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    test_constraint c;
    for (const auto& [pt, co] : occ) {
        if (!c.points.empty() && c.points.back() == pt)
            c.coeffs.back() = F.add(c.coeffs.back(), co);
        else {
            c.points.push_back(pt);
            c.coeffs.push_back(co);
        }
    }
    for (size_t i = 0; i < c.coeffs.size(); ++i)
        if (c.coeffs[i] != 0) c.pivot = static_cast<int>(i);
    return c;
}

inline test_constraint constraint_of(const rm_context& cx, const rm_test& t) {
    std::vector<std::pair<u64, residue>> occ;
    switch (t.kind) {
        case rm_kind::low_degree: {
            // points (a + i*c1, b + i*c2) with the degree-2 line coefficients
            field_vec a = cx.alphas[t.a], b = cx.alphas[t.b];
            field_vec t1 = cx.alphas[t.c1], t2 = cx.alphas[t.c2];
            field_vec pa = a, pb = b;
            for (size_t i = 0; i < 4; ++i) {
                occ.emplace_back(cx.pack_point(point_rank(cx.F, pa), point_rank(cx.F, pb)),
                                 cx.ld.alphas[i]);
                pa = cx.F.vec_add(pa, t1);
                pb = cx.F.vec_add(pb, t2);
            }
            break;
        }
        case rm_kind::linearity_alpha: {
            u64 sum = point_rank(cx.F, cx.F.vec_add(cx.alphas[t.a], cx.alphas[t.c1]));
            occ.emplace_back(cx.pack_point(t.a, t.b), 1);
            occ.emplace_back(cx.pack_point(t.c1, t.b), 1);
            occ.emplace_back(cx.pack_point(sum, t.b), cx.F.neg(1));
            break;
        }
        case rm_kind::linearity_beta: {
            u64 sum = point_rank(cx.F, cx.F.vec_add(cx.alphas[t.b], cx.alphas[t.c2]));
            occ.emplace_back(cx.pack_point(t.a, t.b), 1);
            occ.emplace_back(cx.pack_point(t.a, t.c2), 1);
            occ.emplace_back(cx.pack_point(t.a, sum), cx.F.neg(1));
            break;
        }
        case rm_kind::neighbor:
        case rm_kind::wrap: {
            field_vec shift(cx.k);
            if (t.kind == rm_kind::wrap)
                for (size_t i = 0; i < cx.k; ++i) shift[i] = 1;
            else
                shift[t.u] = 1;
            u64 bshift = point_rank(cx.F, cx.F.vec_add(cx.alphas[t.b], shift));
            occ.emplace_back(cx.pack_point(t.a, t.b), cx.F.neg(1));
            occ.emplace_back(cx.pack_point(t.a, bshift), 1);
            break;
        }
    }
    return aggregate(cx.F, occ);
}

} // namespace rmdetail

/// Assignment over the CSP variable space: a total tabulated map F^{2k} -> F^ell.
using rm_assignment = tabulated_function;

/// x(alpha, beta) = f(alpha, sum_i beta_i * v_i) for the chosen witness.
inline rm_assignment intended_assignment(const rmcsp_instance& inst,
                                         const std::vector<size_t>& witness) {
    if (witness.size() != inst.k())
        throw verify_error("intended_assignment: witness needs one vector per group");
    prime_field F(inst.p());
    size_t k = inst.k();
    u64 pk = pow_u64_checked(inst.p(), static_cast<unsigned>(k));

    rm_assignment asg = tabulated_function::zero(inst.p(), 2 * k, inst.ell);
    std::vector<field_vec> beta_sum(pk, field_vec(inst.source.d));
    for (u64 br = 0; br < pk; ++br) {
        field_vec beta = point_unrank(F, k, br);
        field_vec s(inst.source.d);
        for (size_t i = 0; i < k; ++i)
            s = F.vec_add(s, F.vec_scale(beta[i], inst.source.groups[i][witness[i]]));
        beta_sum[br] = s;
    }
    for (u64 ar = 0; ar < pk; ++ar) {
        field_vec alpha = point_unrank(F, k, ar);
        for (u64 br = 0; br < pk; ++br)
            asg.table[ar * pk + br] = bilinear_map(F, alpha, beta_sum[br], inst.mats);
    }
    return asg;
}

inline bool check_test(const rm_context& cx, const rmcsp_instance& inst, const rm_assignment& asg,
                       const rm_test& t) {
    switch (t.kind) {
        case rm_kind::low_degree:
        case rm_kind::linearity_alpha:
        case rm_kind::linearity_beta: {
            auto c = rmdetail::constraint_of(cx, t);
            field_vec acc(inst.ell);
            for (size_t i = 0; i < c.points.size(); ++i)
                acc = cx.F.vec_add(acc, cx.F.vec_scale(c.coeffs[i], asg.table[c.points[i]]));
            return acc.is_zero();
        }
        case rm_kind::neighbor: {
            field_vec shift(inst.k());
            shift[t.u] = 1;
            u64 bshift = point_rank(cx.F, cx.F.vec_add(cx.alphas[t.b], shift));
            field_vec diff = cx.F.vec_sub(asg.table[cx.pack_point(t.a, bshift)],
                                          asg.table[cx.pack_point(t.a, t.b)]);
            return cx.in_neighbor_set(t.u, t.a, diff);
        }
        case rm_kind::wrap: {
            field_vec ones(inst.k());
            for (size_t i = 0; i < inst.k(); ++i) ones[i] = 1;
            u64 bshift = point_rank(cx.F, cx.F.vec_add(cx.alphas[t.b], ones));
            return asg.table[cx.pack_point(t.a, bshift)] == asg.table[cx.pack_point(t.a, t.b)];
        }
    }
    return false;
}

inline bool check_test(const rmcsp_instance& inst, const rm_assignment& asg, const rm_test& t) {
    rm_context cx(inst);
    return check_test(cx, inst, asg, t);
}

// -- the grouped clique graph -------------------------------------------------

/// Vertex identified by its group and the values it assigns to the group's
/// queried points (one value per distinct point, constraint satisfied).
struct rm_vertex {
    u64 gid = 0;
    std::vector<field_vec> values;
};

/// Implicit constant-gap clique graph: 2 copies of each degree-2 line test
/// group, p^k copies of each linearity test group, 4p^{2k} copies of each
/// variable group; 8p^{4k} groups in total.
class rmcsp_graph final : public grouped_graph {
public:
    explicit rmcsp_graph(std::shared_ptr<const rmcsp_instance> inst)
        : inst_(std::move(inst)), cx_(*inst_) {
        if (inst_->ell > 18)
            throw budget_error("rmcsp_graph: ell=" + std::to_string(inst_->ell) +
                               " exceeds the 128-bit vertex-rank limit (ell <= 18)");
        b1_ = 2 * cx_.p4k;
        b2_ = 2 * cx_.p3k * cx_.pk;
        b3_ = cx_.p2k * 4 * cx_.p2k;
        pell_ = pow_u128(inst_->p(), static_cast<unsigned>(inst_->ell));
    }

    const rmcsp_instance& instance() const { return *inst_; }
    const rm_context& cx() const { return cx_; }

    u64 group_count() const override { return b1_ + b2_ + b3_; }

    struct group_info {
        bool is_var;      // type-3
        rm_test test;     // valid when !is_var
        test_constraint constraint;
        u64 var_point = 0; // valid when is_var
        u64 copy = 0;
    };

    group_info describe(u64 gid) const {
        group_info gi;
        if (gid < b1_) {
            gi.is_var = false;
            gi.copy = gid % 2;
            gi.test = test_at(*inst_, rm_kind::low_degree, gid / 2);
            gi.constraint = rmdetail::constraint_of(cx_, gi.test);
        } else if (gid < b1_ + b2_) {
            u64 off = gid - b1_;
            gi.is_var = false;
            gi.copy = off % cx_.pk;
            u64 t = off / cx_.pk;
            gi.test = t < cx_.p3k ? test_at(*inst_, rm_kind::linearity_alpha, t)
                                  : test_at(*inst_, rm_kind::linearity_beta, t - cx_.p3k);
            gi.constraint = rmdetail::constraint_of(cx_, gi.test);
        } else {
            u64 off = gid - b1_ - b2_;
            gi.is_var = true;
            gi.copy = off % (4 * cx_.p2k);
            gi.var_point = off / (4 * cx_.p2k);
        }
        return gi;
    }

    u128 group_size(u64 gid) const override {
        group_info gi = describe(gid);
        if (gi.is_var) return pell_;
        size_t free = gi.constraint.points.size() - (gi.constraint.pivot >= 0 ? 1 : 0);
        return pow_u128(inst_->p(), static_cast<unsigned>(free * inst_->ell));
    }

    /// rank -> payload: free points carry base-p^ell digits (first point
    /// most significant); the pivot value completes the constraint.
    std::vector<field_vec> payload_of(const group_info& gi, u128 rank) const {
        if (gi.is_var) return {value_unrank(static_cast<u64>(rank))};
        const test_constraint& c = gi.constraint;
        std::vector<field_vec> vals(c.points.size());
        size_t free = c.points.size() - (c.pivot >= 0 ? 1 : 0);
        std::vector<u64> digits(free);
        for (size_t i = free; i > 0; --i) {
            digits[i - 1] = static_cast<u64>(rank % static_cast<u128>(pell_));
            rank /= static_cast<u128>(pell_);
        }
        size_t di = 0;
        for (size_t i = 0; i < c.points.size(); ++i) {
            if (static_cast<int>(i) == c.pivot) continue;
            vals[i] = value_unrank(digits[di++]);
        }
        if (c.pivot >= 0) {
            field_vec acc(inst_->ell);
            for (size_t i = 0; i < c.points.size(); ++i) {
                if (static_cast<int>(i) == c.pivot) continue;
                acc = cx_.F.vec_add(acc, cx_.F.vec_scale(c.coeffs[i], vals[i]));
            }
            residue inv = cx_.F.inv(c.coeffs[static_cast<size_t>(c.pivot)]);
            vals[static_cast<size_t>(c.pivot)] =
                cx_.F.vec_scale(cx_.F.neg(inv), acc);
        }
        return vals;
    }

    /// payload -> rank; nullopt when the payload violates the constraint
    /// (no such vertex exists in the group).
    std::optional<u128> rank_of(const group_info& gi, const std::vector<field_vec>& vals) const {
        if (gi.is_var) return static_cast<u128>(value_rank(vals[0]));
        const test_constraint& c = gi.constraint;
        field_vec acc(inst_->ell);
        for (size_t i = 0; i < c.points.size(); ++i)
            acc = cx_.F.vec_add(acc, cx_.F.vec_scale(c.coeffs[i], vals[i]));
        if (!acc.is_zero()) return std::nullopt;
        u128 rank = 0;
        for (size_t i = 0; i < c.points.size(); ++i) {
            if (static_cast<int>(i) == c.pivot) continue;
            rank = rank * static_cast<u128>(pell_) + value_rank(vals[i]);
        }
        return rank;
    }

    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        if (a.group == b.group) return false;
        group_info ga = describe(a.group), gb = describe(b.group);
        return adjacent_payload(ga, payload_of(ga, a.rank), gb, payload_of(gb, b.rank));
    }

    bool adjacent_vertices(const rm_vertex& a, const rm_vertex& b) const {
        if (a.gid == b.gid) return false;
        return adjacent_payload(describe(a.gid), a.values, describe(b.gid), b.values);
    }

    /// Edge rules. Test-test: agreement on shared points. Variable-test:
    /// agreement or irrelevance. Variable-variable: the neighbor / all-ones
    /// difference conditions when such a test exists, else always linked.
    bool adjacent_payload(const group_info& ga, const std::vector<field_vec>& va,
                          const group_info& gb, const std::vector<field_vec>& vb) const {
        if (!ga.is_var && !gb.is_var) {
            size_t i = 0, j = 0;
            const auto& pa = ga.constraint.points;
            const auto& pb = gb.constraint.points;
            while (i < pa.size() && j < pb.size()) {
                if (pa[i] < pb[j]) ++i;
                else if (pa[i] > pb[j]) ++j;
                else {
                    if (va[i] != vb[j]) return false;
                    ++i;
                    ++j;
                }
            }
            return true;
        }
        if (ga.is_var && !gb.is_var) return adjacent_payload(gb, vb, ga, va);
        if (!ga.is_var && gb.is_var) {
            const auto& pa = ga.constraint.points;
            auto it = std::lower_bound(pa.begin(), pa.end(), gb.var_point);
            if (it == pa.end() || *it != gb.var_point) return true; // irrelevant
            return va[static_cast<size_t>(it - pa.begin())] == vb[0];
        }
        return var_pair_consistent(ga.var_point, va[0], gb.var_point, vb[0]);
    }

    /// Variable-variable rule, exposed for the exhaustive pair checks.
    bool var_pair_consistent(u64 qa, const field_vec& ca, u64 qb, const field_vec& cb) const {
        if (qa == qb) return true; // no test between a variable and itself
        u64 aa = cx_.alpha_of(qa), ab = cx_.alpha_of(qb);
        if (aa != ab) return true;
        field_vec beta_a = point_unrank(cx_.F, cx_.k, cx_.beta_of(qa));
        field_vec beta_b = point_unrank(cx_.F, cx_.k, cx_.beta_of(qb));
        field_vec delta = cx_.F.vec_sub(beta_b, beta_a);

        // classify delta among +-e_u and +-1
        size_t ones = 0, minus_ones = 0, zeros = 0;
        size_t one_pos = 0, minus_pos = 0;
        for (size_t i = 0; i < cx_.k; ++i) {
            if (delta[i] == 1) {
                ++ones;
                one_pos = i;
            } else if (delta[i] == cx_.F.p() - 1) {
                ++minus_ones;
                minus_pos = i;
            } else if (delta[i] == 0)
                ++zeros;
        }
        // neighbor test from qa to qb: beta_b = beta_a + e_u
        if (ones == 1 && zeros == cx_.k - 1 &&
            !cx_.in_neighbor_set(one_pos, aa, cx_.F.vec_sub(cb, ca)))
            return false;
        // neighbor test from qb to qa
        if (minus_ones == 1 && zeros == cx_.k - 1 &&
            !cx_.in_neighbor_set(minus_pos, aa, cx_.F.vec_sub(ca, cb)))
            return false;
        // wrap test in either orientation
        if ((ones == cx_.k || minus_ones == cx_.k) && ca != cb) return false;
        // no test exists between any other pair, so they are always linked
        return true;
    }

    u64 type1_groups() const { return b1_; }
    u64 type2_groups() const { return b2_; }
    u64 type3_groups() const { return b3_; }
    u64 type3_first() const { return b1_ + b2_; }

private:
    field_vec value_unrank(u64 r) const { return point_unrank(cx_.F, inst_->ell, r); }
    u64 value_rank(const field_vec& v) const { return point_rank(cx_.F, v); }

    std::shared_ptr<const rmcsp_instance> inst_;
    rm_context cx_;
    u64 b1_, b2_, b3_;
    u128 pell_;
};

/// View of the variable (type-3) layer as a standalone grouped graph, for
/// materialization at desk scale.
class rmcsp_type3_view final : public grouped_graph {
public:
    explicit rmcsp_type3_view(std::shared_ptr<const rmcsp_graph> g) : g_(std::move(g)) {}

    u64 group_count() const override { return g_->type3_groups(); }
    u128 group_size(u64 g) const override { return g_->group_size(g_->type3_first() + g); }
    bool adjacent(const vertex_ref& a, const vertex_ref& b) const override {
        return g_->adjacent({g_->type3_first() + a.group, a.rank},
                            {g_->type3_first() + b.group, b.rank});
    }

private:
    std::shared_ptr<const rmcsp_graph> g_;
};

/// One vertex per group, following the intended assignment of a yes-witness.
/// Throws if some group has no consistent vertex (an implementation bug, or
/// not actually a witness).
inline std::vector<rm_vertex> witness_clique(const rmcsp_graph& g, const rm_assignment& asg) {
    std::vector<rm_vertex> out;
    out.reserve(g.group_count());
    for (u64 gid = 0; gid < g.group_count(); ++gid) {
        auto gi = g.describe(gid);
        rm_vertex v;
        v.gid = gid;
        if (gi.is_var) {
            v.values = {asg.table[gi.var_point]};
        } else {
            for (u64 pt : gi.constraint.points) v.values.push_back(asg.table[pt]);
            if (!g.rank_of(gi, v.values))
                throw verify_error("witness_clique: assignment violates test of group " +
                                   std::to_string(gid));
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Exact vertex count of the graph without constructing it, by iterating
/// the test space; nullopt when the sizes leave 128 bits or the test space
/// exceeds the budget.
inline std::optional<u128> exact_vertex_total(const rmcsp_instance& inst, u64 test_budget = 5000000) {
    if (3 * inst.ell > 54) return std::nullopt; // 5^(3*ell) must fit u128 headroom
    rm_context cx(inst);
    if (cx.p4k > test_budget) return std::nullopt;
    u128 pell = pow_u128(inst.p(), static_cast<unsigned>(inst.ell));
    auto group_size = [&](const test_constraint& c) {
        size_t free = c.points.size() - (c.pivot >= 0 ? 1 : 0);
        return pow_u128(inst.p(), static_cast<unsigned>(free * inst.ell));
    };
    u128 total = 0;
    for (u64 i = 0; i < test_count(inst, rm_kind::low_degree); ++i)
        total += 2 * group_size(rmdetail::constraint_of(cx, test_at(inst, rm_kind::low_degree, i)));
    for (rm_kind kind : {rm_kind::linearity_alpha, rm_kind::linearity_beta})
        for (u64 i = 0; i < test_count(inst, kind); ++i)
            total += cx.pk * group_size(rmdetail::constraint_of(cx, test_at(inst, kind, i)));
    total += static_cast<u128>(cx.p2k) * (4 * cx.p2k) * pell;
    return total;
}

// -- exact full-clique decision ------------------------------------------------

/// A full clique in the graph is equivalent to an assignment passing every
/// test of every family. An assignment passing every additivity test is
/// additive in alpha and in beta separately, hence F_p-linear in each, hence
/// of the bilinear form x(alpha,beta) = sum_{i,j} alpha_i beta_j C_{i,j};
/// such forms pass every degree-2 line test. The decision therefore reduces
/// to: per column u, enumerate all C_{.,u} passing every neighbor test, then
/// search for per-column candidates with zero row sums (the wrap tests).
struct full_clique_report {
    bool exists = false;
    // candidate columns per group: each is k values in F^ell
    std::vector<std::vector<std::vector<field_vec>>> candidates;
    std::vector<size_t> combo;   // chosen candidate per group when exists
    std::string failing_family;  // "neighbor" or "wrap" when !exists
    std::string detail;
};

inline full_clique_report decide_full_clique(const rmcsp_instance& inst, u64 budget = 20000000) {
    rm_context cx(inst);
    size_t k = inst.k(), ell = inst.ell;
    u128 space = pow_u128(inst.p(), static_cast<unsigned>(k * ell));
    if (space > budget)
        throw budget_error("decide_full_clique: candidate space " + u128_to_string(space) +
                           " exceeds budget " + std::to_string(budget));

    full_clique_report rep;
    rep.candidates.resize(k);
    u64 pell = pow_u64_checked(inst.p(), static_cast<unsigned>(ell));
    for (size_t u = 0; u < k; ++u) {
        for (u64 cr = 0; cr < static_cast<u64>(space); ++cr) {
            // decode a column: k values in F^ell
            std::vector<field_vec> col(k);
            u64 t = cr;
            for (size_t i = k; i > 0; --i) {
                col[i - 1] = point_unrank(cx.F, ell, t % pell);
                t /= pell;
            }
            bool ok = true;
            for (u64 ar = 1; ar < cx.pk && ok; ++ar) {
                field_vec lhs(ell);
                for (size_t i = 0; i < k; ++i)
                    lhs = cx.F.vec_add(lhs, cx.F.vec_scale(cx.alphas[ar][i], col[i]));
                ok = cx.in_neighbor_set(u, ar, lhs);
            }
            if (ok) rep.candidates[u].push_back(std::move(col));
        }
        if (rep.candidates[u].empty()) {
            rep.failing_family = "neighbor";
            rep.detail = "no bilinear column passes every neighbor test for group " + std::to_string(u);
            return rep;
        }
    }

    // zero row-sum search across columns (the wrap family)
    std::vector<size_t> pick(k, 0);
    auto rec = [&](auto&& self, size_t u, std::vector<field_vec> sums) -> bool {
        if (u == k) {
            for (const field_vec& s : sums)
                if (!s.is_zero()) return false;
            return true;
        }
        for (size_t c = 0; c < rep.candidates[u].size(); ++c) {
            std::vector<field_vec> next = sums;
            for (size_t i = 0; i < k; ++i) next[i] = cx.F.vec_add(next[i], rep.candidates[u][c][i]);
            pick[u] = c;
            if (self(self, u + 1, std::move(next))) return true;
        }
        return false;
    };
    if (rec(rec, 0, std::vector<field_vec>(k, field_vec(ell)))) {
        rep.exists = true;
        rep.combo = pick;
    } else {
        rep.failing_family = "wrap";
        rep.detail = "every neighbor-consistent choice of columns has a nonzero row sum";
    }
    return rep;
}

/// Bilinear assignment induced by chosen candidate columns.
inline rm_assignment assignment_from_columns(const rmcsp_instance& inst,
                                             const std::vector<std::vector<field_vec>>& cols) {
    rm_context cx(inst);
    rm_assignment asg = tabulated_function::zero(inst.p(), 2 * inst.k(), inst.ell);
    for (u64 ar = 0; ar < cx.pk; ++ar)
        for (u64 br = 0; br < cx.pk; ++br) {
            field_vec acc(inst.ell);
            for (size_t i = 0; i < inst.k(); ++i)
                for (size_t j = 0; j < inst.k(); ++j) {
                    residue c = cx.F.mul(cx.alphas[ar][i], cx.alphas[br][j]);
                    acc = cx.F.vec_add(acc, cx.F.vec_scale(c, cols[j][i]));
                }
            asg.table[ar * cx.pk + br] = acc;
        }
    return asg;
}

// -- instance file format ------------------------------------------------------

inline std::string write_rmcsp(const rmcsp_instance& inst) {
    std::string out = "rmcsp\n";
    out += "ell " + std::to_string(inst.ell) + "\n";
    out += write_vectorsum(inst.source);
    out += "mats\n";
    for (const field_mat& A : inst.mats) {
        for (size_t i = 0; i < A.rows; ++i) {
            for (size_t j = 0; j < A.cols; ++j) {
                if (j) out.push_back(' ');
                out += std::to_string(A.at(i, j));
            }
            out.push_back('\n');
        }
        if (A.cols == 0 && A.rows > 0) out += "\n";
    }
    out += "end\n";
    return out;
}

inline rmcsp_instance parse_rmcsp(const std::string& text) {
    token_reader tr(text);
    tr.expect("rmcsp");
    tr.expect("ell");
    rmcsp_instance inst;
    inst.ell = tr.next_u64("ell");
    inst.source = parse_vectorsum_body(tr);
    tr.expect("mats");
    for (size_t w = 0; w < inst.ell; ++w) {
        field_mat A(inst.k(), inst.source.d);
        for (size_t i = 0; i < inst.k(); ++i)
            for (size_t j = 0; j < inst.source.d; ++j) {
                u64 x = tr.next_u64("matrix entry");
                if (x >= inst.source.p) throw parse_error("residue not reduced mod p");
                A.at(i, j) = static_cast<residue>(x);
            }
        inst.mats.push_back(std::move(A));
    }
    tr.expect("end");
    return inst;
}

} // namespace gapred
