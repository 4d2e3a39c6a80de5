#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapred/field.hpp"
#include "gapred/rng.hpp"
#include "gapred/textio.hpp"
#include "gapred/util.hpp"

namespace gapred {

/// Total map F^m -> F^ell stored as a table of p^m values.
struct tabulated_function {
    size_t m = 0;
    size_t ell = 1;
    std::uint32_t p = 5;
    std::vector<field_vec> table;

    u64 domain_size() const { return pow_u64_checked(p, static_cast<unsigned>(m)); }

    const field_vec& at(const prime_field& F, const field_vec& x) const {
        return table[point_rank(F, x)];
    }

    static tabulated_function zero(std::uint32_t p, size_t m, size_t ell) {
        tabulated_function f;
        f.m = m;
        f.ell = ell;
        f.p = p;
        f.table.assign(pow_u64_checked(p, static_cast<unsigned>(m)), field_vec(ell));
        return f;
    }
};

struct ldt_params {
    size_t d = 2;
    std::vector<residue> alphas; // d+2 coefficients
};

/// Coefficients (-1)^{i+1} * C(d+1, i) for i = 0..d+1, reduced mod p.
/// They annihilate exactly the degree-d univariate polynomials (p > 2d).
inline ldt_params ldt_coefficients(size_t d, const prime_field& F) {
    if (F.p() <= 2 * d)
        throw verify_error("low-degree test needs p > 2d (p=" + std::to_string(F.p()) +
                           ", d=" + std::to_string(d) + ")");
    ldt_params P;
    P.d = d;
    // Pascal row for C(d+1, i)
    std::vector<u64> binom(d + 2, 0);
    binom[0] = 1;
    for (size_t row = 1; row <= d + 1; ++row)
        for (size_t i = row; i > 0; --i) binom[i] += binom[i - 1];
    for (size_t i = 0; i <= d + 1; ++i) {
        residue b = static_cast<residue>(binom[i] % F.p());
        P.alphas.push_back(i % 2 == 1 ? b : F.neg(b));
    }
    return P;
}

/// Queries the d+2 points x + i*h and accepts iff the alpha-combination of
/// the values vanishes.
inline bool line_test(const prime_field& F, const tabulated_function& f, const field_vec& x,
                      const field_vec& h, const ldt_params& P) {
    field_vec acc(f.ell);
    field_vec pt = x;
    for (size_t i = 0; i <= P.d + 1; ++i) {
        acc = F.vec_add(acc, F.vec_scale(P.alphas[i], f.at(F, pt)));
        pt = F.vec_add(pt, h);
    }
    return acc.is_zero();
}

struct rate_report {
    fraction exact;       // valid in exhaustive mode
    double estimate = 0;  // valid in monte-carlo mode
    double half_width = 0;
    u64 trials = 0;
    bool exhaustive = true;
};

inline rate_report reject_rate_exhaustive(const prime_field& F, const tabulated_function& f,
                                          const ldt_params& P, u64 budget = 100000000) {
    u64 n = f.domain_size();
    if (n > budget / n) // n^2 pairs
        throw budget_error("reject_rate: p^(2m) pairs exceed budget");
    rate_report rep;
    rep.exact.den = n * n;
    for (u64 xr = 0; xr < n; ++xr)
        for (u64 hr = 0; hr < n; ++hr) {
            field_vec x = point_unrank(F, f.m, xr);
            field_vec h = point_unrank(F, f.m, hr);
            if (!line_test(F, f, x, h, P)) ++rep.exact.num;
        }
    return rep;
}

inline rate_report reject_rate_montecarlo(const prime_field& F, const tabulated_function& f,
                                          const ldt_params& P, u64 trials, u64 seed) {
    rng r(seed);
    u64 n = f.domain_size();
    u64 rejects = 0;
    for (u64 t = 0; t < trials; ++t) {
        field_vec x = point_unrank(F, f.m, r.below(n));
        field_vec h = point_unrank(F, f.m, r.below(n));
        if (!line_test(F, f, x, h, P)) ++rejects;
    }
    rate_report rep;
    rep.exhaustive = false;
    rep.trials = trials;
    rep.estimate = static_cast<double>(rejects) / static_cast<double>(trials);
    rep.half_width = 1.96 * std::sqrt(rep.estimate * (1.0 - rep.estimate) / static_cast<double>(trials));
    return rep;
}

namespace detail {

/// Exponent tuples of total degree <= d over m variables, lexicographic.
inline void monomials_rec(size_t m, size_t d, std::vector<std::uint8_t>& cur,
                          std::vector<std::vector<std::uint8_t>>& out) {
    if (cur.size() == m) {
        out.push_back(cur);
        return;
    }
    size_t used = 0;
    for (auto e : cur) used += e;
    for (size_t e = 0; e + used <= d; ++e) {
        cur.push_back(static_cast<std::uint8_t>(e));
        monomials_rec(m, d, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<std::uint8_t>> monomials(size_t m, size_t d) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> cur;
    monomials_rec(m, d, cur, out);
    return out;
}

} // namespace detail

/// Evaluation table of the polynomial with the given monomial coefficients
/// (scalar-valued; vector-valued tables take one coefficient set per output
/// coordinate).
inline std::vector<residue> eval_poly_table(const prime_field& F,
                                            const std::vector<std::vector<std::uint8_t>>& mons,
                                            const std::vector<residue>& coeffs, size_t m) {
    u64 n = pow_u64_checked(F.p(), static_cast<unsigned>(m));
    std::vector<residue> table(n, 0);
    for (u64 xr = 0; xr < n; ++xr) {
        field_vec x = point_unrank(F, m, xr);
        u64 acc = 0;
        for (size_t t = 0; t < mons.size(); ++t) {
            residue term = coeffs[t];
            for (size_t i = 0; i < m; ++i)
                for (std::uint8_t e = 0; e < mons[t][i]; ++e) term = F.mul(term, x[i]);
            acc += term;
        }
        table[xr] = static_cast<residue>(acc % F.p());
    }
    return table;
}

/// Exact normalized Hamming distance to the family of vector-valued
/// degree-d polynomials, by enumerating the whole coefficient space.
inline fraction distance_to_degree(const prime_field& F, const tabulated_function& f, size_t d,
                                   u64 budget = 20000000) {
    auto mons = detail::monomials(f.m, d);
    size_t ncoef = mons.size() * f.ell;
    u128 space = pow_u128(F.p(), static_cast<unsigned>(ncoef));
    if (space > budget)
        throw budget_error("distance_to_degree: coefficient space " + u128_to_string(space) +
                           " exceeds budget " + std::to_string(budget));

    u64 n = f.domain_size();
    // flatten f's table per coordinate for fast comparison
    std::vector<std::vector<residue>> fcoord(f.ell, std::vector<residue>(n));
    for (u64 x = 0; x < n; ++x)
        for (size_t w = 0; w < f.ell; ++w) fcoord[w][x] = f.table[x][w];

    u64 best = n + 1;
    std::vector<residue> coeffs(ncoef, 0);
    u64 total = static_cast<u64>(space);
    for (u64 ci = 0; ci < total; ++ci) {
        u64 t = ci;
        for (size_t j = 0; j < ncoef; ++j) {
            coeffs[j] = static_cast<residue>(t % F.p());
            t /= F.p();
        }
        // per-coordinate tables
        std::vector<bool> differs(n, false);
        for (size_t w = 0; w < f.ell; ++w) {
            std::vector<residue> cw(coeffs.begin() + static_cast<std::ptrdiff_t>(w * mons.size()),
                                    coeffs.begin() + static_cast<std::ptrdiff_t>((w + 1) * mons.size()));
            auto tab = eval_poly_table(F, mons, cw, f.m);
            for (u64 x = 0; x < n; ++x)
                if (tab[x] != fcoord[w][x]) differs[x] = true;
        }
        u64 dist = 0;
        for (u64 x = 0; x < n; ++x) dist += differs[x];
        if (dist < best) best = dist;
        if (best == 0) break;
    }
    return fraction{best, n};
}

// -- table file format: header, then p^m rows of ell residues ---------------

inline std::string write_table(const tabulated_function& f) {
    std::string out = "table\n";
    out += "field " + std::to_string(f.p) + "\n";
    out += "m " + std::to_string(f.m) + "\n";
    out += "ell " + std::to_string(f.ell) + "\n";
    for (const field_vec& v : f.table) {
        for (size_t w = 0; w < f.ell; ++w) {
            if (w) out.push_back(' ');
            out += std::to_string(v[w]);
        }
        out.push_back('\n');
    }
    out += "end\n";
    return out;
}

inline tabulated_function parse_table(const std::string& text) {
    token_reader tr(text);
    tr.expect("table");
    tr.expect("field");
    std::uint32_t p = static_cast<std::uint32_t>(tr.next_u64("field modulus"));
    prime_field F(p);
    tr.expect("m");
    size_t m = tr.next_u64("arity");
    tr.expect("ell");
    size_t ell = tr.next_u64("output dimension");
    tabulated_function f = tabulated_function::zero(p, m, ell);
    for (auto& v : f.table)
        for (size_t w = 0; w < ell; ++w) {
            u64 x = tr.next_u64("table entry");
            if (x >= p) throw parse_error("residue not reduced mod p");
            v[w] = static_cast<residue>(x);
        }
    tr.expect("end");
    return f;
}

/// Distance estimate for tables whose exact coefficient enumeration is out
/// of budget: correct every point by majority vote and count disagreements.
/// Trustworthy only when f is already close to the degree-d family.
inline fraction distance_estimate_self_correct(const prime_field& F, const tabulated_function& f,
                                               const ldt_params& P);

/// Majority-vote correction: the most frequent value of the (d+1)-point
/// alpha-combination over all offsets h, ties broken toward the
/// lexicographically smallest value.
inline field_vec self_correct(const prime_field& F, const tabulated_function& f, const field_vec& x,
                              const ldt_params& P) {
    u64 n = f.domain_size();
    std::map<field_vec, u64> votes;
    for (u64 hr = 0; hr < n; ++hr) {
        field_vec h = point_unrank(F, f.m, hr);
        field_vec acc(f.ell);
        field_vec pt = x;
        for (size_t i = 1; i <= P.d + 1; ++i) {
            pt = F.vec_add(pt, h);
            acc = F.vec_add(acc, F.vec_scale(P.alphas[i], f.at(F, pt)));
        }
        ++votes[acc];
    }
    field_vec best;
    u64 best_count = 0;
    for (const auto& [val, cnt] : votes)
        if (cnt > best_count) { // map iteration is lexicographic, first max wins
            best = val;
            best_count = cnt;
        }
    return best;
}

inline fraction distance_estimate_self_correct(const prime_field& F, const tabulated_function& f,
                                               const ldt_params& P) {
    u64 n = f.domain_size();
    u64 differs = 0;
    for (u64 xr = 0; xr < n; ++xr) {
        field_vec x = point_unrank(F, f.m, xr);
        if (self_correct(F, f, x, P) != f.table[xr]) ++differs;
    }
    return fraction{differs, n};
}

} // namespace gapred
