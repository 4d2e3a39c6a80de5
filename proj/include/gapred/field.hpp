#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gapred/util.hpp"

namespace gapred {

using residue = std::uint32_t;

/// Vector over a prime field; entries are canonical representatives in [0,p).
/// The field itself travels separately as a prime_field context object.
struct field_vec {
    std::vector<residue> e;

    field_vec() = default;
    explicit field_vec(size_t n) : e(n, 0) {}
    field_vec(std::initializer_list<residue> xs) : e(xs) {}

    size_t dim() const { return e.size(); }
    residue& operator[](size_t i) { return e[i]; }
    residue operator[](size_t i) const { return e[i]; }
    bool operator==(const field_vec& o) const { return e == o.e; }
    bool operator!=(const field_vec& o) const { return e != o.e; }
    bool operator<(const field_vec& o) const { return e < o.e; }

    bool is_zero() const {
        for (residue x : e)
            if (x != 0) return false;
        return true;
    }
};

/// Dense row-major matrix over a prime field.
struct field_mat {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<residue> a;

    field_mat() = default;
    field_mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    residue& at(size_t r, size_t c) { return a[r * cols + c]; }
    residue at(size_t r, size_t c) const { return a[r * cols + c]; }
    bool operator==(const field_mat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

/// Arithmetic context for F_p. All residues passed in must already be
/// reduced; every operation returns a reduced result.
class prime_field {
public:
    explicit prime_field(std::uint32_t p) : p_(p) {
        if (!is_prime(p)) throw verify_error("field modulus " + std::to_string(p) + " is not prime");
    }

    std::uint32_t p() const { return p_; }

    residue add(residue a, residue b) const { return (a + b) % p_; }
    residue sub(residue a, residue b) const { return (a + p_ - b) % p_; }
    residue mul(residue a, residue b) const {
        return static_cast<residue>((static_cast<u64>(a) * b) % p_);
    }
    residue neg(residue a) const { return a == 0 ? 0 : p_ - a; }

    residue inv(residue a) const {
        if (a == 0) throw verify_error("inverse of zero in F_" + std::to_string(p_));
        // p is small throughout; Fermat is plenty
        residue r = 1, base = a;
        for (std::uint32_t e = p_ - 2; e > 0; e >>= 1) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
        }
        return r;
    }

    residue reduce(i64 x) const {
        i64 m = x % static_cast<i64>(p_);
        if (m < 0) m += p_;
        return static_cast<residue>(m);
    }

    // -- vectors ---------------------------------------------------------

    field_vec vec_add(const field_vec& u, const field_vec& v) const {
        check_dim(u, v);
        field_vec r(u.dim());
        for (size_t i = 0; i < u.dim(); ++i) r[i] = add(u[i], v[i]);
        return r;
    }

    field_vec vec_sub(const field_vec& u, const field_vec& v) const {
        check_dim(u, v);
        field_vec r(u.dim());
        for (size_t i = 0; i < u.dim(); ++i) r[i] = sub(u[i], v[i]);
        return r;
    }

    field_vec vec_scale(residue a, const field_vec& v) const {
        field_vec r(v.dim());
        for (size_t i = 0; i < v.dim(); ++i) r[i] = mul(a, v[i]);
        return r;
    }

    residue dot(const field_vec& u, const field_vec& v) const {
        check_dim(u, v);
        u64 acc = 0;
        for (size_t i = 0; i < u.dim(); ++i) acc += static_cast<u64>(u[i]) * v[i];
        return static_cast<residue>(acc % p_);
    }

    field_vec mat_vec(const field_mat& m, const field_vec& v) const {
        if (m.cols != v.dim()) throw verify_error("matrix-vector dimension mismatch");
        field_vec r(m.rows);
        for (size_t i = 0; i < m.rows; ++i) {
            u64 acc = 0;
            for (size_t j = 0; j < m.cols; ++j) acc += static_cast<u64>(m.at(i, j)) * v[j];
            r[i] = static_cast<residue>(acc % p_);
        }
        return r;
    }

private:
    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static void check_dim(const field_vec& u, const field_vec& v) {
        if (u.dim() != v.dim()) throw verify_error("vector dimension mismatch");
    }

    std::uint32_t p_;
};

/// Component w of the result is <alpha, A_w v>.
inline field_vec bilinear_map(const prime_field& F, const field_vec& alpha, const field_vec& v,
                              std::span<const field_mat> mats) {
    field_vec out(mats.size());
    for (size_t w = 0; w < mats.size(); ++w) {
        const field_mat& A = mats[w];
        if (A.rows != alpha.dim() || A.cols != v.dim())
            throw verify_error("bilinear map dimension mismatch");
        out[w] = F.dot(alpha, F.mat_vec(A, v));
    }
    return out;
}

/// Componentwise Horner evaluation of a vector-coefficient polynomial.
/// coeffs[i] multiplies x^i.
inline field_vec poly_eval(const prime_field& F, std::span<const field_vec> coeffs, residue x) {
    if (coeffs.empty()) throw verify_error("poly_eval needs at least one coefficient");
    field_vec acc = coeffs[coeffs.size() - 1];
    for (size_t i = coeffs.size() - 1; i > 0; --i)
        acc = F.vec_add(F.vec_scale(x, acc), coeffs[i - 1]);
    return acc;
}

/// Enumeration order for points of F^m: mixed-radix counter with the first
/// coordinate most significant. Used consistently by tables and files.
inline u64 point_rank(const prime_field& F, const field_vec& x) {
    u64 r = 0;
    for (size_t i = 0; i < x.dim(); ++i) r = r * F.p() + x[i];
    return r;
}

inline field_vec point_unrank(const prime_field& F, size_t m, u64 rank) {
    field_vec x(m);
    for (size_t i = m; i > 0; --i) {
        x[i - 1] = static_cast<residue>(rank % F.p());
        rank /= F.p();
    }
    return x;
}

// -- plain-text serialization (whitespace-separated residues) -------------

inline std::string vec_to_text(const field_vec& v) {
    std::string s;
    for (size_t i = 0; i < v.dim(); ++i) {
        if (i) s.push_back(' ');
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace gapred
