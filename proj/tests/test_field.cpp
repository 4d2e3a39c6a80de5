#include "doctest.h"

#include "gapred/field.hpp"
#include "gapred/rng.hpp"

using namespace gapred;

TEST_CASE("residue arithmetic over F_5") {
    prime_field F(5);
    CHECK(F.add(3, 4) == 2);
    CHECK(F.neg(1) == 4);
    CHECK(F.sub(1, 3) == 3);
    CHECK(F.mul(3, 4) == 2);

    // inverse agrees with exhaustive search
    for (residue a = 1; a < 5; ++a) {
        residue found = 0;
        for (residue x = 1; x < 5; ++x)
            if (F.mul(a, x) == 1) found = x;
        CHECK(F.inv(a) == found);
    }
    CHECK(F.inv(2) == 3);
    CHECK_THROWS_AS(F.inv(0), verify_error);

    for (residue a = 0; a < 5; ++a) {
        CHECK(F.add(a, F.neg(a)) == 0);
        if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
    }
}

TEST_CASE("modulus must be prime") {
    CHECK_THROWS_AS(prime_field(4), verify_error);
    CHECK_THROWS_AS(prime_field(1), verify_error);
    CHECK_NOTHROW(prime_field(2));
    CHECK_NOTHROW(prime_field(7));
}

TEST_CASE("bilinear map basics") {
    prime_field F(5);
    field_mat A(1, 1);
    A.at(0, 0) = 2;
    std::vector<field_mat> mats{A};

    field_vec alpha{3}, v{4};
    field_vec out = bilinear_map(F, alpha, v, mats);
    CHECK(out.dim() == 1);
    CHECK(out[0] == 4); // 3*2*4 mod 5

    CHECK(bilinear_map(F, field_vec{0}, v, mats).is_zero());
    CHECK(bilinear_map(F, alpha, field_vec{0}, mats).is_zero());

    field_vec bad{1, 2};
    CHECK_THROWS_AS(bilinear_map(F, bad, v, mats), verify_error);
}

TEST_CASE("bilinearity holds exhaustively for k,d <= 2") {
    prime_field F(5);
    rng r(7);
    for (size_t k = 1; k <= 2; ++k)
        for (size_t d = 1; d <= 2; ++d) {
            std::vector<field_mat> mats;
            for (size_t w = 0; w < 2; ++w) {
                field_mat A(k, d);
                for (auto& x : A.a) x = static_cast<residue>(r.below(5));
                mats.push_back(A);
            }
            u64 pk = pow_u64_checked(5, static_cast<unsigned>(k));
            u64 pd = pow_u64_checked(5, static_cast<unsigned>(d));
            for (u64 a1 = 0; a1 < pk; ++a1)
                for (u64 a2 = 0; a2 < pk; ++a2)
                    for (u64 vr = 0; vr < pd; ++vr) {
                        field_vec x1 = point_unrank(F, k, a1);
                        field_vec x2 = point_unrank(F, k, a2);
                        field_vec v = point_unrank(F, d, vr);
                        field_vec lhs = bilinear_map(F, F.vec_add(x1, x2), v, mats);
                        field_vec rhs =
                            F.vec_add(bilinear_map(F, x1, v, mats), bilinear_map(F, x2, v, mats));
                        REQUIRE(lhs == rhs);
                    }
            // symmetry in the vector argument, sampled
            for (int t = 0; t < 50; ++t) {
                field_vec a = point_unrank(F, k, r.below(pk));
                field_vec v1 = point_unrank(F, d, r.below(pd));
                field_vec v2 = point_unrank(F, d, r.below(pd));
                field_vec lhs = bilinear_map(F, a, F.vec_add(v1, v2), mats);
                field_vec rhs = F.vec_add(bilinear_map(F, a, v1, mats), bilinear_map(F, a, v2, mats));
                REQUIRE(lhs == rhs);
            }
        }
}

TEST_CASE("128-bit helpers and exact fractions") {
    CHECK(u128_to_string(0) == "0");
    u128 big = pow_u128(5, 54);
    CHECK(u128_from_string(u128_to_string(big)) == big);
    CHECK_THROWS_AS(pow_u128(5, 60), budget_error);
    CHECK_THROWS_AS(pow_u64_checked(5, 30), budget_error);
    CHECK_THROWS_AS(u128_from_string("12x"), parse_error);

    fraction a{1, 6}, b{1, 5};
    CHECK(b.ge(a));
    CHECK(!a.ge(b));
    CHECK(fraction::min(a, b).num == 1);
    CHECK(fraction::min(a, b).den == 6);
    CHECK(fraction{1, 10}.ge_half_of(fraction{1, 5}));
    CHECK(!fraction{1, 11}.ge_half_of(fraction{1, 5}));
}

TEST_CASE("polynomial evaluation") {
    prime_field F(5);
    // constant
    std::vector<field_vec> c{field_vec{3, 1}};
    for (residue x = 0; x < 5; ++x) CHECK(poly_eval(F, c, x) == field_vec{3, 1});

    // 3x + 1 at 2 -> 7 mod 5 = 2
    std::vector<field_vec> lin{field_vec{1}, field_vec{3}};
    CHECK(poly_eval(F, lin, 2) == field_vec{2});
    CHECK(poly_eval(F, lin, 0) == field_vec{1}); // constant coefficient at x=0
}
