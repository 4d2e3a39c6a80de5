#include "doctest.h"

#include "gapred/cnf.hpp"
#include "gapred/expander.hpp"
#include "gapred/grouped_graph.hpp"
#include "gapred/ldt.hpp"
#include "gapred/pihchain.hpp"
#include "gapred/vectorsum.hpp"

using namespace gapred;

TEST_CASE("function table round trip") {
    prime_field F(5);
    rng r(5);
    tabulated_function f = tabulated_function::zero(5, 2, 2);
    for (auto& v : f.table)
        for (size_t w = 0; w < 2; ++w) v[w] = static_cast<residue>(r.below(5));
    std::string text = write_table(f);
    tabulated_function back = parse_table(text);
    CHECK(back.m == f.m);
    CHECK(back.ell == f.ell);
    CHECK(back.table == f.table);
    CHECK(write_table(back) == text);

    CHECK_THROWS_AS(parse_table("table field 4 m 1 ell 1 0 0 0 0 end"), verify_error);
    CHECK_THROWS_AS(parse_table("table field 5 m 1 ell 1 7 0 0 0 0 end"), parse_error);
}

TEST_CASE("grouped graph files reject malformed input") {
    CHECK_THROWS_AS(parse_grouped_graph("grouped groups 1 group 0 size 2 side X edges 0 end"),
                    parse_error);
    CHECK_THROWS_AS(parse_grouped_graph("grouped groups 1 group 1 size 2 side - edges 0 end"),
                    parse_error);
    CHECK_THROWS_AS(parse_grouped_graph("grouped groups 1 group 0 size 2 side - edges 1 0 9 end"),
                    parse_error);
    // edges inside a group violate the independent-set invariant
    CHECK_THROWS_AS(parse_grouped_graph("grouped groups 2 group 0 size 2 side - group 1 size 2 "
                                        "side - edges 1 0 1 end"),
                    verify_error);
}

TEST_CASE("repeated serialization is byte-stable") {
    // same structures written twice produce identical bytes
    regular_graph g = random_regular(8, 3, 5);
    CHECK(write_regular_graph(g) == write_regular_graph(g));

    disperser d = make_disperser(30, 12, 10, 0.5, 5);
    CHECK(write_disperser(d) == write_disperser(d));

    cnf_formula f = parse_dimacs("p cnf 2 1\n1 -2 0\n");
    CHECK(write_dimacs(f) == write_dimacs(f));
}

TEST_CASE("disperser eps survives the text round trip") {
    for (double eps : {0.5, 0.9, 0.3333333333333333}) {
        disperser d;
        d.m = 10;
        d.k = 1;
        d.ell = 2;
        d.r = 1;
        d.eps = eps;
        d.subsets = {{0, 1}};
        disperser back = parse_disperser(write_disperser(d));
        CHECK(back.eps == eps); // shortest round-trip decimal form
    }
}

TEST_CASE("parsers survive random token mutations") {
    // every mutation must either parse or raise one of the library errors;
    // anything else (crash, foreign exception) fails the test
    std::vector<std::string> canon;
    canon.push_back(write_dimacs(parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 2 3 0\n")));
    {
        vectorsum_instance vs;
        vs.p = 5;
        vs.d = 2;
        vs.target = field_vec(2);
        vs.groups = {{field_vec{1, 0}, field_vec{0, 1}}};
        canon.push_back(write_vectorsum(vs));
    }
    canon.push_back(write_regular_graph(complete_graph(4)));
    {
        disperser d = make_disperser(12, 4, 4, 0.9, 3);
        canon.push_back(write_disperser(d));
    }
    {
        materialized_graph g(std::vector<u64>{2, 2}, std::vector<char>{'L', 'R'});
        g.add_edge({0, 0}, {1, 1});
        canon.push_back(write_grouped_graph(g));
    }

    rng r(20260808);
    auto mutate = [&](std::string s) {
        size_t edits = 1 + r.below(3);
        for (size_t e = 0; e < edits && !s.empty(); ++e) {
            size_t pos = r.below(s.size());
            switch (r.below(3)) {
                case 0: s[pos] = static_cast<char>('0' + r.below(10)); break;
                case 1: s.erase(pos, 1 + r.below(4)); break;
                default: s.insert(pos, std::to_string(r.below(100000)));
            }
        }
        return s;
    };

    int parsed = 0, rejected = 0;
    for (int t = 0; t < 400; ++t) {
        const std::string& base = canon[static_cast<size_t>(r.below(canon.size()))];
        std::string text = mutate(base);
        try {
            if (text.rfind("p cnf", 0) == 0) parse_dimacs(text);
            else if (text.rfind("vectorsum", 0) == 0) parse_vectorsum(text);
            else if (text.rfind("disperser", 0) == 0) parse_disperser(text);
            else if (text.rfind("grouped", 0) == 0) parse_grouped_graph(text);
            else parse_dimacs(text);
            ++parsed;
        } catch (const parse_error&) {
            ++rejected;
        } catch (const verify_error&) {
            ++rejected;
        } catch (const budget_error&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 400);
    CHECK(rejected > 0);
}

TEST_CASE("vectorsum rejects malformed headers") {
    CHECK_THROWS_AS(parse_vectorsum("vectrsum"), parse_error);
    CHECK_THROWS_AS(parse_vectorsum("vectorsum field 5 k 1 d 1 target 0 group 0 size 1 9 end"),
                    parse_error);
    CHECK_THROWS_AS(parse_vectorsum("vectorsum field 5 k 1 d 1 target 0 group 5 size 0 end"),
                    parse_error);
}
