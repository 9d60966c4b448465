#include "doctest.h"

#include "fanostab/cohomology.hpp"
#include "fanostab/facts.hpp"
#include "fanostab/weyl.hpp"

#include <algorithm>
#include <random>

using namespace fano;

TEST_CASE("kodaira-nakano zones") {
    CHECK(kodaira_nakano_zone(4, 3, 3, 1).is_zero());
    CHECK(kodaira_nakano_zone(4, 1, 1, -1).is_zero());
    CHECK(!kodaira_nakano_zone(4, 2, 2, 0).known());
    CHECK(!kodaira_nakano_zone(4, 3, 3, -2).known());
}

TEST_CASE("serre_close fills duals and flags contradictions") {
    SpaceDescriptor p3 = projective_space("P3", 3);

    CohomologyTable t(p3, Window{-5, 5});
    t.set(0, 0, -5, CohomologyValue::zero());
    CohomologyTable closed = serre_close(t);
    CHECK(closed.get(3, 3, 5).is_zero());

    // a full window table from weyl is already Serre-closed
    CohomologyTable g = weyl_table(grassmannian_space("G", 1, 4), Window{-4, 4});
    CohomologyTable gc = serre_close(g);
    CHECK(gc.cells() == g.cells());

    // conflicting injected fact
    CohomologyTable bad(p3, Window{-2, 2});
    bad.set(1, 1, 0, CohomologyValue::of_dim(1));
    bad.set(2, 2, 0, CohomologyValue::of_dim(7));
    CHECK_THROWS_AS((void)serre_close(bad), Contradiction);
}

TEST_CASE("euler recursion reproduces classical characteristics") {
    CohomologyTable p3 = weyl_table(projective_space("P3", 3), Window{-14, 14});

    // empty multidegree: chi of the ambient itself
    CHECK(euler_recursion(p3, {}, 0, 0) == 1);
    CHECK(euler_recursion(p3, {}, 1, 0) == -1);

    // cubic surface in P^3: chi(O_X) = 1
    CHECK(euler_recursion(p3, {3}, 0, 0) == 1);
    // quadric surface in P^3: chi(O^1_X) = -2  (h^{1,1} = 2 on P^1 x P^1)
    CHECK(euler_recursion(p3, {2}, 1, 0) == -2);
    // K3 quartic: chi(O_X) = 2, chi(O^1_X) = -20
    CHECK(euler_recursion(p3, {4}, 0, 0) == 2);
    CHECK(euler_recursion(p3, {4}, 1, 0) == -20);

    // footprint leaving the window is an error
    CohomologyTable tight = weyl_table(projective_space("P3", 3), Window{-2, 2});
    CHECK_THROWS_AS((void)euler_recursion(tight, {3}, 1, 0), FootprintError);
}

TEST_CASE("euler recursion is invariant under degree permutations") {
    CohomologyTable p5 = weyl_table(projective_space("P5", 5), Window{-30, 10});
    std::vector<int> degrees{1, 2, 3};
    std::vector<BigInt> first;
    do {
        std::vector<BigInt> round;
        for (int q = 0; q <= 3; ++q)
            for (int t : {-1, 0, 2}) round.push_back(euler_recursion(p5, degrees, q, t));
        if (first.empty())
            first = round;
        else
            CHECK(round == first);
    } while (std::next_permutation(degrees.begin(), degrees.end()));
}

TEST_CASE("alternating sums of determined tables match chi") {
    // For a fully known complete-intersection column, the alternating sum of
    // dimensions equals the recursion's chi. Use the ambient itself (empty
    // multidegree) where every cell is known exactly.
    CohomologyTable p4 = weyl_table(projective_space("P4", 4), Window{-8, 8});
    for (int q = 0; q <= 4; ++q)
        for (int t = -8; t <= 8; ++t) {
            BigInt alt = 0;
            for (int p = 0; p <= 4; ++p) {
                auto v = p4.get(p, q, t);
                REQUIRE(v.known());
                alt += (p % 2 == 0) ? v.dim() : -v.dim();
            }
            CHECK(alt == euler_recursion(p4, {}, q, t));
        }
}

TEST_CASE("fact ingestion") {
    const std::string text =
        "# spinor inputs\n"
        "space S10 dim 10 index 8\n"
        "betti S10 b3 0\n"
        "vanish S10 p 1 q 6 t 4\n"
        "dim S10 p 2 q 2 t 0 = 1\n"
        "vanish S10 p 1 q 6 t 4\n"; // consistent duplicate
    FactStore store = ingest_facts(text, "test.facts");
    REQUIRE(store.space("S10") != nullptr);
    CHECK(store.space("S10")->dim == 10);
    CHECK(store.betti("S10", 3)->value == 0);
    CHECK(store.cell("S10", 1, 6, 4)->value.is_zero());
    CHECK(store.cell("S10", 2, 2, 0)->value.dim() == 1);
    CHECK(store.cell("S10", 1, 6, 4)->provenance == "test.facts:4");

    CHECK_THROWS_AS((void)ingest_facts("vanish S10 p\n", "bad.facts"), ParseError);
    try {
        (void)ingest_facts("vanish S10 p\n", "bad.facts");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
    }
    // contradictory facts rejected
    CHECK_THROWS_AS((void)ingest_facts("space A dim 3 index 1\n"
                                       "vanish A p 1 q 1 t 0\n"
                                       "dim A p 1 q 1 t 0 = 2\n",
                                       "c.facts"),
                    Contradiction);
}

TEST_CASE("space declaration forms") {
    const std::string text =
        "space G grassmannian 1 4\n"
        "space P projective 3\n"
        "space Y dim 5 index 3 section-of G degree 2\n"
        "space X dim 5 index 1 cover-of Y k 2 degree 2\n";
    FactStore store = ingest_facts(text, "s.facts");
    CHECK(store.space("G")->dim == 6);
    CHECK(store.space("G")->index == 5);
    CHECK(store.space("G")->degree == 5);
    CHECK(store.space("P")->index == 4);
    CHECK(store.space("Y")->degree == 10);
    CHECK(store.space("X")->dim == 5);
    CHECK(store.space("X")->degree == 20);
    CHECK_THROWS_AS(
        (void)ingest_facts("space Z dim 9 index 9 section-of Q degree 1\n", "t.facts"),
        ParseError);
    // wrong arithmetic in a section declaration
    CHECK_THROWS_AS((void)ingest_facts("space G grassmannian 1 4\n"
                                       "space Y dim 5 index 4 section-of G degree 2\n",
                                       "u.facts"),
                    ParseError);
}
