#include "doctest.h"

#include "fanostab/special.hpp"
#include "fanostab/weyl.hpp"

using namespace fano;
using namespace fano::special;

TEST_CASE("flenner predicate on quoted cells") {
    CHECK(flenner_predicate(4, 1, 2, 5).zero);    // (B)(b)
    CHECK(flenner_predicate(4, 0, 3, 2).zero);    // (B)(d)
    auto diag = flenner_predicate(4, 1, 1, 0);
    CHECK(!diag.zero);
    CHECK(diag.diagonal_one);                     // (A)
    // middle-dimension diagonal: 2p = n is excluded from (A), and p+q = n
    // cells are not in any vanishing zone, so the predicate stays silent
    auto mid = flenner_predicate(4, 2, 2, 0);
    CHECK(!mid.zero);
    CHECK(!mid.diagonal_one);
    CHECK(!flenner_predicate(4, 0, 0, 0).zero);   // h^{0,0}
    CHECK_THROWS_AS((void)flenner_predicate(3, 4, 0, 0), std::invalid_argument);
}

TEST_CASE("is_special accepts projective space and rejects G(1,4)") {
    CohomologyTable pn = weyl_table(projective_space("P4", 4), Window{-10, 10});
    auto chk = is_special(pn, 4);
    CHECK(chk.ok());
    CHECK(chk.violations.empty());

    CohomologyTable g = weyl_table(grassmannian_space("G", 1, 4), Window{-4, 4});
    auto gchk = is_special(g, 6);
    CHECK(gchk.status == SpecialStatus::NotSpecial);
    bool found22 = false;
    for (const auto& v : gchk.violations)
        if (v.cell == Cell{2, 2, 0}) {
            found22 = true;
            CHECK(v.found.dim() == 2);
            CHECK(v.condition == 'c');
        }
    CHECK(found22);
}

TEST_CASE("is_special distinguishes insufficient from false") {
    SpaceDescriptor abs;
    abs.id = "A";
    abs.dim = 3;
    CohomologyTable partial(abs, Window{-1, 1});
    auto chk = is_special(partial, 3);
    CHECK(chk.status == SpecialStatus::Insufficient);

    // injected nonzero H^1(O(1)) is a definite (a)-violation
    CohomologyTable bad = weyl_table(projective_space("P3", 3), Window{-3, 3});
    bad = [&] {
        CohomologyTable t(bad.space(), bad.window());
        for (const auto& [c, v] : bad.cells())
            if (!(c == Cell{1, 0, 1})) t.set(c.p, c.q, c.t, v);
        t.set(1, 0, 1, CohomologyValue::of_dim(1));
        return t;
    }();
    auto bchk = is_special(bad, 3);
    CHECK(bchk.status == SpecialStatus::NotSpecial);
    REQUIRE(bchk.violations.size() == 1);
    CHECK(bchk.violations[0].condition == 'a');
    CHECK(bchk.violations[0].cell == Cell{1, 0, 1});
}

TEST_CASE("quadric threefold certificate from P^4") {
    Certificate p4 = certify_homogeneous(projective_space("P4", 4), Window{-10, 10});
    Certificate q3 = propagate_section(p4, 2, Window{-8, 8}, "Q3");
    CHECK(q3.space().dim == 3);
    CHECK(q3.space().index == 3);
    CHECK(q3.space().degree == 2);
    auto chk = is_special(q3.to_table(), 3);
    CHECK(chk.ok());
    // evidence is queryable: why is H^1(O^1(3)) zero?
    const Evidence* ev = q3.evidence(1, 1, 3);
    REQUIRE(ev != nullptr);
    CHECK(ev->condition == 'a');
    CHECK(!ev->rule.empty());
}

TEST_CASE("iterated sections agree with the flenner predicate") {
    Certificate p5 = certify_homogeneous(projective_space("P5", 5), Window{-10, 10});
    Certificate cubic = propagate_section(p5, 3, Window{-8, 8}, "V3");
    const int n = 4;
    for (const auto& [cell, cv] : cubic.cells()) {
        if (cv.second.condition != 'a') continue;
        auto f = flenner_predicate(n, cell.p, cell.q, cell.t);
        CHECK_MESSAGE(f.zero, "cell ", cell.to_string());
        CHECK(cv.first.is_zero());
    }
    // (c)-diagonal matches the closed form's expected C
    for (const auto& [cell, cv] : cubic.cells()) {
        if (cv.second.condition != 'c') continue;
        auto f = flenner_predicate(n, cell.p, cell.q, cell.t);
        CHECK(f.diagonal_one);
        CHECK(cv.first.dim() == 1);
    }
}

TEST_CASE("sections below dimension three are rejected") {
    Certificate p3 = certify_homogeneous(projective_space("P3", 3), Window{-6, 6});
    CHECK_THROWS_AS((void)propagate_section(p3, 2, Window{-4, 4}), std::invalid_argument);
}

TEST_CASE("footprint errors name the offending twist") {
    Certificate p4 = certify_homogeneous(projective_space("P4", 4), Window{-2, 2});
    CHECK_THROWS_AS((void)propagate_section(p4, 2, Window{-8, 8}), FootprintError);
}

TEST_CASE("cyclic cover certificates") {
    Certificate p3 = certify_homogeneous(projective_space("P3", 3), Window{-14, 14});

    // double cover branched in a sextic: the index-1 threefold
    Certificate x = propagate_cyclic(p3, 2, 3, Window{-6, 6}, "X");
    CHECK(x.space().dim == 3);
    CHECK(x.space().index == 1); // 4 - (2-1)*3
    CHECK(x.space().degree == 2);
    CHECK(is_special(x.to_table(), 3).ok());

    // degenerate cover k=1 reproduces the parent's knowledge
    Certificate same = propagate_cyclic(p3, 1, 3, Window{-6, 6}, "Y");
    CHECK(same.space().dim == 3);
    CHECK(same.space().index == 4);
    for (const auto& [cell, cv] : same.cells())
        CHECK(p3.value(cell.p, cell.q, cell.t) == cv.first);

    // pushforward-layer rule is cited on an interior twisted cell
    const Evidence* ev = x.evidence(1, 1, 1);
    REQUIRE(ev != nullptr);
    CHECK(ev->rule == "cover-induction[t!=0]");
    bool cites_pushforward = false;
    for (const auto& p : ev->premises)
        if (p.find("cover-pushforward-vanishing") != std::string::npos)
            cites_pushforward = true;
    CHECK(cites_pushforward);
}

TEST_CASE("propagation degree and index bookkeeping") {
    Certificate p5 = certify_homogeneous(projective_space("P5", 5), Window{-12, 12});
    Certificate y = propagate_section(p5, 2, Window{-10, 10});
    CHECK(y.space().degree == p5.space().degree * 2);
    CHECK(y.space().dim == 4);
    Certificate z = propagate_cyclic(y, 3, 1, Window{-6, 6});
    CHECK(z.space().degree == y.space().degree * 3);
    CHECK(z.space().dim == y.space().dim);
    CHECK(z.space().index == y.space().index - 2);
}

TEST_CASE("certificates serialize and parse back") {
    Certificate p4 = certify_homogeneous(projective_space("P4", 4), Window{-6, 6});
    Certificate q = propagate_section(p4, 2, Window{-4, 4}, "Q3");
    std::string text = q.serialize();
    Certificate back = Certificate::parse(text, "q3.cert");
    CHECK(back.space().id == q.space().id);
    CHECK(back.space().dim == q.space().dim);
    CHECK(back.window() == q.window());
    CHECK(back.cells().size() == q.cells().size());
    for (const auto& [cell, cv] : q.cells()) {
        CHECK(back.value(cell.p, cell.q, cell.t) == cv.first);
        const Evidence* ev = back.evidence(cell.p, cell.q, cell.t);
        REQUIRE(ev != nullptr);
        CHECK(ev->rule == cv.second.rule);
    }
}

TEST_CASE("re-checking a certificate's table is idempotent") {
    Certificate p5 = certify_homogeneous(projective_space("P5", 5), Window{-10, 10});
    Certificate x = propagate_section(p5, 3, Window{-8, 8});
    auto chk = is_special(x.to_table(), x.space().dim);
    CHECK(chk.ok());
    CHECK(chk.violations.empty());
    CHECK(chk.missing.empty());
}
