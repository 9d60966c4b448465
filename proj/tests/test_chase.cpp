#include "doctest.h"

#include "fanostab/chase.hpp"
#include "fanostab/trace_check.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace fano;
using namespace fano::chase;

namespace {

const std::string kRoot = FANOSTAB_SOURCE_DIR;

FactStore spinor_store() {
    return ingest_facts_file(kRoot + "/facts/spinor10.facts");
}

ReplayResult run_script(const std::string& rel, const FactStore& store,
                        const std::set<FactKey>& suppressed = {}) {
    Script script = Script::parse_file(kRoot + "/" + rel);
    return replay(script, {&store}, suppressed);
}

std::string first(const std::vector<std::string>& v) { return v.empty() ? std::string{} : v[0]; }

bool mentions(const std::vector<std::string>& xs, const std::string& needle) {
    return std::any_of(xs.begin(), xs.end(), [&](const std::string& s) {
        return s.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_CASE("sheaf expressions parse and print") {
    auto e = SheafExpr::parse("Res(G,Y,4,2)");
    CHECK(e.kind == SheafExpr::Kind::Restricted);
    CHECK(e.ambient == "G");
    CHECK(e.space == "Y");
    CHECK(e.to_string() == "Res(G,Y,4,2)");
    CHECK(SheafExpr::parse("O(X,-3)") == SheafExpr::omega("X", 0, -3));
    CHECK(SheafExpr::parse("Push(X,2,1)").kind == SheafExpr::Kind::Pushforward);
    CHECK_THROWS_AS((void)SheafExpr::parse("Foo(1)"), std::invalid_argument);
}

TEST_CASE("ses registration validates the named rule's bookkeeping") {
    ChaseEnv env;
    env.add_space(grassmannian_space("G", 1, 4));
    env.add_space(section_space(env.space("G"), "Y", 2));
    // good
    int id = env.register_ses("restriction", SheafExpr::omega("G", 3, 1),
                              SheafExpr::omega("G", 3, 3),
                              SheafExpr::restricted("G", "Y", 3, 3));
    CHECK(id == 0);
    // duplicate returns the same id
    CHECK(env.register_ses("restriction", SheafExpr::omega("G", 3, 1),
                           SheafExpr::omega("G", 3, 3),
                           SheafExpr::restricted("G", "Y", 3, 3)) == 0);
    // twist bookkeeping broken
    CHECK_THROWS_AS(env.register_ses("restriction", SheafExpr::omega("G", 3, 0),
                                     SheafExpr::omega("G", 3, 3),
                                     SheafExpr::restricted("G", "Y", 3, 3)),
                    std::invalid_argument);
    // q bookkeeping broken in the conormal sequence
    CHECK_THROWS_AS(env.register_ses("conormal", SheafExpr::omega("Y", 2, 0),
                                     SheafExpr::restricted("G", "Y", 2, 2),
                                     SheafExpr::omega("Y", 2, 2)),
                    std::invalid_argument);
}

TEST_CASE("les_step derives flanked-zero cells and isomorphisms") {
    ChaseEnv env;
    env.add_space(grassmannian_space("G", 1, 5));
    env.add_space(section_space(env.space("G"), "Y", 1));
    int id = env.register_ses("restriction", SheafExpr::omega("G", 3, 0),
                              SheafExpr::omega("G", 3, 1),
                              SheafExpr::restricted("G", "Y", 3, 1));
    env.les_pass(id);
    // H^2(O^3_G(1)) = H^3(O^3_G(1)) = 0 force the connecting map to be an
    // isomorphism H^2(Res) ~ H^3(O^3_G) = C^2
    Group res{SheafExpr::restricted("G", "Y", 3, 1), 2};
    env.saturate();
    CHECK(env.known(res).dim() == 2);
    CHECK(env.has_prop(MapHandle::les(id, LesRole::Connecting, 2), MapProp::Bijective));
}

TEST_CASE("facts on homogeneous spaces must equal the computed value") {
    FactStore bad;
    bad.add_space(grassmannian_space("G", 1, 5));
    bad.add_cell("G", 2, 2, 0, CohomologyValue::of_dim(7), "test:1");
    ChaseEnv env({&bad});
    Group g{SheafExpr::omega("G", 2, 0), 2};
    CHECK_THROWS_AS((void)env.lookup(g), Contradiction);

    ChaseEnv env2;
    env2.add_space(grassmannian_space("G", 1, 5));
    CHECK(env2.lookup(g).dim() == 2); // the exact value

    // consistent facts are accepted and cited with their provenance
    FactStore good;
    good.add_space(grassmannian_space("G", 1, 5));
    good.add_cell("G", 2, 2, 0, CohomologyValue::of_dim(2), "snow:1");
    ChaseEnv env3({&good});
    CHECK(env3.lookup(g).dim() == 2);
}

TEST_CASE("derivations contradicting an injected fact name the sequence") {
    // inject a wrong value on an abstract space; exactness then forces zero
    FactStore bad;
    SpaceDescriptor a;
    a.id = "A";
    a.kind = SpaceKind::Abstract;
    a.dim = 5;
    a.index = 3;
    bad.add_space(a);
    bad.add_space(section_space(a, "B", 1));
    bad.add_cell("A", 1, 2, 1, CohomologyValue::zero(), "t:1");
    bad.add_cell("A", 2, 2, 0, CohomologyValue::zero(), "t:2");
    bad.add_cell("B", 1, 2, 1, CohomologyValue::of_dim(3), "t:3"); // wrong
    bad.add_cell("A", 1, 2, 0, CohomologyValue::zero(), "t:4");
    bad.add_cell("B", 2, 1, 0, CohomologyValue::zero(), "t:5");
    ChaseEnv env({&bad});
    env.register_ses("restriction", SheafExpr::omega("A", 2, 0),
                     SheafExpr::omega("A", 2, 1), SheafExpr::restricted("A", "B", 2, 1));
    env.register_ses("conormal", SheafExpr::omega("B", 1, 0),
                     SheafExpr::restricted("A", "B", 2, 1), SheafExpr::omega("B", 2, 1));
    try {
        env.saturate();
        // the contradiction may surface on either derived group
        (void)env.lookup(Group{SheafExpr::restricted("A", "B", 2, 1), 1});
        FAIL("expected a contradiction");
    } catch (const Contradiction& e) {
        CHECK(std::string(e.what()).find("ses#") != std::string::npos);
    }
}

TEST_CASE("injectivity of the middle map does not zero the connecting map") {
    // exactness gives im(delta_{p-1}) = ker(f_p); injectivity of g_p forces
    // f_p = 0 and delta_{p-1} onto, never delta_{p-1} = 0 by itself
    FactStore facts;
    SpaceDescriptor a;
    a.id = "A";
    a.kind = SpaceKind::Abstract;
    a.dim = 6;
    a.index = 2;
    facts.add_space(a);
    facts.add_space(section_space(a, "B", 1));
    // H^2(left) nonzero, so the degree-2 connecting map has a live target
    facts.add_cell("A", 2, 3, 0, CohomologyValue::of_dim(1), "t:1");
    ChaseEnv env({&facts});
    int id = env.register_ses("restriction", SheafExpr::omega("A", 3, 0),
                              SheafExpr::omega("A", 3, 1),
                              SheafExpr::restricted("A", "B", 3, 1));
    env.saturate();
    CHECK_FALSE(env.has_prop(MapHandle::les(id, LesRole::Connecting, 1),
                             MapProp::ZeroMap));
}

TEST_CASE("adding irrelevant facts never breaks a replay") {
    FactStore store = spinor_store();
    FactStore extra;
    SpaceDescriptor z;
    z.id = "Z";
    z.kind = SpaceKind::Abstract;
    z.dim = 7;
    z.index = 2;
    extra.add_space(z);
    extra.add_cell("Z", 1, 1, 4, CohomologyValue::of_dim(11), "extra:1");
    Script script = Script::parse_file(kRoot + "/scripts/lemma_2_12_k9.chase");
    auto res = replay(script, {&store, &extra});
    CHECK(res.ok);
}

TEST_CASE("restriction surjectivity guards") {
    ChaseEnv env;
    env.add_space(grassmannian_space("G", 1, 4));
    env.add_space(section_space(env.space("G"), "Y", 2));
    CHECK_THROWS_AS((void)env.restriction_surjectivity("G", "Y", 2, 3),
                    std::invalid_argument); // c > d
    CHECK_THROWS_AS((void)env.restriction_surjectivity("G", "Y", 5, 1),
                    std::invalid_argument); // q too large
    CHECK(env.restriction_surjectivity("G", "Y", 2, 1));
    CHECK(env.restriction_surjectivity("G", "Y", 2, 2)); // c = d, premise from weyl
}

TEST_CASE("restriction surjectivity fails loudly on a missing premise") {
    ChaseEnv env;
    SpaceDescriptor a;
    a.id = "A";
    a.kind = SpaceKind::Abstract;
    a.dim = 6;
    a.index = 4;
    env.add_space(a);
    env.add_space(section_space(a, "B", 1));
    CHECK_FALSE(env.restriction_surjectivity("A", "B", 2, 1));
    CHECK(mentions(env.misses(), "H^1(Omega(A,2,0))"));
}

TEST_CASE("prop_2_9 script replays") {
    FactStore store;
    auto res = run_script("scripts/prop_2_9.chase", store);
    REQUIRE_MESSAGE(res.ok, "missing: ", first(res.missing));
    CHECK(res.trace.conclusions.size() == 2); // goal + conclude
    auto check = trace_check::check_trace(res.trace, {&store});
    CHECK_MESSAGE(check.ok, first(check.errors));
}

TEST_CASE("prop_2_11 script replays and the trace carries the rank-2 groups") {
    FactStore store;
    auto res = run_script("scripts/prop_2_11.chase", store);
    REQUIRE_MESSAGE(res.ok, "missing: ", first(res.missing));
    bool saw_rank2 = false;
    for (const Step& s : res.trace.steps)
        if (s.what == Step::What::CellValue && s.value.known() && s.value.dim() == 2 &&
            s.group.sheaf.kind == SheafExpr::Kind::Restricted)
            saw_rank2 = true;
    CHECK(saw_rank2);
    auto check = trace_check::check_trace(res.trace, {&store});
    CHECK_MESSAGE(check.ok, first(check.errors));
}

TEST_CASE("spinor descent scripts replay for every dimension") {
    FactStore store = spinor_store();
    for (int k = 9; k >= 5; --k) {
        auto res = run_script("scripts/lemma_2_12_k" + std::to_string(k) + ".chase",
                              store);
        REQUIRE_MESSAGE(res.ok, "k=", k,
                        " missing: ", first(res.missing));
        auto check = trace_check::check_trace(res.trace, {&store});
        CHECK_MESSAGE(check.ok, "k=", k, ": ",
                      first(check.errors));
    }
}

TEST_CASE("lemma_2_13 script replays") {
    FactStore store = spinor_store();
    auto res = run_script("scripts/lemma_2_13.chase", store);
    REQUIRE_MESSAGE(res.ok, "missing: ", first(res.missing));
    auto check = trace_check::check_trace(res.trace, {&store});
    CHECK_MESSAGE(check.ok, first(check.errors));
}

TEST_CASE("deleting the quoted spinor vanishing makes lemma_2_13 stuck") {
    // literal file-level deletion of the line `vanish S10 p 1 q 6 t 4`
    std::ifstream in(kRoot + "/facts/spinor10.facts");
    std::stringstream kept;
    std::string line;
    while (std::getline(in, line))
        if (line != "vanish S10 p 1 q 6 t 4") kept << line << "\n";
    FactStore store = ingest_facts(kept.str(), "truncated.facts");

    auto res = run_script("scripts/lemma_2_13.chase", store);
    CHECK_FALSE(res.ok);
    CHECK(mentions(res.missing, "vanish S10 p 1 q 6 t 4"));
}

TEST_CASE("mutation analysis finds a nonempty load-bearing set") {
    FactStore store = spinor_store();
    Script script = Script::parse_file(kRoot + "/scripts/lemma_2_12_k9.chase");
    auto report = mutation_analysis(script, {&store});
    CHECK(!report.load_bearing.empty());
    CHECK(mentions(report.load_bearing, "vanish S10 p 1 q 2 t 1"));
    CHECK(mentions(report.load_bearing, "betti S10 b3"));
}

TEST_CASE("script parse errors carry line numbers") {
    CHECK_THROWS_AS((void)Script::parse("use ses conormal\n", "bad.chase"), ParseError);
    CHECK_THROWS_AS((void)Script::parse("goal H 0 Omega(X,1,1)\n", "bad.chase"),
                    ParseError);
    CHECK_THROWS_AS((void)Script::parse("frobnicate\n", "bad.chase"), ParseError);
}

TEST_CASE("cover descent derives the genus-6 double-cover vanishings") {
    ChaseEnv env;
    env.add_space(grassmannian_space("G", 1, 4));
    env.add_space(cover_space(env.space("G"), "W", 2, 1));
    // binding cells for the threshold on the 6-fold double cover of G
    CHECK(derive_vanishing(env, "W", 0, 1, 0));
    CHECK(derive_vanishing(env, "W", 0, 2, 1));
    CHECK(derive_vanishing(env, "W", 0, 3, 2));
    CHECK(derive_vanishing(env, "W", 0, 4, 2));
    CHECK(derive_vanishing(env, "W", 0, 5, 3));
}

TEST_CASE("cover descent through a section chain") {
    ChaseEnv env;
    env.add_space(grassmannian_space("G", 1, 4));
    env.add_space(section_space(env.space("G"), "Y5", 1));
    env.add_space(section_space(env.space("Y5"), "Y4", 1));
    env.add_space(cover_space(env.space("Y4"), "W", 2, 1));
    CHECK(derive_vanishing(env, "W", 0, 1, 0));
    CHECK(derive_vanishing(env, "W", 0, 2, 1));
    CHECK(derive_vanishing(env, "W", 0, 3, 1));
}
