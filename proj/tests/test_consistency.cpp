#include "doctest.h"

#include "fanostab/chase.hpp"
#include "fanostab/cli.hpp"
#include "fanostab/special.hpp"
#include "fanostab/trace_check.hpp"

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

using namespace fano;

namespace {
const std::string kRoot = FANOSTAB_SOURCE_DIR;
}

TEST_CASE("euler recursion reproduces classical Hodge diamonds") {
    CohomologyTable p4 = weyl_table(projective_space("P4", 4), Window{-20, 20});
    CohomologyTable p5 = weyl_table(projective_space("P5", 5), Window{-24, 24});

    // quadric threefold: h^{p,p} = 1, odd cohomology trivial
    CHECK(euler_recursion(p4, {2}, 0, 0) == 1);
    CHECK(euler_recursion(p4, {2}, 1, 0) == -1);
    CHECK(euler_recursion(p4, {2}, 2, 0) == 1);
    CHECK(euler_recursion(p4, {2}, 3, 0) == -1);

    // cubic surface: h^{1,1} = 7
    CohomologyTable p3 = weyl_table(projective_space("P3", 3), Window{-16, 16});
    CHECK(euler_recursion(p3, {3}, 1, 0) == -7);

    // cubic fourfold: Betti numbers 1,0,1,0,23,0,1,0,1 with h^{3,1} = 1 and
    // h^{2,2} = 21; column characteristics 1, -2, 21, -2, 1 sum with signs
    // to the topological Euler number 27
    CHECK(euler_recursion(p5, {3}, 0, 0) == 1);
    CHECK(euler_recursion(p5, {3}, 1, 0) == -2);
    CHECK(euler_recursion(p5, {3}, 2, 0) == 21);
    CHECK(euler_recursion(p5, {3}, 3, 0) == -2);
    CHECK(euler_recursion(p5, {3}, 4, 0) == 1);
}

TEST_CASE("determined certificate columns force a consistent middle cell") {
    // On a certified section, every twisted column is zero away from the
    // middle row, so the alternating sum collapses to the middle cell:
    // (-1)^(n-q) chi must be a nonnegative dimension.
    CohomologyTable p4 = weyl_table(projective_space("P4", 4), Window{-24, 24});
    special::Certificate q3 = special::propagate_section(
        special::certify_homogeneous(projective_space("P4", 4), Window{-14, 14}), 2,
        Window{-8, 8}, "Q3");
    const int n = 3;
    for (int q = 0; q <= n; ++q)
        for (int t = -8; t <= 8; ++t) {
            if (t == 0) continue;
            for (int p = 0; p <= n; ++p) {
                if (p + q == n) continue;
                CohomologyValue v = q3.value(p, q, t);
                if (p > 0 && p < n) {
                    REQUIRE(v.known());
                    CHECK(v.is_zero());
                }
            }
            // the two edge rows vanish in the Kodaira-Nakano zones; when
            // they do, the middle is pinned by the Euler characteristic
            const bool edges_zero =
                (t > 0 ? q > 0 : q < n); // H^0 row (t>0,q=0) and H^n row free
            if (!edges_zero) continue;
            if ((t > 0 && kodaira_nakano_zone(n, 0, q, t).is_zero() &&
                 kodaira_nakano_zone(n, n, q, t).is_zero()) ||
                (t < 0 && kodaira_nakano_zone(n, 0, q, t).is_zero() &&
                 kodaira_nakano_zone(n, n, q, t).is_zero())) {
                BigInt chi = euler_recursion(p4, {2}, q, t);
                BigInt middle = (n - q) % 2 == 0 ? chi : -chi;
                CHECK_MESSAGE(middle >= 0, "q=", q, " t=", t, " chi=", chi.str());
            }
        }
}

TEST_CASE("asymmetric windows still close the Serre zones") {
    special::Certificate p5 =
        special::certify_homogeneous(projective_space("P5", 5), Window{-14, 14});
    special::Certificate x = special::propagate_section(p5, 2, Window{-8, 3}, "X");
    // a condition-(a) cell with p+q > dim and a twist below the lower end of
    // the positive range: its Serre dual lives above window.hi
    const special::Evidence* ev = x.evidence(3, 3, -6);
    REQUIRE(ev != nullptr);
    CHECK(ev->rule == "serre-duality");
    CHECK(x.value(3, 3, -6).is_zero());
    CHECK(special::is_special(x.to_table(), 4).ok());
}

TEST_CASE("tampered traces are rejected by the checker") {
    FactStore store = ingest_facts_file(kRoot + "/facts/spinor10.facts");
    chase::Script script = chase::Script::parse_file(kRoot + "/scripts/lemma_2_13.chase");
    auto res = chase::replay(script, {&store});
    REQUIRE(res.ok);
    REQUIRE(trace_check::check_trace(res.trace, {&store}).ok);

    // flip the value of a fact step
    {
        chase::ProofTrace bad = res.trace;
        for (auto& s : bad.steps)
            if (s.rule == "use-fact") {
                s.value = CohomologyValue::of_dim(1);
                break;
            }
        CHECK_FALSE(trace_check::check_trace(bad, {&store}).ok);
    }
    // invent a rule name
    {
        chase::ProofTrace bad = res.trace;
        bad.steps.front().rule = "wishful-thinking";
        CHECK_FALSE(trace_check::check_trace(bad, {&store}).ok);
    }
    // claim a conclusion no step proves
    {
        chase::ProofTrace bad = res.trace;
        bad.conclusions.front().value = CohomologyValue::of_dim(5);
        CHECK_FALSE(trace_check::check_trace(bad, {&store}).ok);
    }
    // forward premise reference
    {
        chase::ProofTrace bad = res.trace;
        for (auto& s : bad.steps)
            if (!s.premise_steps.empty()) {
                s.premise_steps[0] = s.id + 1;
                break;
            }
        CHECK_FALSE(trace_check::check_trace(bad, {&store}).ok);
    }
}

TEST_CASE("serre contradiction names both cells") {
    CohomologyTable bad(projective_space("P3", 3), Window{-2, 2});
    bad.set(1, 1, 0, CohomologyValue::of_dim(1));
    bad.set(2, 2, 0, CohomologyValue::of_dim(7));
    try {
        (void)serre_close(bad);
        FAIL("expected contradiction");
    } catch (const Contradiction& e) {
        std::string msg = e.what();
        CHECK(msg.find("(p=1,q=1,t=0)") != std::string::npos);
        CHECK(msg.find("(p=2,q=2,t=0)") != std::string::npos);
    }
}

TEST_CASE("cli writes certificates and traces to files") {
    std::ostringstream out, err;
    const std::string cert_path = (std::filesystem::temp_directory_path() / ("fanostab_test_" + std::to_string(::getpid()))).string() + ".cert";
    int code = cli::run({"special", "--from", "P(4)", "--section", "2", "--window",
                         "-6:6", "--out", cert_path},
                        out, err);
    CHECK(code == 0);
    std::ifstream in(cert_path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    auto cert = special::Certificate::parse(ss.str(), cert_path);
    CHECK(cert.space().dim == 3);
    std::remove(cert_path.c_str());

    const std::string trace_path = (std::filesystem::temp_directory_path() / ("fanostab_test_" + std::to_string(::getpid()))).string() + ".trace";
    code = cli::run({"chase", "--script", kRoot + "/scripts/prop_2_9.chase", "--out",
                     trace_path},
                    out, err);
    CHECK(code == 0);
    std::ifstream tin(trace_path);
    REQUIRE(tin.good());
    std::string first_line;
    std::getline(tin, first_line);
    CHECK(first_line.find("trace prop_2_9") != std::string::npos);
    std::remove(trace_path.c_str());
}

TEST_CASE("propagating from a non-special base is rejected") {
    std::ostringstream out, err;
    int code = cli::run({"special", "--from", "G(1,4)", "--section", "2", "--window",
                         "-4:4"},
                        out, err);
    CHECK(code == 2);
    CHECK(err.str().find("not special") != std::string::npos);
}
