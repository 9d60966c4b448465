#include "fanostab/selftest.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "fanostab/chase.hpp"
#include "fanostab/special.hpp"
#include "fanostab/stability.hpp"
#include "fanostab/trace_check.hpp"
#include "fanostab/weyl.hpp"

namespace fano::selftest {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

BigInt binomial(int a, int b) {
    if (b < 0 || a < b) return 0;
    BigInt num = 1, den = 1;
    for (int i = 0; i < b; ++i) {
        num *= a - i;
        den *= i + 1;
    }
    return num / den;
}

// 1. closed-form nonvanishing matches the BWB oracle cell by cell
bool oracle_equivalence(std::ostream& out) {
    const auto start = Clock::now();
    long cells = 0;
    for (int n = 2; n <= 6; ++n) {
        const int N = 2 * (n - 1);
        for (int q = 0; q <= N; ++q)
            for (int t = -12; t <= 12; ++t) {
                auto coh = weyl::grassmann_cohomology(1, n, q, t);
                for (int p = 0; p <= N; ++p) {
                    ++cells;
                    if ((coh.count(p) > 0) != weyl::lemma01_nonvanishing(n, p, q, t)) {
                        out << "  mismatch at n=" << n << " p=" << p << " q=" << q
                            << " t=" << t << "\n";
                        return false;
                    }
                }
            }
    }
    const double secs = seconds_since(start);
    out << "  " << cells << " cells in " << secs << "s\n";
    return secs < 60.0;
}

// 2. projective-space tables: delta Hodge numbers, two-sided symmetry,
//    dimension of twisted global sections
bool bott_agreement(std::ostream& out) {
    for (int n = 1; n <= 8; ++n) {
        for (int q = 0; q <= n; ++q)
            for (int t = -15; t <= 15; ++t) {
                auto coh = weyl::grassmann_cohomology(0, n, q, t);
                for (int p = 0; p <= n; ++p) {
                    BigInt h = coh.count(p) ? coh.at(p) : BigInt(0);
                    if (t == 0) {
                        BigInt expect = p == q ? 1 : 0;
                        if (h != expect) {
                            out << "  Hodge mismatch on P^" << n << "\n";
                            return false;
                        }
                    }
                    if (h != weyl::hodge_cell(0, n, n - p, n - q, -t) ||
                        weyl::hodge_cell(0, n, p, q, 0) !=
                            weyl::hodge_cell(0, n, q, p, 0)) {
                        out << "  symmetry mismatch on P^" << n << "\n";
                        return false;
                    }
                }
                if (q == 0) {
                    BigInt h0 = coh.count(0) ? coh.at(0) : BigInt(0);
                    if (h0 != binomial(n + t, n)) {
                        out << "  h^0(P^" << n << ", O(" << t << ")) mismatch\n";
                        return false;
                    }
                }
            }
    }
    return true;
}

// 3. quoted Grassmannian cells
bool spot_checks(std::ostream& out) {
    bool ok = true;
    auto expect = [&](BigInt got, BigInt want, const std::string& what) {
        if (got != want) {
            out << "  " << what << ": got " << got << ", want " << want << "\n";
            ok = false;
        }
    };
    expect(weyl::hodge_cell(1, 5, 2, 2, 0), 2, "h^{2,2}(G(1,5))");
    expect(weyl::hodge_cell(1, 4, 0, 3, 2), 0, "H^0(G(1,4), O^3(2))");
    expect(weyl::hodge_cell(1, 5, 1, 4, 2), 0, "H^1(G(1,5), O^4(2))");
    expect(weyl::hodge_cell(1, 5, 2, 4, 1), 0, "H^2(G(1,5), O^4(1))");
    return ok;
}

// 4. propagated complete-intersection certificates agree with the closed
//    form on every condition-(a) cell
bool flenner_cross_check(std::ostream& out) {
    long cells = 0, chains = 0;
    std::function<bool(const special::Certificate&, int, int)> descend =
        [&](const special::Certificate& cert, int budget, int min_d) -> bool {
        const int dim = cert.space().dim;
        if (dim > 3) {
            for (int d = min_d; d <= budget; ++d) {
                special::Certificate next =
                    special::propagate_section(cert, d, Window{-10, 10});
                ++chains;
                const int n = next.space().dim;
                for (const auto& [cell, cv] : next.cells()) {
                    if (cv.second.condition != 'a') continue;
                    ++cells;
                    auto f = special::flenner_predicate(n, cell.p, cell.q, cell.t);
                    if (!f.zero || !cv.first.is_zero()) {
                        out << "  mismatch on " << next.space().id << " at "
                            << cell.to_string() << "\n";
                        return false;
                    }
                }
                if (!descend(next, budget - d, d)) return false;
            }
        }
        return true;
    };
    for (int N = 4; N <= 7; ++N) {
        special::Certificate base = special::certify_homogeneous(
            projective_space("P" + std::to_string(N), N), Window{-17, 17});
        if (!descend(base, 6, 1)) return false;
    }
    out << "  " << chains << " intersection chains, " << cells << " (a)-cells\n";
    return true;
}

// 5. shipped chase scripts: replay, independent check, full mutation suite
bool chase_replays(const std::string& root, std::ostream& out) {
    FactStore spinor = ingest_facts_file(root + "/facts/spinor10.facts");
    const std::vector<std::string> names = {
        "prop_2_9",       "prop_2_11",      "lemma_2_12_k9", "lemma_2_12_k8",
        "lemma_2_12_k7",  "lemma_2_12_k6",  "lemma_2_12_k5", "lemma_2_13"};
    for (const auto& name : names) {
        const auto start = Clock::now();
        chase::Script script =
            chase::Script::parse_file(root + "/scripts/" + name + ".chase");
        auto res = chase::replay(script, {&spinor});
        if (!res.ok) {
            out << "  " << name << " stuck\n";
            return false;
        }
        auto check = trace_check::check_trace(res.trace, {&spinor});
        if (!check.ok) {
            out << "  " << name << " trace rejected: " << check.errors.front() << "\n";
            return false;
        }
        auto mutation = chase::mutation_analysis(script, {&spinor});
        if (mutation.load_bearing.empty()) {
            out << "  " << name << " has no load-bearing facts\n";
            return false;
        }
        const double secs = seconds_since(start);
        if (secs > 5.0) {
            out << "  " << name << " took " << secs << "s\n";
            return false;
        }
        out << "  " << name << ": ok, " << mutation.load_bearing.size()
            << " load-bearing facts, " << secs << "s\n";
    }
    return true;
}

// 6. stability suite
bool stability_suite(const std::string& root, std::ostream& out) {
    using namespace stability;
    Resources res(root + "/scripts", root + "/facts");
    const FactStore& spinor = res.spinor_store();

    for (int n = 3; n <= 10; ++n) {
        if (del_pezzo_stability(n).outcome != Outcome::Stable) {
            out << "  del Pezzo failed at n=" << n << "\n";
            return false;
        }
        if (reid_stability(FanoProfile::make(n, 1)).outcome != Outcome::Stable) {
            out << "  index-1 failed at n=" << n << "\n";
            return false;
        }
    }

    auto max_dim = [](int g) {
        switch (g) {
            case 6: return 6;
            case 7: return 10;
            case 8: return 8;
            case 9: return 6;
            case 10: return 5;
            default: return 10;
        }
    };
    for (int g = 2; g <= 10; ++g)
        for (int n = 4; n <= max_dim(g); ++n) {
            auto v = coindex3_classify(FanoProfile::make(n, n - 2, g, true), res);
            if (v.outcome != Outcome::Stable) {
                out << "  classifier failed at n=" << n << " g=" << g << "\n";
                return false;
            }
            if (!verify_verdict(v, {&spinor})) {
                out << "  verdict traces rejected at n=" << n << " g=" << g << "\n";
                return false;
            }
        }

    for (int r = 1; r <= 5; ++r) {
        auto v = classify(FanoProfile::make(4, r), res);
        if (v.outcome != Outcome::Stable) {
            out << "  4-fold of index " << r << " not stable\n";
            return false;
        }
    }
    return true;
}

// 7. exact threshold arithmetic on randomized admissible tuples plus the
//    guard boundaries
bool threshold_arithmetic(std::ostream& out) {
    using namespace stability;
    std::mt19937 rng(411);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
    };

    int done = 0;
    while (done < 100) {
        const int n = pick(3, 10), d = pick(1, 6);
        const int s = pick(1, n + 2);
        if (d == 1 && (s == n + 1 || s == n + 2)) continue;
        SpaceDescriptor y;
        y.id = "Y";
        y.kind = SpaceKind::Abstract;
        y.dim = n + 1;
        y.index = s;
        const int W = n + s + d + 6;
        auto cert = special::assume_special(y, Window{-W, W}, "randomized premise");
        auto v = hypersurface_stability(n, s, d, cert,
                                        Premise{"Omega_Y semistable", "premise"});
        if (v.outcome != Outcome::Stable) {
            out << "  hypersurface tuple (n=" << n << ",s=" << s << ",d=" << d
                << ") not stable\n";
            return false;
        }
        for (int q = 1; s >= d && q <= n - 1; ++q)
            if (!(Rational((long)q * s, n + 1) > Rational((long)q * (s - d), n))) {
                out << "  inequality recheck failed\n";
                return false;
            }
        ++done;
    }
    while (done < 200) {
        const int dimY = pick(3, 10), k = pick(2, 4), d = pick(1, 3);
        const int s = pick(1, dimY + 1);
        if (s < (k - 1) * d) continue;
        if (s == dimY + 1 && k == 2 && d == 1) continue;
        SpaceDescriptor y;
        y.id = "Y";
        y.kind = SpaceKind::Abstract;
        y.dim = dimY;
        y.index = s;
        const int W = dimY + s + k * d + 6;
        auto cert = special::assume_special(y, Window{-W, W}, "randomized premise");
        auto v = cyclic_stability(dimY, s, k, d, cert,
                                  Premise{"Omega_Y semistable", "premise"});
        if (v.outcome != Outcome::Stable) {
            out << "  cyclic tuple (dimY=" << dimY << ",s=" << s << ",k=" << k
                << ",d=" << d << ") not stable\n";
            return false;
        }
        for (int q = 1; q <= dimY - 1; ++q) {
            Rational lhs((long)q * (s - (k - 1) * d), dimY);
            Rational m1((long)q * s, dimY);
            Rational m2 = Rational((long)(q - 1) * s, dimY) + d;
            if (!(lhs < m1 && lhs < m2)) {
                out << "  cover inequality recheck failed\n";
                return false;
            }
        }
        ++done;
    }

    // the guards reject exactly the exceptional triples
    for (int n = 3; n <= 8; ++n) {
        SpaceDescriptor y;
        y.id = "Y";
        y.kind = SpaceKind::Abstract;
        y.dim = n + 1;
        y.index = n + 2;
        auto cert = special::assume_special(y, Window{-30, 30}, "guard premise");
        if (hypersurface_stability(n, n + 2, 1, cert, Premise{"p", "r"}).outcome !=
            Outcome::NotApplicable)
            return false;
        y.index = n + 1;
        auto cert2 = special::assume_special(y, Window{-30, 30}, "guard premise");
        if (hypersurface_stability(n, n + 1, 1, cert2, Premise{"p", "r"}).outcome !=
            Outcome::NotApplicable)
            return false;
        // the nearest admissible neighbors pass
        if (hypersurface_stability(n, n + 2, 2, cert, Premise{"p", "r"}).outcome !=
            Outcome::Stable)
            return false;

        SpaceDescriptor q;
        q.id = "Q";
        q.kind = SpaceKind::Abstract;
        q.dim = n;
        q.index = n + 1;
        auto certq = special::assume_special(q, Window{-30, 30}, "guard premise");
        if (cyclic_stability(n, n + 1, 2, 1, certq, Premise{"p", "r"}).outcome !=
            Outcome::NotApplicable)
            return false;
        if (cyclic_stability(n, n + 1, 2, 2, certq, Premise{"p", "r"}).outcome ==
            Outcome::NotApplicable)
            return false;
    }
    out << "  200 randomized tuples plus guard boundaries\n";
    return true;
}

} // namespace

int run(const std::string& data_root, std::ostream& out) {
    struct Criterion {
        std::string name;
        std::function<bool(std::ostream&)> body;
    };
    const std::vector<Criterion> criteria = {
        {"closed-form nonvanishing matches the BWB oracle (n<=6, |t|<=12)",
         [&](std::ostream& o) { return oracle_equivalence(o); }},
        {"projective-space tables: delta Hodge numbers, symmetry, h^0 binomials",
         [&](std::ostream& o) { return bott_agreement(o); }},
        {"quoted Grassmannian cells",
         [&](std::ostream& o) { return spot_checks(o); }},
        {"complete-intersection certificates match the closed-form predicate",
         [&](std::ostream& o) { return flenner_cross_check(o); }},
        {"chase scripts replay, are independently checked, and every script has "
         "load-bearing facts",
         [&](std::ostream& o) { return chase_replays(data_root, o); }},
        {"stability suite: del Pezzo, index 1, coindex-3 classifier, 4-folds",
         [&](std::ostream& o) { return stability_suite(data_root, o); }},
        {"exact threshold arithmetic on randomized tuples and guard boundaries",
         [&](std::ostream& o) { return threshold_arithmetic(o); }},
    };

    const auto start = Clock::now();
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        bool ok = false;
        std::ostringstream detail;
        try {
            ok = criteria[i].body(detail);
        } catch (const std::exception& e) {
            detail << "  exception: " << e.what() << "\n";
        }
        out << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
            << criteria[i].name << " (" << seconds_since(t0) << "s)\n";
        if (!detail.str().empty()) out << detail.str();
        if (!ok) ++failures;
    }
    const double total = seconds_since(start);
    const bool budget_ok = total < 300.0;
    out << (budget_ok ? "PASS" : "FAIL") << " criterion 8: full selftest wall clock "
        << total << "s < 300s\n";
    if (!budget_ok) ++failures;
    return failures;
}

} // namespace fano::selftest
