#include "fanostab/stability.hpp"

#include <sstream>

#include "fanostab/trace_check.hpp"

namespace fano::stability {

namespace {

long floor_div(long a, long b) { // b > 0
    long q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

std::string rat(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

} // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Stable: return "Stable";
        case Outcome::Semistable: return "Semistable";
        case Outcome::Unknown: return "Unknown";
        case Outcome::NotApplicable: return "NotApplicable";
    }
    return "?";
}

void StabilityVerdict::absorb(const StabilityVerdict& sub, const std::string& prefix) {
    for (const ReasonStep& s : sub.reasons)
        reasons.push_back(ReasonStep{prefix + s.claim, s.rule, s.deps});
    for (const auto& t : sub.traces) traces.push_back(t);
    for (const auto& a : sub.assumptions) assumptions.push_back(prefix + a);
}

std::string StabilityVerdict::reason_log() const {
    std::ostringstream out;
    out << "verdict: " << to_string(outcome) << "\n";
    for (const std::string& a : assumptions) out << "assumption: " << a << "\n";
    for (std::size_t i = 0; i < reasons.size(); ++i) {
        out << "STEP " << i + 1 << ": " << reasons[i].claim << " BY " << reasons[i].rule;
        if (!reasons[i].deps.empty()) {
            out << " USING ";
            for (std::size_t j = 0; j < reasons[i].deps.size(); ++j) {
                if (j) out << ", ";
                out << reasons[i].deps[j];
            }
        }
        out << "\n";
    }
    return out.str();
}

FanoProfile FanoProfile::make(int n, int r, std::optional<int> genus, bool assume_ES) {
    if (n < 1) throw std::invalid_argument("FanoProfile: dimension must be positive");
    if (r < 1 || r > n + 1)
        throw std::invalid_argument(
            "FanoProfile: index must satisfy 1 <= r <= n+1 (Kobayashi-Ochiai)");
    FanoProfile p;
    p.n = n;
    p.r = r;
    p.assume_ES = assume_ES;
    if (genus) {
        if (r != n - 2)
            throw std::invalid_argument("FanoProfile: genus is defined only at coindex 3");
        const int g = *genus;
        if (g < 2 || g == 11 || g > 12 || (g == 12 && n != 3))
            throw std::invalid_argument("FanoProfile: impossible genus " +
                                        std::to_string(g));
        p.genus = g;
        p.degree = 2 * g - 2;
    }
    return p;
}

Rational slope(int c1, int rank) {
    if (rank < 1) throw std::invalid_argument("slope: rank must be positive");
    return Rational(c1, rank);
}

StabilityVerdict h0_threshold_stability(const VanishingOracle& V, int n, int r,
                                        bool semistable_variant) {
    StabilityVerdict v;
    if (r < 1 || r > n - 1) {
        v.outcome = Outcome::NotApplicable;
        v.step("index " + std::to_string(r) +
                   " outside [1, n-1]: projective space or quadric, handled as "
                   "homogeneous spaces",
               "threshold-guard");
        return v;
    }
    for (int q = 1; q <= n - 1; ++q) {
        const long binding = semistable_variant
                                 ? -floor_div(-(long)q * r, n) - 1 // ceil(qr/n) - 1
                                 : floor_div((long)q * r, n);
        CohomologyValue val = V(q, static_cast<int>(binding));
        const std::string cell = "H^0(Omega^" + std::to_string(q) + "(" +
                                 std::to_string(binding) + "))";
        if (!val.known()) {
            v.outcome = Outcome::Unknown;
            v.step("oracle cannot decide the binding cell " + cell, "insufficient-oracle");
            return v;
        }
        if (!val.is_zero()) {
            v.outcome = Outcome::Unknown;
            v.step("binding cell " + cell + " is nonzero: a destabilizing subsheaf of "
                   "this rank is not excluded",
                   "threshold-failure");
            return v;
        }
        v.step(cell + " = 0, hence H^0(Omega^" + std::to_string(q) +
                   "(t)) = 0 for every t <= " + std::to_string(binding),
               "twist-monotonicity", {"oracle:" + cell});
    }
    v.outcome = semistable_variant ? Outcome::Semistable : Outcome::Stable;
    v.step("every rank-q exterior destabilizer is excluded by the threshold cells",
           "slope-threshold");
    return v;
}

StabilityVerdict hypersurface_stability(int n, int s, int d,
                                        const special::Certificate& cert_Y,
                                        const Premise& omega_Y_semistable) {
    if (n < 3)
        throw std::invalid_argument("hypersurface_stability: dim X >= 3 required");
    if (d < 1) throw std::invalid_argument("hypersurface_stability: d >= 1 required");

    StabilityVerdict v;
    v.step(omega_Y_semistable.claim, omega_Y_semistable.rule);

    if (s < d) {
        // X is of general type; every binding twist is negative
        for (int q = 1; q <= n - 1; ++q) {
            const long thr = floor_div((long)q * (s - d), n);
            if (thr >= 0) throw std::logic_error("general-type threshold not negative");
        }
        v.outcome = Outcome::Stable;
        v.step("K_X = O(d - s) with d > s: all binding twists are negative and "
               "H^0(Omega^q(t)) = 0 for t < 0",
               "kodaira-nakano");
        return v;
    }
    if (s > n + 2) {
        v.outcome = Outcome::NotApplicable;
        v.step("index s = " + std::to_string(s) + " exceeds the ambient bound n+2",
               "kobayashi-ochiai-guard");
        return v;
    }
    if (d == 1 && (s == n + 2 || s == n + 1)) {
        v.outcome = Outcome::NotApplicable;
        v.step("boundary case (s,d) = (" + std::to_string(s) +
                   ",1): hyperplane section of projective space or of the quadric",
               "boundary-guard");
        return v;
    }
    if (cert_Y.space().dim != n + 1 || cert_Y.space().index != s)
        throw std::invalid_argument(
            "hypersurface_stability: certificate does not match (n+1, s)");

    // the wedge-semistability threshold on Y strictly dominates the target
    for (int q = 1; q <= n - 1; ++q) {
        Rational lhs((long)q * s, n + 1), rhs((long)q * (s - d), n);
        if (!(lhs > rhs))
            throw std::logic_error("threshold inequality fails unexpectedly at q = " +
                                   std::to_string(q));
        v.step("q*s/(n+1) = " + rat(lhs) + " > " + rat(rhs) + " = q*(s-d)/n at q = " +
                   std::to_string(q),
               "exact-rational-inequality");
    }

    const long thr_max = floor_div((long)(n - 1) * (s - d), n);
    const Window w{-static_cast<int>(thr_max) - d - 2, static_cast<int>(thr_max) + d + 2};
    special::Certificate cert_X =
        special::propagate_section(cert_Y, d, w, cert_Y.space().id + ".X");
    v.step("special cohomology propagates to X", "section-propagation",
           {"certificate:" + cert_X.space().id});

    // the cupping boundary at t = d, discharged through the chase engine
    chase::ChaseEnv env;
    env.add_space(cert_Y.space());
    env.add_space(cert_X.space());
    const std::string &Y = cert_Y.space().id, &X = cert_X.space().id;

    for (int q = 1; q <= n - 1; ++q) {
        const long thr = floor_div((long)q * (s - d), n);
        for (long t = 0; t <= thr; ++t) {
            std::vector<std::string> deps;
            // restriction-sequence flank H^0(Omega^q_Y(t)) via Maruyama
            if (!(Rational(t) < Rational((long)q * s, n + 1)))
                throw std::logic_error("maruyama threshold violated");
            deps.push_back("H^0(Omega^" + std::to_string(q) + "_Y(" + std::to_string(t) +
                           "))=0 by maruyama-wedge-semistability");
            // restriction-sequence flank H^1(Omega^q_Y(t-d))
            const int td = static_cast<int>(t) - d;
            CohomologyValue yflank = cert_Y.value(1, q, td);
            if (!yflank.known())
                throw FootprintError("certificate for " + Y + " does not cover H^1(q=" +
                                     std::to_string(q) + ", t=" + std::to_string(td) +
                                     ")");
            if (!yflank.is_zero())
                throw Contradiction("unexpected nonzero ambient flank");
            deps.push_back("H^1(Omega^" + std::to_string(q) + "_Y(" +
                           std::to_string(td) + "))=0 by certificate");
            // conormal neighbor H^1(Omega^{q-1}_X(t-d))
            if (t < d) {
                deps.push_back("H^1(Omega^" + std::to_string(q - 1) + "_X(" +
                               std::to_string(td) + "))=0 by kodaira-nakano");
            } else if (t == d) {
                if (q < 2) throw std::logic_error("t=d boundary reached at q=1");
                env.add_cupping(Y, X, 2, q);
                env.saturate();
                // w: H^1(Omega^{q-1}_X) -> H^1(Res(Y,X,q,d)) must be injective
                int conormal = env.register_ses(
                    "conormal", chase::SheafExpr::omega(X, q - 1, 0),
                    chase::SheafExpr::restricted(Y, X, q, d),
                    chase::SheafExpr::omega(X, q, d));
                if (!env.has_prop(chase::MapHandle::les(conormal, chase::LesRole::Left, 1),
                                  chase::MapProp::Injective))
                    throw std::logic_error("cupping discharge failed at q = " +
                                           std::to_string(q));
                deps.push_back("H^1(Omega^" + std::to_string(q - 1) +
                               "_X) injects past the boundary by the cupping ladder");
            } else {
                CohomologyValue xflank = cert_X.value(1, q - 1, td);
                if (!xflank.known() || !xflank.is_zero())
                    throw FootprintError("certificate for " + X +
                                         " does not cover the conormal neighbor");
                deps.push_back("H^1(Omega^" + std::to_string(q - 1) + "_X(" +
                               std::to_string(td) + "))=0 by certificate");
            }
            v.step("H^0(Omega^" + std::to_string(q) + "_X(" + std::to_string(t) +
                       ")) = 0",
                   "restriction-conormal-descent", std::move(deps));
        }
        v.step("H^0(Omega^" + std::to_string(q) + "_X(t)) = 0 for all t <= " +
                   std::to_string(thr),
               "twist-monotonicity");
    }
    v.traces.push_back(env.trace("hypersurface-cupping-boundary"));
    v.outcome = Outcome::Stable;
    v.step("Omega_X (and T_X) is stable", "slope-threshold");
    return v;
}

StabilityVerdict cyclic_stability(int dimY, int s, int k, int d,
                                  const special::Certificate& cert_Y,
                                  const Premise& omega_Y_semistable) {
    if (dimY < 3) throw std::invalid_argument("cyclic_stability: dim Y >= 3 required");
    StabilityVerdict v;
    if (k < 2) {
        v.outcome = Outcome::NotApplicable;
        v.step("k >= 2 required for a branched cover", "cover-guard");
        return v;
    }
    if (d < 1 || s < (k - 1) * d || s > dimY + 1) {
        v.outcome = Outcome::NotApplicable;
        v.step("index bookkeeping dimY+1 >= s >= (k-1)d > 0 violated", "cover-guard");
        return v;
    }
    if (s == dimY + 1 && k == 2 && d == 1) {
        v.outcome = Outcome::NotApplicable;
        v.step("boundary case (dimY+1, 2, 1): a double covering of projective space "
               "by a quadric",
               "boundary-guard");
        return v;
    }
    if (cert_Y.space().dim != dimY || cert_Y.space().index != s)
        throw std::invalid_argument("cyclic_stability: certificate does not match");

    v.step(omega_Y_semistable.claim, omega_Y_semistable.rule);
    const int n = dimY; // = dim X
    const int kd = k * d;
    const int rX = s - (k - 1) * d;

    for (int q = 1; q <= n - 1; ++q) {
        Rational target((long)q * rX, n);
        Rational m1((long)q * s, n), m2(Rational((long)(q - 1) * s, n) + d);
        Rational lim = std::min(m1, m2);
        if (!(target < lim))
            throw std::logic_error("cover threshold inequality fails at q = " +
                                   std::to_string(q));
        v.step("q*(s-(k-1)d)/n = " + rat(target) + " < min(" + rat(m1) + ", " + rat(m2) +
                   ") at q = " + std::to_string(q),
               "exact-rational-inequality");
    }

    const long thr_max = floor_div((long)(n - 1) * rX, n);
    const Window w{-static_cast<int>(thr_max) - kd - 2,
                   static_cast<int>(thr_max) + kd + 2};
    special::Certificate cert_X =
        special::propagate_cyclic(cert_Y, k, d, w, cert_Y.space().id + ".X");
    v.step("special cohomology propagates to the cover X", "cover-propagation",
           {"certificate:" + cert_X.space().id});

    for (int q = 1; q <= n - 1; ++q) {
        const long thr = floor_div((long)q * rX, n);
        for (long t = 0; t <= thr; ++t) {
            std::vector<std::string> deps;
            deps.push_back("H^0(Push(q=" + std::to_string(q) + ",t=" + std::to_string(t) +
                           "))=0 by maruyama-wedge-semistability through the "
                           "pushforward decomposition");
            const int tkd = static_cast<int>(t) - kd;
            if (tkd < 0) {
                deps.push_back("H^1(Omega^" + std::to_string(q - 1) + "_X(" +
                               std::to_string(tkd) + "))=0 by kodaira-nakano");
            } else if (tkd == 0) {
                deps.push_back("cover cupping at the branch twist: "
                               "cover-cupping-injectivity and "
                               "cover-pushforward-injectivity close the sequence");
                CohomologyValue xd = cert_X.value(1, q - 1, 0);
                CohomologyValue yd = cert_Y.value(1, q - 1, 0);
                if (!xd.known() || !yd.known() || xd.dim() != yd.dim())
                    throw FootprintError("cover cupping endpoints not certified");
            } else {
                CohomologyValue xflank = cert_X.value(1, q - 1, tkd);
                if (!xflank.known() || !xflank.is_zero())
                    throw FootprintError("certificate for the cover misses the "
                                         "conormal neighbor");
                deps.push_back("H^1(Omega^" + std::to_string(q - 1) + "_X(" +
                               std::to_string(tkd) + "))=0 by certificate");
            }
            v.step("H^0(Omega^" + std::to_string(q) + "_X(" + std::to_string(t) +
                       ")) = 0",
                   "cover-conormal-descent", std::move(deps));
        }
        v.step("H^0(Omega^" + std::to_string(q) + "_X(t)) = 0 for all t <= " +
                   std::to_string(thr),
               "twist-monotonicity");
    }
    v.outcome = Outcome::Stable;
    v.step("Omega_X (and T_X) is stable", "slope-threshold");
    return v;
}

SubsheafConstraint reid_bound(const FanoProfile& profile, const SubsheafProfile& sub) {
    if (!profile.b2_is_1)
        throw std::invalid_argument("reid_bound: requires b2 = 1");
    if (sub.rank < 1 || sub.rank >= profile.n)
        throw std::invalid_argument("reid_bound: 1 <= rank < n required");
    SubsheafConstraint c;
    c.max_c1 = profile.r - 1;
    c.reasons.push_back(ReasonStep{
        "c1(F) < c1(X) = " + std::to_string(profile.r) +
            " for every proper reflexive subsheaf F of T_X",
        "reid-subsheaf-bound", {}});
    if (sub.rank == 1 && c.max_c1 > 0) {
        c.max_c1 = 0;
        c.reasons.push_back(ReasonStep{
            "rank-one subsheaves of T_X have c1 <= 0 (an ample twist with a tangent "
            "field forces projective space)",
            "wahl-rank-one-bound", {}});
    }
    if (sub.c1 > c.max_c1) {
        c.impossible = true;
        c.reasons.push_back(ReasonStep{
            "a subsheaf of rank " + std::to_string(sub.rank) + " with c1 = " +
                std::to_string(sub.c1) + " violates the bound c1 <= " +
                std::to_string(c.max_c1),
            "subsheaf-excluded", {}});
    }
    return c;
}

StabilityVerdict reid_stability(const FanoProfile& profile) {
    StabilityVerdict v;
    if (profile.r != 1) {
        v.outcome = Outcome::NotApplicable;
        v.step("Reid's criterion applies at index 1", "index-guard");
        return v;
    }
    v.outcome = Outcome::Stable;
    v.step("every proper reflexive subsheaf of T_X has c1 <= 0",
           "reid-subsheaf-bound");
    v.step("mu(F) <= 0 < " + rat(Rational(1, profile.n)) + " = mu(T_X)",
           "exact-rational-inequality");
    return v;
}

SlicingResult slicing_search(int n, int r, int m, int k, const SlicingConfig& config) {
    SlicingResult res;
    if (r < 1 || r > n - 1 || m < 1 || m > n - 1 || k < m) return res;
    res.applicable = true;

    // state: (slices taken, rank, lower bound on c1); the invariant
    // mu >= 1 i.e. c1 >= rank is preserved by both branch shapes
    std::map<std::tuple<int, int, int>, bool> memo;
    std::set<std::string> rules_used;

    std::function<bool(int, int, int, std::vector<std::string>&)> explore =
        [&](int lvl, int rank, int c1, std::vector<std::string>& path) -> bool {
        auto key = std::make_tuple(lvl, rank, c1);
        if (auto it = memo.find(key); it != memo.end() && it->second) return true;
        ++res.nodes;
        if (res.nodes > config.node_budget)
            throw std::runtime_error("slicing_search: node budget exceeded");
        const int dim_i = n - lvl;
        const int index_i = r - lvl;

        bool contradicted = false;
        if (config.reid_c1_bound && dim_i >= 3 && c1 >= index_i) {
            rules_used.insert("reid-subsheaf-bound");
            contradicted = true;
        } else if (rank == 1) {
            // mu >= 1 forces c1 >= 1 on the rank-one remnant
            if (std::max(c1, 1) > config.wahl_max_c1) {
                rules_used.insert("wahl-rank-one-bound");
                contradicted = true;
            }
        } else if (index_i <= 1) {
            if (dim_i >= 3) {
                // stability on the index-1 slice: mu(F') >= 1 > 1/dim
                rules_used.insert("reid-index-one-stability");
                contradicted = true;
            }
        } else {
            // slice by one more divisor (needs the divisor chain hypothesis)
            std::vector<std::string> p0 = path, p1 = path, p2 = path;
            p0.push_back("alpha=0");
            p1.push_back("alpha!=0,c1-drop=1");
            p2.push_back("alpha!=0,c1-drop=0");
            bool ok = explore(lvl + 1, rank, c1, p0);
            ok = explore(lvl + 1, rank - 1, c1 - 1, p1) && ok;
            ok = explore(lvl + 1, rank - 1, c1, p2) && ok;
            memo[key] = ok;
            return ok;
        }
        if (!contradicted && res.surviving_branch.empty()) {
            res.surviving_branch = path;
            res.surviving_branch.push_back("endpoint(level=" + std::to_string(lvl) +
                                           ",rank=" + std::to_string(rank) +
                                           ",c1>=" + std::to_string(c1) + ")");
        }
        memo[key] = contradicted;
        return contradicted;
    };

    std::vector<std::string> path;
    res.all_contradicted = explore(0, m, k, path);

    const long bound = (1L << (r - 1)) * (m + 1);
    if (res.nodes > bound)
        throw std::logic_error("slicing_search: structural node bound exceeded");

    for (const std::string& rule : rules_used)
        res.reasons.push_back(ReasonStep{"branch endpoint contradiction", rule, {}});
    if (res.all_contradicted)
        res.reasons.push_back(ReasonStep{
            "every branch of the slicing tree reaches a contradiction, refuting "
            "mu(F) >= 1 for rank " + std::to_string(m),
            "exhaustive-branch-tree",
            {"nodes=" + std::to_string(res.nodes)}});
    return res;
}

StabilityVerdict del_pezzo_stability(int n) {
    if (n < 3) throw std::invalid_argument("del_pezzo_stability: n >= 3 required");
    const int r = n - 1;
    StabilityVerdict v;
    v.assumptions.push_back("(ES) holds at index n-1 (Fujita)");
    for (int m = 1; m <= n - 1; ++m) {
        SlicingResult sr = slicing_search(n, r, m, m);
        if (!sr.applicable || !sr.all_contradicted) {
            v.outcome = Outcome::Unknown;
            v.step("slicing refutation failed for rank " + std::to_string(m),
                   "slicing-search");
            return v;
        }
        for (const auto& step : sr.reasons) v.reasons.push_back(step);
        Rational mu_f(m - 1, m), mu_t(n - 1, n);
        if (!(mu_f < mu_t)) throw std::logic_error("del Pezzo slope comparison failed");
        v.step("rank-" + std::to_string(m) + " subsheaves have mu(F) <= " + rat(mu_f) +
                   " < " + rat(mu_t) + " = mu(T_X)",
               "integrality-of-c1");
    }
    v.outcome = Outcome::Stable;
    v.step("T_X is stable for the del Pezzo manifold of dimension " + std::to_string(n),
           "slope-threshold");
    return v;
}

StabilityVerdict prop_even_odd_reduction(int n,
                                         const std::optional<Premise>& section_stable,
                                         const std::optional<Premise>& residual_vanishing) {
    if (n < 4) throw std::invalid_argument("prop_even_odd_reduction: n >= 4 required");
    StabilityVerdict v;
    if (!section_stable) {
        v.outcome = Outcome::Unknown;
        v.step("stability of a smooth hyperplane section is not known",
               "missing-premise");
        return v;
    }
    v.step(section_stable->claim, section_stable->rule);
    v.step("any destabilizer descends through one slice to rank m with n = 2m and "
           "equal slope; all strictly destabilizing ranks are excluded",
           "equal-slope-reduction");
    if (n % 2 == 1) {
        v.outcome = Outcome::Stable;
        v.step("n odd: no rank satisfies n = 2m, so T_X is stable", "parity");
        return v;
    }
    const int m = n / 2;
    const std::string cell =
        "H^0(Omega^" + std::to_string(m) + "(" + std::to_string(m - 1) + "))";
    if (residual_vanishing) {
        v.step(residual_vanishing->claim, residual_vanishing->rule);
        v.outcome = Outcome::Stable;
        v.step("an equal-slope subsheaf of rank " + std::to_string(m) +
                   " would give a nonzero section in " + cell + ", which vanishes",
               "determinant-embedding");
        return v;
    }
    v.outcome = Outcome::Semistable;
    v.step("residual obligation open: " + cell +
               " = 0 would exclude the equal-slope rank-" + std::to_string(m) +
               " subsheaf; the verdict stays semistable",
           "residual-obligation");
    return v;
}

StabilityVerdict tangent_field_criterion(int n,
                                         const std::map<int, CohomologyValue>& h0_tangent) {
    if (n < 4) throw std::invalid_argument("tangent_field_criterion: n >= 4 required");
    StabilityVerdict v;
    for (int m = 3; m <= n / 2 + 1; ++m) {
        auto it = h0_tangent.find(m);
        if (it == h0_tangent.end() || !it->second.known()) {
            v.outcome = Outcome::Unknown;
            v.step("H^0(X_" + std::to_string(m) + ", T) not known", "missing-premise");
            return v;
        }
        if (!it->second.is_zero()) {
            v.outcome = Outcome::Unknown;
            v.step("H^0(X_" + std::to_string(m) + ", T) nonzero: criterion inconclusive",
                   "tangent-field-criterion");
            return v;
        }
        v.step("H^0(X_" + std::to_string(m) + ", T) = 0", "tangent-field-criterion");
    }
    v.outcome = Outcome::Stable;
    v.step("no general linear section in the critical range carries a tangent field, "
           "so the slicing endpoint of any destabilizer is excluded",
           "tangent-field-criterion");
    return v;
}

bool verify_verdict(const StabilityVerdict& verdict,
                    const std::vector<const FactStore*>& stores) {
    for (const auto& trace : verdict.traces) {
        auto res = trace_check::check_trace(trace, stores);
        if (!res.ok) return false;
    }
    return true;
}

} // namespace fano::stability
