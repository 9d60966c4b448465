#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fanostab/chase.hpp"
#include "fanostab/special.hpp"

namespace fano::stability {

enum class Outcome { Stable, Semistable, Unknown, NotApplicable };

std::string to_string(Outcome o);

/// One citation-tagged step of a verdict's reason chain.
struct ReasonStep {
    std::string claim;
    std::string rule;
    std::vector<std::string> deps;
};

struct StabilityVerdict {
    Outcome outcome = Outcome::Unknown;
    std::vector<ReasonStep> reasons;
    std::vector<chase::ProofTrace> traces; // chase derivations consumed
    std::vector<std::string> assumptions;  // explicit hypotheses (e.g. (ES))

    void step(const std::string& claim, const std::string& rule,
              std::vector<std::string> deps = {}) {
        reasons.push_back(ReasonStep{claim, rule, std::move(deps)});
    }
    void absorb(const StabilityVerdict& sub, const std::string& prefix);

    /// `STEP <n>: <claim> BY <rule> USING <deps>`
    [[nodiscard]] std::string reason_log() const;
};

/// Numeric profile of a Fano manifold with b2 = 1: dimension, index, degree
/// H^n, the genus when the index is n-2, and the divisor-chain hypothesis.
struct FanoProfile {
    int n = 0;
    int r = 0;
    BigInt degree = 0; // 0 when not pinned by the profile
    std::optional<int> genus;
    bool assume_ES = false;
    bool b2_is_1 = true;

    /// Validates the profile invariants: 1 <= r <= n+1, genus only for
    /// coindex 3 with degree = 2g-2, g in {2..10, 12} and g = 12 only in
    /// dimension 3. Throws std::invalid_argument.
    static FanoProfile make(int n, int r, std::optional<int> genus = std::nullopt,
                            bool assume_ES = false);
};

struct SubsheafProfile {
    int rank = 1; // 1 <= rank < n
    int c1 = 0;   // in units of the ample generator
};

/// Exact slope c1/rank; the H^{n-1} factor cancels in every comparison.
Rational slope(int c1, int rank);

/// Answers H^0(Omega^q(t)) for the threshold test; Unknown is an honest
/// "cannot decide".
using VanishingOracle = std::function<CohomologyValue(int q, int t)>;

/// The H^0-threshold criterion: stable iff H^0(Omega^q(t)) = 0 for every
/// 1 <= q <= n-1 and every t <= floor(q r / n) (non-strict variant for
/// semistability). Twisting down along the ample generator makes the
/// binding cell per q sufficient. r outside [1, n-1] (projective space,
/// quadric) is NotApplicable.
StabilityVerdict h0_threshold_stability(const VanishingOracle& V, int n, int r,
                                        bool semistable_variant = false);

/// Citation-tagged hypothesis supplied by a caller.
struct Premise {
    std::string claim;
    std::string rule;
};

/// Stability of the cotangent bundle of a smooth degree-d divisor X (of
/// dimension n) in a certified special Y with K_Y = O(-s) and Omega_Y
/// semistable: the wedge-semistability thresholds cover every binding cell
/// except the twists 0 and d, which the cupping ladder discharges.
StabilityVerdict hypersurface_stability(int n, int s, int d,
                                        const special::Certificate& cert_Y,
                                        const Premise& omega_Y_semistable);

/// Stability for the k-cyclic cover (k >= 2) of a certified special Y with
/// K_Y = O(-s), branched in |O(kd)|.
StabilityVerdict cyclic_stability(int dimY, int s, int k, int d,
                                  const special::Certificate& cert_Y,
                                  const Premise& omega_Y_semistable);

/// Reid's bound c1 < index for proper reflexive subsheaves of the tangent
/// bundle, sharpened by Wahl's theorem to c1 <= 0 in rank one.
struct SubsheafConstraint {
    int max_c1 = 0;
    bool impossible = false; // the profile already violates the bound
    std::vector<ReasonStep> reasons;
};
SubsheafConstraint reid_bound(const FanoProfile& profile, const SubsheafProfile& sub);

/// Index-1 verdict straight from Reid's theorem.
StabilityVerdict reid_stability(const FanoProfile& profile);

/// Endpoint bounds of the slicing search, perturbable by mutation tests.
struct SlicingConfig {
    int wahl_max_c1 = 0;         // rank-one subsheaves of T have c1 <= this
    bool reid_c1_bound = true;   // apply c1 < index on every slice of dim >= 3
    long node_budget = 1 << 20;  // hard safety stop
};

/// Exhaustive branch tree mechanizing the slicing argument: slice by smooth
/// divisors, at each step either the induced map to the normal direction
/// vanishes (the sheaf descends) or the rank drops by one and c1 by at most
/// one. Every branch must reach a contradiction with an endpoint bound,
/// refuting mu(F) >= 1.
struct SlicingResult {
    bool applicable = false;
    bool all_contradicted = false;
    long nodes = 0;
    std::vector<std::string> surviving_branch; // branch choices if one survives
    std::vector<ReasonStep> reasons;
};
SlicingResult slicing_search(int n, int r, int m, int k, const SlicingConfig& config = {});

/// Del Pezzo case r = n-1: the slicing refutation for every rank, plus the
/// integrality step mu(F) <= (m-1)/m < (n-1)/n.
StabilityVerdict del_pezzo_stability(int n);

/// Coindex-3 reduction: stable for n odd given a stable hyperplane section;
/// for n even the single residual obligation H^0(Omega^{n/2}(n/2 - 1)) = 0
/// upgrades semistability to stability.
StabilityVerdict prop_even_odd_reduction(int n, const std::optional<Premise>& section_stable,
                                         const std::optional<Premise>& residual_vanishing);

/// Tangent-field criterion: stable when H^0(X_m, T_{X_m}) = 0 for every
/// general linear section of dimension 3 <= m <= n/2 + 1.
StabilityVerdict tangent_field_criterion(int n,
                                         const std::map<int, CohomologyValue>& h0_tangent);

/// Lazily built shared resources: fact files, replayed scripts, certificates.
class Resources {
public:
    explicit Resources(std::string scripts_dir = "scripts",
                       std::string facts_dir = "facts");

    [[nodiscard]] const FactStore& spinor_store();
    /// Replays a shipped script (cached); nullopt when the script or its
    /// fact file is missing or stuck.
    const chase::ReplayResult* script(const std::string& name);

    const special::Certificate& projective_certificate(int n, Window w);
    const special::Certificate& quadric_certificate(int n, Window w);

    std::map<std::pair<int, int>, StabilityVerdict> classify_cache;

private:
    std::string scripts_dir_, facts_dir_;
    bool spinor_loaded_ = false;
    FactStore spinor_;
    std::map<std::string, chase::ReplayResult> replays_;
    std::map<std::string, special::Certificate> certs_;
};

/// The coindex-3 classifier: routes by genus through cyclic covers,
/// complete intersections, the two Grassmannian families, and the spinor
/// family, assembling the full reason chain. Genus absent means: verify all
/// admissible genera for this dimension.
StabilityVerdict coindex3_classify(const FanoProfile& profile, Resources& res);

/// Full router over the index: projective space and quadric (homogeneous),
/// del Pezzo, coindex 3, index 1, and Unknown below that.
StabilityVerdict classify(const FanoProfile& profile, Resources& res);

/// Independent re-validation of a verdict: every consumed trace must pass
/// the trace checker.
bool verify_verdict(const StabilityVerdict& verdict,
                    const std::vector<const FactStore*>& stores);

} // namespace fano::stability
