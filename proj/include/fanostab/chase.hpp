#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fanostab/cohomology.hpp"
#include "fanostab/facts.hpp"

namespace fano::chase {

/// Symbolic sheaf term over the registered spaces: twisted forms, forms of
/// an ambient space restricted to a section, the pushforward layer of a
/// cyclic cover, and finite direct sums.
struct SheafExpr {
    enum class Kind { Omega, Restricted, Pushforward, Sum };

    Kind kind = Kind::Omega;
    std::string space;   // Omega / Pushforward: carrier; Restricted: the section
    std::string ambient; // Restricted only
    int q = 0;
    int t = 0;
    std::vector<SheafExpr> summands; // Sum only

    static SheafExpr omega(std::string space, int q, int t);
    static SheafExpr structure(std::string space, int t) {
        return omega(std::move(space), 0, t);
    }
    static SheafExpr restricted(std::string ambient, std::string section, int q, int t);
    static SheafExpr pushforward(std::string cover, int q, int t);
    static SheafExpr sum(std::vector<SheafExpr> parts);

    [[nodiscard]] std::string to_string() const;
    /// Parses Omega(X,q,t) | O(X,t) | Res(Y,X,q,t) | Push(X,q,t).
    static SheafExpr parse(const std::string& text);

    bool operator==(const SheafExpr& o) const;
    bool operator<(const SheafExpr& o) const;
};

/// A cohomology group H^p(sheaf).
struct Group {
    SheafExpr sheaf;
    int p = 0;
    [[nodiscard]] std::string to_string() const {
        return "H^" + std::to_string(p) + "(" + sheaf.to_string() + ")";
    }
    bool operator==(const Group& o) const { return p == o.p && sheaf == o.sheaf; }
    bool operator<(const Group& o) const {
        if (p != o.p) return p < o.p;
        return sheaf < o.sheaf;
    }
};

/// A short exact sequence 0 -> left -> middle -> right -> 0 instantiating
/// one of the four standard rules; the (q,t,d) bookkeeping of the named rule
/// is validated on registration.
///   restriction:     0 -> O^q_Y(t)     -> O^q_Y(t+d)     -> O^q_{Y|X}(t+d) -> 0
///   conormal:        0 -> O^q_X(t)     -> O^{q+1}_{Y|X}(t+d) -> O^{q+1}_X(t+d) -> 0
///   cover-conormal:  0 -> O^{q-1}_X(t) -> Push^q_X(t+kd) -> O^q_X(t+kd)    -> 0
///   pushforward:     0 -> sum_j O^q_Y(t-jd) -> Push^q_X(t) -> sum_j O^{q-1}_Y(t-jd) -> 0
struct SES {
    int id = -1;
    std::string rule;
    SheafExpr left, middle, right;
    [[nodiscard]] std::string to_string() const {
        return "ses#" + std::to_string(id) + "[" + rule + "] 0->" + left.to_string() +
               "->" + middle.to_string() + "->" + right.to_string() + "->0";
    }
};

enum class MapProp { Injective, Surjective, Bijective, ZeroMap };

std::string to_string(MapProp p);

enum class LesRole { Left, Middle, Connecting };

/// Identifies a morphism the engine can reason about: a map in the long
/// exact sequence of a registered SES, the Lefschetz restriction map, or the
/// cupping composite with the Chern class of a section divisor.
struct MapHandle {
    enum class Kind { Les, Restriction, Cupping };
    Kind kind = Kind::Les;
    // Les
    int ses_id = -1;
    LesRole role = LesRole::Left;
    int p = 0;
    // Restriction H^p(O^q_Y(t)) -> H^p(O^q_X(t)) and
    // Cupping H^{p-1}(O^{q-1}_Y) -> H^p(O^q_Y) (w.r.t. the class of X)
    std::string from_space, to_space;
    int q = 0, t = 0;

    static MapHandle les(int ses_id, LesRole role, int p);
    static MapHandle restriction(std::string Y, std::string X, int p, int q, int t);
    static MapHandle cupping(std::string Y, std::string X, int p, int q);

    [[nodiscard]] std::string to_string() const;
    bool operator<(const MapHandle& o) const;
    bool operator==(const MapHandle& o) const;
};

/// One derivation step: a new fact (cell value or morphism property), the
/// rule that produced it, and its premises (earlier step ids and leaf
/// references).
struct Step {
    int id = 0;
    std::string rule;
    std::string statement;
    std::vector<int> premise_steps;
    std::vector<std::string> premise_refs; // leaf premises: facts, ranges, citations

    enum class What { CellValue, MapProperty, Note } what = What::Note;
    Group group;            // CellValue
    CohomologyValue value;  // CellValue
    MapHandle map;          // MapProperty
    MapProp prop = MapProp::Injective;
    int ses_id = -1;        // LES context when applicable
    int degree = 0;
};

/// A completed derivation: every step's premises are ingested facts,
/// computed values, or earlier steps; replaying the log reproduces the
/// conclusions. Carries the SES and space registries the steps refer to so
/// an independent checker can re-validate it.
struct ProofTrace {
    std::string name;
    std::vector<SpaceDescriptor> spaces;
    std::vector<SES> sequences;
    std::vector<Step> steps;
    struct Conclusion {
        Group group;
        CohomologyValue value;
        int step = -1;
    };
    std::vector<Conclusion> conclusions;

    [[nodiscard]] std::string serialize() const;
};

/// Fact keys the mutation suite can suppress: "vanish <id> p <p> q <q> t <t>",
/// "dim <id> ... = <v>", "betti <id> b<i>", "weyl <id> p <p> q <q> t <t>".
using FactKey = std::string;

/// Derivation environment: registered spaces and sequences, the growing
/// fact set, morphism properties, and the trace. Lookups consult, in order:
/// memoized facts, loaded fact files, exact computation on homogeneous
/// spaces, Kodaira-Nakano, Betti/Hodge bookkeeping at t = 0, the Lefschetz
/// restriction to a section's ambient, and Serre duality.
class ChaseEnv {
public:
    explicit ChaseEnv(std::vector<const FactStore*> stores = {},
                      std::set<FactKey> suppressed = {});

    void add_space(const SpaceDescriptor& s);
    [[nodiscard]] const SpaceDescriptor* find_space(const std::string& id) const;
    [[nodiscard]] const SpaceDescriptor& space(const std::string& id) const;

    /// Registers (or finds) a SES after validating the named rule's
    /// bookkeeping; returns its id.
    int register_ses(const std::string& rule, const SheafExpr& left,
                     const SheafExpr& middle, const SheafExpr& right);
    [[nodiscard]] const SES& ses(int id) const { return sequences_[std::size_t(id)]; }
    [[nodiscard]] const std::vector<SES>& sequences() const { return sequences_; }

    /// Pulls an explicit fact from the loaded stores into the working set;
    /// returns false (recording the miss) when absent, suppressed, or not
    /// carrying the expected value.
    bool use_fact_cell(const std::string& id, int p, int q, int t,
                       const std::optional<CohomologyValue>& expected = std::nullopt);

    /// Registers the cupping ladder for the divisor X in Y at bidegree
    /// (p,q): the two sequences it factors through, hard-Lefschetz
    /// injectivity of the composite, Lefschetz bijectivity of the
    /// restriction leg, and the factorization itself.
    void add_cupping(const std::string& Y, const std::string& X, int p, int q);

    /// Surjectivity of the twisted restriction H^0(O^q_Y(c)) -> H^0(O^q_X(c))
    /// for c <= d; the c = d case needs H^1(O^q_Y) = 0 as a fact. On failure
    /// returns false with the missing premise recorded.
    bool restriction_surjectivity(const std::string& Y, const std::string& X, int q,
                                  int c);

    /// Looks a group's value up through the provider chain, recording the
    /// derivation (or the miss).
    CohomologyValue lookup(const Group& g);

    /// Betti number lookup with Lefschetz transfer along section chains.
    std::optional<BigInt> betti(const std::string& id, int i);

    /// One pass of the exactness rules over one sequence; returns the number
    /// of new facts. Saturation loops this over all sequences.
    int les_pass(int ses_id);

    /// Runs all rules to a fixpoint.
    void saturate();

    [[nodiscard]] CohomologyValue known(const Group& g) const;
    [[nodiscard]] std::optional<int> value_step(const Group& g) const;
    void assert_value(const Group& g, const CohomologyValue& v, Step step);
    void add_map_prop(const MapHandle& m, MapProp prop, Step step);
    [[nodiscard]] bool has_prop(const MapHandle& m, MapProp prop) const;

    [[nodiscard]] std::vector<std::string> misses() const;
    [[nodiscard]] ProofTrace trace(const std::string& name) const;

    [[nodiscard]] Group les_source(int ses_id, LesRole role, int p) const;
    [[nodiscard]] Group les_target(int ses_id, LesRole role, int p) const;
    [[nodiscard]] Group map_source(const MapHandle& m) const;
    [[nodiscard]] Group map_target(const MapHandle& m) const;

private:
    struct Factorization {
        MapHandle composite;
        std::vector<MapHandle> parts; // innermost first
    };

    CohomologyValue lookup_inner(const Group& g, int depth, bool allow_serre);
    std::optional<BigInt> betti_leaf(const std::string& id, int i, std::string& leaf_key);
    int next_step_id() { return static_cast<int>(steps_.size()) + 1; }
    void record(Step& step);
    int generic_map_pass();
    int factorization_pass();

    std::vector<const FactStore*> stores_;
    std::set<FactKey> suppressed_;
    std::map<std::string, SpaceDescriptor> spaces_;
    std::vector<SES> sequences_;
    std::map<Group, std::pair<CohomologyValue, int>> values_; // value, step id
    std::map<MapHandle, std::map<MapProp, int>> props_;
    std::vector<Factorization> factorizations_;
    std::vector<Step> steps_;
    std::set<std::string> misses_;
};

/// Tries to derive H^p(O^q(t)) = 0 on `space_id` by descending the
/// canonical sequences toward exact leaves (homogeneous computation,
/// Kodaira-Nakano, Lefschetz, Serre). Registers whatever sequences it needs
/// in the environment. Purely sound: returns false rather than guess.
bool derive_vanishing(ChaseEnv& env, const std::string& space_id, int p, int q, int t,
                      int depth = 64);

// ---------------------------------------------------------------------------
// scripts

/// A chase script: data, not code. Line grammar:
///   space <id> ...                          (fact-file space forms)
///   goal H <p> <expr> = 0 | = <dim>
///   use ses <rule> <expr> <expr> <expr>
///   use cupping <Y> <X> p <p> q <q>
///   use fact vanish <id> p <p> q <q> t <t>
///   use fact dim <id> p <p> q <q> t <t> = <v>
///   use restriction <Y> <X> q <q> c <c>
///   conclude H <p> <expr> = 0 | = <dim>
struct Script {
    struct Claim {
        Group group;
        CohomologyValue want;
    };
    struct Use {
        enum class Kind { Ses, Cupping, Fact, Restriction } kind;
        std::vector<std::string> tokens;
        int line = 0;
    };

    std::string name;
    std::vector<SpaceDescriptor> spaces;
    std::optional<Claim> goal;
    std::vector<Use> uses;
    std::vector<Claim> conclusions;

    static Script parse(const std::string& text, const std::string& source);
    static Script parse_file(const std::string& path);
};

/// Replay result: Done with a trace ending in the goal, or Stuck with the
/// exact facts that are missing. Stuck is a first-class outcome, not an
/// error.
struct ReplayResult {
    bool ok = false;
    ProofTrace trace;
    std::vector<std::string> missing;
};

ReplayResult replay(const Script& script, const std::vector<const FactStore*>& stores,
                    const std::set<FactKey>& suppressed = {});

/// External facts a successful trace actually consumed (file cells, betti
/// facts, homogeneous-space computations), as suppressible keys.
std::vector<FactKey> trace_support(const ProofTrace& trace);

/// Re-runs the script once per support fact with that fact suppressed; the
/// load-bearing set is exactly those whose removal makes the replay stuck.
struct MutationReport {
    std::vector<FactKey> load_bearing;
    std::vector<FactKey> removable;
};
MutationReport mutation_analysis(const Script& script,
                                 const std::vector<const FactStore*>& stores);

} // namespace fano::chase
