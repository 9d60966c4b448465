#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fanostab/cohomology.hpp"

namespace fano::special {

/// Closed-form vanishing for smooth (weighted) complete intersections.
/// `zero` when one of the four vanishing zones applies; on the untwisted
/// diagonal away from the middle dimension the group is known to be C,
/// reported via `diagonal_one`.
struct FlennerValue {
    bool zero = false;
    bool diagonal_one = false;
};

FlennerValue flenner_predicate(int n, int p, int q, int t);

enum class SpecialStatus { Special, NotSpecial, Insufficient };

struct Violation {
    char condition; // 'a', 'b' or 'c'
    Cell cell;
    CohomologyValue found;
};

struct SpecialCheck {
    SpecialStatus status = SpecialStatus::Insufficient;
    std::vector<Violation> violations;
    std::vector<Cell> missing; // Unknown cells inside a checked range
    [[nodiscard]] bool ok() const { return status == SpecialStatus::Special; }
};

/// Checks the three-condition vanishing pattern against a table:
///   (a) H^p(O^q(t)) = 0 for 0 < p < dim, p+q != dim, t != 0,
///   (b) H^p(O^q)    = 0 for 0 < p < dim, p+q != dim, p != q,
///   (c) H^p(O^p)    = C for 0 <= p <= dim, 2p != dim.
/// Unknown cells inside a checked range yield Insufficient, which is
/// distinct from a definite NotSpecial.
SpecialCheck is_special(const CohomologyTable& table, int dim);

/// Why one certificate cell holds.
struct Evidence {
    char condition = 'a';
    std::string rule;
    std::vector<std::string> premises;
};

/// A certificate that a pair (X, O(1)) has special cohomology over a twist
/// window: per-cell values with rule-backed evidence, plus the parent
/// certificate it was propagated from. Evidence makes "why is this cell
/// zero" answerable and keeps downstream proof traces auditable.
class Certificate {
public:
    Certificate() = default;
    Certificate(SpaceDescriptor space, Window window, std::string basis)
        : space_(std::move(space)), window_(window), basis_(std::move(basis)) {}

    [[nodiscard]] const SpaceDescriptor& space() const { return space_; }
    [[nodiscard]] const Window& window() const { return window_; }
    [[nodiscard]] const std::string& basis() const { return basis_; }
    [[nodiscard]] const std::shared_ptr<const Certificate>& parent() const {
        return parent_;
    }
    [[nodiscard]] const std::map<Cell, std::pair<CohomologyValue, Evidence>>& cells()
        const {
        return cells_;
    }

    void set_parent(std::shared_ptr<const Certificate> p) { parent_ = std::move(p); }

    void add(const Cell& c, const CohomologyValue& v, Evidence e);

    /// Value this certificate warrants for a cell, Unknown when uncovered.
    [[nodiscard]] CohomologyValue value(int p, int q, int t) const;
    [[nodiscard]] const Evidence* evidence(int p, int q, int t) const;

    /// The underlying knowledge table (covered cells only).
    [[nodiscard]] CohomologyTable to_table() const;

    /// Fact-file lines plus an evidence section; parse() round-trips.
    [[nodiscard]] std::string serialize() const;
    static Certificate parse(const std::string& text, const std::string& source);

private:
    SpaceDescriptor space_;
    Window window_;
    std::string basis_; // "cell-checked", "rule-backed" or "assumed"
    std::shared_ptr<const Certificate> parent_;
    std::map<Cell, std::pair<CohomologyValue, Evidence>> cells_;
};

/// Certificate for a projective space, every covered cell computed exactly
/// and checked; throws if the check fails (e.g. for a Grassmannian table).
Certificate certify_homogeneous(const SpaceDescriptor& space, Window window);

/// Axiom-backed certificate for an abstract space; used when specialness is
/// a hypothesis rather than a derived fact. The justification lands in every
/// evidence entry.
Certificate assume_special(const SpaceDescriptor& space, Window window,
                           const std::string& justification);

/// Certificate for a smooth divisor X in |O(d)| on a certified Y, by the
/// twist induction through the restriction and conormal-wedge sequences;
/// Kodaira-Nakano and Serre duality settle the zones the induction does not
/// touch, the Lefschetz restriction isomorphism settles t = 0. dim X must be
/// at least 3. Throws FootprintError when cert_Y's window is too small.
Certificate propagate_section(const Certificate& cert_Y, int d, Window window,
                              const std::string& id = "");

/// Certificate for the k-cyclic cover of a certified Y branched in |O(kd)|,
/// polarized by the pullback. k = 1 degenerates to Y itself.
Certificate propagate_cyclic(const Certificate& cert_Y, int k, int d, Window window,
                             const std::string& id = "");

} // namespace fano::special
