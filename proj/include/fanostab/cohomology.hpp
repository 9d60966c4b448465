#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fanostab/bigint.hpp"
#include "fanostab/errors.hpp"

namespace fano {

/// One knowledge cell: definitely zero, a known dimension, or not (yet)
/// determined. Dim(0) is canonically identified with Zero.
class CohomologyValue {
public:
    enum class Kind { Zero, Dim, Unknown };

    CohomologyValue() = default;

    static CohomologyValue zero() { return CohomologyValue(Kind::Zero, 0); }
    static CohomologyValue unknown() { return CohomologyValue(Kind::Unknown, 0); }
    static CohomologyValue of_dim(BigInt d) {
        if (d < 0) throw std::invalid_argument("CohomologyValue: negative dimension");
        return d == 0 ? zero() : CohomologyValue(Kind::Dim, std::move(d));
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool known() const { return kind_ != Kind::Unknown; }
    [[nodiscard]] bool is_zero() const { return kind_ == Kind::Zero; }
    [[nodiscard]] const BigInt& dim() const { return dim_; }

    [[nodiscard]] std::string to_string() const {
        switch (kind_) {
            case Kind::Zero: return "0";
            case Kind::Dim: return dim_.str();
            default: return "?";
        }
    }

    bool operator==(const CohomologyValue& o) const {
        return kind_ == o.kind_ && dim_ == o.dim_;
    }

private:
    CohomologyValue(Kind k, BigInt d) : kind_(k), dim_(std::move(d)) {}
    Kind kind_ = Kind::Unknown;
    BigInt dim_ = 0;
};

struct Window {
    int lo = 0;
    int hi = 0;
    [[nodiscard]] bool contains(int t) const { return lo <= t && t <= hi; }
    [[nodiscard]] bool contains(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
    bool operator==(const Window&) const = default;
};

enum class SpaceKind { Projective, Grassmannian, Section, CyclicCover, Abstract };

/// Identity and numerical invariants of one space in a propagation chain.
struct SpaceDescriptor {
    std::string id;
    SpaceKind kind = SpaceKind::Abstract;
    int dim = 0;
    int index = 0;     // -K = O(index); 0 if not Fano
    BigInt degree = 1; // self-intersection H^dim of the polarization

    // Grassmannian parameters (Projective stored as k = 0)
    int k = -1, n = -1;
    // Section / CyclicCover parameters
    std::string parent;
    int d = 0;         // divisor degree (sections) or L = O(d) (covers)
    int sheets = 0;    // cyclic covers

    [[nodiscard]] bool homogeneous() const {
        return kind == SpaceKind::Projective || kind == SpaceKind::Grassmannian;
    }
};

SpaceDescriptor projective_space(const std::string& id, int n);
SpaceDescriptor grassmannian_space(const std::string& id, int k, int n);
/// Smooth divisor in |O(d)| on the parent; dim drops by 1, index by d,
/// degree multiplies by d.
SpaceDescriptor section_space(const SpaceDescriptor& parent, const std::string& id, int d);
/// k-cyclic cover branched in |O(kd)|, pulled-back polarization; same dim,
/// index shifts by (k-1)d, degree multiplies by k.
SpaceDescriptor cover_space(const SpaceDescriptor& parent, const std::string& id,
                            int sheets, int d);

struct Cell {
    int p = 0, q = 0, t = 0;
    auto operator<=>(const Cell&) const = default;
    [[nodiscard]] std::string to_string() const {
        return "(p=" + std::to_string(p) + ",q=" + std::to_string(q) +
               ",t=" + std::to_string(t) + ")";
    }
};

/// Partial cohomology knowledge for one space over a bounded twist window.
/// Absent cells are Unknown; rule-backed extension outside the window is the
/// business of callers (Kodaira-Nakano, Serre), never of the table itself.
class CohomologyTable {
public:
    CohomologyTable() = default;
    CohomologyTable(SpaceDescriptor space, Window window)
        : space_(std::move(space)), window_(window) {}

    [[nodiscard]] const SpaceDescriptor& space() const { return space_; }
    [[nodiscard]] const Window& window() const { return window_; }
    [[nodiscard]] const std::map<Cell, CohomologyValue>& cells() const { return cells_; }

    [[nodiscard]] CohomologyValue get(int p, int q, int t) const {
        auto it = cells_.find(Cell{p, q, t});
        return it == cells_.end() ? CohomologyValue::unknown() : it->second;
    }

    /// Sets a cell, rejecting contradictions with an already-known value.
    void set(int p, int q, int t, const CohomologyValue& v);

private:
    SpaceDescriptor space_;
    Window window_;
    std::map<Cell, CohomologyValue> cells_;
};

/// The two vanishing zones of Kodaira-Nakano: Zero when (t > 0 and p+q > dim)
/// or (t < 0 and p+q < dim), Unknown otherwise.
CohomologyValue kodaira_nakano_zone(int dim, int p, int q, int t);

/// Fills every Unknown cell whose Serre dual h^{dim-p}(O^{dim-q}(-t)) is
/// known, and checks every known dual pair for agreement. Throws
/// Contradiction naming both cells on disagreement.
CohomologyTable serre_close(const CohomologyTable& table);

/// Complete table for a projective space or Grassmannian over the window,
/// every cell exact.
CohomologyTable weyl_table(const SpaceDescriptor& space, Window window);

/// Euler characteristic chi(O^q_X(t)) of the complete intersection X of the
/// given multidegree inside the ambient table's space, by the double
/// recursion through the restriction and conormal-wedge sequences.
/// Throws FootprintError when the recursion needs a cell outside the
/// ambient window.
BigInt euler_recursion(const CohomologyTable& ambient,
                       const std::vector<int>& degrees, int q, int t);

} // namespace fano
