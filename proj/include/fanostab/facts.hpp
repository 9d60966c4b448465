#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fanostab/cohomology.hpp"

namespace fano {

/// A cohomology or Betti fact with a mandatory provenance string (file:line,
/// rule name, or citation) so every proof trace stays auditable.
struct CellFact {
    CohomologyValue value;
    std::string provenance;
};

struct BettiFact {
    BigInt value;
    std::string provenance;
};

/// Shared store for cohomology cells and Betti numbers; chase rules consume
/// both uniformly. Duplicate consistent facts are deduplicated, contradictory
/// ones rejected.
class FactStore {
public:
    using CellKey = std::tuple<std::string, int, int, int>; // id, p, q, t
    using BettiKey = std::pair<std::string, int>;           // id, i

    void add_space(const SpaceDescriptor& s);
    void add_cell(const std::string& id, int p, int q, int t,
                  const CohomologyValue& v, const std::string& provenance);
    void add_betti(const std::string& id, int i, const BigInt& b,
                   const std::string& provenance);

    [[nodiscard]] const SpaceDescriptor* space(const std::string& id) const;
    [[nodiscard]] const CellFact* cell(const std::string& id, int p, int q, int t) const;
    [[nodiscard]] const BettiFact* betti(const std::string& id, int i) const;

    [[nodiscard]] const std::map<std::string, SpaceDescriptor>& spaces() const {
        return spaces_;
    }
    [[nodiscard]] const std::map<CellKey, CellFact>& cells() const { return cells_; }
    [[nodiscard]] const std::map<BettiKey, BettiFact>& bettis() const { return betti_; }

    void merge(const FactStore& other);

private:
    std::map<std::string, SpaceDescriptor> spaces_;
    std::map<CellKey, CellFact> cells_;
    std::map<BettiKey, BettiFact> betti_;
};

/// Parses the line-oriented fact format:
///   space <id> dim <n> index <r>
///   space <id> grassmannian <k> <n>
///   space <id> projective <n>
///   space <id> dim <n> index <r> section-of <parent> degree <d>
///   space <id> dim <n> index <r> cover-of <parent> k <k> degree <d>
///   betti <id> b<i> <value>
///   vanish <id> p <p> q <q> t <t>
///   dim <id> p <p> q <q> t <t> = <value>
///   # comment
/// Throws ParseError with the offending line number; contradictory facts are
/// rejected via Contradiction.
FactStore ingest_facts(const std::string& text, const std::string& source_name);

/// Reads and ingests a fact file from disk.
FactStore ingest_facts_file(const std::string& path);

/// Parses one `space ...` line (shared with the chase script reader).
/// `tokens` excludes the leading "space" keyword.
SpaceDescriptor parse_space_tokens(const std::vector<std::string>& tokens,
                                   const std::map<std::string, SpaceDescriptor>& known,
                                   const std::string& source, int line);

/// Renders a descriptor back into its `space ...` line (no trailing newline).
std::string space_line(const SpaceDescriptor& s);

} // namespace fano
