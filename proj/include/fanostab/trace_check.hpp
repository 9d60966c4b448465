#pragma once

#include <string>
#include <vector>

#include "fanostab/chase.hpp"

namespace fano::trace_check {

struct CheckResult {
    bool ok = true;
    std::vector<std::string> errors;
};

/// Independent validator for proof traces: re-derives every step's claim
/// from its premises with logic written separately from the engine. Every
/// premise must be an earlier step, a store fact, or an exactly recomputable
/// value (homogeneous-space cohomology, Kodaira-Nakano zones, index ranges).
CheckResult check_trace(const chase::ProofTrace& trace,
                        const std::vector<const FactStore*>& stores);

} // namespace fano::trace_check
