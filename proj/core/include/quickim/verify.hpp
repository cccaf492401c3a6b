#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "quickim/graph.hpp"
#include "quickim/oracle.hpp"

namespace quickim {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus status);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double max_error = 0.0;
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::string detail;
};

struct VerificationReport {
    std::size_t L = 0;
    std::vector<CheckResult> checks;
    /// Reported but not part of pass(): the literal vertex-removal score-gap bound, which does
    /// not hold in general (see the README).
    std::vector<CheckResult> informational;
    oracle::ExactInfluenceReport influence;

    bool pass() const;
};

/// Runs every exact check on a graph within the enumeration guards. Throws CapacityError
/// when the graph has more edges than base-world enumeration allows.
VerificationReport verify_graph(const InfluenceGraph& graph, std::size_t L, const oracle::Limits& limits = {});

}  // namespace quickim
