#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pfx {

/// One witnessed axiom failure: the two sides of the violated inequality
/// and the points that produced them, rendered as strings so reports stay
/// uniform across scalar and function-space domains.
struct axiom_violation {
    std::string axiom;                // "P1".."P4", "F1".."F3", "LIP"
    std::vector<std::string> points;  // witnesses, printf %.17g rendering
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  // lhs - rhs, the violation magnitude
};

/// Result of a sampling-based axiom audit. passed <=> violations empty.
struct axiom_report {
    bool passed = true;
    std::vector<axiom_violation> violations;
    std::size_t samples_checked = 0;

    void add(axiom_violation v) {
        passed = false;
        violations.push_back(std::move(v));
    }
};

}  // namespace pfx
