#pragma once

#include <string>
#include <vector>

#include "geodescent/geometry.hpp"
#include "geodescent/objectives.hpp"

namespace geodescent {

/// Outcome of one sampled property suite.  margin is (allowed − observed)
/// per check; worst_margin is its minimum over the suite, negative exactly
/// when violations > 0.
struct AuditReport {
    std::string suite_id;
    int samples = 0;
    int violations = 0;
    double worst_margin = 0.0;
    long seed = 0;
};

/// Runs every property suite applicable to the pair: geometry identities on
/// the manifold, inequality checks on the objective, and per-step invariants
/// of short internally-driven solver runs.  Deterministic given (seed,
/// samples).  Violations are reported, never thrown.
std::vector<AuditReport> run_audit_suites(const Manifold& manifold,
                                          const Objective& objective,
                                          long seed, int samples);

} // namespace geodescent
