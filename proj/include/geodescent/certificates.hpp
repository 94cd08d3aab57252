#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodescent/objectives.hpp"
#include "geodescent/solvers.hpp"

namespace geodescent {

enum class TheoremId {
    GradNormSqrt,      // min gradient norm after N steps of the smooth method
    GradValueRate,     // O(1/N) value gap under convexity + curvature >= 0
    GradNormLinear,    // O(1/N) min gradient norm under the same hypotheses
    SubgradExogenous,  // min value gap for exogenous stepsizes
    SubgradPolyak,     // summed squared gaps + min gap for the Polyak rule
    ProxValueRate,     // O(1/N) value gap of the proximal point method
};

const char* theorem_name(TheoremId id) noexcept;

/// One machine-checkable complexity bound, evaluated over a finished run.
/// rhs is assembled only from declared constants, the initial point, the
/// optimum, and the stepsize schedule — never from the trace interior.
struct BoundCertificate {
    TheoremId theorem_id = TheoremId::GradNormSqrt;
    int N = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    double tol = 0.0;
    bool holds = false;
    /// Named scalars the bound was built from (constants, d(p0,p*),
    /// initial gap, schedule sums, secondary checks, slack terms).
    std::map<std::string, double> inputs_echo;
};

// Each certifier throws std::invalid_argument when the trace does not meet
// the theorem's hypotheses (wrong method or rule, curvature class, missing
// optimum or constant, N too small).  tol_scale sets the relative check
// tolerance: tol = tol_scale*(1+|rhs|) plus model-specific widening for
// oracle residuals and inexact inner solves.

BoundCertificate certify_grad_norm_sqrt(const Trace& trace, const Objective& obj,
                                        double tol_scale = 1e-9);
BoundCertificate certify_grad_value_rate(const Trace& trace, const Objective& obj,
                                         double tol_scale = 1e-9);
BoundCertificate certify_grad_norm_linear(const Trace& trace, const Objective& obj,
                                          double tol_scale = 1e-9);
BoundCertificate certify_subgrad_exogenous(const Trace& trace, const Objective& obj,
                                           double tol_scale = 1e-9);
BoundCertificate certify_subgrad_polyak(const Trace& trace, const Objective& obj,
                                        double tol_scale = 1e-9);
BoundCertificate certify_prox_value_rate(const Trace& trace, const Objective& obj,
                                         double tol_scale = 1e-9);

enum class CertStatus { Pass, Fail, NotApplicable };

const char* cert_status_name(CertStatus s) noexcept;

struct CertificateOutcome {
    TheoremId theorem = TheoremId::GradNormSqrt;
    CertStatus status = CertStatus::NotApplicable;
    std::optional<BoundCertificate> certificate;
    /// Why the theorem does not apply, when status is NotApplicable.
    std::string reason;
};

/// Evaluates every bound belonging to the trace's method family.  Hypothesis
/// violations surface as NotApplicable outcomes, never as exceptions.
std::vector<CertificateOutcome> evaluate_certificates(const Trace& trace,
                                                      const Objective& obj,
                                                      double tol_scale = 1e-9);

/// A copy of the trace truncated to records 0..n, for prefix monotonicity
/// audits.  n must address an existing record.
Trace trace_prefix(const Trace& trace, int n);

} // namespace geodescent
