#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geodescent/geometry.hpp"
#include "geodescent/objectives.hpp"

namespace geodescent {

enum class Method { Gradient, Subgradient, ProximalPoint };
enum class TerminationReason { MaxIters, ToleranceMet, DomainExit, NumericalFailure };

const char* method_name(Method m) noexcept;
const char* termination_name(TerminationReason r) noexcept;

// --- stepsize rules ---------------------------------------------------------

/// t_k = 1/L with L taken from the objective.
struct ConstantInvL {};

/// Explicit per-iteration steps; must cover max_iters entries.
struct FixedSequence {
    std::vector<double> steps;
};

enum class ScheduleKind { Constant, InvSqrt, Harmonic };

/// t_k = alpha_k / ‖s_k‖ with alpha_k = alpha0 / {1, sqrt(k+1), k+1}.
struct Exogenous {
    ScheduleKind schedule = ScheduleKind::Constant;
    double alpha0 = 0.0;
};

/// t_k = (f(p_k) − f*) / ‖s_k‖².  f_star falls back to the objective's
/// known optimum when absent.
struct Polyak {
    std::optional<double> f_star;
};

/// Proximal regularization weight, constant across iterations.
struct ConstantLambda {
    double lambda = 0.0;
};

using StepRule =
    std::variant<ConstantInvL, FixedSequence, Exogenous, Polyak, ConstantLambda>;

/// Stopping contract for the inner gradient loop used when an objective has
/// no closed-form proximal map.
struct InnerSolver {
    double eps = 1e-10;
    int max_inner = 10000;
};

struct SolverConfig {
    Method method = Method::Gradient;
    int max_iters = 0;
    StepRule rule;
    std::optional<InnerSolver> inner;
    /// Permits the subgradient method on negatively curved manifolds.  Such
    /// runs carry no complexity certificates.
    bool relaxed_curvature = false;
    long seed = 0;
};

struct IterateRecord {
    int k = 0;
    Point point;
    double f_value = 0.0;
    /// Step taken from this iterate; 0 on the final record.
    double step_t = 0.0;
    /// ‖grad f‖ or ‖s_k‖ at this iterate; for proximal runs, the inner
    /// solver's terminal residual that produced it (0 when closed-form).
    double dir_norm = 0.0;
    std::optional<double> dist_to_opt;
    std::optional<double> f_gap;
};

struct Trace {
    SolverConfig config;
    std::string objective_id;
    ManifoldDescriptor manifold;
    std::vector<IterateRecord> records;
    TerminationReason reason = TerminationReason::MaxIters;
};

// --- the methods ------------------------------------------------------------
//
// Each produces records 0..K where record 0 is the initial point and K ≤
// max_iters.  An iterate that leaves the objective's domain or produces a
// non-finite value is discarded and the trace ends with DomainExit /
// NumericalFailure; downstream consumers work on the surviving prefix.

Trace gradient_method(const Objective& obj, const Point& p0,
                      const SolverConfig& config);

Trace subgradient_method(const Objective& obj, const Point& p0,
                         const SolverConfig& config);

Trace proximal_point_method(const Objective& obj, const Point& p0,
                            const SolverConfig& config);

/// Dispatch on config.method.
Trace run_solver(const Objective& obj, const Point& p0,
                 const SolverConfig& config);

} // namespace geodescent
