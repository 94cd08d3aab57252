#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodescent/audits.hpp"
#include "geodescent/certificates.hpp"
#include "geodescent/objectives.hpp"
#include "geodescent/solvers.hpp"

namespace geodescent {

/// Raised for any configuration problem; the message names the offending
/// field ("objective.anchors[2]: expected 4 coordinates, got 3").
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputSpec {
    std::string trace_path;        // empty: skip the trace file
    std::string certificate_path;  // empty: skip the certificate file
    bool audit = false;
    int audit_samples = 1000;
    std::optional<long> audit_seed;  // defaults to the solver seed
};

/// One fully resolved run: the objective carries its manifold, anchors,
/// declared constants and any injected optimum.
struct Experiment {
    std::string id;
    Objective objective;
    SolverConfig solver;
    Point p0;
    OutputSpec outputs;
    std::optional<double> tol_scale;
    std::string config_echo;  // compact re-serialization of the source entry
};

/// A config file holds either a single experiment object or
/// {"schema_version": 1, "experiments": [...]}.  Throws ConfigError with a
/// field-qualified message on any problem.
std::vector<Experiment> load_experiments(const std::string& path);
std::vector<Experiment> parse_experiments(const std::string& text,
                                          const std::string& origin);

/// %.17g — the one numeric format used by every file this module writes.
std::string format_sig17(double x);

// Columns, in fixed order: k, f_value, step_t, dir_norm, dist_to_opt, f_gap,
// then the flattened point coordinates.  Absent optionals print as empty
// cells, so identical runs produce byte-identical files.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv_file(const std::string& path, const Trace& trace);

struct RunArtifacts {
    Trace trace;
    std::vector<CertificateOutcome> certificates;
    std::vector<AuditReport> audits;
    double wall_time_ms = 0.0;
};

/// Certificate report: every BoundCertificate field verbatim, plus run
/// metadata, audit reports, and the config echo.
std::string certificate_report_json(const Experiment& e, const RunArtifacts& a);
void write_certificate_file(const std::string& path, const Experiment& e,
                            const RunArtifacts& a);

struct SummaryRow {
    std::string experiment_id;
    std::string theorem_id;
    int N = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool holds = false;
    double wall_time_ms = 0.0;
};

/// Pulls summary rows out of one certificate report.  Throws ConfigError when
/// the file cannot be read or parsed; entries without an evaluated bound
/// (not-applicable theorems) contribute no row.
std::vector<SummaryRow> read_certificate_rows(const std::string& path);

/// Sorts by (theorem_id, experiment_id) and always writes the header row.
void write_summary_csv(std::ostream& os, std::vector<SummaryRow> rows);

} // namespace geodescent
