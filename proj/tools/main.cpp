#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geodescent/audits.hpp"
#include "geodescent/certificates.hpp"
#include "geodescent/io.hpp"
#include "geodescent/solvers.hpp"

namespace {

using namespace geodescent;

std::vector<TheoremId> family_of(Method m) {
    switch (m) {
        case Method::Gradient:
            return {TheoremId::GradNormSqrt, TheoremId::GradValueRate,
                    TheoremId::GradNormLinear};
        case Method::Subgradient:
            return {TheoremId::SubgradExogenous, TheoremId::SubgradPolyak};
        case Method::ProximalPoint:
            return {TheoremId::ProxValueRate};
    }
    return {};
}

void print_outcome(const std::string& id, const CertificateOutcome& c) {
    std::cout << "[" << id << "] " << theorem_name(c.theorem) << ": "
              << cert_status_name(c.status);
    if (c.certificate) {
        const BoundCertificate& b = *c.certificate;
        std::cout << " N=" << b.N << " lhs=" << format_sig17(b.lhs)
                  << " rhs=" << format_sig17(b.rhs)
                  << " margin=" << format_sig17(b.margin);
    } else if (!c.reason.empty()) {
        std::cout << " (" << c.reason << ")";
    }
    std::cout << "\n";
}

int run_command(const std::string& config_path, std::optional<double> tol_flag) {
    std::vector<Experiment> experiments;
    try {
        experiments = load_experiments(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    bool failed = false;
    for (Experiment& e : experiments) {
        const double tol_scale =
            e.tol_scale ? *e.tol_scale : tol_flag.value_or(1e-9);
        RunArtifacts a;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            a.trace = run_solver(e.objective, e.p0, e.solver);
        } catch (const std::invalid_argument& err) {
            std::cerr << "config error: [" << e.id << "] " << err.what() << "\n";
            return 1;
        }
        a.wall_time_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();

        if (a.trace.reason == TerminationReason::DomainExit ||
            a.trace.reason == TerminationReason::NumericalFailure) {
            const char* why = a.trace.reason == TerminationReason::DomainExit
                                  ? "run exited the domain ball before finishing"
                                  : "run aborted on a numerical failure";
            for (TheoremId t : family_of(a.trace.config.method))
                a.certificates.push_back(
                    {t, CertStatus::NotApplicable, std::nullopt, why});
        } else {
            a.certificates = evaluate_certificates(a.trace, e.objective, tol_scale);
        }
        if (e.outputs.audit) {
            const long seed = e.outputs.audit_seed.value_or(e.solver.seed);
            a.audits = run_audit_suites(e.objective.manifold(), e.objective, seed,
                                        e.outputs.audit_samples);
        }

        try {
            if (!e.outputs.trace_path.empty())
                write_trace_csv_file(e.outputs.trace_path, a.trace);
            if (!e.outputs.certificate_path.empty())
                write_certificate_file(e.outputs.certificate_path, e, a);
        } catch (const ConfigError& err) {
            std::cerr << "io error: [" << e.id << "] " << err.what() << "\n";
            return 1;
        }

        const ManifoldDescriptor& d = a.trace.manifold;
        std::cout << "[" << e.id << "] objective=" << a.trace.objective_id
                  << " manifold=" << kind_name(d.kind) << "(" << d.n << ")"
                  << " method=" << method_name(a.trace.config.method)
                  << " terminated=" << termination_name(a.trace.reason)
                  << " records=" << a.trace.records.size()
                  << " wall_ms=" << format_sig17(a.wall_time_ms) << "\n";
        for (const CertificateOutcome& c : a.certificates) {
            print_outcome(e.id, c);
            if (c.status == CertStatus::Fail) failed = true;
        }
        for (const AuditReport& r : a.audits) {
            std::cout << "[" << e.id << "] audit " << r.suite_id << ": "
                      << r.violations << "/" << r.samples << " violations";
            if (r.violations > 0)
                std::cout << " worst_margin=" << format_sig17(r.worst_margin);
            std::cout << "\n";
            if (r.violations > 0) failed = true;
        }
        if (a.trace.reason == TerminationReason::NumericalFailure) failed = true;
    }
    return failed ? 2 : 0;
}

int audit_command(const std::string& config_path, long seed, int samples) {
    if (samples <= 0) {
        std::cerr << "audit: samples must be positive\n";
        return 1;
    }
    std::vector<Experiment> experiments;
    try {
        experiments = load_experiments(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    long total = 0;
    std::cout << "{\n  \"schema_version\": 1,\n  \"seed\": " << seed
              << ",\n  \"samples\": " << samples << ",\n  \"experiments\": [";
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        Experiment& e = experiments[i];
        const std::vector<AuditReport> reports =
            run_audit_suites(e.objective.manifold(), e.objective, seed, samples);
        std::cout << (i ? ",\n    " : "\n    ");
        std::cout << "{\"experiment_id\": \"" << e.id << "\", \"objective_id\": \""
                  << e.objective.id() << "\", \"suites\": [";
        for (std::size_t k = 0; k < reports.size(); ++k) {
            const AuditReport& r = reports[k];
            total += r.violations;
            std::cout << (k ? ",\n      " : "\n      ");
            std::cout << "{\"suite_id\": \"" << r.suite_id
                      << "\", \"samples\": " << r.samples
                      << ", \"violations\": " << r.violations
                      << ", \"worst_margin\": " << format_sig17(r.worst_margin)
                      << ", \"seed\": " << r.seed << "}";
        }
        std::cout << (reports.empty() ? "]}" : "\n    ]}");
    }
    std::cout << (experiments.empty() ? "]" : "\n  ]")
              << ",\n  \"violations_total\": " << total << "\n}\n";
    return total == 0 ? 0 : 2;
}

int summarize_command(const std::vector<std::string>& paths,
                      const std::string& out_path) {
    std::vector<SummaryRow> rows;
    for (const std::string& p : paths) {
        try {
            std::vector<SummaryRow> r = read_certificate_rows(p);
            rows.insert(rows.end(), r.begin(), r.end());
        } catch (const ConfigError& e) {
            std::cerr << "summarize: " << e.what() << "\n";
            return 1;
        }
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "summarize: cannot open output file " << out_path << "\n";
        return 1;
    }
    write_summary_csv(os, rows);
    os.flush();
    if (!os) {
        std::cerr << "summarize: failed while writing " << out_path << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riemannian first-order methods with complexity certificates"};
    app.require_subcommand(1);

    double tol_value = 1e-9;
    CLI::Option* tol_opt =
        app.add_option("--tol", tol_value,
                       "Certificate tolerance scale (default 1e-9); "
                       "per-experiment tol_overrides win");

    std::string run_config;
    CLI::App* run = app.add_subcommand(
        "run", "Execute the experiments in a config file and write artifacts");
    run->add_option("config", run_config, "Experiment config (JSON)")->required();

    std::string audit_config;
    long audit_seed = 1;
    int audit_samples = 1000;
    CLI::App* audit = app.add_subcommand(
        "audit", "Run property audit suites for the configured instances");
    audit->add_option("config", audit_config, "Experiment config (JSON)")->required();
    audit->add_option("--seed", audit_seed, "Sampling seed (default 1)");
    audit->add_option("--samples", audit_samples, "Samples per suite (default 1000)");

    std::vector<std::string> summary_inputs;
    std::string summary_out;
    CLI::App* summarize = app.add_subcommand(
        "summarize", "Collect certificate reports into one CSV table");
    summarize->add_option("paths", summary_inputs, "Certificate JSON files");
    summarize->add_option("-o,--output", summary_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::optional<double> tol_flag;
    if (tol_opt->count() > 0) {
        if (!(tol_value > 0.0)) {
            std::cerr << "config error: --tol must be positive\n";
            return 1;
        }
        tol_flag = tol_value;
    }

    if (run->parsed()) return run_command(run_config, tol_flag);
    if (audit->parsed()) return audit_command(audit_config, audit_seed, audit_samples);
    if (summarize->parsed()) return summarize_command(summary_inputs, summary_out);
    return 1;
}
