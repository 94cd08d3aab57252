#include "geodescent/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace geodescent {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where.empty() ? what : where + ": " + what);
}

std::string sub(const std::string& base, const char* leaf) {
    return base.empty() ? std::string(leaf) : base + "." + leaf;
}

const json* find(const json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(sub(where, key), "missing required field");
    return *it;
}

double as_num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

long as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<long>();
}

std::string as_str(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    return j.get<bool>();
}

std::vector<double> as_coords(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a coordinate array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            fail(where + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

Manifold parse_manifold(const json& j, const std::string& where) {
    const std::string kind = as_str(need(j, "kind", where), sub(where, "kind"));
    const long dim = as_int(need(j, "dim", where), sub(where, "dim"));
    ManifoldKind k;
    if (kind == "euclidean") k = ManifoldKind::Euclidean;
    else if (kind == "sphere") k = ManifoldKind::Sphere;
    else if (kind == "hyperboloid") k = ManifoldKind::Hyperboloid;
    else if (kind == "spd") k = ManifoldKind::Spd;
    else fail(sub(where, "kind"), "unknown manifold kind '" + kind + "'");
    try {
        return Manifold::make(k, static_cast<int>(dim));
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

Point parse_point(const Manifold& m, const json& j, const std::string& where) {
    Point p{m.descriptor(), as_coords(j, where)};
    if (static_cast<int>(p.coords.size()) != m.descriptor().ambient_size())
        fail(where, "expected " + std::to_string(m.descriptor().ambient_size()) +
                        " coordinates, got " + std::to_string(p.coords.size()));
    try {
        m.validate_point(p);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return p;
}

Objective parse_objective(const Manifold& m, const json& j,
                          const std::string& where) {
    const std::string kind = as_str(need(j, "kind", where), sub(where, "kind"));
    std::optional<double> radius;
    if (const json* r = find(j, "domain_radius")) {
        radius = as_num(*r, sub(where, "domain_radius"));
        if (!(*radius > 0.0)) fail(sub(where, "domain_radius"), "must be positive");
    }

    std::optional<Objective> obj;
    try {
        if (kind == "squared_distance" || kind == "distance") {
            Point q = parse_point(m, need(j, "anchor", where), sub(where, "anchor"));
            if (find(j, "anchors"))
                fail(sub(where, "anchors"), "use 'anchor' for " + kind);
            if (kind == "distance") {
                if (radius)
                    fail(sub(where, "domain_radius"),
                         "not supported for objective kind 'distance'");
                obj = Objective::distance(m, std::move(q));
            } else {
                obj = Objective::squared_distance(
                    m, std::move(q),
                    radius.value_or(std::numeric_limits<double>::infinity()));
            }
        } else if (kind == "fermat_weber" || kind == "karcher") {
            const json& aj = need(j, "anchors", where);
            if (!aj.is_array() || aj.empty())
                fail(sub(where, "anchors"), "expected a non-empty array of points");
            AnchorSet set;
            for (std::size_t i = 0; i < aj.size(); ++i)
                set.anchors.push_back(parse_point(
                    m, aj[i], sub(where, "anchors") + "[" + std::to_string(i) + "]"));
            if (const json* wj = find(j, "weights")) {
                if (!wj->is_array() || wj->size() != aj.size())
                    fail(sub(where, "weights"),
                         "expected " + std::to_string(aj.size()) + " weights");
                for (std::size_t i = 0; i < wj->size(); ++i)
                    set.weights.push_back(as_num(
                        (*wj)[i], sub(where, "weights") + "[" + std::to_string(i) + "]"));
            } else {
                set.weights.assign(set.anchors.size(), 1.0);
            }
            std::optional<DomainBall> ball;
            if (radius) {
                Point center = set.anchors[0];
                if (const json* cj = find(j, "domain_center"))
                    center = parse_point(m, *cj, sub(where, "domain_center"));
                ball = DomainBall{std::move(center), *radius};
            } else if (find(j, "domain_center")) {
                fail(sub(where, "domain_center"),
                     "requires domain_radius to be set");
            }
            obj = kind == "fermat_weber"
                      ? Objective::fermat_weber(m, std::move(set), std::move(ball))
                      : Objective::karcher(m, std::move(set), std::move(ball));
        } else {
            fail(sub(where, "kind"), "unknown objective kind '" + kind + "'");
        }

        if (const json* oo = find(j, "oracle_optimum")) {
            const std::string ow = sub(where, "oracle_optimum");
            KnownOptimum opt;
            opt.point = parse_point(m, need(*oo, "point", ow), sub(ow, "point"));
            opt.value = as_num(need(*oo, "f_star", ow), sub(ow, "f_star"));
            if (const json* r = find(*oo, "residual")) {
                opt.residual = as_num(*r, sub(ow, "residual"));
                if (opt.residual < 0.0) fail(sub(ow, "residual"), "must be non-negative");
            }
            obj->set_known_optimum(std::move(opt));
        }
        if (const json* lo = find(j, "l_override"))
            obj->override_grad_lipschitz(as_num(*lo, sub(where, "l_override")));
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    return std::move(*obj);
}

ScheduleKind parse_schedule(const std::string& s, const std::string& where) {
    if (s == "constant") return ScheduleKind::Constant;
    if (s == "inv_sqrt") return ScheduleKind::InvSqrt;
    if (s == "harmonic") return ScheduleKind::Harmonic;
    fail(where, "unknown schedule '" + s + "'");
}

SolverConfig parse_solver(const json& j, const std::string& where) {
    SolverConfig c;
    const std::string method = as_str(need(j, "method", where), sub(where, "method"));
    if (method == "gradient") c.method = Method::Gradient;
    else if (method == "subgradient") c.method = Method::Subgradient;
    else if (method == "proximal_point") c.method = Method::ProximalPoint;
    else fail(sub(where, "method"), "unknown method '" + method + "'");

    c.max_iters = static_cast<int>(
        as_int(need(j, "max_iters", where), sub(where, "max_iters")));
    if (c.max_iters < 1) fail(sub(where, "max_iters"), "must be at least 1");

    const json& rj = need(j, "stepsize_rule", where);
    const std::string rw = sub(where, "stepsize_rule");
    const std::string type = as_str(need(rj, "type", rw), sub(rw, "type"));
    const bool grad = c.method == Method::Gradient;
    const bool subgrad = c.method == Method::Subgradient;
    const bool prox = c.method == Method::ProximalPoint;
    if (type == "constant_inv_l") {
        if (!grad) fail(sub(rw, "type"), "'constant_inv_l' requires method 'gradient'");
        c.rule = ConstantInvL{};
    } else if (type == "fixed_sequence") {
        if (!grad) fail(sub(rw, "type"), "'fixed_sequence' requires method 'gradient'");
        FixedSequence fs;
        fs.steps = as_coords(need(rj, "steps", rw), sub(rw, "steps"));
        c.rule = std::move(fs);
    } else if (type == "exogenous") {
        if (!subgrad) fail(sub(rw, "type"), "'exogenous' requires method 'subgradient'");
        Exogenous ex;
        ex.schedule = parse_schedule(
            as_str(need(rj, "schedule", rw), sub(rw, "schedule")), sub(rw, "schedule"));
        ex.alpha0 = as_num(need(rj, "alpha0", rw), sub(rw, "alpha0"));
        c.rule = ex;
    } else if (type == "polyak") {
        if (!subgrad) fail(sub(rw, "type"), "'polyak' requires method 'subgradient'");
        Polyak p;
        if (const json* fs = find(rj, "f_star")) p.f_star = as_num(*fs, sub(rw, "f_star"));
        c.rule = p;
    } else if (type == "constant_lambda") {
        if (!prox) fail(sub(rw, "type"), "'constant_lambda' requires method 'proximal_point'");
        ConstantLambda cl;
        cl.lambda = as_num(need(rj, "lambda", rw), sub(rw, "lambda"));
        c.rule = cl;
    } else {
        fail(sub(rw, "type"), "unknown stepsize rule '" + type + "'");
    }

    if (const json* ij = find(j, "inner")) {
        const std::string iw = sub(where, "inner");
        InnerSolver inner;
        if (const json* e = find(*ij, "eps")) {
            inner.eps = as_num(*e, sub(iw, "eps"));
            if (!(inner.eps > 0.0)) fail(sub(iw, "eps"), "must be positive");
        }
        if (const json* mi = find(*ij, "max_inner")) {
            inner.max_inner = static_cast<int>(as_int(*mi, sub(iw, "max_inner")));
            if (inner.max_inner < 1) fail(sub(iw, "max_inner"), "must be at least 1");
        }
        c.inner = inner;
    }
    if (const json* rc = find(j, "relaxed_curvature"))
        c.relaxed_curvature = as_bool(*rc, sub(where, "relaxed_curvature"));
    if (const json* sj = find(j, "seed"))
        c.seed = as_int(*sj, sub(where, "seed"));
    return c;
}

Point parse_p0(const Manifold& m, const json& j, const std::string& where) {
    if (j.is_array()) return parse_point(m, j, where);
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        unsigned long long seed = 0;
        char tail = 0;
        if (std::sscanf(s.c_str(), "random(%llu%c", &seed, &tail) == 2 && tail == ')') {
            Sampler sampler(static_cast<std::uint64_t>(seed));
            return m.random_point(sampler);
        }
        fail(where, "expected coordinates or \"random(<seed>)\", got '" + s + "'");
    }
    fail(where, "expected coordinates or \"random(<seed>)\"");
}

OutputSpec parse_outputs(const json* j, const std::string& where) {
    OutputSpec out;
    if (!j) return out;
    if (!j->is_object()) fail(where, "expected an object");
    if (const json* t = find(*j, "trace_path"))
        out.trace_path = as_str(*t, sub(where, "trace_path"));
    if (const json* c = find(*j, "certificate_path"))
        out.certificate_path = as_str(*c, sub(where, "certificate_path"));
    if (const json* a = find(*j, "audit"))
        out.audit = as_bool(*a, sub(where, "audit"));
    if (const json* s = find(*j, "audit_samples")) {
        out.audit_samples = static_cast<int>(as_int(*s, sub(where, "audit_samples")));
        if (out.audit_samples < 1) fail(sub(where, "audit_samples"), "must be at least 1");
    }
    if (const json* s = find(*j, "audit_seed"))
        out.audit_seed = as_int(*s, sub(where, "audit_seed"));
    return out;
}

Experiment parse_one(const json& j, const std::string& base, int index) {
    if (!j.is_object()) fail(base, "expected an experiment object");
    Manifold m = parse_manifold(need(j, "manifold", base), sub(base, "manifold"));
    Objective obj = parse_objective(m, need(j, "objective", base), sub(base, "objective"));
    SolverConfig solver = parse_solver(need(j, "solver", base), sub(base, "solver"));
    Point p0 = parse_p0(m, need(j, "p0", base), sub(base, "p0"));

    std::string id = "exp" + std::to_string(index);
    if (const json* ij = find(j, "id")) {
        id = as_str(*ij, sub(base, "id"));
        if (id.empty()) fail(sub(base, "id"), "must not be empty");
    }
    OutputSpec outputs = parse_outputs(find(j, "outputs"), sub(base, "outputs"));
    std::optional<double> tol_scale;
    if (const json* tj = find(j, "tol_overrides")) {
        const std::string tw = sub(base, "tol_overrides");
        if (!tj->is_object()) fail(tw, "expected an object");
        if (const json* ts = find(*tj, "tol_scale")) {
            tol_scale = as_num(*ts, sub(tw, "tol_scale"));
            if (!(*tol_scale > 0.0)) fail(sub(tw, "tol_scale"), "must be positive");
        }
    }
    return Experiment{std::move(id),      std::move(obj), std::move(solver),
                      std::move(p0),      std::move(outputs), tol_scale,
                      j.dump()};
}

// --- writers ----------------------------------------------------------------

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

std::string quoted(const std::string& s) { return "\"" + escape_json(s) + "\""; }

std::string jnum(double x) {
    if (!std::isfinite(x)) return "null";
    return format_sig17(x);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_sig17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<Experiment> parse_experiments(const std::string& text,
                                          const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be a JSON object");
    const long version =
        as_int(need(root, "schema_version", ""), "schema_version");
    if (version != 1)
        fail("schema_version", "unsupported value " + std::to_string(version));

    std::vector<Experiment> out;
    if (const json* list = find(root, "experiments")) {
        if (!list->is_array() || list->empty())
            fail("experiments", "expected a non-empty array");
        for (std::size_t i = 0; i < list->size(); ++i)
            out.push_back(parse_one(
                (*list)[i], "experiments[" + std::to_string(i) + "]",
                static_cast<int>(i)));
    } else {
        out.push_back(parse_one(root, "", 0));
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = i + 1; k < out.size(); ++k)
            if (out[i].id == out[k].id)
                fail("experiments[" + std::to_string(k) + "].id",
                     "duplicate experiment id '" + out[k].id + "'");
    return out;
}

std::vector<Experiment> load_experiments(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file: " + path);
    std::string text{std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>()};
    return parse_experiments(text, path);
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    const std::size_t dim =
        trace.records.empty() ? 0 : trace.records.front().point.coords.size();
    os << "k,f_value,step_t,dir_norm,dist_to_opt,f_gap";
    for (std::size_t i = 0; i < dim; ++i) os << ",x" << i;
    os << "\n";
    for (const IterateRecord& r : trace.records) {
        os << r.k << ',' << format_sig17(r.f_value) << ','
           << format_sig17(r.step_t) << ',' << format_sig17(r.dir_norm) << ',';
        if (r.dist_to_opt) os << format_sig17(*r.dist_to_opt);
        os << ',';
        if (r.f_gap) os << format_sig17(*r.f_gap);
        for (double c : r.point.coords) os << ',' << format_sig17(c);
        os << "\n";
    }
}

void write_trace_csv_file(const std::string& path, const Trace& trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open trace file for writing: " + path);
    write_trace_csv(os, trace);
    os.flush();
    if (!os) throw ConfigError("failed while writing trace file: " + path);
}

std::string certificate_report_json(const Experiment& e, const RunArtifacts& a) {
    std::ostringstream os;
    const ManifoldDescriptor& d = a.trace.manifold;
    os << "{\n";
    os << "  \"schema_version\": 1,\n";
    os << "  \"experiment_id\": " << quoted(e.id) << ",\n";
    os << "  \"objective_id\": " << quoted(a.trace.objective_id) << ",\n";
    os << "  \"manifold\": {\"kind\": " << quoted(std::string(kind_name(d.kind)))
       << ", \"dim\": " << d.n << "},\n";
    os << "  \"method\": " << quoted(method_name(a.trace.config.method)) << ",\n";
    os << "  \"max_iters\": " << a.trace.config.max_iters << ",\n";
    os << "  \"seed\": " << a.trace.config.seed << ",\n";
    os << "  \"terminated\": " << quoted(termination_name(a.trace.reason)) << ",\n";
    os << "  \"records\": " << a.trace.records.size() << ",\n";
    os << "  \"wall_time_ms\": " << jnum(a.wall_time_ms) << ",\n";
    os << "  \"certificates\": [";
    for (std::size_t i = 0; i < a.certificates.size(); ++i) {
        const CertificateOutcome& c = a.certificates[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"theorem_id\": " << quoted(theorem_name(c.theorem))
           << ", \"status\": " << quoted(cert_status_name(c.status));
        if (c.certificate) {
            const BoundCertificate& b = *c.certificate;
            os << ", \"N\": " << b.N << ", \"lhs\": " << jnum(b.lhs)
               << ", \"rhs\": " << jnum(b.rhs) << ", \"margin\": " << jnum(b.margin)
               << ", \"tol\": " << jnum(b.tol)
               << ", \"holds\": " << (b.holds ? "true" : "false");
            os << ", \"inputs_echo\": {";
            bool first = true;
            for (const auto& [key, value] : b.inputs_echo) {
                if (!first) os << ", ";
                first = false;
                os << quoted(key) << ": " << jnum(value);
            }
            os << "}";
        } else {
            os << ", \"reason\": " << quoted(c.reason);
        }
        os << "}";
    }
    os << (a.certificates.empty() ? "]" : "\n  ]") << ",\n";
    os << "  \"audits\": [";
    for (std::size_t i = 0; i < a.audits.size(); ++i) {
        const AuditReport& r = a.audits[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"suite_id\": " << quoted(r.suite_id)
           << ", \"samples\": " << r.samples
           << ", \"violations\": " << r.violations
           << ", \"worst_margin\": " << jnum(r.worst_margin)
           << ", \"seed\": " << r.seed << "}";
    }
    os << (a.audits.empty() ? "]" : "\n  ]") << ",\n";
    os << "  \"config\": " << (e.config_echo.empty() ? "null" : e.config_echo)
       << "\n";
    os << "}\n";
    return os.str();
}

void write_certificate_file(const std::string& path, const Experiment& e,
                            const RunArtifacts& a) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open certificate file for writing: " + path);
    os << certificate_report_json(e, a);
    os.flush();
    if (!os) throw ConfigError("failed while writing certificate file: " + path);
}

std::vector<SummaryRow> read_certificate_rows(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    std::string text{std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>()};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }

    std::vector<SummaryRow> rows;
    if (!j.is_object()) return rows;
    SummaryRow base;
    if (const json* id = find(j, "experiment_id"); id && id->is_string())
        base.experiment_id = id->get<std::string>();
    if (const json* w = find(j, "wall_time_ms"); w && w->is_number())
        base.wall_time_ms = w->get<double>();
    const json* certs = find(j, "certificates");
    if (!certs || !certs->is_array()) return rows;
    for (const json& c : *certs) {
        if (!c.is_object()) continue;
        const json* tid = find(c, "theorem_id");
        const json* n = find(c, "N");
        const json* lhs = find(c, "lhs");
        const json* rhs = find(c, "rhs");
        const json* margin = find(c, "margin");
        const json* holds = find(c, "holds");
        if (!tid || !tid->is_string() || !n || !n->is_number_integer() ||
            !lhs || !lhs->is_number() || !rhs || !rhs->is_number() ||
            !margin || !margin->is_number() || !holds || !holds->is_boolean())
            continue;  // not-applicable entries and foreign content
        SummaryRow row = base;
        row.theorem_id = tid->get<std::string>();
        row.N = n->get<int>();
        row.lhs = lhs->get<double>();
        row.rhs = rhs->get<double>();
        row.margin = margin->get<double>();
        row.holds = holds->get<bool>();
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary_csv(std::ostream& os, std::vector<SummaryRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                  if (a.theorem_id != b.theorem_id) return a.theorem_id < b.theorem_id;
                  if (a.experiment_id != b.experiment_id)
                      return a.experiment_id < b.experiment_id;
                  if (a.N != b.N) return a.N < b.N;
                  return a.lhs < b.lhs;
              });
    os << "experiment_id,theorem_id,N,lhs,rhs,margin,holds,wall_time_ms\n";
    for (const SummaryRow& r : rows) {
        os << csv_field(r.experiment_id) << ',' << csv_field(r.theorem_id) << ','
           << r.N << ',' << format_sig17(r.lhs) << ',' << format_sig17(r.rhs)
           << ',' << format_sig17(r.margin) << ',' << (r.holds ? "true" : "false")
           << ',' << format_sig17(r.wall_time_ms) << "\n";
    }
}

}  // namespace geodescent
