#include "willmore/cli.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "willmore/errors.hpp"
#include "willmore/io.hpp"
#include "willmore/verification.hpp"

#ifndef WILLMORE_VERSION
#define WILLMORE_VERSION "unknown"
#endif

namespace willmore {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kOrderLo = 1.8;
constexpr double kOrderHi = 2.5;

void put(json& j, const std::string& key, double v, const char* reason) {
    if (std::isfinite(v)) {
        j[key] = v;
    } else {
        j[key] = nullptr;
        j[key + "_null_reason"] = reason;
    }
}

// Any remaining non-finite number becomes null, with its JSON pointer listed.
void sanitize(json& node, const std::string& path, json& reasons) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) sanitize(it.value(), path + "/" + it.key(), reasons);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) sanitize(node[i], path + "/" + std::to_string(i), reasons);
    } else if (node.is_number_float() && !std::isfinite(node.get<double>())) {
        node = nullptr;
        reasons.push_back({{"path", path}, {"reason", "non-finite value"}});
    }
}

json to_json(const RefinementStudy& s) {
    json j;
    j["name"] = s.name;
    j["h"] = s.h;
    j["errors"] = s.errors;
    json orders = json::array();
    for (double q : s.orders) orders.push_back(std::isfinite(q) ? json(q) : json(nullptr));
    j["orders"] = orders;
    if (std::any_of(s.orders.begin(), s.orders.end(), [](double q) { return !std::isfinite(q); }))
        j["orders_null_reason"] = "errors at rounding level on consecutive grids";
    j["notes"] = s.notes;
    return j;
}

json to_json(const SetNorms& n) {
    return {{"gradient_sup", n.gradient_sup}, {"hessian_l1_weighted", n.hessian_l1}, {"sobolev_w2ap", n.sobolev}};
}

json to_json(const ContractionSummary& c) {
    json j;
    j["factors"] = c.factors;
    j["skipped_iterations"] = c.skipped;
    j["sufficient_history"] = c.sufficient;
    if (c.sufficient) {
        j["q_max"] = c.q_max;
        j["q_geometric_mean"] = c.q_geometric_mean;
    } else {
        j["q_max"] = nullptr;
        j["q_max_null_reason"] = "insufficient history";
        j["q_geometric_mean"] = nullptr;
        j["q_geometric_mean_null_reason"] = "insufficient history";
    }
    j["expanding"] = c.expanding;
    j["note"] = c.note;
    return j;
}

json to_json(const WillmoreResidual& r) { return {{"weak", r.weak}, {"strong", r.strong}, {"scale", r.scale}}; }

json to_json(const ConvergenceReport& r) {
    json j;
    j["outcome"] = to_string(r.outcome);
    j["iterations"] = r.iterations;
    j["final_difference"] = r.final_difference;
    j["initial_norms"] = to_json(r.initial);
    json ledger = json::array();
    for (const LedgerEntry& e : r.ledger) {
        json row = to_json(e.norms);
        row["iteration"] = e.iteration;
        row["difference"] = e.difference;
        ledger.push_back(row);
    }
    j["ledger"] = ledger;
    j["contraction"] = to_json(r.contraction);
    if (r.outcome == Outcome::Diverged) {
        j["residual"] = nullptr;
        j["residual_null_reason"] = "iteration diverged";
    } else {
        j["residual"] = to_json(r.residual);
    }
    j["auxiliary_exponents"] = {{"q", r.aux_q}, {"gamma", r.aux_gamma}};
    j["gradient_bound_violated"] = r.gradient_bound_violated;
    j["warnings"] = r.warnings;
    j["caveat"] = r.caveat;
    return j;
}

json to_json(const RegimeCheck& c) {
    return {{"name", c.name}, {"satisfied", c.satisfied}, {"checkable", c.checkable}, {"reasons", c.reasons}};
}

json to_json(const ValidityReport& v) {
    return {{"p", v.p},
            {"a", v.a},
            {"s", v.s},
            {"lipschitz_constant", v.lipschitz},
            {"basic_range", v.basic_range},
            {"fixed_point_regime", to_json(v.fixed_point)},
            {"lipschitz_regime", to_json(v.small_lipschitz)},
            {"holder_regime", to_json(v.holder)}};
}

json to_json(const TraceNorm& t) {
    return {{"total", t.total}, {"height_besov", t.height}, {"gradient_besov", t.gradient}, {"gradient_sup", t.gradient_sup}};
}

AnalyticField configured_field(const RunConfig& c) {
    if (c.field == "cubic") return AnalyticField::cubic(c.field_amplitude);
    if (c.field == "affine") return AnalyticField::affine(0.3 * c.field_amplitude, -0.2 * c.field_amplitude, 1.0);
    if (c.field == "sphere-cap") return AnalyticField::sphere_cap(c.cap_radius);
    return AnalyticField::sine(c.field_amplitude);
}

BoundaryData configured_boundary(const RunConfig& c, const DomainPtr& d, std::vector<std::string>& warnings) {
    if (c.boundary == "file") return import_boundary(c.boundary_file, d, &warnings);
    return preset_boundary(d, c.boundary_shape(), c.amplitude);
}

std::vector<double> level_spacings(const RunConfig& c) {
    std::vector<double> h;
    for (int n : c.levels) h.push_back(1.0 / n);
    return h;
}

bool orders_ok(const RefinementStudy& s) {
    if (s.orders_within(kOrderLo, kOrderHi)) return true;
    // A field the operators reproduce exactly has errors at rounding level.
    return std::all_of(s.errors.begin(), s.errors.end(), [](double e) { return e <= 1e-6; });
}

json grid_json(const GridDomain& d) {
    return {{"h", d.h()},
            {"nx", d.nx()},
            {"ny", d.ny()},
            {"interior_nodes", d.interior_nodes().size()},
            {"boundary_nodes", d.boundary_nodes().size()},
            {"trace_samples", d.trace().size()},
            {"grid_aligned", d.grid_aligned()},
            {"lipschitz_constant", d.polygon().lipschitz_constant()}};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Context {
    const RunConfig& cfg;
    std::ostream& out;
    bool quiet;
    json results = json::object();
    json metadata = json::object();
    std::vector<std::string> warnings;
    fs::path dir;

    void say(const std::string& line) {
        if (!quiet) out << line << '\n';
    }
    std::string csv(const std::string& name) const { return (dir / (name + ".csv")).string(); }
};

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

int cmd_solve(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const DomainPtr d = GridDomain::create(c.polygon(), c.h());
    ctx.metadata["grid"] = grid_json(*d);
    const BoundaryData bc = configured_boundary(c, d, ctx.warnings);
    const IterationConfig it = c.iteration();
    const SparseSystem sys = assemble(d);

    const IdentityStudy gate = check_reformulation_identity(AnalyticField::sine(0.1), level_spacings(c));
    const bool gate_ok = orders_ok(gate.raw);

    const IterationResult r = iterate(sys, bc, it);
    ctx.results["convergence"] = to_json(r.report);
    ctx.results["identity_gate"] = {{"passed", gate_ok}, {"study", to_json(gate.raw)}};
    ctx.results["trace_norm"] = to_json(dirichlet_trace_norm(bc, it.norm));
    ctx.results["parameter_check"] = to_json(parameter_check(c.p, c.a, d->polygon().lipschitz_constant()));
    if (boundary_gradient_sup(bc) > 0.0) {
        ctx.results["max_modulus_ratio"] = max_modulus_ratio(sys, bc);
    } else {
        ctx.results["max_modulus_ratio"] = nullptr;
        ctx.results["max_modulus_ratio_null_reason"] = "boundary gradient data vanish";
    }
    const bool converged = r.report.outcome == Outcome::Converged;
    ctx.results["trusted"] = converged && gate_ok;
    if (r.report.outcome != Outcome::Diverged) {
        json en;
        put(en, "willmore", willmore_energy(r.u), "energy not finite");
        put(en, "conformal", conformal_energy(r.u), "energy not finite");
        ctx.results["energies"] = en;
        export_field(r.u, ctx.csv("u"), "u");
        export_field(mean_curvature(r.u), ctx.csv("mean_curvature"), "H");
        export_field(gauss_curvature(r.u), ctx.csv("gauss_curvature"), "K");
        export_field(area_element(r.u), ctx.csv("area_element"), "Q");
    } else {
        ctx.results["energies"] = nullptr;
        ctx.results["energies_null_reason"] = "iteration diverged";
    }
    ctx.say("solve: " + std::string(to_string(r.report.outcome)) + " after " + std::to_string(r.report.iterations) +
            " iteration(s), final difference " + num(r.report.final_difference));
    if (!r.report.ledger.empty())
        ctx.say("  ||grad u||_inf = " + num(r.report.ledger.back().norms.gradient_sup) +
                ", ||u||_W2ap = " + num(r.report.ledger.back().norms.sobolev));
    if (r.report.contraction.sufficient)
        ctx.say("  contraction q_max = " + num(r.report.contraction.q_max) +
                ", geometric mean = " + num(r.report.contraction.q_geometric_mean));
    if (converged)
        ctx.say("  residuals: weak " + num(r.report.residual.weak) + ", strong " + num(r.report.residual.strong));
    ctx.say(std::string("  identity gate ") + (gate_ok ? "passed" : "FAILED"));
    return converged && gate_ok ? kExitSuccess : kExitFailed;
}

int cmd_verify_identity(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const AnalyticField f = configured_field(c);
    const IdentityStudy s = check_reformulation_identity(f, level_spacings(c), c.polygon());
    const bool ok = orders_ok(s.raw);
    ctx.results["field"] = f.name;
    ctx.results["raw"] = to_json(s.raw);
    ctx.results["q_divided"] = to_json(s.q_divided);
    ctx.results["laplace_beltrami"] = to_json(s.intrinsic);
    ctx.results["second_order_comparison"] = s.vanishing;
    ctx.results["passed"] = ok;
    ctx.say("verify-identity (" + f.name + "): " + (ok ? "passed" : "FAILED"));
    for (std::size_t i = 0; i < s.raw.errors.size(); ++i)
        ctx.say("  h = " + num(s.raw.h[i]) + "  discrepancy " + num(s.raw.errors[i]) +
                (i > 0 ? "  order " + num(s.raw.orders[i - 1], 4) : ""));
    return ok ? kExitSuccess : kExitFailed;
}

int cmd_norms(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const DomainPtr d = GridDomain::create(c.polygon(), c.h());
    ctx.metadata["grid"] = grid_json(*d);
    const NormParams np = NormParams::make(c.p, c.a);
    const BoundaryData bc = configured_boundary(c, d, ctx.warnings);
    const DistanceField dist(d);
    const AnalyticField f = configured_field(c);
    const ScalarField u = f.sample(d);
    const ScalarField one = ScalarField::sample(d, [](Point) { return 1.0; });

    ctx.results["parameter_check"] = to_json(parameter_check(c.p, c.a, d->polygon().lipschitz_constant()));
    ctx.results["trace_norm"] = to_json(dirichlet_trace_norm(bc, np));
    ctx.results["holder"] = {{"alpha", np.s},
                             {"g0", holder_norm(d->trace(), bc.g0(), np.s)},
                             {"g1", holder_norm(d->trace(), bc.g1(), np.s)}};
    ctx.results["weight_integral"] = {{"beta", np.a * np.p}, {"value", weighted_lp_norm(one, 1.0, np.a * np.p, dist)}};
    ctx.results["field"] = f.name;
    ctx.results["field_sobolev"] = {{"m0", weighted_sobolev_norm(u, 0, np, dist)},
                                    {"m1", weighted_sobolev_norm(u, 1, np, dist)},
                                    {"m2", weighted_sobolev_norm(u, 2, np, dist)}};
    ScalarField dfield = ScalarField::undefined(d);
    for (int n = 0; n < d->node_count(); ++n)
        if (d->active(n)) dfield.set(n, dist[n]);
    export_field(dfield, ctx.csv("distance"), "d");
    export_boundary(bc, ctx.csv("boundary"));
    ctx.say("norms: trace norm " + num(ctx.results["trace_norm"]["total"].get<double>()) + ", W^{2,a}_p norm of " +
            f.name + " " + num(ctx.results["field_sobolev"]["m2"].get<double>()));
    return kExitSuccess;
}

int cmd_energy(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    if (c.field == "sphere-cap") {
        const CapStudy s = sphere_cap_suite(c.cap_radius, c.cap_angle, level_spacings(c));
        const double target = 2.0 * std::numbers::pi * (1.0 - std::cos(s.angle));
        ctx.results["field"] = "sphere-cap";
        ctx.results["radius"] = s.radius;
        ctx.results["angle"] = s.angle;
        ctx.results["polygon_sides"] = s.polygon_sides;
        ctx.results["willmore_target"] = target;
        ctx.results["willmore"] = s.willmore_values;
        ctx.results["conformal"] = s.conformal_values;
        ctx.results["mean_curvature"] = to_json(s.mean_curvature);
        ctx.results["gauss_curvature"] = to_json(s.gauss_curvature);
        ctx.results["willmore_error"] = to_json(s.willmore);
        ctx.results["notes"] = s.notes;
        ctx.say("energy (sphere cap R = " + num(s.radius) + "): W = " + num(s.willmore_values.back(), 8) +
                " (target " + num(target, 8) + "), conformal = " + num(s.conformal_values.back()));
        return kExitSuccess;
    }
    const DomainPtr d = GridDomain::create(c.polygon(), c.h());
    ctx.metadata["grid"] = grid_json(*d);
    const AnalyticField f = configured_field(c);
    const ScalarField u = f.sample(d);
    json en;
    put(en, "willmore", willmore_energy(u), "energy not finite");
    put(en, "conformal", conformal_energy(u), "energy not finite");
    ctx.results["field"] = f.name;
    ctx.results["energies"] = en;
    export_field(u, ctx.csv("u"), "u");
    export_field(mean_curvature(u), ctx.csv("mean_curvature"), "H");
    export_field(gauss_curvature(u), ctx.csv("gauss_curvature"), "K");
    export_field(area_element(u), ctx.csv("area_element"), "Q");
    ctx.say("energy (" + f.name + "): W = " + num(willmore_energy(u), 8) + ", conformal = " + num(conformal_energy(u), 8));
    return kExitSuccess;
}

int cmd_sweep(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const DomainPtr d = GridDomain::create(c.polygon(), c.h());
    ctx.metadata["grid"] = grid_json(*d);
    if (c.boundary == "file") throw ConfigurationError("sweep needs a named boundary shape, not a file");
    const SweepReport rep = small_data_sweep(c.sweep_epsilons, c.boundary_shape(), c.iteration(), d);
    json entries = json::array();
    for (const SweepEntry& e : rep.entries) {
        json j;
        j["epsilon"] = e.epsilon;
        j["outcome"] = to_string(e.outcome);
        j["trusted"] = e.trusted;
        j["iterations"] = e.iterations;
        j["final_norms"] = to_json(e.final_norms);
        j["contraction"] = to_json(e.contraction);
        j["residual"] = to_json(e.residual);
        j["boundary_gradient_sup"] = e.trace_gradient_sup;
        j["warnings"] = e.warnings;
        entries.push_back(j);
        ctx.say("  eps = " + num(e.epsilon) + ": " + to_string(e.outcome) + " in " + std::to_string(e.iterations) +
                " iteration(s)" +
                (e.contraction.sufficient ? ", q_max " + num(e.contraction.q_max) : std::string(", q n/a")) +
                (e.trusted ? "" : " [untrusted]"));
    }
    ctx.results["entries"] = entries;
    if (rep.first_failure >= 0.0) {
        ctx.results["first_failure"] = rep.first_failure;
    } else {
        ctx.results["first_failure"] = nullptr;
        ctx.results["first_failure_null_reason"] = "every amplitude converged";
    }
    ctx.say(std::string("sweep: ") + (rep.first_failure >= 0.0 ? "failure at eps = " + num(rep.first_failure) : "all converged"));
    return rep.first_failure >= 0.0 ? kExitFailed : kExitSuccess;
}

int cmd_convergence_study(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const std::vector<double> levels = level_spacings(c);
    const ManufacturedStudy m = manufactured_biharmonic(levels);
    const IdentityStudy id = check_reformulation_identity(AnalyticField::sine(0.1), levels);
    double mismatch = 0.0;
    for (double v : m.path_mismatch) mismatch = std::max(mismatch, v);
    const bool ok = orders_ok(m.plain) && orders_ok(m.divergence) && orders_ok(id.raw) && mismatch <= 1e-9;
    ctx.results["manufactured_plain"] = to_json(m.plain);
    ctx.results["manufactured_divergence"] = to_json(m.divergence);
    ctx.results["path_mismatch"] = m.path_mismatch;
    ctx.results["affine_error"] = m.affine_error;
    ctx.results["identity"] = to_json(id.raw);
    ctx.results["passed"] = ok;
    ctx.say(std::string("convergence-study: ") + (ok ? "passed" : "FAILED"));
    ctx.say("  plain orders: " + num(m.plain.orders.front(), 4) + ", " + num(m.plain.finest_order(), 4));
    ctx.say("  divergence orders: " + num(m.divergence.orders.front(), 4) + ", " + num(m.divergence.finest_order(), 4));
    ctx.say("  identity orders: " + num(id.raw.orders.front(), 4) + ", " + num(id.raw.finest_order(), 4));
    return ok ? kExitSuccess : kExitFailed;
}

json base_report(const std::string& command) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["metadata"]["versions"] = {{"willmore", WILLMORE_VERSION},
                                 {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                               "." + std::to_string(EIGEN_MINOR_VERSION)}};
    return j;
}

void write_report(json report, const fs::path& dir, double wall, std::ostream& err) {
    report["metadata"]["timestamp"] = {{"utc", utc_now()}, {"wall_time_s", wall}};
    json reasons = json::array();
    sanitize(report, "", reasons);
    report["null_values"] = reasons;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / "report.json");
    if (!f) {
        err << "error: cannot write " << (dir / "report.json").string() << '\n';
        return;
    }
    f << report.dump(2) << '\n';
}

json failure_block(const std::string& type, const std::vector<std::string>& messages) {
    return {{"type", type}, {"messages", messages}};
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"solve", "verify-identity", "norms", "energy", "sweep", "convergence-study"};
    return c;
}

int run(const std::string& command, const RunConfig& config, const RunOptions& options) {
    std::ostream& out = options.out ? *options.out : std::cout;
    std::ostream& err = options.err ? *options.err : std::cerr;
    const auto t0 = std::chrono::steady_clock::now();
    json report = base_report(command);
    const fs::path dir(config.output_dir);
    report["metadata"]["params"] = {{"p", config.p}, {"a", config.a}, {"s", 1.0 - config.a - 1.0 / config.p}};
    report["metadata"]["resolution"] = config.resolution;
    report["metadata"]["domain"] = config.domain;

    Context ctx{config, out, options.quiet, {}, {}, {}, dir};
    int code = kExitSuccess;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const bool writable = !ec && fs::is_directory(dir);
    try {
        if (!writable) throw ConfigurationError("output directory '" + dir.string() + "' is not writable");
        if (command == "solve") code = cmd_solve(ctx);
        else if (command == "verify-identity") code = cmd_verify_identity(ctx);
        else if (command == "norms") code = cmd_norms(ctx);
        else if (command == "energy") code = cmd_energy(ctx);
        else if (command == "sweep") code = cmd_sweep(ctx);
        else if (command == "convergence-study") code = cmd_convergence_study(ctx);
        else {
            std::string list;
            for (const auto& c : commands()) list += (list.empty() ? "" : ", ") + c;
            throw ConfigurationError("unknown command '" + command + "'; expected one of " + list);
        }
        report["status"] = code == kExitSuccess ? "ok" : "failed";
    } catch (const ConfigurationError& e) {
        code = kExitConfiguration;
        report["status"] = "configuration_error";
        report["failure"] = failure_block("configuration", e.problems());
        for (const auto& p : e.problems()) err << "configuration error: " << p << '\n';
    } catch (const ParameterError& e) {
        code = kExitConfiguration;
        report["status"] = "configuration_error";
        report["failure"] = failure_block("parameter", {e.what()});
        err << "parameter error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        code = kExitFailed;
        report["status"] = "failed";
        report["failure"] = failure_block("runtime", {e.what()});
        err << "error: " << e.what() << '\n';
    }
    report["exit_code"] = code;
    report["results"] = ctx.results;
    for (auto& [k, v] : ctx.metadata.items()) report["metadata"][k] = v;
    report["warnings"] = ctx.warnings;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (writable) write_report(report, dir, wall, err);
    return code;
}

int run_text(const std::string& command, const std::string& text, const std::vector<std::string>& overrides,
             const RunOptions& options, const std::string& fallback_out_dir) {
    std::string full = text;
    if (!full.empty() && full.back() != '\n') full += '\n';
    for (const auto& line : overrides) full += line + '\n';
    RunConfig cfg;
    try {
        cfg = parse_config(full);
    } catch (const ConfigurationError& e) {
        std::ostream& err = options.err ? *options.err : std::cerr;
        for (const auto& p : e.problems()) err << "configuration error: " << p << '\n';
        json report = base_report(command);
        report["status"] = "configuration_error";
        report["exit_code"] = static_cast<int>(kExitConfiguration);
        report["failure"] = failure_block("configuration", e.problems());
        report["results"] = json::object();
        report["warnings"] = json::array();
        write_report(report, fs::path(fallback_out_dir), 0.0, err);
        return kExitConfiguration;
    }
    return run(command, cfg, options);
}

}  // namespace willmore
