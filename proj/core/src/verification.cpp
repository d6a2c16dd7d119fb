#include "willmore/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/parallel.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double masked_discrepancy(const ScalarField& a, const ScalarField& b) {
    double e = 0.0;
    for (int n = 0; n < a.size(); ++n)
        if (a.defined(n) && b.defined(n)) e = std::max(e, std::abs(a[n] - b[n]));
    return e;
}

double max_error(const ScalarField& w, const std::function<double(Point)>& exact) {
    const GridDomain& d = w.domain();
    double e = 0.0;
    for (int n = 0; n < d.node_count(); ++n)
        if (d.active(n)) e = std::max(e, std::abs(w[n] - exact(d.point(n))));
    return e;
}

}  // namespace

AnalyticField AnalyticField::sine(double A) {
    AnalyticField f;
    f.name = "sine";
    f.value = [A](Point p) { return A * std::sin(kPi * p.x) * std::sin(kPi * p.y); };
    f.gradient = [A](Point p) {
        return Vec2{A * kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y), A * kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
    };
    f.hessian = [A](Point p) {
        const double s = A * kPi * kPi;
        return Sym2{-s * std::sin(kPi * p.x) * std::sin(kPi * p.y), s * std::cos(kPi * p.x) * std::cos(kPi * p.y),
                    -s * std::sin(kPi * p.x) * std::sin(kPi * p.y)};
    };
    return f;
}

AnalyticField AnalyticField::cubic(double A) {
    AnalyticField f;
    f.name = "cubic";
    f.value = [A](Point p) { return A * (p.x * p.x * p.x - p.y * p.y * p.y + p.x * p.y * p.y); };
    f.gradient = [A](Point p) { return Vec2{A * (3.0 * p.x * p.x + p.y * p.y), A * (-3.0 * p.y * p.y + 2.0 * p.x * p.y)}; };
    f.hessian = [A](Point p) { return Sym2{A * 6.0 * p.x, A * 2.0 * p.y, A * (-6.0 * p.y + 2.0 * p.x)}; };
    return f;
}

AnalyticField AnalyticField::affine(double a, double b, double c) {
    AnalyticField f;
    f.name = "affine";
    f.value = [=](Point p) { return a * p.x + b * p.y + c; };
    f.gradient = [=](Point) { return Vec2{a, b}; };
    f.hessian = [](Point) { return Sym2{0.0, 0.0, 0.0}; };
    return f;
}

AnalyticField AnalyticField::sphere_cap(double R) {
    AnalyticField f;
    f.name = "sphere-cap";
    f.value = [R](Point p) { return std::sqrt(R * R - p.x * p.x - p.y * p.y); };
    f.gradient = [R](Point p) {
        const double z = std::sqrt(R * R - p.x * p.x - p.y * p.y);
        return Vec2{-p.x / z, -p.y / z};
    };
    f.hessian = [R](Point p) {
        const double z2 = R * R - p.x * p.x - p.y * p.y;
        const double z3 = z2 * std::sqrt(z2);
        return Sym2{-(R * R - p.y * p.y) / z3, -p.x * p.y / z3, -(R * R - p.x * p.x) / z3};
    };
    return f;
}

AnalyticField AnalyticField::kink() {
    AnalyticField f;
    f.name = "kink";
    f.value = [](Point p) { return std::abs(p.x - 0.5) + p.y; };
    f.gradient = [](Point p) { return Vec2{p.x >= 0.5 ? 1.0 : -1.0, 1.0}; };
    f.hessian = [](Point) { return Sym2{0.0, 0.0, 0.0}; };
    f.smooth = false;
    return f;
}

ScalarField AnalyticField::sample(DomainPtr domain) const { return ScalarField::sample(std::move(domain), value); }

void RefinementStudy::add(double spacing, double error) {
    if (!h.empty()) {
        const double prev = errors.back();
        const double floor = 1e-13;
        if (prev <= floor && error <= floor)
            orders.push_back(kNaN);
        else
            orders.push_back(std::log(prev / error) / std::log(h.back() / spacing));
    }
    h.push_back(spacing);
    errors.push_back(error);
}

bool RefinementStudy::orders_within(double lo, double hi) const {
    if (orders.empty()) return false;
    return std::all_of(orders.begin(), orders.end(), [&](double q) { return q >= lo && q <= hi; });
}

double RefinementStudy::finest_order() const { return orders.empty() ? kNaN : orders.back(); }

std::vector<double> default_levels() { return {1.0 / 16, 1.0 / 32, 1.0 / 64}; }

IdentityStudy check_reformulation_identity(const AnalyticField& u, const std::vector<double>& levels,
                                           const Polygon& polygon) {
    if (!u.smooth) throw ParameterError("identity study needs a smooth field; '" + u.name + "' is not");
    if (levels.size() < 3) throw ParameterError("a refinement study needs at least 3 grid levels");
    struct Level {
        double raw, qdiv, intr;
    };
    const auto results = parallel_map<Level>(levels.size(), [&](std::size_t i) {
        const DomainPtr d = GridDomain::create(polygon, levels[i]);
        const ScalarField f = u.sample(d);
        const ScalarField div = willmore_operator_divergence(f);
        const ScalarField geo = willmore_operator_geometric(f);
        const ScalarField intr = willmore_operator_intrinsic(f);
        const ScalarField q = area_element(f);
        const ScalarField geo_q = map_fields({&geo, &q}, [](std::span<const double> v) { return v[0] / v[1]; });
        return Level{masked_discrepancy(geo, div), masked_discrepancy(geo_q, div), masked_discrepancy(intr, div)};
    });
    IdentityStudy s;
    s.raw.name = "flux form vs divergence form";
    s.q_divided.name = "flux form / Q vs divergence form";
    s.intrinsic.name = "Laplace-Beltrami form vs divergence form";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        s.raw.add(levels[i], results[i].raw);
        s.q_divided.add(levels[i], results[i].qdiv);
        s.intrinsic.add(levels[i], results[i].intr);
    }
    auto converges = [](const RefinementStudy& r) {
        const double q = r.finest_order();
        return std::isnan(q) ? r.errors.back() <= 1e-13 : q >= 1.8;
    };
    if (converges(s.raw) && !converges(s.q_divided))
        s.vanishing = "raw";
    else if (converges(s.q_divided) && !converges(s.raw))
        s.vanishing = "q_divided";
    else if (converges(s.raw))
        s.vanishing = "both";
    else
        s.vanishing = "neither";
    return s;
}

CapStudy sphere_cap_suite(double radius, double angle, const std::vector<double>& levels) {
    if (!(radius > 0.0)) throw ParameterError("cap radius must be positive");
    if (!(angle > 0.0)) throw ParameterError("cap angle must be positive");
    if (levels.size() < 3) throw ParameterError("a refinement study needs at least 3 grid levels");
    CapStudy s;
    s.radius = radius;
    s.angle = angle;
    if (angle > kMaxCapAngle) {
        s.angle = kMaxCapAngle;
        s.notes.push_back("cap angle " + std::to_string(angle) + " too steep at the rim; domain shrunk to angle " +
                          std::to_string(kMaxCapAngle));
    }
    // Area defect of the inscribed polygon is about (2 pi / N)^2 / 6.
    int sides = 64;
    while (std::pow(2.0 * kPi / sides, 2) / 6.0 > 2e-6) sides *= 2;
    s.polygon_sides = sides;
    const double rim = radius * std::sin(s.angle);
    const Polygon disk = Polygon::regular({0.0, 0.0}, rim, sides);
    const AnalyticField cap = AnalyticField::sphere_cap(radius);
    const double w_target = 2.0 * kPi * (1.0 - std::cos(s.angle));

    struct Level {
        double h_err, k_err, h_rim, k_rim, w, c;
    };
    const auto results = parallel_map<Level>(levels.size(), [&](std::size_t i) {
        const DomainPtr d = GridDomain::create(disk, levels[i]);
        const ScalarField u = cap.sample(d);
        const NodeMask mask = interior_mask(*d, kOperatorMargin);
        const ScalarField h = mean_curvature(u);
        const ScalarField k = gauss_curvature(u);
        Level l{0.0, 0.0, 0.0, 0.0, willmore_energy(u), conformal_energy(u)};
        for (int n = 0; n < d->node_count(); ++n) {
            if (!mask[static_cast<std::size_t>(n)]) continue;
            const double he = std::abs(h[n] + 2.0 / radius) * radius / 2.0;
            const double ke = std::abs(k[n] - 1.0 / (radius * radius)) * radius * radius;
            l.h_rim = std::max(l.h_rim, he);
            l.k_rim = std::max(l.k_rim, ke);
            if (disk.distance(d->point(n)) < kCapCore * rim) continue;
            l.h_err = std::max(l.h_err, he);
            l.k_err = std::max(l.k_err, ke);
        }
        return l;
    });
    s.mean_curvature.name = "relative error of H against -2/R";
    s.gauss_curvature.name = "relative error of K against 1/R^2";
    s.willmore.name = "relative error of the Willmore energy";
    s.conformal.name = "conformal energy (exact value 0)";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double h = levels[i];
        s.mean_curvature.add(h, results[i].h_err);
        s.gauss_curvature.add(h, results[i].k_err);
        s.willmore.add(h, std::abs(results[i].w - w_target) / w_target);
        s.conformal.add(h, std::abs(results[i].c));
        s.mean_curvature_near_rim.push_back(results[i].h_rim);
        s.gauss_curvature_near_rim.push_back(results[i].k_rim);
        s.willmore_values.push_back(results[i].w);
        s.conformal_values.push_back(results[i].c);
    }
    return s;
}

ManufacturedStudy manufactured_biharmonic(const std::vector<double>& levels) {
    if (levels.size() < 3) throw ParameterError("a refinement study needs at least 3 grid levels");
    const AnalyticField s = AnalyticField::sine(1.0);
    const double c = -1.0 / (2.0 * kPi * kPi);
    const AnalyticField ws = AnalyticField::sine(c);
    struct Level {
        double plain, div, mismatch, affine;
    };
    const auto results = parallel_map<Level>(levels.size(), [&](std::size_t i) {
        const DomainPtr d = GridDomain::create(Polygon::unit_square(), levels[i]);
        const SparseSystem sys = assemble(d);
        Level l{};

        const ScalarField f = ScalarField::sample(d, [&](Point p) { return 4.0 * std::pow(kPi, 4) * s.value(p); });
        const ScalarField w1 = solve(sys, f, BoundaryData::from_traces(d, s.value, s.gradient));
        l.plain = max_error(w1, s.value);

        const ScalarField zero = ScalarField::sample(d, [](Point) { return 0.0; });
        const ScalarField sv = s.sample(d);
        const ScalarField rhs = divergence_rhs({zero, zero}, {sv, zero, sv});
        const ScalarField w2 = solve(sys, rhs, BoundaryData::from_traces(d, ws.value, ws.gradient));
        l.div = max_error(w2, ws.value);

        // D.h1 + D^2:h2 = 12xy + 6x + 6y, reproduced exactly by the discrete stencils.
        const VectorField h1{ScalarField::sample(d, [](Point p) { return p.x * p.x * p.y; }),
                             ScalarField::sample(d, [](Point p) { return p.x * p.y * p.y; })};
        const TensorField h2{ScalarField::sample(d, [](Point p) { return p.x * p.x * p.x; }),
                             ScalarField::sample(d, [](Point p) { return p.x * p.x * p.y * p.y; }),
                             ScalarField::sample(d, [](Point p) { return p.y * p.y * p.y; })};
        const ScalarField fp = ScalarField::sample(d, [](Point p) { return 12.0 * p.x * p.y + 6.0 * p.x + 6.0 * p.y; });
        const BoundaryData bz = BoundaryData::zero(d);
        const ScalarField wa = solve(sys, fp, bz);
        const ScalarField wb = solve(sys, divergence_rhs(h1, h2), bz);
        l.mismatch = 0.0;
        for (int n = 0; n < d->node_count(); ++n)
            if (d->active(n)) l.mismatch = std::max(l.mismatch, std::abs(wa[n] - wb[n]));

        const AnalyticField aff = AnalyticField::affine(0.3, -0.2, 1.0);
        const ScalarField w3 = solve(sys, ScalarField(d), BoundaryData::from_traces(d, aff.value, aff.gradient));
        l.affine = max_error(w3, aff.value);
        return l;
    });
    ManufacturedStudy m;
    m.plain.name = "plain right-hand side, max error";
    m.divergence.name = "divergence-form right-hand side, max error";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        m.plain.add(levels[i], results[i].plain);
        m.divergence.add(levels[i], results[i].div);
        m.path_mismatch.push_back(results[i].mismatch);
        m.affine_error.push_back(results[i].affine);
    }
    return m;
}

SweepReport small_data_sweep(const std::vector<double>& epsilons, BoundaryShape shape, const IterationConfig& cfg,
                             DomainPtr domain) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] >= 0.0) || (i > 0 && !(epsilons[i] > epsilons[i - 1])))
            throw ParameterError("sweep amplitudes must be nonnegative and strictly increasing");
    }
    const SparseSystem system = assemble(domain);
    SweepReport rep;
    rep.entries = parallel_map<SweepEntry>(epsilons.size(), [&](std::size_t i) {
        SweepEntry e;
        e.epsilon = epsilons[i];
        const BoundaryData bc = preset_boundary(domain, shape, epsilons[i]);
        e.trace_gradient_sup = boundary_gradient_sup(bc);
        const IterationResult r = iterate(system, bc, cfg);
        e.outcome = r.report.outcome;
        e.contraction = r.report.contraction;
        e.iterations = r.report.iterations;
        e.final_norms = r.report.ledger.empty() ? r.report.initial : r.report.ledger.back().norms;
        e.residual = r.report.residual;
        e.warnings = r.report.warnings;
        return e;
    });
    for (SweepEntry& e : rep.entries) {
        if (rep.first_failure >= 0.0) {
            e.trusted = false;
            continue;
        }
        if (e.outcome != Outcome::Converged || e.contraction.expanding) rep.first_failure = e.epsilon;
    }
    return rep;
}

}  // namespace willmore
