#include "willmore/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "willmore/errors.hpp"
#include "willmore/geometry.hpp"

namespace willmore {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double gradient_sup(const ScalarField& u) {
    const VectorField g = gradient(u);
    const GridDomain& d = u.domain();
    double sup = 0.0;
    for (int n = 0; n < d.node_count(); ++n)
        if (d.active(n) && g.x.defined(n)) sup = std::max(sup, std::hypot(g.x[n], g.y[n]));
    return sup;
}

// Empty result signals non-finite b-terms.
std::optional<ScalarField> map_once(const SparseSystem& system, const ScalarField& v, const BoundaryData& bc,
                                    const IterationConfig& cfg, std::vector<std::string>* warnings) {
    if (warnings) {
        const double gs = gradient_sup(v);
        if (gs > 1.0) warnings->push_back("iterate has ||grad u||_inf = " + fmt(gs) + " > 1");
    }
    const VectorField b1 = b1_terms(v);
    const TensorField b2 = b2_terms(v);
    const ScalarField rhs = divergence_rhs(b1, b2);
    if (!rhs.all_finite()) return std::nullopt;
    ScalarField w = solve(system, rhs, bc);
    if (cfg.damping < 1.0) {
        ScalarField mixed = ScalarField::undefined(w.domain_ptr());
        for (int n = 0; n < w.size(); ++n)
            if (w.defined(n) && v.defined(n)) mixed.set(n, (1.0 - cfg.damping) * v[n] + cfg.damping * w[n]);
        w = std::move(mixed);
    }
    return w;
}

bool finite(const SetNorms& s) {
    return std::isfinite(s.gradient_sup) && std::isfinite(s.hessian_l1) && std::isfinite(s.sobolev);
}

}  // namespace

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Converged: return "converged";
        case Outcome::NotConverged: return "not_converged";
        case Outcome::Diverged: return "diverged";
    }
    return "unknown";
}

void IterationConfig::validate() const {
    std::vector<std::string> problems;
    const double p = norm.p;
    const double a = norm.a;
    if (!(p > 2.0) || !std::isfinite(p)) problems.push_back("p = " + fmt(p) + " outside p in (2, inf)");
    if (!(a > 0.0 && a < 1.0 - 2.0 / p))
        problems.push_back("a = " + fmt(a) + " outside 0 < a < 1 - 2/p = " + fmt(1.0 - 2.0 / p));
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) problems.push_back("tolerance must be positive");
    if (max_iterations < 1) problems.push_back("max_iterations must be at least 1");
    if (!(damping > 0.0 && damping <= 1.0)) problems.push_back("damping must lie in (0, 1]");
    if (initial == InitialGuess::User && !user_guess) problems.push_back("initial guess 'user' needs a field");
    if (!(blowup_gradient > 0.0)) problems.push_back("blow-up gradient threshold must be positive");
    if (!(blowup_growth > 1.0)) problems.push_back("blow-up growth factor must exceed 1");
    if (!problems.empty()) throw ConfigurationError(problems);
}

SetNorms set_norms(const ScalarField& u, const NormParams& params, const DistanceField& d) {
    SetNorms s;
    s.gradient_sup = gradient_sup(u);
    const TensorField t = hessian(u);
    const ScalarField frob = map_fields({&t.xx, &t.xy, &t.yy}, [](std::span<const double> v) {
        return std::sqrt(v[0] * v[0] + 2.0 * v[1] * v[1] + v[2] * v[2]);
    });
    s.hessian_l1 = weighted_lp_norm(frob, 1.0, params.a, d);
    s.sobolev = weighted_sobolev_norm(u, 2, params, d);
    return s;
}

ScalarField apply_G(const SparseSystem& system, const ScalarField& v, const BoundaryData& bc,
                    const IterationConfig& cfg, std::vector<std::string>* warnings) {
    auto w = map_once(system, v, bc, cfg, warnings);
    if (!w) throw SolverError("non-finite divergence-form terms in the iteration map");
    return std::move(*w);
}

ScalarField apply_G(const ScalarField& v, const BoundaryData& bc, const IterationConfig& cfg) {
    const SparseSystem system = assemble(bc.domain_ptr());
    return apply_G(system, v, bc, cfg);
}

IterationResult iterate(const BoundaryData& bc, const IterationConfig& cfg) {
    const SparseSystem system = assemble(bc.domain_ptr());
    return iterate(system, bc, cfg);
}

IterationResult iterate(const SparseSystem& system, const BoundaryData& bc, const IterationConfig& cfg) {
    cfg.validate();
    const DistanceField dist(system.domain_ptr());
    IterationState st;
    switch (cfg.initial) {
        case InitialGuess::Biharmonic: st.u = solve(system, ScalarField(system.domain_ptr()), bc); break;
        case InitialGuess::Zero: st.u = ScalarField(system.domain_ptr()); break;
        case InitialGuess::User: st.u = *cfg.user_guess; break;
    }
    st.initial = set_norms(st.u, cfg.norm, dist);
    const bool start_small = st.initial.gradient_sup <= 1.0;
    const double reference = st.initial.sobolev > 0.0 ? st.initial.sobolev : 1.0;

    ConvergenceReport rep;
    rep.outcome = Outcome::NotConverged;
    for (int k = 1; k <= cfg.max_iterations; ++k) {
        auto next = map_once(system, st.u, bc, cfg, &st.warnings);
        if (!next) {
            st.diverged = true;
            st.warnings.push_back("non-finite divergence-form terms at iteration " + std::to_string(k));
            rep.outcome = Outcome::Diverged;
            break;
        }
        LedgerEntry e;
        e.iteration = k;
        e.norms = set_norms(*next, cfg.norm, dist);
        e.difference = weighted_sobolev_norm(*next - st.u, 2, cfg.norm, dist);
        st.u = std::move(*next);
        st.ledger.push_back(e);
        rep.iterations = k;
        rep.final_difference = e.difference;

        if (start_small && e.norms.gradient_sup > 1.0 && !st.gradient_bound_violated) {
            st.gradient_bound_violated = true;
            st.warnings.push_back("||grad u||_inf left the unit bound at iteration " + std::to_string(k) + " (" +
                                  fmt(e.norms.gradient_sup) + ")");
        }
        if (!finite(e.norms) || !std::isfinite(e.difference) || e.norms.gradient_sup > cfg.blowup_gradient ||
            e.norms.sobolev > cfg.blowup_growth * reference) {
            st.diverged = true;
            rep.outcome = Outcome::Diverged;
            st.warnings.push_back("blow-up threshold exceeded at iteration " + std::to_string(k));
            break;
        }
        if (e.difference < cfg.tolerance) {
            rep.outcome = Outcome::Converged;
            break;
        }
    }

    rep.ledger = st.ledger;
    rep.initial = st.initial;
    rep.contraction = contraction_report(st);
    if (!st.diverged) rep.residual = willmore_residual(st.u);
    const double p = cfg.norm.p;
    const double a = cfg.norm.a;
    rep.aux_q = 0.5 * (2.0 / (1.0 - a) + p);
    rep.aux_gamma = (p / rep.aux_q) * (rep.aux_q - 1.0) / (p - 1.0);
    rep.gradient_bound_violated = st.gradient_bound_violated;
    rep.warnings = st.warnings;
    rep.caveat =
        "smallness constants and the iteration-set radii are not computable; the monitored quantities are "
        "reported, not checked against theoretical bounds";
    IterationResult out;
    out.u = st.u;
    out.report = std::move(rep);
    out.state = std::move(st);
    return out;
}

ContractionSummary contraction_report(const IterationState& state) {
    ContractionSummary s;
    const auto& ledger = state.ledger;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double log_sum = 0.0;
    for (std::size_t k = 1; k < ledger.size(); ++k) {
        const double denom = ledger[k - 1].difference;
        const double floor = 100.0 * eps * std::max(1.0, ledger[k].norms.sobolev);
        if (!(denom > floor)) {
            s.skipped.push_back(ledger[k].iteration);
            continue;
        }
        const double q = ledger[k].difference / denom;
        s.factors.push_back(q);
        s.q_max = std::max(s.q_max, q);
        log_sum += std::log(q);
    }
    s.sufficient = !s.factors.empty();
    if (!s.sufficient) {
        s.note = "insufficient history";
        return s;
    }
    s.q_geometric_mean = std::exp(log_sum / static_cast<double>(s.factors.size()));
    s.expanding = s.q_max >= 1.0;
    if (!s.skipped.empty()) s.note = std::to_string(s.skipped.size()) + " factor(s) skipped at rounding level";
    return s;
}

WillmoreResidual willmore_residual(const ScalarField& u) {
    const GridDomain& d = u.domain();
    const double h = d.h();
    WillmoreResidual r;

    const NodeMask mask = interior_mask(d, kOperatorMargin);
    const ScalarField strong = willmore_operator_divergence(u);
    r.strong = strong.max_abs(&mask);
    r.scale = laplacian(laplacian(u)).max_abs(&mask);

    const ScalarField lap = laplacian(u);
    const VectorField b1 = b1_terms(u);
    const TensorField b2 = b2_terms(u);
    const Point lo = d.polygon().min_corner();
    const Point hi = d.polygon().max_corner();
    const double radius = 0.25 * std::min(hi.x - lo.x, hi.y - lo.y) - 2.0 * h;
    if (radius < 2.0 * h) return r;

    std::vector<double> phi(static_cast<std::size_t>(d.node_count()));
    auto at = [&](int i, int j) { return d.in_grid(i, j) ? phi[static_cast<std::size_t>(d.index(i, j))] : 0.0; };
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            const Point c{lo.x + 0.25 * a * (hi.x - lo.x), lo.y + 0.25 * b * (hi.y - lo.y)};
            if (!d.polygon().contains(c) || d.polygon().distance(c) < radius + 2.0 * h) continue;
            double phi_norm = 0.0;
            for (int n = 0; n < d.node_count(); ++n) {
                const double t2 = norm2(d.point(n) - c) / (radius * radius);
                const double v = t2 < 1.0 ? std::pow(1.0 - t2, 3) : 0.0;
                phi[static_cast<std::size_t>(n)] = v;
                phi_norm += v * v * h * h;
            }
            double sum = 0.0;
            for (int n = 0; n < d.node_count(); ++n) {
                const int i = d.col(n), j = d.row(n);
                const double lp = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (h * h);
                const double px = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
                const double py = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
                const double pxx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (h * h);
                const double pyy = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (h * h);
                const double pxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * h * h);
                if (lp == 0.0 && px == 0.0 && py == 0.0 && pxy == 0.0) continue;
                if (!(lap.defined(n) && b1.x.defined(n) && b2.xx.defined(n)))
                    throw ConfigurationError("weak residual: field undefined inside a test-function support");
                sum += lap[n] * lp + b1.x[n] * px + b1.y[n] * py -
                       (b2.xx[n] * pxx + 2.0 * b2.xy[n] * pxy + b2.yy[n] * pyy);
            }
            r.weak = std::max(r.weak, std::abs(sum * h * h) / std::sqrt(phi_norm));
        }
    }
    return r;
}

}  // namespace willmore
