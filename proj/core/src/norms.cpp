#include "willmore/norms.hpp"

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

// Derivative at 0 of the quadratic (or linear) interpolant through (x_k, f_k), x_0 = 0.
double lagrange_slope(std::span<const double> x, std::span<const double> f) {
    if (x.size() == 2) return (f[1] - f[0]) / x[1];
    const double x1 = x[1], x2 = x[2];
    return f[0] * (-1.0 / x1 - 1.0 / x2) + f[1] * (-x2 / (x1 * (x1 - x2))) + f[2] * (-x1 / (x2 * (x2 - x1)));
}

double panel_cutoff(const std::vector<BoundarySample>& trace) {
    double longest = 0.0;
    const std::size_t m = trace.size();
    for (std::size_t k = 0; k < m; ++k)
        longest = std::max(longest, norm(trace[(k + 1) % m].position - trace[k].position));
    return longest * (1.0 - 1e-9);
}

template <class Diff>
double pair_sum(const std::vector<BoundarySample>& trace, double s, double p, Diff diff) {
    const double cutoff = panel_cutoff(trace);
    const double power = 1.0 + s * p;
    const std::size_t m = trace.size();
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double r = norm(trace[i].position - trace[j].position);
            if (r < cutoff) continue;
            const double df = diff(i, j);
            if (df == 0.0) continue;
            row += std::pow(df, p) / std::pow(r, power) * trace[j].weight;
        }
        total += row * trace[i].weight;
    }
    return std::pow(total, 1.0 / p);
}

void check_besov_params(double s, double p) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("Besov smoothness s must lie in (0, 1), got " + fmt(s));
    if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("Besov exponent p must lie in (1, inf), got " + fmt(p));
}

}  // namespace

NormParams NormParams::make(double p, double a) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must lie in (1, inf), got " + fmt(p));
    if (!(a > -1.0 / p && a < 1.0 - 1.0 / p))
        throw ParameterError("a must lie in (-1/p, 1 - 1/p) = (" + fmt(-1.0 / p) + ", " + fmt(1.0 - 1.0 / p) +
                             "), got " + fmt(a));
    return {p, a, 1.0 - a - 1.0 / p};
}

DistanceField::DistanceField(DomainPtr domain) : domain_(std::move(domain)) {
    const GridDomain& d = *domain_;
    values_.resize(static_cast<std::size_t>(d.node_count()));
    for (int n = 0; n < d.node_count(); ++n)
        values_[static_cast<std::size_t>(n)] = d.on_polygon(n) ? 0.0 : d.polygon().distance(d.point(n));
}

double DistanceField::at(Point p) const { return domain_->polygon().distance(p); }

DistanceField distance_field(DomainPtr domain) { return DistanceField(std::move(domain)); }

namespace {

// Quadrature values |f| at cell centroids with their weights d^beta * area.
struct WeightedSamples {
    std::vector<double> values;
    std::vector<double> weights;
    double max = 0.0;
};

WeightedSamples weighted_samples(const ScalarField& f, double beta, const DistanceField& d) {
    WeightedSamples out;
    for (const QuadratureCell& cell : f.domain().quadrature()) {
        const auto v = interpolate(cell, f);
        if (!v) continue;
        const double dc = d.at(cell.centroid);
        if (dc <= 0.0) continue;
        out.values.push_back(std::abs(*v));
        out.weights.push_back((beta == 0.0 ? 1.0 : std::pow(dc, beta)) * cell.area);
        out.max = std::max(out.max, std::abs(*v));
    }
    return out;
}

// Sum of (|f| / scale)^p * weight. Dividing by the largest value first keeps
// the norms exactly homogeneous under power-of-two scalings and avoids
// overflow for large p.
double scaled_power_sum(const WeightedSamples& s, double p, double scale) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) sum += std::pow(s.values[i] / scale, p) * s.weights[i];
    return sum;
}

}  // namespace

double weighted_lp_norm(const ScalarField& f, double p, double beta, const DistanceField& d) {
    if (!(beta > -1.0)) throw ParameterError("weight power must exceed -1 for integrability, got " + fmt(beta));
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("Lebesgue exponent must be in [1, inf), got " + fmt(p));
    const WeightedSamples s = weighted_samples(f, beta, d);
    if (s.max == 0.0) return 0.0;
    return s.max * std::pow(scaled_power_sum(s, p, s.max), 1.0 / p);
}

double weighted_sobolev_norm(const ScalarField& u, int m, const NormParams& params, const DistanceField& d) {
    if (m < 0 || m > 2) throw ParameterError("weighted Sobolev order must be 0, 1, or 2, got " + std::to_string(m));
    const double p = params.p;
    const double beta = params.a * p;
    std::vector<WeightedSamples> parts;
    parts.push_back(weighted_samples(u, beta, d));
    if (m >= 1) {
        const VectorField g = gradient(u);
        parts.push_back(weighted_samples(g.x, beta, d));
        parts.push_back(weighted_samples(g.y, beta, d));
    }
    if (m >= 2) {
        const TensorField t = hessian(u);
        parts.push_back(weighted_samples(t.xx, beta, d));
        parts.push_back(weighted_samples(t.xy, beta, d));
        parts.push_back(weighted_samples(t.yy, beta, d));
    }
    double scale = 0.0;
    for (const auto& s : parts) scale = std::max(scale, s.max);
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& s : parts) sum += scaled_power_sum(s, p, scale);
    return scale * std::pow(sum, 1.0 / p);
}

TangentialGradient tangential_gradient(const BoundaryData& bc) {
    const auto& trace = bc.domain().trace();
    const std::size_t m = trace.size();
    if (m < 4) throw ParameterError("tangential gradient needs at least 4 boundary samples");
    const auto g0 = bc.g0();
    const double length = bc.domain().perimeter();
    auto offset = [&](std::size_t from, std::size_t to, int direction) {
        double ds = trace[to].arclength - trace[from].arclength;
        if (direction > 0 && ds <= 0.0) ds += length;
        if (direction < 0 && ds >= 0.0) ds -= length;
        return ds;
    };

    TangentialGradient out;
    out.values.resize(m);
    out.incoming.resize(m);
    out.corner.assign(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t prev = (k + m - 1) % m;
        const std::size_t next = (k + 1) % m;
        if (!trace[k].corner) {
            const double x[3] = {0.0, offset(k, prev, -1), offset(k, next, 1)};
            const double f[3] = {g0[k], g0[prev], g0[next]};
            out.values[k] = out.incoming[k] = lagrange_slope(x, f);
            continue;
        }
        out.corner[k] = 1;
        // Outgoing edge: k, k+1 and, if still on the same line, k+2.
        {
            const std::size_t n2 = (k + 2) % m;
            const bool third = trace[next].edge == trace[k].edge && !trace[next].corner;
            if (third) {
                const double x[3] = {0.0, offset(k, next, 1), offset(k, n2, 1)};
                const double f[3] = {g0[k], g0[next], g0[n2]};
                out.values[k] = lagrange_slope(x, f);
            } else {
                const double x[2] = {0.0, offset(k, next, 1)};
                const double f[2] = {g0[k], g0[next]};
                out.values[k] = lagrange_slope(x, f);
            }
        }
        // Incoming edge: k, k-1 and, if k-1 is not itself a vertex, k-2.
        {
            const std::size_t p2 = (k + m - 2) % m;
            const bool third = trace[prev].edge == trace[p2].edge;
            if (third) {
                const double x[3] = {0.0, offset(k, prev, -1), offset(k, p2, -1)};
                const double f[3] = {g0[k], g0[prev], g0[p2]};
                out.incoming[k] = lagrange_slope(x, f);
            } else {
                const double x[2] = {0.0, offset(k, prev, -1)};
                const double f[2] = {g0[k], g0[prev]};
                out.incoming[k] = lagrange_slope(x, f);
            }
        }
    }
    return out;
}

std::vector<Vec2> boundary_gradient(const BoundaryData& bc) {
    const auto& trace = bc.domain().trace();
    const std::size_t m = trace.size();
    const TangentialGradient tg = tangential_gradient(bc);
    const auto g1 = bc.g1();
    std::vector<Vec2> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        const BoundarySample& smp = trace[k];
        if (!tg.corner[k]) {
            out[k] = g1[k] * smp.normal + tg.values[k] * smp.tangent;
            continue;
        }
        const Vec2 t_in = trace[(k + m - 1) % m].tangent;
        const Vec2 rows[3] = {smp.tangent, t_in, smp.normal};
        const double rhs[3] = {tg.values[k], tg.incoming[k], g1[k]};
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (int r = 0; r < 3; ++r) {
            a11 += rows[r].x * rows[r].x;
            a12 += rows[r].x * rows[r].y;
            a22 += rows[r].y * rows[r].y;
            b1 += rows[r].x * rhs[r];
            b2 += rows[r].y * rhs[r];
        }
        const double det = a11 * a22 - a12 * a12;
        out[k] = {(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
    }
    return out;
}

double boundary_gradient_sup(const BoundaryData& bc) {
    double sup = 0.0;
    for (const Vec2 v : boundary_gradient(bc)) sup = std::max(sup, norm(v));
    return sup;
}

double besov_seminorm(const std::vector<BoundarySample>& trace, std::span<const double> f, double s, double p) {
    check_besov_params(s, p);
    return pair_sum(trace, s, p, [&](std::size_t i, std::size_t j) { return std::abs(f[i] - f[j]); });
}

double besov_seminorm(const std::vector<BoundarySample>& trace, std::span<const Vec2> f, double s, double p) {
    check_besov_params(s, p);
    return pair_sum(trace, s, p, [&](std::size_t i, std::size_t j) { return norm(f[i] - f[j]); });
}

double besov_norm(const std::vector<BoundarySample>& trace, std::span<const double> f, double s, double p) {
    double lp = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) lp += std::pow(std::abs(f[k]), p) * trace[k].weight;
    return std::pow(lp, 1.0 / p) + besov_seminorm(trace, f, s, p);
}

double besov_norm(const std::vector<BoundarySample>& trace, std::span<const Vec2> f, double s, double p) {
    double lp = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) lp += std::pow(norm(f[k]), p) * trace[k].weight;
    return std::pow(lp, 1.0 / p) + besov_seminorm(trace, f, s, p);
}

TraceNorm dirichlet_trace_norm(const BoundaryData& bc, const NormParams& params) {
    const auto& trace = bc.domain().trace();
    const std::vector<Vec2> grad = boundary_gradient(bc);
    TraceNorm out;
    out.height = besov_norm(trace, bc.g0(), params.s, params.p);
    out.gradient = besov_norm(trace, std::span<const Vec2>(grad), params.s, params.p);
    out.total = out.height + out.gradient;
    for (const Vec2 v : grad) out.gradient_sup = std::max(out.gradient_sup, norm(v));
    return out;
}

double holder_norm(const std::vector<BoundarySample>& trace, std::span<const double> f, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("Hoelder exponent must lie in (0, 1], got " + fmt(alpha));
    double sup = 0.0;
    double quotient = 0.0;
    const std::size_t m = trace.size();
    for (std::size_t i = 0; i < m; ++i) {
        sup = std::max(sup, std::abs(f[i]));
        for (std::size_t j = i + 1; j < m; ++j) {
            const double r = norm(trace[i].position - trace[j].position);
            if (r <= 0.0) continue;
            quotient = std::max(quotient, std::abs(f[i] - f[j]) / std::pow(r, alpha));
        }
    }
    return sup + quotient;
}

ValidityReport parameter_check(double p, double a, double lipschitz) {
    ValidityReport r;
    r.p = p;
    r.a = a;
    r.lipschitz = lipschitz;
    r.s = 1.0 - a - 1.0 / p;
    const bool finite = std::isfinite(p) && std::isfinite(a);
    r.basic_range = finite && p > 1.0 && a > -1.0 / p && a < 1.0 - 1.0 / p;

    RegimeCheck& fp = r.fixed_point;
    fp.name = "weighted fixed point: p in (2, inf), a in (0, 1 - 2/p)";
    fp.satisfied = true;
    if (!(finite && p > 2.0)) {
        fp.satisfied = false;
        fp.reasons.push_back("p = " + fmt(p) + " violates p in (2, inf)");
    }
    if (!(a > 0.0)) {
        fp.satisfied = false;
        fp.reasons.push_back("a = " + fmt(a) + " violates a > 0");
    }
    if (!(a < 1.0 - 2.0 / p)) {
        fp.satisfied = false;
        fp.reasons.push_back("a = " + fmt(a) + " violates a < 1 - 2/p = " + fmt(1.0 - 2.0 / p));
    }
    fp.reasons.push_back("the normal-vector oscillation condition on the boundary is not checkable from samples");

    RegimeCheck& lip = r.small_lipschitz;
    lip.name = "Lipschitz domain: p in (2, 2 + C(M)), a in (0, 1 - 2/p) and a < C(M)";
    lip.checkable = false;
    lip.satisfied = fp.satisfied;
    lip.reasons.push_back("C(M) for M = " + fmt(lipschitz) +
                          " is unknown: require p in (2, 2 + C(M)) and a < C(M), not checkable");
    if (!fp.satisfied) lip.reasons.push_back("necessary conditions p > 2 and 0 < a < 1 - 2/p fail");

    RegimeCheck& hol = r.holder;
    hol.name = "Hoelder data: 1/p < min(s, 1 - s), data exponent > s, solution exponent s - 1/p";
    hol.satisfied = finite && p > 2.0 && 1.0 / p < std::min(r.s, 1.0 - r.s);
    if (!hol.satisfied) {
        hol.reasons.push_back("1/p = " + fmt(1.0 / p) + " is not below min(s, 1 - s) = " + fmt(std::min(r.s, 1.0 - r.s)));
    } else {
        hol.reasons.push_back("boundary data in C^(1+alpha) with alpha > " + fmt(r.s) + " give a solution in C^(1+" +
                              fmt(r.s - 1.0 / p) + ")");
    }
    if (lipschitz > 0.0) {
        hol.satisfied = false;
        hol.reasons.push_back("boundary must be C^(1+alpha); a polygon with Lipschitz constant " + fmt(lipschitz) +
                              " has corners");
    }
    return r;
}

}  // namespace willmore
