#include "willmore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

namespace pointwise {

double area_element(Vec2 grad) { return std::sqrt(1.0 + norm2(grad)); }

double mean_curvature(const Jet& jet) {
    const double q = area_element(jet.grad);
    return jet.hess.trace() / q - dot(jet.grad, jet.hess.apply(jet.grad)) / (q * q * q);
}

double gauss_curvature(const Jet& jet) {
    const double q2 = 1.0 + norm2(jet.grad);
    return jet.hess.det() / (q2 * q2);
}

Vec2 b1(const Jet& jet) {
    const Vec2 g = jet.grad;
    const double q = area_element(g);
    const double q2 = q * q;
    const double h = mean_curvature(jet);
    const double lap = jet.hess.trace();
    const Vec2 c = (2.5 * h * h / q - 2.0 * lap * h / q2) * g + (2.0 * h / q2) * jet.hess.apply(g);
    return -c;
}

Sym2 b2(const Jet& jet) {
    const Vec2 g = jet.grad;
    const double q = area_element(g);
    const double h = mean_curvature(jet);
    const double a = norm2(g) * jet.hess.trace() / (q * (1.0 + q)) + dot(g, jet.hess.apply(g)) / (q * q * q);
    const double s = h / (q * q);
    return {a + s * g.x * g.x, s * g.x * g.y, a + s * g.y * g.y};
}

}  // namespace pointwise

namespace {

struct Stride {
    int di;
    int dj;
};

Stride stride(Axis a) { return a == Axis::X ? Stride{1, 0} : Stride{0, 1}; }

/// Reads f at node (i + k*di, j + k*dj), nullptr-style miss when undefined.
struct Probe {
    const ScalarField& f;
    const GridDomain& d;
    int i;
    int j;
    Stride s;

    bool has(int k) const {
        const int ii = i + k * s.di;
        const int jj = j + k * s.dj;
        return d.in_grid(ii, jj) && f.defined(d.index(ii, jj));
    }
    double at(int k) const { return f[d.index(i + k * s.di, j + k * s.dj)]; }
};

void require_active(const ScalarField& input, const ScalarField& result, const char* what) {
    const GridDomain& d = input.domain();
    for (int n = 0; n < d.node_count(); ++n) {
        if (!d.active(n) || !input.defined(n)) continue;
        if (!result.defined(n))
            throw ConfigurationError(std::string("domain too thin for the ") + what +
                                     " stencil (fewer than 5 nodes across) at node (" +
                                     std::to_string(d.col(n)) + ", " + std::to_string(d.row(n)) + ")");
    }
}

// Width along an axis: the longest run of active nodes on any grid line in
// that direction. Staircase rims of oblique domains have short runs, so the
// per-line minimum is only meaningful for grid-aligned polygons.
int longest_run(const GridDomain& d, bool horizontal) {
    int best = 0;
    const int outer = horizontal ? d.ny() : d.nx();
    const int inner = horizontal ? d.nx() : d.ny();
    for (int a = 0; a < outer; ++a) {
        int run = 0;
        for (int b = 0; b < inner; ++b) {
            run = d.active(horizontal ? d.index(b, a) : d.index(a, b)) ? run + 1 : 0;
            best = std::max(best, run);
        }
    }
    return best;
}

void require_width(const GridDomain& d) {
    const int across = d.grid_aligned() ? d.narrowest_run() : std::min(longest_run(d, true), longest_run(d, false));
    if (across < 5)
        throw ConfigurationError("domain too thin for the stencil: " + std::to_string(across) +
                                 " nodes across, need at least 5");
}

Jet jet_at(const VectorField& g, const TensorField& hs, int n) {
    return {{g.x[n], g.y[n]}, {hs.xx[n], hs.xy[n], hs.yy[n]}};
}

bool jet_defined(const VectorField& g, const TensorField& hs, int n) {
    return g.x.defined(n) && g.y.defined(n) && hs.xx.defined(n) && hs.xy.defined(n) && hs.yy.defined(n);
}

template <class Fn>
ScalarField from_jets(const ScalarField& u, Fn fn) {
    const VectorField g = gradient(u);
    const TensorField hs = hessian(u);
    ScalarField out = ScalarField::undefined(u.domain_ptr());
    for (int n = 0; n < u.size(); ++n)
        if (jet_defined(g, hs, n)) out.set(n, fn(jet_at(g, hs, n)));
    return out;
}

}  // namespace

ScalarField derivative(const ScalarField& f, Axis axis) {
    const GridDomain& d = f.domain();
    const double h = d.h();
    ScalarField out = ScalarField::undefined(f.domain_ptr());
    for (int j = 0; j < d.ny(); ++j) {
        for (int i = 0; i < d.nx(); ++i) {
            const Probe p{f, d, i, j, stride(axis)};
            if (!p.has(0)) continue;
            const int n = d.index(i, j);
            if (p.has(-1) && p.has(1))
                out.set(n, (p.at(1) - p.at(-1)) / (2.0 * h));
            else if (p.has(1) && p.has(2))
                out.set(n, (-3.0 * p.at(0) + 4.0 * p.at(1) - p.at(2)) / (2.0 * h));
            else if (p.has(-1) && p.has(-2))
                out.set(n, (3.0 * p.at(0) - 4.0 * p.at(-1) + p.at(-2)) / (2.0 * h));
        }
    }
    return out;
}

ScalarField second_derivative(const ScalarField& f, Axis axis) {
    const GridDomain& d = f.domain();
    const double h2 = d.h() * d.h();
    ScalarField out = ScalarField::undefined(f.domain_ptr());
    for (int j = 0; j < d.ny(); ++j) {
        for (int i = 0; i < d.nx(); ++i) {
            const Probe p{f, d, i, j, stride(axis)};
            if (!p.has(0)) continue;
            const int n = d.index(i, j);
            if (p.has(-1) && p.has(1))
                out.set(n, (p.at(1) - 2.0 * p.at(0) + p.at(-1)) / h2);
            else if (p.has(1) && p.has(2) && p.has(3))
                out.set(n, (2.0 * p.at(0) - 5.0 * p.at(1) + 4.0 * p.at(2) - p.at(3)) / h2);
            else if (p.has(-1) && p.has(-2) && p.has(-3))
                out.set(n, (2.0 * p.at(0) - 5.0 * p.at(-1) + 4.0 * p.at(-2) - p.at(-3)) / h2);
        }
    }
    return out;
}

ScalarField mixed_derivative(const ScalarField& f) {
    const ScalarField yx = derivative(derivative(f, Axis::X), Axis::Y);
    const ScalarField xy = derivative(derivative(f, Axis::Y), Axis::X);
    return map_fields({&yx, &xy}, [](std::span<const double> v) { return 0.5 * (v[0] + v[1]); });
}

ScalarField laplacian(const ScalarField& f) {
    return second_derivative(f, Axis::X) + second_derivative(f, Axis::Y);
}

ScalarField divergence(const VectorField& v) {
    return derivative(v.x, Axis::X) + derivative(v.y, Axis::Y);
}

ScalarField double_divergence(const TensorField& t) {
    const ScalarField xx = second_derivative(t.xx, Axis::X);
    const ScalarField xy = mixed_derivative(t.xy);
    const ScalarField yy = second_derivative(t.yy, Axis::Y);
    return map_fields({&xx, &xy, &yy}, [](std::span<const double> v) { return v[0] + 2.0 * v[1] + v[2]; });
}

VectorField gradient(const ScalarField& u) {
    require_width(u.domain());
    VectorField g{derivative(u, Axis::X), derivative(u, Axis::Y)};
    require_active(u, g.x, "gradient");
    require_active(u, g.y, "gradient");
    return g;
}

TensorField hessian(const ScalarField& u) {
    require_width(u.domain());
    TensorField t{second_derivative(u, Axis::X), mixed_derivative(u), second_derivative(u, Axis::Y)};
    require_active(u, t.xx, "hessian");
    require_active(u, t.xy, "hessian");
    require_active(u, t.yy, "hessian");
    return t;
}

ScalarField area_element(const ScalarField& u) {
    const VectorField g = gradient(u);
    return map_fields({&g.x, &g.y}, [](std::span<const double> v) { return pointwise::area_element({v[0], v[1]}); });
}

ScalarField mean_curvature(const ScalarField& u) {
    return from_jets(u, [](const Jet& j) { return pointwise::mean_curvature(j); });
}

ScalarField gauss_curvature(const ScalarField& u) {
    return from_jets(u, [](const Jet& j) { return pointwise::gauss_curvature(j); });
}

VectorField b1_terms(const ScalarField& u) {
    const VectorField g = gradient(u);
    const TensorField hs = hessian(u);
    VectorField out{ScalarField::undefined(u.domain_ptr()), ScalarField::undefined(u.domain_ptr())};
    for (int n = 0; n < u.size(); ++n) {
        if (!jet_defined(g, hs, n)) continue;
        const Vec2 b = pointwise::b1(jet_at(g, hs, n));
        out.x.set(n, b.x);
        out.y.set(n, b.y);
    }
    return out;
}

TensorField b2_terms(const ScalarField& u) {
    const VectorField g = gradient(u);
    const TensorField hs = hessian(u);
    TensorField out{ScalarField::undefined(u.domain_ptr()), ScalarField::undefined(u.domain_ptr()),
                    ScalarField::undefined(u.domain_ptr())};
    for (int n = 0; n < u.size(); ++n) {
        if (!jet_defined(g, hs, n)) continue;
        const Sym2 b = pointwise::b2(jet_at(g, hs, n));
        out.xx.set(n, b.xx);
        out.xy.set(n, b.xy);
        out.yy.set(n, b.yy);
    }
    return out;
}

ScalarField willmore_operator_divergence(const ScalarField& u, int margin) {
    const ScalarField bih = laplacian(laplacian(u));
    const ScalarField d1 = divergence(b1_terms(u));
    const ScalarField d2 = double_divergence(b2_terms(u));
    return (bih - d1 - d2).restricted(interior_mask(u.domain(), margin));
}

ScalarField willmore_operator_geometric(const ScalarField& u, int margin) {
    const VectorField g = gradient(u);
    const ScalarField q = area_element(u);
    const ScalarField h = mean_curvature(u);
    const ScalarField qh = map_fields({&q, &h}, [](std::span<const double> v) { return v[0] * v[1]; });
    const ScalarField dqx = derivative(qh, Axis::X);
    const ScalarField dqy = derivative(qh, Axis::Y);
    VectorField flux{ScalarField::undefined(u.domain_ptr()), ScalarField::undefined(u.domain_ptr())};
    for (int n = 0; n < u.size(); ++n) {
        if (!(g.x.defined(n) && g.y.defined(n) && h.defined(n) && dqx.defined(n) && dqy.defined(n))) continue;
        const Vec2 gu{g.x[n], g.y[n]};
        const Vec2 dq{dqx[n], dqy[n]};
        const double qn = q[n];
        const Vec2 proj = dq - (dot(gu, dq) / (qn * qn)) * gu;
        const Vec2 f = proj / qn - (h[n] * h[n] / (2.0 * qn)) * gu;
        flux.x.set(n, f.x);
        flux.y.set(n, f.y);
    }
    return divergence(flux).restricted(interior_mask(u.domain(), margin));
}

ScalarField willmore_operator_intrinsic(const ScalarField& u, int margin) {
    const VectorField g = gradient(u);
    const ScalarField q = area_element(u);
    const ScalarField h = mean_curvature(u);
    const ScalarField k = gauss_curvature(u);
    const ScalarField hx = derivative(h, Axis::X);
    const ScalarField hy = derivative(h, Axis::Y);
    VectorField flux{ScalarField::undefined(u.domain_ptr()), ScalarField::undefined(u.domain_ptr())};
    for (int n = 0; n < u.size(); ++n) {
        if (!(g.x.defined(n) && hx.defined(n) && hy.defined(n) && q.defined(n))) continue;
        const Vec2 gu{g.x[n], g.y[n]};
        const Vec2 dh{hx[n], hy[n]};
        const double qn = q[n];
        // Q g^{-1} grad H with g^{-1} = I - grad u (x) grad u / Q^2.
        const Vec2 f = qn * (dh - (dot(gu, dh) / (qn * qn)) * gu);
        flux.x.set(n, f.x);
        flux.y.set(n, f.y);
    }
    const ScalarField div = divergence(flux);
    const ScalarField out = map_fields({&div, &q, &h, &k}, [](std::span<const double> v) {
        const double hh = v[2];
        return v[0] / v[1] + 0.5 * hh * hh * hh - 2.0 * hh * v[3];
    });
    return out.restricted(interior_mask(u.domain(), margin));
}

double willmore_energy(const ScalarField& u) {
    const ScalarField q = area_element(u);
    const ScalarField h = mean_curvature(u);
    return integrate(map_fields({&q, &h}, [](std::span<const double> v) { return 0.25 * v[1] * v[1] * v[0]; }));
}

double conformal_energy(const ScalarField& u) {
    const ScalarField q = area_element(u);
    const ScalarField h = mean_curvature(u);
    const ScalarField k = gauss_curvature(u);
    return integrate(map_fields({&q, &h, &k}, [](std::span<const double> v) {
        return (0.25 * v[1] * v[1] - v[2]) * v[0];
    }));
}

}  // namespace willmore
