#include "willmore/field.hpp"

#include <cmath>

#include "willmore/errors.hpp"

namespace willmore {

ScalarField::ScalarField(DomainPtr domain)
    : domain_(std::move(domain)),
      values_(static_cast<std::size_t>(domain_->node_count()), 0.0),
      defined_(static_cast<std::size_t>(domain_->node_count()), 0) {
    for (int n = 0; n < domain_->node_count(); ++n)
        if (domain_->active(n)) defined_[static_cast<std::size_t>(n)] = 1;
}

ScalarField ScalarField::undefined(DomainPtr domain) {
    ScalarField f(std::move(domain));
    std::fill(f.defined_.begin(), f.defined_.end(), 0);
    return f;
}

ScalarField ScalarField::sample(DomainPtr domain, const std::function<double(Point)>& f) {
    ScalarField out = undefined(std::move(domain));
    for (int n = 0; n < out.size(); ++n) {
        const double v = f(out.domain_->point(n));
        if (std::isfinite(v)) out.set(n, v);
    }
    return out;
}

ScalarField ScalarField::restricted(const NodeMask& mask) const {
    ScalarField out = *this;
    for (int n = 0; n < size(); ++n)
        if (!mask[static_cast<std::size_t>(n)]) out.undefine(n);
    return out;
}

double ScalarField::max_abs(const NodeMask* mask) const {
    double m = 0.0;
    for (int n = 0; n < size(); ++n) {
        if (!defined(n) || (mask && !(*mask)[static_cast<std::size_t>(n)])) continue;
        m = std::max(m, std::abs(values_[static_cast<std::size_t>(n)]));
    }
    return m;
}

bool ScalarField::all_finite() const {
    for (int n = 0; n < size(); ++n)
        if (defined(n) && !std::isfinite((*this)[n])) return false;
    return true;
}

ScalarField& ScalarField::operator*=(double s) {
    for (int n = 0; n < size(); ++n)
        if (defined(n)) values_[static_cast<std::size_t>(n)] *= s;
    return *this;
}

namespace {

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
    if (a.domain_ptr() != b.domain_ptr()) throw ConfigurationError("fields live on different grids");
    ScalarField out = ScalarField::undefined(a.domain_ptr());
    for (int n = 0; n < a.size(); ++n)
        if (a.defined(n) && b.defined(n)) out.set(n, op(a[n], b[n]));
    return out;
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField map_fields(std::initializer_list<const ScalarField*> inputs,
                       const std::function<double(std::span<const double>)>& f) {
    const ScalarField& first = **inputs.begin();
    ScalarField out = ScalarField::undefined(first.domain_ptr());
    std::vector<double> args(inputs.size());
    for (int n = 0; n < first.size(); ++n) {
        bool ok = true;
        std::size_t k = 0;
        for (const ScalarField* in : inputs) {
            if (!in->defined(n)) { ok = false; break; }
            args[k++] = (*in)[n];
        }
        if (ok) out.set(n, f(args));
    }
    return out;
}

std::optional<double> interpolate(const QuadratureCell& cell, const ScalarField& f) {
    double acc = 0.0, wsum = 0.0;
    for (int c = 0; c < 4; ++c) {
        const int node = cell.corners[static_cast<std::size_t>(c)];
        if (!f.defined(node)) continue;
        acc += cell.weights[static_cast<std::size_t>(c)] * f[node];
        wsum += cell.weights[static_cast<std::size_t>(c)];
    }
    if (wsum <= 0.0) {
        // Quadrature point on the far side of a zero-weight corner set.
        int cnt = 0;
        for (int node : cell.corners)
            if (f.defined(node)) { acc += f[node]; ++cnt; }
        if (cnt == 0) return std::nullopt;
        return acc / cnt;
    }
    return acc / wsum;
}

double integrate(const ScalarField& f) {
    double total = 0.0;
    for (const QuadratureCell& cell : f.domain().quadrature()) {
        const auto v = interpolate(cell, f);
        if (!v) throw ConfigurationError("integrand undefined on a quadrature cell");
        total += cell.area * *v;
    }
    return total;
}

NodeMask interior_mask(const GridDomain& domain, int margin) {
    NodeMask mask(static_cast<std::size_t>(domain.node_count()), 0);
    for (int j = 0; j < domain.ny(); ++j) {
        for (int i = 0; i < domain.nx(); ++i) {
            bool ok = true;
            for (int dj = -margin; dj <= margin && ok; ++dj)
                for (int di = -margin; di <= margin && ok; ++di)
                    ok = domain.in_grid(i + di, j + dj) && domain.active(domain.index(i + di, j + dj));
            mask[static_cast<std::size_t>(domain.index(i, j))] = ok ? 1 : 0;
        }
    }
    return mask;
}

}  // namespace willmore
