#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "willmore/field.hpp"
#include "willmore/grid.hpp"
#include "willmore/polygon.hpp"

namespace willmore::testing {

inline DomainPtr square(int n) { return GridDomain::create(Polygon::unit_square(), 1.0 / n); }

/// Rounding floor of a fourth-order difference composite: each level of
/// differencing divides the absolute rounding error by h^2.
inline double fourth_order_rounding(double h, double scale) {
    return 1e2 * std::numeric_limits<double>::epsilon() * scale / (h * h * h * h);
}

/// max |f - exact| over nodes where f is defined and, if given, the mask is set.
inline double max_error(const ScalarField& f, const std::function<double(Point)>& exact,
                        const NodeMask* mask = nullptr) {
    double e = 0.0;
    const GridDomain& d = f.domain();
    for (int n = 0; n < d.node_count(); ++n) {
        if (!f.defined(n) || !d.active(n)) continue;
        if (mask && !(*mask)[static_cast<std::size_t>(n)]) continue;
        e = std::max(e, std::abs(f[n] - exact(d.point(n))));
    }
    return e;
}

inline int node_at(const GridDomain& d, Point p) {
    for (int n = 0; n < d.node_count(); ++n)
        if (norm(d.point(n) - p) < 1e-9 * d.h()) return n;
    return -1;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

/// Smooth random field: a few low-frequency trigonometric modes.
inline ScalarField random_field(DomainPtr d, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double c[4][4];
    for (auto& row : c)
        for (double& v : row) v = u(rng);
    return ScalarField::sample(d, [=](Point p) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += c[i][j] * std::cos(i * 1.3 * p.x + 0.4 * i) * std::sin(j * 1.1 * p.y + 0.7) / (1 + i + j);
        return amplitude * s;
    });
}

}  // namespace willmore::testing
