#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support.hpp"
#include "willmore/biharmonic.hpp"
#include "willmore/boundary.hpp"
#include "willmore/errors.hpp"
#include "willmore/geometry.hpp"

using namespace willmore;
using namespace willmore::testing;
using std::numbers::pi;

namespace {

double sine(Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); }
Vec2 sine_grad(Point p) {
    return {pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
}

ScalarField zero_rhs(DomainPtr d) { return ScalarField(d); }

BoundaryData affine_bc(DomainPtr d, double a, double b, double c) {
    return BoundaryData::from_traces(d, [=](Point p) { return a * p.x + b * p.y + c; },
                                     [=](Point) { return Vec2{a, b}; });
}

double max_active_error(const ScalarField& w, const std::function<double(Point)>& exact) {
    double e = 0.0;
    const GridDomain& d = w.domain();
    for (int n = 0; n < d.node_count(); ++n)
        if (d.active(n)) e = std::max(e, std::abs(w[n] - exact(d.point(n))));
    return e;
}

// Random values on active nodes.
ScalarField noise(DomainPtr d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField f = ScalarField::undefined(d);
    for (int n = 0; n < d->node_count(); ++n)
        if (d->active(n)) f.set(n, U(rng));
    return f;
}

}  // namespace

TEST_CASE("assembly structure") {
    SUBCASE("strip five cells high keeps one row per interior node") {
        const DomainPtr d = GridDomain::create(Polygon::rectangle(0.0, 0.0, 1.0, 5.0 / 16), 1.0 / 16);
        const SparseSystem sys = assemble(d);
        CHECK(sys.rows() == static_cast<int>(d->interior_nodes().size()));
        CHECK(sys.rows() == 15 * 4);
    }
    SUBCASE("thinner strips are rejected") {
        const DomainPtr d = GridDomain::create(Polygon::rectangle(0.0, 0.0, 1.0, 4.0 / 16), 1.0 / 16);
        CHECK_THROWS_AS(assemble(d), ConfigurationError);
    }
    SUBCASE("oblique polygons are rejected") {
        const DomainPtr d = GridDomain::create(Polygon::regular({0.5, 0.5}, 0.5, 7), 1.0 / 32);
        CHECK_THROWS_AS(assemble(d), ConfigurationError);
    }
    SUBCASE("square and L-shape") {
        for (const Polygon& poly : {Polygon::unit_square(), Polygon::l_shape()}) {
            const DomainPtr d = GridDomain::create(poly, 1.0 / 16);
            const SparseSystem sys = assemble(d);
            CHECK(sys.matrix().rows() == sys.matrix().cols());
            CHECK(sys.pattern_symmetric());
            for (int r = 0; r < sys.rows(); ++r) CHECK(sys.matrix().row(r).nonZeros() <= 13);
        }
    }
}

TEST_CASE("stencil annihilates constants") {
    const DomainPtr d = square(8);
    const SparseSystem sys = assemble(d);
    const auto& A = sys.matrix();
    std::vector<double> coupled(static_cast<std::size_t>(sys.rows()), 0.0);
    for (const auto& c : sys.couplings())
        if (c.source == SparseSystem::Coupling::Source::Height) coupled[static_cast<std::size_t>(c.row)] += c.coefficient;
    int pure_rows = 0;
    for (int r = 0; r < sys.rows(); ++r) {
        double sum = 0.0;
        for (SparseSystem::Matrix::InnerIterator it(A, r); it; ++it) sum += it.value();
        CHECK(std::abs(sum + coupled[static_cast<std::size_t>(r)]) < 1e-12);
        if (A.row(r).nonZeros() == 13) {
            CHECK(std::abs(sum) < 1e-12);
            ++pure_rows;
        }
    }
    CHECK(pure_rows == 3 * 3);
}

TEST_CASE("affine data are reproduced") {
    const DomainPtr d = square(64);
    const SparseSystem sys = assemble(d);
    for (const Vec2 c : {Vec2{0.3, -0.2}, Vec2{-1.0, 2.0}, Vec2{0.0, 0.0}}) {
        double residual = 1.0;
        const ScalarField w = solve(sys, zero_rhs(d), affine_bc(d, c.x, c.y, 1.0), &residual);
        CHECK(residual <= kSolveTolerance);
        CHECK(max_active_error(w, [c](Point p) { return c.x * p.x + c.y * p.y + 1.0; }) <= 1e-10);
    }
    const BoundaryData ones = BoundaryData::from_functions(d, [](const BoundarySample&) { return 1.0; },
                                                           [](const BoundarySample&) { return 0.0; });
    CHECK(max_active_error(solve(sys, zero_rhs(d), ones), [](Point) { return 1.0; }) <= 1e-10);

    const DomainPtr l = GridDomain::create(Polygon::l_shape(), 1.0 / 32);
    CHECK(max_active_error(solve(assemble(l), zero_rhs(l), affine_bc(l, 0.5, 0.25, -1.0)),
                           [](Point p) { return 0.5 * p.x + 0.25 * p.y - 1.0; }) <= 1e-10);
}

TEST_CASE("manufactured solution converges at second order") {
    double e[3];
    for (int k = 0; k < 3; ++k) {
        const DomainPtr d = square(16 << k);
        const ScalarField rhs = ScalarField::sample(d, [](Point p) { return 4.0 * std::pow(pi, 4) * sine(p); });
        const ScalarField w = solve(assemble(d), rhs, BoundaryData::from_traces(d, sine, sine_grad));
        e[k] = max_active_error(w, sine);
    }
    for (int k = 0; k < 2; ++k) {
        CHECK(order(e[k], e[k + 1]) >= 1.8);
        CHECK(order(e[k], e[k + 1]) <= 2.5);
    }
}

TEST_CASE("solve is linear") {
    const DomainPtr d = square(32);
    const SparseSystem sys = assemble(d);
    const ScalarField r1 = ScalarField::sample(d, sine);
    const ScalarField r2 = ScalarField::sample(d, [](Point p) { return p.x * p.y; });
    const BoundaryData g1 = preset_boundary(d, BoundaryShape::SineSlope, 1.0);
    const BoundaryData g2 = preset_boundary(d, BoundaryShape::SineHeight, 1.0);
    const double a = 0.7, b = -1.9;
    const ScalarField lhs = solve(sys, a * r1 + b * r2, g1.scaled(a) + g2.scaled(b));
    const ScalarField rhs = a * solve(sys, r1, g1) + b * solve(sys, r2, g2);
    CHECK((lhs - rhs).max_abs() <= 1e-10 * lhs.max_abs());
}

TEST_CASE("divergence right-hand side") {
    const DomainPtr d = square(16);
    const auto constant = [&](double v) { return ScalarField::sample(d, [v](Point) { return v; }); };
    CHECK(divergence_rhs({ScalarField(d), ScalarField(d)}, {ScalarField(d), ScalarField(d), ScalarField(d)}).max_abs() == 0.0);
    const ScalarField c = divergence_rhs({constant(1.5), constant(-2.0)}, {constant(0.3), constant(4.0), constant(-1.0)});
    const NodeMask core = interior_mask(*d, 2);
    CHECK(c.max_abs(&core) < 1e-12);

    SUBCASE("adjoint identities") {
        std::mt19937_64 rng(3);
        const double h = d->h();
        const NodeMask support = interior_mask(*d, 1);
        for (int trial = 0; trial < 20; ++trial) {
            const VectorField h1{noise(d, rng), noise(d, rng)};
            const TensorField h2{noise(d, rng), noise(d, rng), noise(d, rng)};
            ScalarField phi = ScalarField::undefined(d);
            std::uniform_real_distribution<double> U(-1.0, 1.0);
            for (int n = 0; n < d->node_count(); ++n) phi.set(n, support[static_cast<std::size_t>(n)] ? U(rng) : 0.0);

            const ScalarField f1 = divergence_rhs(h1, {ScalarField(d), ScalarField(d), ScalarField(d)});
            const ScalarField f2 = divergence_rhs({ScalarField(d), ScalarField(d)}, h2);
            double lhs1 = 0, rhs1 = 0, lhs2 = 0, rhs2 = 0, mag1 = 0, mag2 = 0;
            for (int n : d->interior_nodes()) {
                lhs1 += phi[n] * f1[n];
                lhs2 += phi[n] * f2[n];
            }
            auto P = [&](int i, int j) { return phi[d->index(i, j)]; };
            for (int n = 0; n < d->node_count(); ++n) {
                if (!d->active(n)) continue;
                const int i = d->col(n), j = d->row(n);
                const double px = (P(i + 1, j) - P(i - 1, j)) / (2 * h);
                const double py = (P(i, j + 1) - P(i, j - 1)) / (2 * h);
                const double pxx = (P(i + 1, j) - 2 * P(i, j) + P(i - 1, j)) / (h * h);
                const double pyy = (P(i, j + 1) - 2 * P(i, j) + P(i, j - 1)) / (h * h);
                const double pxy = (P(i + 1, j + 1) - P(i + 1, j - 1) - P(i - 1, j + 1) + P(i - 1, j - 1)) / (4 * h * h);
                rhs1 -= px * h1.x[n] + py * h1.y[n];
                rhs2 += pxx * h2.xx[n] + 2 * pxy * h2.xy[n] + pyy * h2.yy[n];
                mag1 += std::abs(px * h1.x[n]) + std::abs(py * h1.y[n]);
                mag2 += std::abs(pxx * h2.xx[n]) + 2 * std::abs(pxy * h2.xy[n]) + std::abs(pyy * h2.yy[n]);
            }
            CHECK(std::abs(lhs1 - rhs1) <= 1e-13 * mag1);
            CHECK(std::abs(lhs2 - rhs2) <= 1e-13 * mag2);
        }
    }
}

TEST_CASE("solver diagnostics") {
    const DomainPtr d = square(16);
    const SparseSystem sys = assemble(d);
    const DomainPtr other = square(32);
    CHECK_THROWS_AS(solve(sys, ScalarField(other), BoundaryData::zero(d)), ConfigurationError);
    CHECK_THROWS_AS(max_modulus_ratio(sys, BoundaryData::zero(d)), ParameterError);
}

TEST_CASE("maximum modulus ratio") {
    SUBCASE("affine data give one") {
        const DomainPtr d = square(32);
        CHECK(max_modulus_ratio(assemble(d), affine_bc(d, 0.4, -0.3, 0.0)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("scale invariance and refinement") {
        std::vector<double> ratios;
        for (int n : {32, 64, 128}) {
            const DomainPtr d = square(n);
            const SparseSystem sys = assemble(d);
            const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
            const double r = max_modulus_ratio(sys, bc);
            for (double s : {1e-3, -2.0, 40.0})
                CHECK(std::abs(max_modulus_ratio(sys, bc.scaled(s)) - r) <= 1e-12 * r);
            ratios.push_back(r);
        }
        for (double r : ratios) {
            CHECK(std::isfinite(r));
            CHECK(r > 0.0);
            CHECK(r <= 2.0 * ratios.front());
        }
    }
}
