#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "willmore/biharmonic.hpp"
#include "willmore/boundary.hpp"
#include "willmore/errors.hpp"
#include "willmore/fixed_point.hpp"
#include "willmore/geometry.hpp"
#include "willmore/norms.hpp"

using namespace willmore;
using namespace willmore::testing;

namespace {

BoundaryData affine_bc(DomainPtr d) {
    return BoundaryData::from_traces(d, [](Point p) { return 0.3 * p.x - 0.2 * p.y + 1.0; },
                                     [](Point) { return Vec2{0.3, -0.2}; });
}

double affine(Point p) { return 0.3 * p.x - 0.2 * p.y + 1.0; }

double active_gap(const ScalarField& a, const ScalarField& b) {
    double e = 0.0;
    const GridDomain& d = a.domain();
    for (int n = 0; n < d.node_count(); ++n)
        if (d.active(n)) e = std::max(e, std::abs(a[n] - b[n]));
    return e;
}

}  // namespace

TEST_CASE("configuration validation lists every problem") {
    IterationConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tolerance = 0.0;
    cfg.damping = 1.5;
    cfg.max_iterations = 0;
    try {
        cfg.validate();
        FAIL("expected a configuration error");
    } catch (const ConfigurationError& e) {
        CHECK(e.problems().size() == 3);
    }
    IterationConfig bad_norm;
    bad_norm.norm = NormParams::make(3.0, 0.4);
    CHECK_THROWS_AS(bad_norm.validate(), ConfigurationError);
    IterationConfig no_guess;
    no_guess.initial = InitialGuess::User;
    CHECK_THROWS_AS(no_guess.validate(), ConfigurationError);
}

TEST_CASE("iteration map on affine data") {
    const DomainPtr d = square(32);
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = affine_bc(d);
    const IterationConfig cfg;
    const ScalarField v = ScalarField::sample(d, affine);
    CHECK(active_gap(apply_G(sys, v, bc, cfg), v) <= 1e-10);
    CHECK(active_gap(apply_G(sys, ScalarField(d), bc, cfg), v) <= 1e-10);
}

TEST_CASE("iteration map at zero is the homogeneous solve") {
    const DomainPtr d = square(32);
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
    const ScalarField g = apply_G(sys, ScalarField(d), bc, IterationConfig{});
    const ScalarField w = solve(sys, ScalarField(d), bc);
    for (int n = 0; n < d->node_count(); ++n)
        if (d->active(n)) REQUIRE(g[n] == w[n]);
}

TEST_CASE("iteration map warns above unit slope") {
    const DomainPtr d = square(16);
    const SparseSystem sys = assemble(d);
    std::vector<std::string> warnings;
    apply_G(sys, ScalarField::sample(d, [](Point p) { return 2.0 * p.x; }), BoundaryData::zero(d), IterationConfig{},
            &warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("trivial runs converge in one step") {
    const DomainPtr d = square(64);
    const IterationConfig cfg;
    const IterationResult a = iterate(affine_bc(d), cfg);
    CHECK(a.report.outcome == Outcome::Converged);
    CHECK(a.report.iterations == 1);
    CHECK(a.report.final_difference <= cfg.tolerance);
    CHECK(active_gap(a.u, ScalarField::sample(d, affine)) <= 1e-8);
    CHECK_FALSE(a.report.contraction.sufficient);
    CHECK(a.report.contraction.note == "insufficient history");

    const IterationResult z = iterate(BoundaryData::zero(d), cfg);
    CHECK(z.report.outcome == Outcome::Converged);
    CHECK(z.report.iterations == 1);
    CHECK(z.u.max_abs() == 0.0);
}

TEST_CASE("ledger and auxiliary exponents") {
    const DomainPtr d = square(32);
    const IterationResult r = iterate(preset_boundary(d, BoundaryShape::SineSlope, 0.05), IterationConfig{});
    CHECK(static_cast<int>(r.report.ledger.size()) == r.report.iterations);
    for (const LedgerEntry& e : r.report.ledger) {
        CHECK(std::isfinite(e.norms.gradient_sup));
        CHECK(std::isfinite(e.norms.hessian_l1));
        CHECK(std::isfinite(e.norms.sobolev));
    }
    CHECK(r.report.aux_q == doctest::Approx(10.0 / 3.0));
    CHECK(r.report.aux_gamma == doctest::Approx(14.0 / 15.0));
    CHECK_FALSE(r.report.caveat.empty());
}

TEST_CASE("small-data family") {
    const DomainPtr d = square(64);
    const SparseSystem sys = assemble(d);
    const IterationConfig cfg;
    double last_gradient = 0.0;
    double gm_small = 0.0, gm_large = 0.0;
    for (double eps : {0.01, 0.05, 0.1}) {
        const IterationResult r = iterate(sys, preset_boundary(d, BoundaryShape::SineSlope, eps), cfg);
        REQUIRE(r.report.outcome == Outcome::Converged);
        const double g = r.report.ledger.back().norms.gradient_sup;
        CHECK(g > last_gradient);
        last_gradient = g;
        REQUIRE(r.report.contraction.sufficient);
        for (double q : r.report.contraction.factors) CHECK(q < 1.0);
        if (eps == 0.01) gm_small = r.report.contraction.q_geometric_mean;
        if (eps == 0.1) gm_large = r.report.contraction.q_geometric_mean;

        // Fixed-point consistency: one more application moves u by less than tol.
        const ScalarField again = apply_G(sys, r.u, preset_boundary(d, BoundaryShape::SineSlope, eps), cfg);
        const DistanceField dist(d);
        CHECK(weighted_sobolev_norm(again - r.u, 2, cfg.norm, dist) <= cfg.tolerance);
    }
    CHECK(gm_small < gm_large);
}

TEST_CASE("translation equivariance in height") {
    const DomainPtr d = square(32);
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
    const IterationResult a = iterate(sys, bc, IterationConfig{});
    const IterationResult b = iterate(sys, bc.shifted(2.5), IterationConfig{});
    REQUIRE(a.report.outcome == Outcome::Converged);
    REQUIRE(b.report.outcome == Outcome::Converged);
    double e = 0.0;
    for (int n = 0; n < d->node_count(); ++n)
        if (d->active(n)) e = std::max(e, std::abs(b.u[n] - a.u[n] - 2.5));
    CHECK(e <= 1e-9);
}

TEST_CASE("damped and undamped iterations agree") {
    const DomainPtr d = square(32);
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.1);
    IterationConfig full;
    IterationConfig half;
    half.damping = 0.5;
    const IterationResult a = iterate(sys, bc, full);
    const IterationResult b = iterate(sys, bc, half);
    REQUIRE(a.report.outcome == Outcome::Converged);
    REQUIRE(b.report.outcome == Outcome::Converged);
    const DistanceField dist(d);
    CHECK(weighted_sobolev_norm(a.u - b.u, 2, full.norm, dist) <= 10.0 * full.tolerance);
}

TEST_CASE("gradient bound violations are flagged") {
    const DomainPtr d = square(32);
    IterationConfig cfg;
    cfg.initial = InitialGuess::User;
    cfg.user_guess = ScalarField(d);
    cfg.max_iterations = 5;
    const IterationResult r = iterate(preset_boundary(d, BoundaryShape::SineSlope, 1.5), cfg);
    CHECK(r.report.initial.gradient_sup <= 1.0);
    CHECK(r.report.gradient_bound_violated);

    IterationConfig zero;
    zero.initial = InitialGuess::Zero;
    const IterationResult ok = iterate(preset_boundary(d, BoundaryShape::SineSlope, 0.05), zero);
    CHECK(ok.report.outcome == Outcome::Converged);
    CHECK_FALSE(ok.report.gradient_bound_violated);
}

TEST_CASE("large data diverge or stall without throwing") {
    const DomainPtr d = square(32);
    const IterationResult big = iterate(preset_boundary(d, BoundaryShape::SineSlope, 20.0), IterationConfig{});
    CHECK(big.report.outcome == Outcome::Diverged);
    CHECK(std::string(to_string(big.report.outcome)) == "diverged");

    IterationConfig short_run;
    short_run.max_iterations = 3;
    const IterationResult stall = iterate(preset_boundary(d, BoundaryShape::SineSlope, 1.0), short_run);
    CHECK(stall.report.outcome == Outcome::NotConverged);
    CHECK(stall.report.iterations == 3);
}

TEST_CASE("willmore residuals") {
    SUBCASE("affine fields") {
        const DomainPtr d = square(32);
        const WillmoreResidual r = willmore_residual(ScalarField::sample(d, affine));
        CHECK(r.strong <= fourth_order_rounding(d->h(), 1.0));
        CHECK(r.weak <= 1e-9);
    }
    SUBCASE("converged iterate") {
        for (int n : {32, 64}) {
            const DomainPtr d = square(n);
            const IterationResult r = iterate(preset_boundary(d, BoundaryShape::SineSlope, 0.05), IterationConfig{});
            REQUIRE(r.report.outcome == Outcome::Converged);
            const double h = d->h();
            CHECK(r.report.residual.strong <= 10.0 * h * h * r.report.residual.scale);
            CHECK(r.report.residual.weak <= 1e-8);
        }
    }
    SUBCASE("non-solutions stay away from zero") {
        for (int n : {32, 64, 128}) {
            const DomainPtr d = square(n);
            const ScalarField u = ScalarField::sample(d, [](Point p) {
                const double b = p.x * p.y * (1 - p.x) * (1 - p.y);
                return 16 * p.x * p.x * p.y * p.y * b * b;
            });
            const WillmoreResidual r = willmore_residual(u);
            CHECK(r.weak > 1.0);
            CHECK(r.strong > 1.0);
        }
    }
}
