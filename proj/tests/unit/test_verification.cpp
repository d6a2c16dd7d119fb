#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support.hpp"
#include "willmore/errors.hpp"
#include "willmore/verification.hpp"

using namespace willmore;
using namespace willmore::testing;
using std::numbers::pi;

TEST_CASE("refinement study bookkeeping") {
    RefinementStudy s;
    s.add(0.1, 1.0);
    s.add(0.05, 0.25);
    s.add(0.025, 0.0625);
    REQUIRE(s.orders.size() == 2);
    CHECK(s.orders[0] == doctest::Approx(2.0));
    CHECK(s.finest_order() == doctest::Approx(2.0));
    CHECK(s.orders_within(1.8, 2.5));
    CHECK_FALSE(s.orders_within(2.1, 2.5));

    RefinementStudy z;
    z.add(0.1, 0.0);
    z.add(0.05, 0.0);
    CHECK(std::isnan(z.orders[0]));
}

TEST_CASE("reformulation identity") {
    SUBCASE("sine field") {
        const IdentityStudy s = check_reformulation_identity(AnalyticField::sine(0.1));
        CHECK(s.raw.orders_within(1.8, 2.5));
        CHECK(s.intrinsic.orders_within(1.8, 2.5));
        CHECK(s.vanishing == "raw");
        for (std::size_t k = 1; k < s.raw.errors.size(); ++k) CHECK(s.raw.errors[k] < s.raw.errors[k - 1]);
    }
    SUBCASE("cubic field on the finer family") {
        const IdentityStudy s = check_reformulation_identity(AnalyticField::cubic(0.1), {1.0 / 32, 1.0 / 64, 1.0 / 128});
        CHECK(s.raw.orders_within(1.8, 2.5));
    }
    SUBCASE("affine field has no discrepancy") {
        const std::vector<double> levels = default_levels();
        const IdentityStudy s = check_reformulation_identity(AnalyticField::affine(0.3, -0.2, 1.0), levels);
        for (std::size_t k = 0; k < levels.size(); ++k)
            CHECK(s.raw.errors[k] <= fourth_order_rounding(levels[k], 1.0));
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(check_reformulation_identity(AnalyticField::kink()), ParameterError);
        CHECK_THROWS_AS(check_reformulation_identity(AnalyticField::sine(0.1), {1.0 / 16, 1.0 / 32}), ParameterError);
    }
}

TEST_CASE("sphere cap suite") {
    SUBCASE("radius 2, angle pi/3") {
        const CapStudy s = sphere_cap_suite(2.0, pi / 3);
        CHECK(std::abs(s.willmore_values.back() - pi) <= 0.02 * pi);
        CHECK(s.mean_curvature_near_rim.back() <= 0.02);
        CHECK(s.gauss_curvature_near_rim.back() <= 0.02);
        CHECK(s.mean_curvature.orders_within(1.8, 2.5));
        CHECK(s.gauss_curvature.orders_within(1.8, 2.5));
        CHECK(s.willmore.errors.back() < s.willmore.errors.front());
    }
    SUBCASE("conformal energy does not depend on the radius") {
        const std::vector<double> levels = default_levels();
        const CapStudy a = sphere_cap_suite(1.0, pi / 4, levels);
        const CapStudy b = sphere_cap_suite(2.0, pi / 4, levels);
        const double scale = 2 * pi * (1 - std::cos(pi / 4));
        CHECK(std::abs(a.conformal_values.back() - b.conformal_values.back()) <= 0.01 * scale);
    }
    SUBCASE("vanishing caps") {
        const std::vector<double> levels{1.0 / 32, 1.0 / 64, 1.0 / 128};
        const CapStudy a = sphere_cap_suite(1.0, 0.2, levels);
        const CapStudy b = sphere_cap_suite(1.0, 0.1, levels);
        CHECK(b.willmore_values.back() < a.willmore_values.back());
        CHECK(a.willmore_values.back() / b.willmore_values.back() == doctest::Approx(4.0).epsilon(0.02));
        CHECK(std::abs(b.conformal_values.back()) < 1e-3 * b.willmore_values.back() + 1e-6);
    }
    SUBCASE("steep caps are shrunk with a note") {
        const CapStudy s = sphere_cap_suite(1.0, 1.5, {1.0 / 8, 1.0 / 16, 1.0 / 32});
        CHECK(s.angle == kMaxCapAngle);
        CHECK_FALSE(s.notes.empty());
    }
}

TEST_CASE("manufactured biharmonic problems") {
    const ManufacturedStudy m = manufactured_biharmonic();
    CHECK(m.plain.orders_within(1.8, 2.5));
    CHECK(m.divergence.orders_within(1.8, 2.5));
    for (double v : m.path_mismatch) CHECK(v <= 1e-9);
    for (double v : m.affine_error) CHECK(v <= 1e-10);
}

TEST_CASE("small-data sweep") {
    const DomainPtr d = square(64);
    const IterationConfig cfg;
    SUBCASE("zero and small amplitudes converge with growing contraction") {
        const SweepReport r = small_data_sweep({0.0, 0.01, 0.02, 0.05, 0.1}, BoundaryShape::SineSlope, cfg, d);
        CHECK(r.first_failure < 0.0);
        REQUIRE(r.entries.size() == 5);
        CHECK(r.entries[0].outcome == Outcome::Converged);
        CHECK(r.entries[0].final_norms.sobolev == 0.0);
        double last = 0.0;
        for (std::size_t k = 1; k < r.entries.size(); ++k) {
            const SweepEntry& e = r.entries[k];
            CHECK(e.outcome == Outcome::Converged);
            CHECK(e.trusted);
            REQUIRE(e.contraction.sufficient);
            CHECK(e.contraction.q_max < 1.0);
            CHECK(e.contraction.q_geometric_mean > last);
            last = e.contraction.q_geometric_mean;
        }
    }
    SUBCASE("amplitudes past the first failure are untrusted") {
        IterationConfig short_cfg = cfg;
        short_cfg.max_iterations = 10;
        const SweepReport r = small_data_sweep({0.05, 1.0, 2.0}, BoundaryShape::SineSlope, short_cfg, square(32));
        CHECK(r.first_failure == 1.0);
        CHECK(r.entries[0].trusted);
        CHECK(r.entries[1].outcome != Outcome::Converged);
        CHECK_FALSE(r.entries[2].trusted);
    }
    SUBCASE("ordering is enforced") {
        CHECK_THROWS_AS(small_data_sweep({0.1, 0.05}, BoundaryShape::SineSlope, cfg, d), ParameterError);
        CHECK_THROWS_AS(small_data_sweep({-0.1, 0.05}, BoundaryShape::SineSlope, cfg, d), ParameterError);
    }
    SUBCASE("refinement stability at 0.05") {
        const double g64 = small_data_sweep({0.05}, BoundaryShape::SineSlope, cfg, d).entries[0].final_norms.gradient_sup;
        const double g128 =
            small_data_sweep({0.05}, BoundaryShape::SineSlope, cfg, square(128)).entries[0].final_norms.gradient_sup;
        CHECK(std::abs(g128 - g64) < 0.05 * g64);
    }
}
