#pragma once

#include <functional>
#include <string>
#include <vector>

#include "willmore/fixed_point.hpp"
#include "willmore/geometry.hpp"

namespace willmore {

/// Closed-form test field with hand-derived derivatives.
struct AnalyticField {
    std::string name;
    std::function<double(Point)> value;
    std::function<Vec2(Point)> gradient;
    std::function<Sym2(Point)> hessian;
    bool smooth = true;

    /// A sin(pi x) sin(pi y).
    static AnalyticField sine(double amplitude);
    /// A (x^3 - y^3 + x y^2).
    static AnalyticField cubic(double amplitude);
    /// a x + b y + c.
    static AnalyticField affine(double a, double b, double c);
    /// Upper hemisphere sqrt(R^2 - x^2 - y^2).
    static AnalyticField sphere_cap(double radius);
    /// |x - 1/2| + y: Lipschitz but not smooth.
    static AnalyticField kink();

    ScalarField sample(DomainPtr domain) const;
};

/// Error per grid level and observed orders log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
struct RefinementStudy {
    std::string name;
    std::vector<double> h;
    std::vector<double> errors;
    std::vector<double> orders;  // NaN where both errors sit at rounding level
    std::vector<std::string> notes;

    void add(double spacing, double error);
    bool orders_within(double lo, double hi) const;
    double finest_order() const;
};

/// Default grid family h = 1/16, 1/32, 1/64.
std::vector<double> default_levels();

struct IdentityStudy {
    RefinementStudy raw;        // |flux form - divergence form|
    RefinementStudy q_divided;  // |flux form / Q - divergence form|
    RefinementStudy intrinsic;  // |lap_g H + H^3/2 - 2HK - divergence form|
    std::string vanishing;      // which comparison converges at second order
};

/// Masked-interior max discrepancy of the two operator evaluations on the
/// unit square. Throws ParameterError for a non-smooth field.
IdentityStudy check_reformulation_identity(const AnalyticField& u, const std::vector<double>& levels = default_levels(),
                                           const Polygon& polygon = Polygon::unit_square());

struct CapStudy {
    double radius = 0.0;
    double angle = 0.0;   // effective cap angle after any shrinking
    int polygon_sides = 0;
    // Curvature errors are measured on the fixed core disk at distance at
    // least kCapCore * rim radius from the rim, so every level compares the
    // same region. The *_near_rim values use the margin-2 mask instead.
    RefinementStudy mean_curvature;   // max |H + 2/R| / (2/R)
    RefinementStudy gauss_curvature;  // max |K - 1/R^2| R^2
    std::vector<double> mean_curvature_near_rim;
    std::vector<double> gauss_curvature_near_rim;
    RefinementStudy willmore;         // |W - 2 pi (1 - cos angle)| / target
    RefinementStudy conformal;        // |conformal energy|
    std::vector<double> willmore_values;
    std::vector<double> conformal_values;
    std::vector<std::string> notes;
};

/// Largest cap angle used before the rim slope is considered too steep.
inline constexpr double kMaxCapAngle = 1.3;
inline constexpr double kCapCore = 0.125;

/// Cap of radius R over the disk of radius R sin(angle), discretized as a
/// regular polygon fine enough that its area defect is below 1e-6.
CapStudy sphere_cap_suite(double radius, double angle, const std::vector<double>& levels = default_levels());

struct ManufacturedStudy {
    RefinementStudy plain;       // lap^2 w = 4 pi^4 sin sin, exact clamped traces
    RefinementStudy divergence;  // h2 = diag(s, s) with s = sin sin, exact solution -s / (2 pi^2)
    /// max |w_plain - w_div| for a polynomial flux pair whose discrete
    /// divergence is exact, one entry per level.
    std::vector<double> path_mismatch;
    std::vector<double> affine_error;  // zero RHS, affine traces
};

ManufacturedStudy manufactured_biharmonic(const std::vector<double>& levels = default_levels());

struct SweepEntry {
    double epsilon = 0.0;
    Outcome outcome = Outcome::NotConverged;
    bool trusted = true;
    ContractionSummary contraction;
    int iterations = 0;
    SetNorms final_norms;
    WillmoreResidual residual;
    double trace_gradient_sup = 0.0;
    std::vector<std::string> warnings;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    double first_failure = -1.0;  // smallest failing epsilon, -1 if none
};

/// Independent runs over increasing amplitudes; every amplitude above the
/// first failure is marked untrusted. Throws ParameterError if the list is
/// not positive and increasing (zero allowed as the first entry).
SweepReport small_data_sweep(const std::vector<double>& epsilons, BoundaryShape shape, const IterationConfig& cfg,
                             DomainPtr domain);

}  // namespace willmore
