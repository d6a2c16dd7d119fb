#pragma once

#include <span>
#include <string>
#include <vector>

#include "willmore/boundary.hpp"
#include "willmore/field.hpp"

namespace willmore {

/// Weighted-norm exponents: p in (1, inf), a in (-1/p, 1 - 1/p), and the
/// boundary smoothness s = 1 - a - 1/p in (0, 1).
struct NormParams {
    double p = 4.0;
    double a = 0.25;
    double s = 0.5;

    /// Throws ParameterError outside the admissible range.
    static NormParams make(double p, double a);
};

/// Exact distance to the polygon at every grid node. Zero at nodes on the
/// polygon, and evaluable at arbitrary points for quadrature.
class DistanceField {
public:
    explicit DistanceField(DomainPtr domain);

    const GridDomain& domain() const { return *domain_; }
    double operator[](int node) const { return values_[static_cast<std::size_t>(node)]; }
    double at(Point p) const;
    std::span<const double> values() const noexcept { return values_; }

private:
    DomainPtr domain_;
    std::vector<double> values_;
};

DistanceField distance_field(DomainPtr domain);

/// (integral |f|^p d^beta)^(1/p) by the midpoint rule, with d evaluated
/// exactly at each cell centroid. Throws ParameterError for beta <= -1 or
/// p < 1.
double weighted_lp_norm(const ScalarField& f, double p, double beta, const DistanceField& d);

/// (sum over |alpha| <= m of ||D^alpha u||^p in L^p(d^(ap)))^(1/p), m <= 2.
double weighted_sobolev_norm(const ScalarField& u, int m, const NormParams& params, const DistanceField& d);

/// Arclength derivative of g0 along the trace. Non-uniform three-point
/// centered differences; at corners the value is the one-sided derivative
/// along the outgoing edge and the incoming one is kept separately.
struct TangentialGradient {
    std::vector<double> values;
    std::vector<double> incoming;  // equals values away from corners
    std::vector<std::uint8_t> corner;
};

TangentialGradient tangential_gradient(const BoundaryData& bc);

/// nu g1 + grad_tan g0 per trace sample. At a corner the gradient is the
/// least-squares fit of both one-sided tangential derivatives and the
/// averaged-normal slope, which is exact for affine traces.
std::vector<Vec2> boundary_gradient(const BoundaryData& bc);

/// sup over the trace of |nu g1 + grad_tan g0|.
double boundary_gradient_sup(const BoundaryData& bc);

/// Double sum of |f(x) - f(y)|^p / |x - y|^(1 + sp) dS_x dS_y over sample
/// pairs at chordal distance of at least one panel, raised to 1/p.
double besov_seminorm(const std::vector<BoundarySample>& trace, std::span<const double> f, double s, double p);
double besov_seminorm(const std::vector<BoundarySample>& trace, std::span<const Vec2> f, double s, double p);

/// L^p(dS) part plus seminorm.
double besov_norm(const std::vector<BoundarySample>& trace, std::span<const double> f, double s, double p);
double besov_norm(const std::vector<BoundarySample>& trace, std::span<const Vec2> f, double s, double p);

struct TraceNorm {
    double total = 0.0;
    double height = 0.0;    // ||g0|| in B^s_p
    double gradient = 0.0;  // ||nu g1 + grad_tan g0|| in B^s_p
    double gradient_sup = 0.0;
};

TraceNorm dirichlet_trace_norm(const BoundaryData& bc, const NormParams& params);

/// sup |f| + max over sample pairs of |f(x) - f(y)| / |x - y|^alpha.
/// A lower bound for the continuous norm. Throws ParameterError unless
/// alpha is in (0, 1].
double holder_norm(const std::vector<BoundarySample>& trace, std::span<const double> f, double alpha);

struct RegimeCheck {
    std::string name;
    bool satisfied = false;
    bool checkable = true;
    std::vector<std::string> reasons;
};

struct ValidityReport {
    double p = 0.0;
    double a = 0.0;
    double s = 0.0;
    double lipschitz = 0.0;
    bool basic_range = false;  // p in (1, inf), a in (-1/p, 1 - 1/p)
    RegimeCheck holder;        // Hoelder boundary data regime
    RegimeCheck small_lipschitz;
    RegimeCheck fixed_point;   // p > 2, 0 < a < 1 - 2/p
};

/// Never throws; every failed hypothesis is listed in the report.
ValidityReport parameter_check(double p, double a, double lipschitz);

}  // namespace willmore
