#pragma once

#include <functional>
#include <span>
#include <vector>

#include "willmore/grid.hpp"

namespace willmore {

/// Clamped Dirichlet pair sampled along the domain's boundary trace:
/// g0 is the height, g1 the outward normal slope.
class BoundaryData {
public:
    BoundaryData() = default;
    /// Throws ConfigurationError on a size mismatch with the trace or a
    /// non-finite value.
    BoundaryData(DomainPtr domain, std::vector<double> g0, std::vector<double> g1);

    using SampleFn = std::function<double(const BoundarySample&)>;
    static BoundaryData from_functions(DomainPtr domain, const SampleFn& g0, const SampleFn& g1);
    /// Exact traces of a function: g0 = f, g1 = grad f . nu.
    static BoundaryData from_traces(DomainPtr domain, const std::function<double(Point)>& f,
                                    const std::function<Vec2(Point)>& grad);
    static BoundaryData zero(DomainPtr domain);

    const GridDomain& domain() const { return *domain_; }
    const DomainPtr& domain_ptr() const noexcept { return domain_; }
    std::size_t size() const noexcept { return g0_.size(); }
    std::span<const double> g0() const noexcept { return g0_; }
    std::span<const double> g1() const noexcept { return g1_; }
    const BoundarySample& sample(std::size_t k) const { return domain_->trace()[k]; }

    BoundaryData scaled(double s) const;
    /// g0 + c, g1 unchanged.
    BoundaryData shifted(double c) const;
    friend BoundaryData operator+(const BoundaryData& a, const BoundaryData& b);

private:
    DomainPtr domain_;
    std::vector<double> g0_;
    std::vector<double> g1_;
};

enum class BoundaryShape {
    Zero,
    SineSlope,   // g0 = 0, g1 = A sin(2 pi s / L)
    SineHeight,  // g0 = A sin(2 pi s / L), g1 = 0
    Affine,      // traces of A (x - 0.5 y)
};

/// Named boundary data of amplitude A along the domain's trace.
BoundaryData preset_boundary(DomainPtr domain, BoundaryShape shape, double amplitude);

}  // namespace willmore
