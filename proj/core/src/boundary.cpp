#include "willmore/boundary.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

BoundaryData::BoundaryData(DomainPtr domain, std::vector<double> g0, std::vector<double> g1)
    : domain_(std::move(domain)), g0_(std::move(g0)), g1_(std::move(g1)) {
    const std::size_t m = domain_->trace().size();
    if (g0_.size() != m || g1_.size() != m)
        throw ConfigurationError("boundary data has " + std::to_string(g0_.size()) + "/" +
                                 std::to_string(g1_.size()) + " samples, trace has " + std::to_string(m));
    for (std::size_t k = 0; k < m; ++k)
        if (!std::isfinite(g0_[k]) || !std::isfinite(g1_[k]))
            throw ConfigurationError("boundary data not finite at sample " + std::to_string(k));
}

BoundaryData BoundaryData::from_functions(DomainPtr domain, const SampleFn& g0, const SampleFn& g1) {
    std::vector<double> a, b;
    for (const BoundarySample& s : domain->trace()) {
        a.push_back(g0(s));
        b.push_back(g1(s));
    }
    return BoundaryData(std::move(domain), std::move(a), std::move(b));
}

BoundaryData BoundaryData::from_traces(DomainPtr domain, const std::function<double(Point)>& f,
                                       const std::function<Vec2(Point)>& grad) {
    return from_functions(
        std::move(domain), [&](const BoundarySample& s) { return f(s.position); },
        [&](const BoundarySample& s) { return dot(grad(s.position), s.normal); });
}

BoundaryData BoundaryData::zero(DomainPtr domain) {
    const std::size_t m = domain->trace().size();
    return BoundaryData(std::move(domain), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0));
}

BoundaryData BoundaryData::scaled(double s) const {
    BoundaryData out = *this;
    for (auto& v : out.g0_) v *= s;
    for (auto& v : out.g1_) v *= s;
    return out;
}

BoundaryData BoundaryData::shifted(double c) const {
    BoundaryData out = *this;
    for (auto& v : out.g0_) v += c;
    return out;
}

BoundaryData operator+(const BoundaryData& a, const BoundaryData& b) {
    if (a.domain_ != b.domain_) throw ConfigurationError("boundary data on different grids");
    BoundaryData out = a;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.g0_[k] += b.g0_[k];
        out.g1_[k] += b.g1_[k];
    }
    return out;
}

BoundaryData preset_boundary(DomainPtr domain, BoundaryShape shape, double amplitude) {
    const double length = domain->perimeter();
    const double k = 2.0 * std::numbers::pi / length;
    switch (shape) {
        case BoundaryShape::Zero:
            return BoundaryData::zero(std::move(domain));
        case BoundaryShape::SineSlope:
            return BoundaryData::from_functions(
                std::move(domain), [](const BoundarySample&) { return 0.0; },
                [=](const BoundarySample& s) { return amplitude * std::sin(k * s.arclength); });
        case BoundaryShape::SineHeight:
            return BoundaryData::from_functions(
                std::move(domain), [=](const BoundarySample& s) { return amplitude * std::sin(k * s.arclength); },
                [](const BoundarySample&) { return 0.0; });
        case BoundaryShape::Affine:
            return BoundaryData::from_traces(
                std::move(domain), [=](Point p) { return amplitude * (p.x - 0.5 * p.y); },
                [=](Point) { return Vec2{amplitude, -0.5 * amplitude}; });
    }
    throw ConfigurationError("unknown boundary shape");
}

}  // namespace willmore
