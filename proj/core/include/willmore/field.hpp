#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "willmore/grid.hpp"

namespace willmore {

using NodeMask = std::vector<std::uint8_t>;

/// One value per grid node plus a per-node "defined" flag. Values at
/// undefined nodes are zero and must not be read as data.
class ScalarField {
public:
    ScalarField() = default;
    /// Zero field defined on the active (interior and boundary) nodes.
    explicit ScalarField(DomainPtr domain);
    /// Field with nothing defined yet.
    static ScalarField undefined(DomainPtr domain);
    /// Samples f at every grid node (padding included); nodes where f is not
    /// finite stay undefined.
    static ScalarField sample(DomainPtr domain, const std::function<double(Point)>& f);

    const GridDomain& domain() const { return *domain_; }
    const DomainPtr& domain_ptr() const noexcept { return domain_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

    double operator[](int node) const { return values_[static_cast<std::size_t>(node)]; }
    bool defined(int node) const { return defined_[static_cast<std::size_t>(node)] != 0; }
    void set(int node, double v) {
        values_[static_cast<std::size_t>(node)] = v;
        defined_[static_cast<std::size_t>(node)] = 1;
    }
    void undefine(int node) {
        values_[static_cast<std::size_t>(node)] = 0.0;
        defined_[static_cast<std::size_t>(node)] = 0;
    }
    std::span<const double> values() const noexcept { return values_; }
    const NodeMask& defined_mask() const noexcept { return defined_; }

    /// Keeps only nodes that are set in `mask`.
    ScalarField restricted(const NodeMask& mask) const;
    /// Max |value| over defined nodes, optionally limited to `mask`.
    double max_abs(const NodeMask* mask = nullptr) const;
    bool all_finite() const;

    ScalarField& operator*=(double s);
    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
    DomainPtr domain_;
    std::vector<double> values_;
    NodeMask defined_;
};

struct VectorField {
    ScalarField x;
    ScalarField y;
};

/// Symmetric by construction: only one off-diagonal component is stored.
struct TensorField {
    ScalarField xx;
    ScalarField xy;
    ScalarField yy;
};

/// Applies f pointwise wherever every input is defined.
ScalarField map_fields(std::initializer_list<const ScalarField*> inputs,
                       const std::function<double(std::span<const double>)>& f);

/// Bilinear value at the cell's quadrature point, renormalized over the
/// defined corners. Empty when no corner is defined.
std::optional<double> interpolate(const QuadratureCell& cell, const ScalarField& f);

/// Composite midpoint rule over the domain's quadrature cells.
double integrate(const ScalarField& f);

/// Active nodes whose whole (2*margin+1)^2 neighbourhood is active.
NodeMask interior_mask(const GridDomain& domain, int margin);

}  // namespace willmore
