#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "willmore/polygon.hpp"
#include "willmore/vec2.hpp"

namespace willmore {

enum class NodeKind : std::uint8_t { Interior, Boundary, Ghost, Exterior };

/// One point of the arclength-ordered boundary trace.
struct BoundarySample {
    Point position;
    double arclength = 0.0;
    Vec2 normal;         // outward; normalized average of both edges at a corner
    Vec2 tangent;        // direction of the outgoing edge
    double weight = 0.0; // line element: half of the two adjacent panels
    int node = -1;       // grid node sitting on this sample, -1 if off-grid
    int edge = 0;        // polygon edge the sample starts (outgoing edge at a vertex)
    bool corner = false;
};

/// Midpoint-rule cell: area of the cell inside the polygon, the centroid of
/// that piece, and bilinear weights of the four cell corners at the centroid.
struct QuadratureCell {
    std::array<int, 4> corners{};  // lower-left, lower-right, upper-left, upper-right
    std::array<double, 4> weights{};
    double area = 0.0;
    Point centroid;
};

/// Uniform grid over a polygon, padded by two node layers on every side so
/// that ghost values and analytic extensions have somewhere to live.
class GridDomain {
public:
    static constexpr int kPad = 2;

    /// Throws ConfigurationError for h <= 0 or a grid with no interior nodes.
    static std::shared_ptr<const GridDomain> create(Polygon polygon, double h);

    const Polygon& polygon() const noexcept { return polygon_; }
    double h() const noexcept { return h_; }
    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    int node_count() const noexcept { return nx_ * ny_; }
    int index(int i, int j) const noexcept { return j * nx_ + i; }
    int col(int node) const noexcept { return node % nx_; }
    int row(int node) const noexcept { return node / nx_; }
    bool in_grid(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
    Point point(int i, int j) const noexcept { return {origin_.x + i * h_, origin_.y + j * h_}; }
    Point point(int node) const noexcept { return point(col(node), row(node)); }

    NodeKind kind(int node) const { return kind_[static_cast<std::size_t>(node)]; }
    bool active(int node) const {
        const NodeKind k = kind(node);
        return k == NodeKind::Interior || k == NodeKind::Boundary;
    }
    /// Boundary node lying on the polygon itself (as opposed to a staircase
    /// node standing in for an oblique edge).
    bool on_polygon(int node) const { return on_polygon_[static_cast<std::size_t>(node)] != 0; }
    bool corner(int node) const { return corner_[static_cast<std::size_t>(node)] != 0; }
    Vec2 normal(int node) const { return normal_[static_cast<std::size_t>(node)]; }

    const std::vector<int>& interior_nodes() const noexcept { return interior_; }
    const std::vector<int>& boundary_nodes() const noexcept { return boundary_; }
    const std::vector<BoundarySample>& trace() const noexcept { return trace_; }
    /// Trace sample at a node, or -1.
    int trace_index(int node) const { return trace_of_node_[static_cast<std::size_t>(node)]; }
    double perimeter() const noexcept { return perimeter_; }

    /// Axis-parallel edges with every vertex on a grid node.
    bool grid_aligned() const noexcept { return grid_aligned_; }
    /// Fewest consecutive active nodes along a grid line through any active node.
    int narrowest_run() const noexcept { return narrowest_run_; }

    const std::vector<QuadratureCell>& quadrature() const noexcept { return cells_; }

private:
    GridDomain() = default;
    void classify();
    void build_trace();
    void build_quadrature();

    Polygon polygon_;
    double h_ = 0.0;
    int nx_ = 0;
    int ny_ = 0;
    Point origin_;
    bool grid_aligned_ = false;
    double perimeter_ = 0.0;
    int narrowest_run_ = 0;
    std::vector<NodeKind> kind_;
    std::vector<std::uint8_t> on_polygon_;
    std::vector<std::uint8_t> corner_;
    std::vector<Vec2> normal_;
    std::vector<int> interior_;
    std::vector<int> boundary_;
    std::vector<BoundarySample> trace_;
    std::vector<int> trace_of_node_;
    std::vector<QuadratureCell> cells_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

}  // namespace willmore
