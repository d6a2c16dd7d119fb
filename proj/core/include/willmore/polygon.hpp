#pragma once

#include <vector>

#include "willmore/vec2.hpp"

namespace willmore {

/// Closed simple polygon, vertices stored counterclockwise.
class Polygon {
public:
    Polygon() = default;
    /// Reorients clockwise input; throws ConfigurationError on fewer than three
    /// vertices, repeated vertices, or self-intersection.
    explicit Polygon(std::vector<Point> vertices);

    static Polygon rectangle(double x0, double y0, double x1, double y1);
    static Polygon unit_square() { return rectangle(0.0, 0.0, 1.0, 1.0); }
    /// [0,1]^2 minus the upper-right quarter [0.5,1]^2.
    static Polygon l_shape();
    static Polygon regular(Point center, double circumradius, int sides);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    Point vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    double area() const;
    double perimeter() const;
    Point min_corner() const;
    Point max_corner() const;

    bool contains(Point p) const;
    double distance(Point p) const;
    /// Outward unit normal of edge i (from vertex i to vertex i+1).
    Vec2 edge_normal(std::size_t i) const;
    bool axis_aligned() const;
    /// Interior angle at vertex i, in (0, 2pi).
    double interior_angle(std::size_t i) const;
    /// Local Lipschitz character: max over vertices of |cot(angle/2)|.
    /// A square gives 1, a smooth boundary gives 0.
    double lipschitz_constant() const;

private:
    std::vector<Point> vertices_;
};

double segment_distance(Point p, Point a, Point b);

/// Intersection of the polygon with an axis-aligned box, returned as
/// (area, centroid). Exact up to rounding.
struct ClipResult {
    double area = 0.0;
    Point centroid{};
};
ClipResult clip_to_box(const Polygon& polygon, Point lo, Point hi);

}  // namespace willmore
