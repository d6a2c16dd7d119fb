#include "willmore/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

int orientation(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw ConfigurationError("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        if (vertices_[i] == vertices_[(i + 1) % n])
            throw ConfigurationError("polygon has repeated vertex " + std::to_string(i));
    }
    if (signed_area(vertices_) < 0) std::reverse(vertices_.begin(), vertices_.end());
    if (signed_area(vertices_) == 0) throw ConfigurationError("polygon is degenerate (zero area)");
    // Non-adjacent edges must not touch.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                                   vertices_[(j + 1) % n]))
                throw ConfigurationError("polygon is not simple: edges " + std::to_string(i) +
                                         " and " + std::to_string(j) + " intersect");
        }
    }
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
    return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon Polygon::l_shape() {
    return Polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}});
}

Polygon Polygon::regular(Point center, double circumradius, int sides) {
    if (sides < 3) throw ConfigurationError("regular polygon needs at least 3 sides");
    std::vector<Point> v;
    v.reserve(static_cast<std::size_t>(sides));
    for (int k = 0; k < sides; ++k) {
        const double t = 2.0 * std::numbers::pi * k / sides;
        v.push_back({center.x + circumradius * std::cos(t), center.y + circumradius * std::sin(t)});
    }
    return Polygon(std::move(v));
}

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::perimeter() const {
    double l = 0.0;
    for (std::size_t i = 0; i < size(); ++i) l += norm(vertex(i + 1) - vertex(i));
    return l;
}

Point Polygon::min_corner() const {
    Point m = vertices_.front();
    for (auto p : vertices_) m = {std::min(m.x, p.x), std::min(m.y, p.y)};
    return m;
}

Point Polygon::max_corner() const {
    Point m = vertices_.front();
    for (auto p : vertices_) m = {std::max(m.x, p.x), std::max(m.y, p.y)};
    return m;
}

bool Polygon::contains(Point p) const {
    bool inside = false;
    const std::size_t n = size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = vertices_[i];
        const Point b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

double segment_distance(Point p, Point a, Point b) {
    const Vec2 ab = b - a;
    const double len2 = norm2(ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double Polygon::distance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
        d = std::min(d, segment_distance(p, vertex(i), vertex(i + 1)));
    return d;
}

Vec2 Polygon::edge_normal(std::size_t i) const {
    const Vec2 t = vertex(i + 1) - vertex(i);
    return Vec2{t.y, -t.x} / norm(t);
}

bool Polygon::axis_aligned() const {
    for (std::size_t i = 0; i < size(); ++i) {
        const Vec2 t = vertex(i + 1) - vertex(i);
        if (t.x != 0.0 && t.y != 0.0) return false;
    }
    return true;
}

double Polygon::interior_angle(std::size_t i) const {
    const std::size_t n = size();
    const Vec2 in = vertex(i) - vertex(i + n - 1);
    const Vec2 out = vertex(i + 1) - vertex(i);
    // Turning angle is positive for convex corners of a ccw polygon.
    const double turn = std::atan2(cross(in, out), dot(in, out));
    return std::numbers::pi - turn;
}

double Polygon::lipschitz_constant() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double half = 0.5 * interior_angle(i);
        m = std::max(m, std::abs(std::cos(half) / std::sin(half)));
    }
    return m;
}

ClipResult clip_to_box(const Polygon& polygon, Point lo, Point hi) {
    // Sutherland-Hodgman against the four half-planes of the box.
    std::vector<Point> poly = polygon.vertices();
    std::vector<Point> next;
    auto clip = [&](auto inside, auto intersect) {
        next.clear();
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point cur = poly[i];
            const Point prev = poly[(i + n - 1) % n];
            const bool ci = inside(cur);
            const bool pi = inside(prev);
            if (ci) {
                if (!pi) next.push_back(intersect(prev, cur));
                next.push_back(cur);
            } else if (pi) {
                next.push_back(intersect(prev, cur));
            }
        }
        poly.swap(next);
    };
    auto at_x = [](double x) {
        return [x](Point a, Point b) { return Point{x, a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)}; };
    };
    auto at_y = [](double y) {
        return [y](Point a, Point b) { return Point{a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), y}; };
    };
    clip([&](Point p) { return p.x >= lo.x; }, at_x(lo.x));
    if (!poly.empty()) clip([&](Point p) { return p.x <= hi.x; }, at_x(hi.x));
    if (!poly.empty()) clip([&](Point p) { return p.y >= lo.y; }, at_y(lo.y));
    if (!poly.empty()) clip([&](Point p) { return p.y <= hi.y; }, at_y(hi.y));

    ClipResult r;
    if (poly.size() < 3) return r;
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point p = poly[i];
        const Point q = poly[(i + 1) % poly.size()];
        const double c = cross(p, q);
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    a *= 0.5;
    if (a <= 0.0) return r;
    r.area = a;
    r.centroid = {cx / (6.0 * a), cy / (6.0 * a)};
    return r;
}

}  // namespace willmore
