#include "willmore/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

constexpr double kSnap = 1e-9;  // relative to h

bool is_vertex_corner(const Polygon& poly, std::size_t v) {
    return std::abs(poly.interior_angle(v) - std::numbers::pi) > 1e-12;
}

Vec2 vertex_normal(const Polygon& poly, std::size_t v) {
    const std::size_t n = poly.size();
    const Vec2 s = poly.edge_normal((v + n - 1) % n) + poly.edge_normal(v);
    const double l = norm(s);
    // A cusp cannot occur in a simple polygon, so l > 0.
    return s / l;
}

}  // namespace

std::shared_ptr<const GridDomain> GridDomain::create(Polygon polygon, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigurationError("grid spacing must be positive");
    std::shared_ptr<GridDomain> d(new GridDomain());
    d->polygon_ = std::move(polygon);
    d->h_ = h;
    const Point lo = d->polygon_.min_corner();
    const Point hi = d->polygon_.max_corner();
    const int cx = static_cast<int>(std::ceil((hi.x - lo.x) / h - kSnap));
    const int cy = static_cast<int>(std::ceil((hi.y - lo.y) / h - kSnap));
    d->nx_ = cx + 1 + 2 * kPad;
    d->ny_ = cy + 1 + 2 * kPad;
    d->origin_ = {lo.x - kPad * h, lo.y - kPad * h};

    bool aligned = d->polygon_.axis_aligned();
    for (const Point v : d->polygon_.vertices()) {
        const double fi = (v.x - d->origin_.x) / h;
        const double fj = (v.y - d->origin_.y) / h;
        if (std::abs(fi - std::round(fi)) > kSnap || std::abs(fj - std::round(fj)) > kSnap)
            aligned = false;
    }
    d->grid_aligned_ = aligned;
    d->perimeter_ = d->polygon_.perimeter();

    d->classify();
    if (d->interior_.empty()) throw ConfigurationError("grid has no interior nodes; refine h");
    d->build_trace();
    d->build_quadrature();
    return d;
}

void GridDomain::classify() {
    const int n = node_count();
    kind_.assign(static_cast<std::size_t>(n), NodeKind::Exterior);
    on_polygon_.assign(static_cast<std::size_t>(n), 0);
    corner_.assign(static_cast<std::size_t>(n), 0);
    normal_.assign(static_cast<std::size_t>(n), Vec2{});
    trace_of_node_.assign(static_cast<std::size_t>(n), -1);

    const double tol = kSnap * h_;
    std::vector<std::uint8_t> inside(static_cast<std::size_t>(n), 0);
    for (int node = 0; node < n; ++node) {
        const Point p = point(node);
        if (polygon_.distance(p) <= tol) {
            on_polygon_[static_cast<std::size_t>(node)] = 1;
            inside[static_cast<std::size_t>(node)] = 2;
        } else if (polygon_.contains(p)) {
            inside[static_cast<std::size_t>(node)] = 1;
        }
    }
    auto covered = [&](int i, int j) { return in_grid(i, j) && inside[static_cast<std::size_t>(index(i, j))] != 0; };

    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const int node = index(i, j);
            const auto s = inside[static_cast<std::size_t>(node)];
            if (s == 2) {
                kind_[static_cast<std::size_t>(node)] = NodeKind::Boundary;
            } else if (s == 1) {
                const bool full = covered(i - 1, j) && covered(i + 1, j) && covered(i, j - 1) && covered(i, j + 1);
                kind_[static_cast<std::size_t>(node)] = full ? NodeKind::Interior : NodeKind::Boundary;
            }
        }
    }
    // Ghost layer: exterior nodes touching an active node (8-neighbourhood).
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const int node = index(i, j);
            if (kind_[static_cast<std::size_t>(node)] != NodeKind::Exterior) continue;
            bool touches = false;
            for (int dj = -1; dj <= 1 && !touches; ++dj)
                for (int di = -1; di <= 1 && !touches; ++di)
                    if (in_grid(i + di, j + dj) && active(index(i + di, j + dj))) touches = true;
            if (touches) kind_[static_cast<std::size_t>(node)] = NodeKind::Ghost;
        }
    }

    // Normals: edge normal on edges, averaged at vertices, nearest edge for
    // staircase nodes.
    for (int node = 0; node < n; ++node) {
        if (kind_[static_cast<std::size_t>(node)] == NodeKind::Interior) interior_.push_back(node);
        if (kind_[static_cast<std::size_t>(node)] != NodeKind::Boundary) continue;
        boundary_.push_back(node);
        const Point p = point(node);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < polygon_.size(); ++e) {
            const double dd = segment_distance(p, polygon_.vertex(e), polygon_.vertex(e + 1));
            if (dd < best_d) { best_d = dd; best = e; }
        }
        Vec2 nrm = polygon_.edge_normal(best);
        if (on_polygon(node)) {
            for (std::size_t v = 0; v < polygon_.size(); ++v) {
                if (norm(p - polygon_.vertex(v)) <= tol) {
                    nrm = vertex_normal(polygon_, v);
                    corner_[static_cast<std::size_t>(node)] = is_vertex_corner(polygon_, v) ? 1 : 0;
                }
            }
        }
        normal_[static_cast<std::size_t>(node)] = nrm;
    }

    // Narrowest run of active nodes along grid lines.
    narrowest_run_ = std::numeric_limits<int>::max();
    auto scan = [&](bool horizontal) {
        const int outer = horizontal ? ny_ : nx_;
        const int inner = horizontal ? nx_ : ny_;
        for (int a = 0; a < outer; ++a) {
            int run = 0;
            for (int b = 0; b <= inner; ++b) {
                const bool act = b < inner && active(horizontal ? index(b, a) : index(a, b));
                if (act) {
                    ++run;
                } else if (run > 0) {
                    narrowest_run_ = std::min(narrowest_run_, run);
                    run = 0;
                }
            }
        }
    };
    scan(true);
    scan(false);
}

void GridDomain::build_trace() {
    const std::size_t nv = polygon_.size();
    double s = 0.0;
    for (std::size_t e = 0; e < nv; ++e) {
        const Point a = polygon_.vertex(e);
        const Point b = polygon_.vertex(e + 1);
        const double len = norm(b - a);
        const int panels = std::max(1, static_cast<int>(std::ceil(len / h_ - kSnap)));
        const Vec2 tangent = (b - a) / len;
        for (int k = 0; k < panels; ++k) {
            BoundarySample smp;
            const double t = static_cast<double>(k) / panels;
            smp.position = k == 0 ? a : a + t * (b - a);
            smp.arclength = s + t * len;
            smp.tangent = tangent;
            smp.edge = static_cast<int>(e);
            if (k == 0) {
                smp.normal = vertex_normal(polygon_, e);
                smp.corner = is_vertex_corner(polygon_, e);
            } else {
                smp.normal = polygon_.edge_normal(e);
            }
            const double fi = (smp.position.x - origin_.x) / h_;
            const double fj = (smp.position.y - origin_.y) / h_;
            const int i = static_cast<int>(std::lround(fi));
            const int j = static_cast<int>(std::lround(fj));
            if (std::abs(fi - i) <= kSnap && std::abs(fj - j) <= kSnap && in_grid(i, j)) {
                smp.node = index(i, j);
                trace_of_node_[static_cast<std::size_t>(smp.node)] = static_cast<int>(trace_.size());
            }
            trace_.push_back(smp);
        }
        s += len;
    }
    const std::size_t m = trace_.size();
    for (std::size_t k = 0; k < m; ++k) {
        const BoundarySample& prev = trace_[(k + m - 1) % m];
        const BoundarySample& next = trace_[(k + 1) % m];
        trace_[k].weight = 0.5 * (norm(trace_[k].position - prev.position) + norm(next.position - trace_[k].position));
    }
}

void GridDomain::build_quadrature() {
    const double reach = h_ * std::numbers::sqrt2 * 0.5 * (1.0 + 1e-9);
    for (int j = 0; j + 1 < ny_; ++j) {
        for (int i = 0; i + 1 < nx_; ++i) {
            QuadratureCell cell;
            cell.corners = {index(i, j), index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)};
            const Point lo = point(i, j);
            const Point hi = point(i + 1, j + 1);
            const Point center = 0.5 * (lo + hi);
            if (grid_aligned_) {
                bool all = true;
                for (int c : cell.corners) all = all && active(c);
                if (!all || !polygon_.contains(center)) continue;
                cell.area = h_ * h_;
                cell.centroid = center;
            } else {
                const bool in = polygon_.contains(center);
                const double dc = polygon_.distance(center);
                if (dc > reach) {
                    if (!in) continue;
                    cell.area = h_ * h_;
                    cell.centroid = center;
                } else {
                    const ClipResult clip = clip_to_box(polygon_, lo, hi);
                    if (clip.area <= 1e-14 * h_ * h_) continue;
                    cell.area = clip.area;
                    cell.centroid = clip.centroid;
                }
            }
            const double t = std::clamp((cell.centroid.x - lo.x) / h_, 0.0, 1.0);
            const double u = std::clamp((cell.centroid.y - lo.y) / h_, 0.0, 1.0);
            cell.weights = {(1 - t) * (1 - u), t * (1 - u), (1 - t) * u, t * u};
            cells_.push_back(cell);
        }
    }
}

}  // namespace willmore
