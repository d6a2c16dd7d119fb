#include "willmore/biharmonic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "willmore/errors.hpp"
#include "willmore/geometry.hpp"
#include "willmore/norms.hpp"

namespace willmore {

struct SparseSystem::Factorization {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool use_lu = false;
};

namespace {

struct StencilEntry {
    int di;
    int dj;
    double weight;
};

// h^4 lap_h^2 = lap_h (lap_h): the composed five-point Laplacian.
constexpr StencilEntry kBiharmonic[] = {
    {0, 0, 20.0},
    {1, 0, -8.0}, {-1, 0, -8.0}, {0, 1, -8.0}, {0, -1, -8.0},
    {1, 1, 2.0}, {1, -1, 2.0}, {-1, 1, 2.0}, {-1, -1, 2.0},
    {2, 0, 1.0}, {-2, 0, 1.0}, {0, 2, 1.0}, {0, -2, 1.0},
};

std::string node_label(const GridDomain& d, int node) {
    const Point p = d.point(node);
    return "(" + std::to_string(d.col(node)) + "," + std::to_string(d.row(node)) + ") at x=" +
           std::to_string(p.x) + " y=" + std::to_string(p.y);
}

}  // namespace

bool SparseSystem::pattern_symmetric() const {
    for (int r = 0; r < matrix_.outerSize(); ++r)
        for (Matrix::InnerIterator it(matrix_, r); it; ++it)
            if (matrix_.coeff(static_cast<int>(it.col()), r) == 0.0 && it.value() != 0.0) return false;
    return true;
}

Eigen::VectorXd SparseSystem::factor_solve(const Eigen::VectorXd& b) const {
    return factor_->use_lu ? Eigen::VectorXd(factor_->lu.solve(b)) : Eigen::VectorXd(factor_->ldlt.solve(b));
}

SparseSystem assemble(DomainPtr domain) {
    const GridDomain& d = *domain;
    if (!d.grid_aligned())
        throw ConfigurationError("biharmonic solver needs axis-parallel polygon edges with vertices on grid nodes");
    if (d.narrowest_run() < 6)
        throw ConfigurationError("domain has fewer than 5 interior cells across (" +
                                 std::to_string(d.narrowest_run() - 1) + " cells)");

    SparseSystem sys;
    sys.domain_ = domain;
    sys.row_of_node_.assign(static_cast<std::size_t>(d.node_count()), -1);
    for (int node : d.interior_nodes()) {
        sys.row_of_node_[static_cast<std::size_t>(node)] = static_cast<int>(sys.row_nodes_.size());
        sys.row_nodes_.push_back(node);
    }

    // Ghost rules from every admissible straight-edge mirror.
    std::map<int, std::size_t> rule_of_ghost;
    for (int g = 0; g < d.node_count(); ++g) {
        if (d.kind(g) != NodeKind::Ghost) continue;
        SparseSystem::GhostRule rule{g, {}};
        const int gi = d.col(g), gj = d.row(g);
        constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& dir : dirs) {
            const int bi = gi - dir[0], bj = gj - dir[1];
            const int ii = gi - 2 * dir[0], ij = gj - 2 * dir[1];
            if (!d.in_grid(ii, ij)) continue;
            const int b = d.index(bi, bj);
            const int mirror = d.index(ii, ij);
            if (d.kind(b) != NodeKind::Boundary || !d.on_polygon(b) || d.corner(b)) continue;
            if (d.trace_index(b) < 0 || !d.active(mirror)) continue;
            const Vec2 n = d.normal(b);
            if (dot(n, Vec2{static_cast<double>(dir[0]), static_cast<double>(dir[1])}) < 1.0 - 1e-12) continue;
            rule.mirrors.emplace_back(mirror, d.trace_index(b));
        }
        if (!rule.mirrors.empty()) {
            rule_of_ghost[g] = sys.ghost_rules_.size();
            sys.ghost_rules_.push_back(std::move(rule));
        }
    }

    const double h = d.h();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(sys.row_nodes_.size() * 13);
    std::vector<int> bad;
    for (std::size_t r = 0; r < sys.row_nodes_.size(); ++r) {
        const int p = sys.row_nodes_[r];
        const int pi = d.col(p), pj = d.row(p);
        const int row = static_cast<int>(r);
        for (const StencilEntry& e : kBiharmonic) {
            const int q = d.index(pi + e.di, pj + e.dj);
            switch (d.kind(q)) {
                case NodeKind::Interior:
                    triplets.emplace_back(row, sys.row_of(q), e.weight);
                    break;
                case NodeKind::Boundary:
                    sys.couplings_.push_back({row, e.weight, SparseSystem::Coupling::Source::Height, d.trace_index(q)});
                    break;
                default: {
                    const auto it = rule_of_ghost.find(q);
                    if (it == rule_of_ghost.end()) {
                        bad.push_back(q);
                        break;
                    }
                    const auto& rule = sys.ghost_rules_[it->second];
                    const double w = e.weight / static_cast<double>(rule.mirrors.size());
                    for (const auto& [mirror, sample] : rule.mirrors) {
                        if (d.kind(mirror) == NodeKind::Interior)
                            triplets.emplace_back(row, sys.row_of(mirror), w);
                        else
                            sys.couplings_.push_back({row, w, SparseSystem::Coupling::Source::Height, d.trace_index(mirror)});
                        sys.couplings_.push_back({row, w * 2.0 * h, SparseSystem::Coupling::Source::Slope, sample});
                    }
                }
            }
        }
    }
    if (!bad.empty()) {
        std::sort(bad.begin(), bad.end());
        bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
        std::string msg = "no clamped-boundary mirror for ghost node(s):";
        for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k) msg += " " + node_label(d, bad[k]);
        throw AssemblyError(msg, bad);
    }
    for (const auto& c : sys.couplings_) {
        if (c.sample < 0) {
            throw AssemblyError("boundary node without a trace sample", {sys.row_nodes_[static_cast<std::size_t>(c.row)]});
        }
    }

    const int n = sys.rows();
    sys.matrix_.resize(n, n);
    sys.matrix_.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix_.makeCompressed();

    auto factor = std::make_shared<SparseSystem::Factorization>();
    const Eigen::SparseMatrix<double> colmajor = sys.matrix_;
    factor->ldlt.compute(colmajor);
    if (factor->ldlt.info() != Eigen::Success) {
        factor->use_lu = true;
        factor->lu.compute(colmajor);
        if (factor->lu.info() != Eigen::Success) {
            throw AssemblyError("biharmonic matrix is singular", sys.row_nodes_);
        }
    }
    sys.factor_ = std::move(factor);
    return sys;
}

ScalarField divergence_rhs(const VectorField& h1, const TensorField& h2) {
    const GridDomain& d = h1.x.domain();
    const double h = d.h();
    ScalarField out = ScalarField::undefined(h1.x.domain_ptr());
    auto get = [&](const ScalarField& f, int i, int j) {
        const int n = d.index(i, j);
        if (!f.defined(n))
            throw ConfigurationError("divergence right-hand side needs flux data at node " + node_label(d, n));
        return f[n];
    };
    for (int p : d.interior_nodes()) {
        const int i = d.col(p), j = d.row(p);
        // Negative adjoint of the centered gradient.
        const double first = (get(h1.x, i + 1, j) - get(h1.x, i - 1, j)) / (2.0 * h) +
                             (get(h1.y, i, j + 1) - get(h1.y, i, j - 1)) / (2.0 * h);
        // Adjoints of the compact second differences and of the centered cross difference.
        const double xx = (get(h2.xx, i + 1, j) - 2.0 * get(h2.xx, i, j) + get(h2.xx, i - 1, j)) / (h * h);
        const double yy = (get(h2.yy, i, j + 1) - 2.0 * get(h2.yy, i, j) + get(h2.yy, i, j - 1)) / (h * h);
        const double xy = (get(h2.xy, i + 1, j + 1) - get(h2.xy, i + 1, j - 1) - get(h2.xy, i - 1, j + 1) +
                           get(h2.xy, i - 1, j - 1)) / (4.0 * h * h);
        out.set(p, first + xx + 2.0 * xy + yy);
    }
    return out;
}

ScalarField solve(const SparseSystem& system, const ScalarField& rhs, const BoundaryData& bc, double* residual) {
    const GridDomain& d = system.domain();
    if (rhs.domain_ptr() != system.domain_ptr() || bc.domain_ptr() != system.domain_ptr())
        throw ConfigurationError("solve: system, right-hand side, and boundary data must share one grid");
    const double h4 = std::pow(d.h(), 4);
    const int n = system.rows();
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
        const int node = system.row_nodes()[static_cast<std::size_t>(r)];
        if (!rhs.defined(node)) throw ConfigurationError("right-hand side undefined at interior node " + node_label(d, node));
        b[r] = h4 * rhs[node];
    }
    const auto g0 = bc.g0();
    const auto g1 = bc.g1();
    for (const auto& c : system.couplings()) {
        const double v = c.source == SparseSystem::Coupling::Source::Height ? g0[static_cast<std::size_t>(c.sample)]
                                                                            : g1[static_cast<std::size_t>(c.sample)];
        b[c.row] -= c.coefficient * v;
    }

    Eigen::VectorXd x = system.factor_solve(b);
    if (!x.allFinite()) throw SolverError("biharmonic factorization produced non-finite values");
    const double bnorm = b.norm();
    auto rel = [&](const Eigen::VectorXd& v) {
        const double rn = (system.matrix() * v - b).norm();
        return bnorm > 0.0 ? rn / bnorm : rn;
    };
    double res = rel(x);
    // A few steps of iterative refinement reuse the factorization.
    for (int step = 0; step < 3 && res > 1e-14; ++step) {
        const Eigen::VectorXd r = b - system.matrix() * x;
        const Eigen::VectorXd x2 = x + system.factor_solve(r);
        const double res2 = rel(x2);
        if (!(res2 < res)) break;
        x = x2;
        res = res2;
    }
    if (residual) *residual = res;
    if (!(res <= kSolveTolerance))
        throw ConvergenceError("biharmonic solve residual " + std::to_string(res) + " above tolerance", res);

    ScalarField w = ScalarField::undefined(system.domain_ptr());
    for (int r = 0; r < n; ++r) w.set(system.row_nodes()[static_cast<std::size_t>(r)], x[r]);
    for (int node : d.boundary_nodes()) w.set(node, g0[static_cast<std::size_t>(d.trace_index(node))]);
    const double h = d.h();
    for (const auto& rule : system.ghost_rules()) {
        double acc = 0.0;
        for (const auto& [mirror, sample] : rule.mirrors) acc += w[mirror] + 2.0 * h * g1[static_cast<std::size_t>(sample)];
        w.set(rule.ghost, acc / static_cast<double>(rule.mirrors.size()));
    }
    return w;
}

double max_modulus_ratio(const SparseSystem& system, const BoundaryData& bc) {
    const double denom = boundary_gradient_sup(bc);
    if (!(denom > 0.0)) throw ParameterError("maximum-modulus ratio undefined: boundary gradient data vanish");
    const ScalarField zero(system.domain_ptr());
    const ScalarField w = solve(system, zero, bc);
    const ScalarField wx = derivative(w, Axis::X);
    const ScalarField wy = derivative(w, Axis::Y);
    double sup = 0.0;
    for (int node : system.domain().interior_nodes()) sup = std::max(sup, std::hypot(wx[node], wy[node]));
    return sup / denom;
}

}  // namespace willmore
