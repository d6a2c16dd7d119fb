#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "willmore/boundary.hpp"
#include "willmore/field.hpp"

namespace willmore {

/// Relative residual every linear solve must reach.
inline constexpr double kSolveTolerance = 1e-10;

/// Discrete clamped biharmonic operator on the interior nodes of a
/// grid-aligned polygon. Immutable after assembly and safe to share
/// read-only between threads.
class SparseSystem {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    /// A known boundary value entering row `row` of the right-hand side.
    struct Coupling {
        enum class Source { Height, Slope };
        int row;
        double coefficient;
        Source source;
        int sample;  // boundary trace index
    };

    /// Ghost value = mean over mirrors of (w[mirror] + 2h g1[sample]).
    struct GhostRule {
        int ghost;
        std::vector<std::pair<int, int>> mirrors;  // (mirror node, trace sample)
    };

    const GridDomain& domain() const { return *domain_; }
    const DomainPtr& domain_ptr() const noexcept { return domain_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    int rows() const noexcept { return static_cast<int>(row_nodes_.size()); }
    const std::vector<int>& row_nodes() const noexcept { return row_nodes_; }
    int row_of(int node) const { return row_of_node_[static_cast<std::size_t>(node)]; }
    const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
    const std::vector<GhostRule>& ghost_rules() const noexcept { return ghost_rules_; }
    bool pattern_symmetric() const;

    /// Solves matrix * x = b with the cached factorization.
    Eigen::VectorXd factor_solve(const Eigen::VectorXd& b) const;

private:
    friend SparseSystem assemble(DomainPtr domain);
    struct Factorization;

    DomainPtr domain_;
    Matrix matrix_;
    std::vector<int> row_nodes_;
    std::vector<int> row_of_node_;
    std::vector<Coupling> couplings_;
    std::vector<GhostRule> ghost_rules_;
    std::shared_ptr<const Factorization> factor_;
};

/// 13-point stencil of h^4 lap^2 at every interior node, with ghost values
/// eliminated through the centered normal difference w_G = w_I + 2h g1.
/// Throws ConfigurationError for non grid-aligned or thin domains and
/// AssemblyError when a ghost has no admissible mirror.
SparseSystem assemble(DomainPtr domain);

/// D_i h1^i + D^2_ij h2^ij at interior nodes, built from the transposes of
/// the centered test-field stencils so that discrete integration by parts
/// holds exactly.
ScalarField divergence_rhs(const VectorField& h1, const TensorField& h2);

/// Clamped solve of lap^2 w = rhs, w = g0, dw/dnu = g1. The result is
/// defined on active nodes and on ghosts covered by a rule. Throws
/// SolverError on factorization failure and ConvergenceError when the
/// relative residual stays above kSolveTolerance.
ScalarField solve(const SparseSystem& system, const ScalarField& rhs, const BoundaryData& bc,
                  double* residual = nullptr);

/// sup over interior nodes of |grad w| divided by the boundary gradient sup
/// norm, for the homogeneous solution w with data bc.
double max_modulus_ratio(const SparseSystem& system, const BoundaryData& bc);

}  // namespace willmore
