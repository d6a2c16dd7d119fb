#pragma once

#include <optional>
#include <string>
#include <vector>

#include "willmore/biharmonic.hpp"
#include "willmore/norms.hpp"

namespace willmore {

enum class InitialGuess { Biharmonic, Zero, User };

struct IterationConfig {
    NormParams norm = NormParams::make(4.0, 0.25);
    double tolerance = 1e-8;  // on ||u_{k+1} - u_k|| in W^{2,a}_p
    int max_iterations = 50;
    double damping = 1.0;     // theta in (0, 1]
    InitialGuess initial = InitialGuess::Biharmonic;
    std::optional<ScalarField> user_guess;
    double blowup_gradient = 10.0;
    double blowup_growth = 1e6;

    /// Throws ConfigurationError listing every violated requirement.
    void validate() const;
};

/// The three iteration-set quantities of one iterate.
struct SetNorms {
    double gradient_sup = 0.0;  // ||grad u||_inf
    double hessian_l1 = 0.0;    // ||D^2 u||_{L^1(d^a)}
    double sobolev = 0.0;       // ||u||_{W^{2,a}_p}
};

struct LedgerEntry {
    int iteration = 0;
    SetNorms norms;
    double difference = 0.0;  // ||u_k - u_{k-1}||_{W^{2,a}_p}
};

struct ContractionSummary {
    std::vector<double> factors;  // q_k = diff_{k+1} / diff_k
    std::vector<int> skipped;     // iterations whose denominator was at rounding level
    bool sufficient = false;      // at least one factor available
    double q_max = 0.0;
    double q_geometric_mean = 0.0;
    bool expanding = false;       // q_max >= 1
    std::string note;
};

struct WillmoreResidual {
    double weak = 0.0;
    double strong = 0.0;
    double scale = 0.0;  // max |lap_h^2 u| over the same nodes
};

enum class Outcome { Converged, NotConverged, Diverged };
const char* to_string(Outcome o);

struct IterationState {
    ScalarField u;
    SetNorms initial;
    std::vector<LedgerEntry> ledger;
    bool diverged = false;
    /// Set when some iterate leaves ||grad u||_inf <= 1 although the
    /// initial guess satisfied it.
    bool gradient_bound_violated = false;
    std::vector<std::string> warnings;
};

struct ConvergenceReport {
    Outcome outcome = Outcome::NotConverged;
    int iterations = 0;
    double final_difference = 0.0;
    std::vector<LedgerEntry> ledger;
    SetNorms initial;
    ContractionSummary contraction;
    WillmoreResidual residual;
    double aux_q = 0.0;      // (2/(1-a) + p) / 2
    double aux_gamma = 0.0;  // (p/q)(q-1)/(p-1)
    bool gradient_bound_violated = false;
    std::vector<std::string> warnings;
    std::string caveat;
};

struct IterationResult {
    ScalarField u;
    IterationState state;
    ConvergenceReport report;
};

SetNorms set_norms(const ScalarField& u, const NormParams& params, const DistanceField& d);

/// One application of the iteration map: solve lap^2 w = D b1[v] + D^2 b2[v]
/// with data bc, then relax to (1 - theta) v + theta w. Appends a warning
/// when ||grad v||_inf > 1; throws SolverError when the b-terms are not finite.
ScalarField apply_G(const SparseSystem& system, const ScalarField& v, const BoundaryData& bc,
                    const IterationConfig& cfg, std::vector<std::string>* warnings = nullptr);
ScalarField apply_G(const ScalarField& v, const BoundaryData& bc, const IterationConfig& cfg);

/// Picard iteration from the configured initial guess. Divergence is an
/// outcome, not an exception; linear solver failures propagate.
IterationResult iterate(const SparseSystem& system, const BoundaryData& bc, const IterationConfig& cfg);
IterationResult iterate(const BoundaryData& bc, const IterationConfig& cfg);

ContractionSummary contraction_report(const IterationState& state);

/// Weak residual: max over a fixed 3x3 lattice of smooth interior bumps phi
/// of |sum lap u lap phi + b1 . D phi - b2 : D^2 phi| / ||phi||_2. Strong
/// residual: max of the divergence-form operator on the margin-2 mask.
WillmoreResidual willmore_residual(const ScalarField& u);

}  // namespace willmore
