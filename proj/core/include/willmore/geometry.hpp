#pragma once

#include "willmore/field.hpp"
#include "willmore/vec2.hpp"

namespace willmore {

/// First and second derivatives of a graph at one point.
struct Jet {
    Vec2 grad;
    Sym2 hess;
};

/// Closed-form pointwise quantities of the graph z = u(x, y).
namespace pointwise {

/// Q = sqrt(1 + |grad u|^2).
double area_element(Vec2 grad);
/// H = div(grad u / Q) = lap u / Q - grad u . (D^2u grad u) / Q^3.
double mean_curvature(const Jet& jet);
/// K = det(D^2 u) / Q^4.
double gauss_curvature(const Jet& jet);
/// First-order flux of the divergence form, b1 = -C with
/// C = 5/2 (H^2/Q) grad u + 2 (H/Q^2) D^2u grad u - 2 (lap u H / Q^2) grad u.
Vec2 b1(const Jet& jet);
/// Second-order flux, b2 = A I + (H/Q^2) grad u (x) grad u with
/// A = |grad u|^2 lap u / (Q (1+Q)) + grad u . (D^2u grad u) / Q^3.
Sym2 b2(const Jet& jet);

}  // namespace pointwise

enum class Axis { X, Y };

// Discrete difference operators. Centered where both neighbours are defined,
// second-order one-sided otherwise; the result is defined wherever some
// stencil fits.
ScalarField derivative(const ScalarField& f, Axis axis);
ScalarField second_derivative(const ScalarField& f, Axis axis);
/// Symmetrized mixed derivative (Dy Dx f + Dx Dy f) / 2.
ScalarField mixed_derivative(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// D^2_ij T^ij = Dxx Txx + 2 Dxy Txy + Dyy Tyy.
ScalarField double_divergence(const TensorField& t);

/// Throws ConfigurationError when an active node has no room for a
/// stencil (fewer than 5 nodes across the domain).
VectorField gradient(const ScalarField& u);
TensorField hessian(const ScalarField& u);

ScalarField area_element(const ScalarField& u);
ScalarField mean_curvature(const ScalarField& u);
ScalarField gauss_curvature(const ScalarField& u);
VectorField b1_terms(const ScalarField& u);
TensorField b2_terms(const ScalarField& u);

/// Default distance (in cells) between the boundary and nodes where fourth
/// order composites are reported.
inline constexpr int kOperatorMargin = 2;

/// lap^2 u - D_i b1^i - D^2_ij b2^ij, defined only on nodes at least
/// `margin` cells inside the domain.
ScalarField willmore_operator_divergence(const ScalarField& u, int margin = kOperatorMargin);
/// div( (1/Q)(I - grad u (x) grad u / Q^2) grad(QH) - H^2/(2Q) grad u ),
/// evaluated as nested discrete divergences of flux fields.
ScalarField willmore_operator_geometric(const ScalarField& u, int margin = kOperatorMargin);
/// Laplace-Beltrami form lap_g H + H^3/2 - 2HK with the induced metric.
ScalarField willmore_operator_intrinsic(const ScalarField& u, int margin = kOperatorMargin);

/// (1/4) integral of H^2 dS with dS = Q dx.
double willmore_energy(const ScalarField& u);
/// Integral of (H^2/4 - K) dS.
double conformal_energy(const ScalarField& u);

}  // namespace willmore
