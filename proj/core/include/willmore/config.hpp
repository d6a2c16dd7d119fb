#pragma once

#include <string>
#include <vector>

#include "willmore/boundary.hpp"
#include "willmore/fixed_point.hpp"
#include "willmore/polygon.hpp"

namespace willmore {

inline constexpr int kMinResolution = 16;

/// Validated run configuration. The text format is one `key = value` per
/// line, `#` starts a comment, later keys override earlier ones.
struct RunConfig {
    std::string domain = "unit-square";  // unit-square | l-shape | polygon
    std::vector<Point> vertices;         // for domain = polygon
    int resolution = 64;                 // cells per unit length, h = 1/resolution

    std::string boundary = "sine-slope";  // zero | sine-slope | sine-height | affine | file
    double amplitude = 0.05;
    std::string boundary_file;

    double p = 4.0;
    double a = 0.25;
    double tolerance = 1e-8;
    int max_iterations = 50;
    double damping = 1.0;
    std::string initial_guess = "biharmonic";  // biharmonic | zero
    double blowup_gradient = 10.0;
    double blowup_growth = 1e6;

    std::string field = "sine";  // sine | cubic | affine | sphere-cap
    double field_amplitude = 0.1;
    double cap_radius = 2.0;
    double cap_angle = 1.0471975511965976;
    std::vector<int> levels{16, 32, 64};
    std::vector<double> sweep_epsilons{0.01, 0.02, 0.05, 0.1};

    std::string output_dir = "willmore-out";

    double h() const { return 1.0 / resolution; }
    Polygon polygon() const;
    IterationConfig iteration() const;
    BoundaryShape boundary_shape() const;
};

/// Known configuration keys, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses and validates. Throws ConfigurationError carrying every problem
/// found; unknown keys name the closest valid key.
RunConfig parse_config(const std::string& text);

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace willmore
