#pragma once

#include <string>
#include <vector>

#include "willmore/boundary.hpp"
#include "willmore/field.hpp"

namespace willmore {

inline constexpr const char* kSchemaVersion = "1.0";

/// CSV with header "x,y,<name>", one row per defined active node, values
/// written with 17 significant digits.
void export_field(const ScalarField& field, const std::string& path, const std::string& name);

/// CSV with header "arclength,g0,g1", one row per trace sample.
void export_boundary(const BoundaryData& bc, const std::string& path);

/// Reads (arclength, g0, g1) rows; a non-numeric first line is taken as a
/// header. Throws IoError naming the row for malformed or non-monotone input.
/// When the sample count differs from the domain's trace the data are
/// resampled by periodic linear interpolation and a warning is appended.
BoundaryData import_boundary(const std::string& path, DomainPtr domain, std::vector<std::string>* warnings = nullptr);

/// Same as import_boundary, reading from a string.
BoundaryData parse_boundary_csv(const std::string& text, DomainPtr domain, std::vector<std::string>* warnings = nullptr);

}  // namespace willmore
