#pragma once

#include "qcs/linalg.hpp"
#include "qcs/quantizer.hpp"

#include <string_view>

namespace qcs {

/// How (coefficients, consistent point) are fitted against a region box.
///
/// Literal: project y onto its closed region (a no-op for level-valued y),
/// then least squares. Joint: alternate least squares and box projection,
/// starting from y, pursuing min ||y' - Phi_T x'|| over y' in R_y.
enum class ProjectionMode { Literal, Joint };

ProjectionMode parse_projection_mode(std::string_view name);
std::string_view to_string(ProjectionMode mode);

struct ProjectionOptions {
  ProjectionMode mode = ProjectionMode::Joint;
  int max_iterations = 50;
  double tolerance = 1e-6;

  friend bool operator==(const ProjectionOptions&, const ProjectionOptions&) = default;
};

struct ProjectionResult {
  Vector coefficients;      ///< x~ over the columns of Phi_T
  Vector consistent_point;  ///< y~, inside the closed box R_y
  Vector residual;          ///< y~ - Phi_T x~
  int iterations = 0;
  /// ||y~ - Phi_T x~|| after each alternation (Joint) or the single solve.
  std::vector<double> objective_trace;
};

/// Fits coefficients and a region-consistent point for the columns in phi_t.
ProjectionResult project_consistent(const Matrix& phi_t, const Vector& y, const Quantizer& quantizer,
                                    const ProjectionOptions& options = {});

/// Same, with the region box already resolved (solvers reuse it).
ProjectionResult project_consistent(const Matrix& phi_t, const Vector& y, const RegionBox& box,
                                    const ProjectionOptions& options = {});

Vector resid(const Vector& y, const Matrix& phi_t, const Quantizer& quantizer, const ProjectionOptions& options = {});
Vector pcoeff(const Vector& y, const Matrix& phi_t, const Quantizer& quantizer, const ProjectionOptions& options = {});

}  // namespace qcs
