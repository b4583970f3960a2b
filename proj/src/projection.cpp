#include "qcs/projection.hpp"

namespace qcs {

ProjectionMode parse_projection_mode(std::string_view name) {
  if (name == "literal") return ProjectionMode::Literal;
  if (name == "joint") return ProjectionMode::Joint;
  throw InvalidArgument("projection mode must be 'literal' or 'joint'");
}

std::string_view to_string(ProjectionMode mode) {
  return mode == ProjectionMode::Literal ? "literal" : "joint";
}

ProjectionResult project_consistent(const Matrix& phi_t, const Vector& y, const Quantizer& quantizer,
                                    const ProjectionOptions& options) {
  if (phi_t.rows() != y.size()) throw InvalidArgument("project_consistent: rows(Phi_T) != length(y)");
  return project_consistent(phi_t, y, quantizer.regions_of(y), options);
}

ProjectionResult project_consistent(const Matrix& phi_t, const Vector& y, const RegionBox& box,
                                    const ProjectionOptions& options) {
  if (phi_t.rows() != y.size() || box.size() != y.size())
    throw InvalidArgument("project_consistent: dimension mismatch");
  const LeastSquares ls(phi_t);
  ProjectionResult out;
  Vector& ytilde = out.consistent_point;
  ytilde = box.clip(y);
  out.coefficients = ls.solve(ytilde);
  Vector fit = phi_t * out.coefficients;
  out.objective_trace.push_back((ytilde - fit).norm());
  out.iterations = 1;

  if (options.mode == ProjectionMode::Joint) {
    const double stop = options.tolerance * y.norm();
    for (int t = 1; t < options.max_iterations; ++t) {
      Vector next = box.clip(fit);
      const double delta = (next - ytilde).norm();
      ytilde = std::move(next);
      out.coefficients = ls.solve(ytilde);
      fit = phi_t * out.coefficients;
      out.objective_trace.push_back((ytilde - fit).norm());
      ++out.iterations;
      if (delta <= stop) break;
    }
  }
  out.residual = ytilde - fit;
  return out;
}

Vector resid(const Vector& y, const Matrix& phi_t, const Quantizer& quantizer, const ProjectionOptions& options) {
  return project_consistent(phi_t, y, quantizer, options).residual;
}

Vector pcoeff(const Vector& y, const Matrix& phi_t, const Quantizer& quantizer, const ProjectionOptions& options) {
  return project_consistent(phi_t, y, quantizer, options).coefficients;
}

}  // namespace qcs
