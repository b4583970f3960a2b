#pragma once

#include "qcs/solvers.hpp"

namespace qcs::detail {

/// Dimension, sparsity and level-membership checks shared by every solver.
void check_problem(const Matrix& phi, const Vector& y, const Quantizer& quantizer, std::size_t sparsity);

/// Sum of phi penalties over measurements; 0.5 ||y - z||^2 for the identity quantizer.
double consistency_objective(const Quantizer& quantizer, const Vector& z, const Vector& y);

/// Normalizes x into res.estimate and fills mismatch_count / degenerate.
void finish(SolverResult& res, const Matrix& phi, const Vector& y, const Quantizer& quantizer, const Vector& x);

}  // namespace qcs::detail
