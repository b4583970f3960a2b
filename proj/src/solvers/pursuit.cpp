#include "qcs/linalg.hpp"
#include "qcs/projection.hpp"
#include "qcs/solvers.hpp"

#include "solver_detail.hpp"

namespace qcs {

namespace {

int iteration_cap(const SolverConfig& cfg) {
  const int iters = cfg.max_iterations.value_or(default_max_iterations(Algorithm::Qcosamp));
  if (iters < 1) throw InvalidArgument("solver: max_iterations must be positive");
  return iters;
}

ProjectionResult fit_on(const Matrix& phi, const IndexSet& cols, const Vector& y, const RegionBox& box,
                        const ProjectionOptions& opts) {
  return project_consistent(restrict_columns(phi, cols), y, box, opts);
}

}  // namespace

SolverResult qcosamp(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg) {
  detail::check_problem(phi, y, quantizer, cfg.sparsity);
  const std::size_t k = cfg.sparsity;
  const auto n = phi.cols();
  if (2 * k > static_cast<std::size_t>(n)) throw InvalidArgument("qcosamp: requires 2K <= N");
  const int iters = iteration_cap(cfg);
  const RegionBox box = quantizer.regions_of(y);

  SolverResult res;
  Vector a = Vector::Zero(n);
  Vector v = y;
  for (int it = 0; it < iters; ++it) {
    const Vector u = phi.transpose() * v;
    const IndexSet merged = top_support(u, 2 * k).unite(support_of(a));
    const ProjectionResult proj = fit_on(phi, merged, y, box, cfg.projection);
    const Vector b = embed(proj.coefficients, merged, n);
    Vector next = cfg.prune ? hard_threshold(b, k) : b;
    v = y - quantizer.quantize(apply_sparse(phi, next));
    ++res.iterations_run;
    res.objective_trace.push_back(v.norm());
    if (cfg.observer) cfg.observer(res.iterations_run, next);
    const bool fixed = next == a;
    a = std::move(next);
    if (cfg.consistency_stop && (v.array() == 0.0).all()) break;
    if (fixed) break;
  }
  detail::finish(res, phi, y, quantizer, a);
  return res;
}

SolverResult qsp(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg) {
  detail::check_problem(phi, y, quantizer, cfg.sparsity);
  const std::size_t k = cfg.sparsity;
  const auto n = phi.cols();
  const int iters = iteration_cap(cfg);
  const RegionBox box = quantizer.regions_of(y);

  SolverResult res;
  IndexSet support = top_support(phi.transpose() * y, k);
  Vector residual = fit_on(phi, support, y, box, cfg.projection).residual;
  double residual_norm = residual.norm();

  for (int l = 0; l < iters; ++l) {
    const IndexSet candidates = support.unite(top_support(phi.transpose() * residual, k));
    const Vector xp = embed(fit_on(phi, candidates, y, box, cfg.projection).coefficients, candidates, n);
    IndexSet next = top_support(xp, k);
    Vector next_residual = fit_on(phi, next, y, box, cfg.projection).residual;
    const double next_norm = next_residual.norm();
    ++res.iterations_run;
    res.objective_trace.push_back(next_norm);
    if (cfg.observer) cfg.observer(res.iterations_run, hard_threshold(xp, k));
    // Residual grew: keep the previous support.
    if (next_norm > residual_norm) break;
    const bool fixed = next == support;
    support = std::move(next);
    residual = std::move(next_residual);
    residual_norm = next_norm;
    if (cfg.consistency_stop) {
      const Vector x = embed(least_squares(restrict_columns(phi, support), y), support, n);
      if (quantizer.mismatch_count(apply_sparse(phi, x), y) == 0) break;
    }
    if (fixed) break;
  }
  const Vector x = embed(least_squares(restrict_columns(phi, support), y), support, n);
  detail::finish(res, phi, y, quantizer, x);
  return res;
}

}  // namespace qcs
