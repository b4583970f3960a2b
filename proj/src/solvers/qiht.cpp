#include "qcs/linalg.hpp"
#include "qcs/solvers.hpp"

#include "solver_detail.hpp"

#include <limits>

namespace qcs {

namespace {

struct IhtSetup {
  std::size_t sparsity;
  int max_iterations;
  double step;
};

IhtSetup setup(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg) {
  detail::check_problem(phi, y, quantizer, cfg.sparsity);
  const int iters = cfg.max_iterations.value_or(default_max_iterations(Algorithm::Qiht));
  if (iters < 1) throw InvalidArgument("solver: max_iterations must be positive");
  if (cfg.step_size && !(*cfg.step_size > 0.0)) throw InvalidArgument("solver: step size must be positive");
  return {cfg.sparsity, iters, cfg.step_size ? *cfg.step_size : auto_step_size(phi)};
}

/// x^0 = Phi^T y / ||Phi^T y||; empty when Phi^T y = 0.
std::optional<Vector> initial_iterate(const Matrix& phi, const Vector& y) {
  Vector x = phi.transpose() * y;
  if (x.norm() == 0.0) return std::nullopt;
  return normalize(x);
}

SolverResult degenerate_result(const Matrix& phi, const Vector& y, const Quantizer& quantizer) {
  SolverResult res;
  res.degenerate = true;
  detail::finish(res, phi, y, quantizer, Vector::Zero(phi.cols()));
  return res;
}

}  // namespace

SolverResult qiht(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg) {
  const IhtSetup s = setup(phi, y, quantizer, cfg);
  auto init = initial_iterate(phi, y);
  if (!init) return degenerate_result(phi, y, quantizer);

  SolverResult res;
  Vector x = std::move(*init);
  Vector z = phi * x;
  for (int l = 0; l < s.max_iterations; ++l) {
    const Vector r = y - quantizer.quantize(z);
    const Vector a = x + s.step * (phi.transpose() * r);
    Vector next = hard_threshold(a, s.sparsity);
    z = apply_sparse(phi, next);
    ++res.iterations_run;
    res.objective_trace.push_back(detail::consistency_objective(quantizer, z, y));
    if (cfg.observer) cfg.observer(res.iterations_run, next);
    // x^{l+1} = x^l means every later iterate repeats.
    const bool fixed = next == x;
    x = std::move(next);
    if (cfg.consistency_stop && quantizer.mismatch_count(z, y) == 0) break;
    if (fixed) break;
  }
  detail::finish(res, phi, y, quantizer, x);
  return res;
}

SolverResult aop_qiht(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg) {
  const IhtSetup s = setup(phi, y, quantizer, cfg);
  const std::size_t budget = cfg.outlier_budget;
  if (budget > static_cast<std::size_t>(y.size())) throw InvalidArgument("aop_qiht: outlier budget exceeds M");
  auto init = initial_iterate(phi, y);
  if (!init) {
    SolverResult res = degenerate_result(phi, y, quantizer);
    res.outlier_mask = std::vector<std::uint8_t>(static_cast<std::size_t>(y.size()), 1);
    return res;
  }

  SolverResult res;
  Vector x = std::move(*init);
  Vector z = phi * x;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(y.size()), 1);
  Vector mask_vec = Vector::Ones(y.size());
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::size_t tol = kUnset;
  std::size_t best = kUnset;

  for (int l = 0; l < s.max_iterations && budget <= tol; ++l) {
    // Measurements outside supp(Lambda) do not contribute to the gradient.
    const Vector r = mask_vec.cwiseProduct(y - quantizer.quantize(z));
    const Vector a = x + s.step * (phi.transpose() * r);
    Vector next = hard_threshold(a, s.sparsity);
    z = apply_sparse(phi, next);
    tol = quantizer.mismatch_count(z, y);
    bool mask_changed = false;
    bool best_changed = false;
    if (tol <= best) {
      auto refreshed = select_outliers(consistency_penalties(quantizer, z, y), budget);
      mask_changed = refreshed != mask;
      best_changed = tol != best;
      mask = std::move(refreshed);
      for (std::size_t k = 0; k < mask.size(); ++k) mask_vec[static_cast<Index>(k)] = mask[k];
      best = tol;
    }
    ++res.iterations_run;
    double objective = 0.0;
    for (Index k = 0; k < y.size(); ++k)
      if (mask[static_cast<std::size_t>(k)]) objective += quantizer.phi_penalty(z[k], y[k]);
    res.objective_trace.push_back(quantizer.is_identity() ? detail::consistency_objective(quantizer, z, y)
                                                          : objective);
    if (cfg.observer) cfg.observer(res.iterations_run, next);
    const bool fixed = next == x && !mask_changed && !best_changed;
    x = std::move(next);
    if (cfg.consistency_stop && tol == 0) break;
    if (fixed) break;
  }
  detail::finish(res, phi, y, quantizer, x);
  res.outlier_mask = std::move(mask);
  return res;
}

}  // namespace qcs
