#include "qcs/solvers.hpp"

#include "solver_detail.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace qcs {

namespace {

constexpr std::array<std::string_view, 8> kNames = {"qiht", "aop-qiht", "qcosamp", "qsp",
                                                     "iht",  "biht",     "cosamp",  "sp"};

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Algorithm>(i);
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm alg) { return kNames[static_cast<std::size_t>(alg)]; }

int algorithm_rank(Algorithm alg) { return static_cast<int>(alg); }

int default_max_iterations(Algorithm alg) {
  switch (alg) {
    case Algorithm::Qiht:
    case Algorithm::AopQiht:
    case Algorithm::Iht:
    case Algorithm::Biht:
      return 300;
    default:
      return 50;
  }
}

double auto_step_size(const Matrix& phi) {
  const double nrm = operator_norm_lanczos(phi);
  if (nrm == 0.0) throw InvalidArgument("auto step size: measurement matrix is zero");
  return 1.0 / (nrm * nrm);
}

std::vector<std::uint8_t> select_outliers(const Vector& penalties, std::size_t budget) {
  const auto m = static_cast<std::size_t>(penalties.size());
  if (budget > m) throw InvalidArgument("select_outliers: outlier budget exceeds measurement count");
  std::vector<std::uint8_t> mask(m, 1);
  if (budget == 0) return mask;
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(budget), order.end(),
                    [&penalties](Index a, Index b) {
                      return penalties[a] > penalties[b] || (penalties[a] == penalties[b] && a < b);
                    });
  for (std::size_t i = 0; i < budget; ++i) mask[static_cast<std::size_t>(order[i])] = 0;
  return mask;
}

Vector consistency_penalties(const Quantizer& quantizer, const Vector& measurements, const Vector& y) {
  if (measurements.size() != y.size()) throw InvalidArgument("consistency_penalties: length mismatch");
  Vector out(y.size());
  for (Index k = 0; k < y.size(); ++k) out[k] = quantizer.phi_penalty(measurements[k], y[k]);
  return out;
}

SolverResult solve(Algorithm alg, const Matrix& phi, const Vector& y, const Quantizer& quantizer,
                   const SolverConfig& cfg) {
  SolverConfig local = cfg;
  if (!local.max_iterations) local.max_iterations = default_max_iterations(alg);
  switch (alg) {
    case Algorithm::Qiht:
      return qiht(phi, y, quantizer, local);
    case Algorithm::AopQiht:
      return aop_qiht(phi, y, quantizer, local);
    case Algorithm::Qcosamp:
      return qcosamp(phi, y, quantizer, local);
    case Algorithm::Qsp:
      return qsp(phi, y, quantizer, local);
    case Algorithm::Iht:
      return qiht(phi, y, Quantizer::identity(), local);
    case Algorithm::Biht:
      return qiht(phi, y, build_sign_quantizer(), local);
    case Algorithm::Cosamp:
      return qcosamp(phi, y, Quantizer::identity(), local);
    case Algorithm::Sp:
      return qsp(phi, y, Quantizer::identity(), local);
  }
  throw InvalidArgument("solve: unhandled algorithm");
}

namespace detail {

void check_problem(const Matrix& phi, const Vector& y, const Quantizer& quantizer, std::size_t sparsity) {
  if (phi.rows() != y.size()) throw InvalidArgument("solver: rows(Phi) != length(y)");
  if (phi.rows() == 0 || phi.cols() == 0) throw InvalidArgument("solver: empty measurement matrix");
  if (sparsity == 0 || sparsity > static_cast<std::size_t>(phi.cols()))
    throw InvalidArgument("solver: sparsity must be in [1, N]");
  if (!quantizer.is_identity())
    for (Index k = 0; k < y.size(); ++k) (void)quantizer.level_index(y[k]);
}

double consistency_objective(const Quantizer& quantizer, const Vector& z, const Vector& y) {
  if (quantizer.is_identity()) return 0.5 * (y - z).squaredNorm();
  double total = 0.0;
  for (Index k = 0; k < y.size(); ++k) total += quantizer.phi_penalty(z[k], y[k]);
  return total;
}

void finish(SolverResult& res, const Matrix& phi, const Vector& y, const Quantizer& quantizer, const Vector& x) {
  res.degenerate = res.degenerate || x.norm() == 0.0;
  res.estimate = normalize(x);
  res.mismatch_count = quantizer.mismatch_count(apply_sparse(phi, res.estimate), y);
}

}  // namespace detail

}  // namespace qcs
