#pragma once

#include "qcs/projection.hpp"
#include "qcs/quantizer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace qcs {

/// Reconstruction algorithms. The last four are the classical, unquantized
/// counterparts exposed for debugging and comparison.
enum class Algorithm { Qiht, AopQiht, Qcosamp, Qsp, Iht, Biht, Cosamp, Sp };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm alg);
/// Position in the catalog tie-break order qiht < aop-qiht < qcosamp < qsp < iht < biht < cosamp < sp.
int algorithm_rank(Algorithm alg);
/// Default iteration cap: 300 for the thresholding methods, 50 for the pursuit methods.
int default_max_iterations(Algorithm alg);

/// Called once per iteration with the (unnormalized) current iterate.
using IterateObserver = std::function<void(int iteration, const Vector& iterate)>;

struct SolverConfig {
  std::size_t sparsity = 1;
  /// Unset: the algorithm's default (see default_max_iterations).
  std::optional<int> max_iterations;
  /// Unset: Auto, 1 / ||Phi||_2^2.
  std::optional<double> step_size;
  /// AOP-QIHT: number of measurements treated as outliers.
  std::size_t outlier_budget = 0;
  /// QSP / QCoSaMP region projection.
  ProjectionOptions projection;
  /// Stop once quantize(Phi x) == y.
  bool consistency_stop = true;
  /// QCoSaMP: prune each iterate to K entries. false runs the listing verbatim.
  bool prune = true;
  IterateObserver observer;
};

struct SolverResult {
  Vector estimate;  ///< unit norm, or zero when degenerate
  int iterations_run = 0;
  std::size_t mismatch_count = 0;  ///< ||y - f_Q(Phi x^)||_0
  std::optional<std::vector<std::uint8_t>> outlier_mask;
  std::vector<double> objective_trace;
  /// Set when initialization collapsed to zero (y = 0 or Phi^T y = 0).
  bool degenerate = false;
};

/// Auto step size 1 / ||phi||_2^2.
double auto_step_size(const Matrix& phi);

SolverResult qiht(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg);
SolverResult aop_qiht(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg);
SolverResult qcosamp(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg);
SolverResult qsp(const Matrix& phi, const Vector& y, const Quantizer& quantizer, const SolverConfig& cfg);

/// Dispatches by algorithm. The classical variants ignore quantization
/// (iht, cosamp, sp treat y as real-valued; biht uses the sign quantizer).
SolverResult solve(Algorithm alg, const Matrix& phi, const Vector& y, const Quantizer& quantizer,
                   const SolverConfig& cfg);

/// Lambda_k = 0 for the L largest penalties (ties: lower index first), 1 otherwise.
std::vector<std::uint8_t> select_outliers(const Vector& penalties, std::size_t budget);

/// Per-measurement phi((Phi x)_k, y_k).
Vector consistency_penalties(const Quantizer& quantizer, const Vector& measurements, const Vector& y);

}  // namespace qcs
