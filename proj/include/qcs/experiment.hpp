#pragma once

#include "qcs/quantizer.hpp"
#include "qcs/solvers.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qcs {

/// One synthetic quantized compressed sensing instance.
struct Problem {
  Matrix phi;                 ///< M x N, i.i.d. N(0, 1)
  Vector x_true;              ///< K-sparse, unit norm
  Vector clean_measurements;  ///< phi * x_true
  Vector noisy_measurements;  ///< clean + noise (+ sign flips), pre-quantization
  Vector y;                   ///< quantized measurements; empty until quantize_problem
  IndexSet corrupted_indices;
  std::uint64_t master_seed = 0;
};

/// Gaussian phi and a uniformly supported K-sparse unit-norm signal, fully
/// determined by seed. noisy_measurements starts equal to clean_measurements.
Problem gen_problem(Index n, Index m, std::size_t k, std::uint64_t seed);

/// Adds Gaussian noise rescaled so 10 log10(||clean||^2 / ||noise||^2) = isnr_db.
/// isnr_db = +inf leaves the measurements untouched.
Problem add_noise(Problem p, double isnr_db, std::uint64_t seed);

/// Negates floor(fraction * M) uniformly chosen pre-quantization measurements.
Problem corrupt(Problem p, double fraction, std::uint64_t seed);

/// Sets p.y = quantizer(noisy_measurements).
Problem quantize_problem(Problem p, const Quantizer& quantizer);

/// 10 log10(||truth||^2 / ||estimate - truth||^2); +inf when the error energy is below 1e-300.
double rsnr(const Vector& estimate, const Vector& truth);

/// How a cell's bit depth maps to a quantizer.
/// Auto: sign quantizer at B = 1, uniform(B, saturation) above.
enum class QuantizerKind { Auto, Sign, Uniform };

QuantizerKind parse_quantizer_kind(std::string_view name);
std::string_view to_string(QuantizerKind kind);

Quantizer make_quantizer(QuantizerKind kind, int bit_depth, double saturation);

/// Solver and quantizer options shared by every trial of a sweep.
struct TrialSettings {
  QuantizerKind quantizer = QuantizerKind::Auto;
  double saturation = 3.0;
  std::optional<double> step_size;     ///< unset: auto
  std::optional<int> max_iterations;   ///< unset: per-algorithm default
  std::optional<std::size_t> outlier_budget;  ///< unset: the true corruption count
  ProjectionOptions projection;
  bool prune = true;
  bool consistency_stop = true;

  friend bool operator==(const TrialSettings&, const TrialSettings&) = default;
};

/// One point of the experiment grid. M = floor(total_bits / bit_depth).
struct Cell {
  Index n = 0;
  std::size_t k = 0;
  std::int64_t total_bits = 0;
  int bit_depth = 1;
  double isnr_db = kInf;
  double corruption = 0.0;

  [[nodiscard]] Index m() const { return static_cast<Index>(total_bits / bit_depth); }
  /// Canonical text identifier hashed into per-trial seeds.
  [[nodiscard]] std::string id() const;
  /// Throws InvalidArgument when M < 1, K > N or other ranges are violated.
  void validate() const;
};

/// Value ordering used when merging sweep results.
bool cell_less(const Cell& a, const Cell& b);

struct TrialRecord {
  Algorithm algorithm = Algorithm::Qiht;
  int bit_depth = 1;
  std::int64_t total_bits = 0;
  Index m = 0;
  Index n = 0;
  std::size_t k = 0;
  double isnr_db = kInf;
  double corruption = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rsnr_db = 0.0;
  int iterations = 0;
  std::size_t mismatch = 0;
  double runtime_ms = 0.0;

  [[nodiscard]] Cell cell() const { return {n, k, total_bits, bit_depth, isnr_db, corruption}; }
};

/// Seed of trial `trial_index` of `cell` under master_seed.
std::uint64_t trial_seed(std::uint64_t master_seed, const Cell& cell, int trial_index);

/// Problem (noise, corruption and quantization applied) for one trial.
Problem build_trial_problem(const Cell& cell, int trial_index, std::uint64_t master_seed,
                            const Quantizer& quantizer);

/// Runs several algorithms on the same trial problem.
std::vector<TrialRecord> run_trials(const Cell& cell, int trial_index, const std::vector<Algorithm>& algorithms,
                                    std::uint64_t master_seed, const TrialSettings& settings);

TrialRecord run_trial(const Cell& cell, int trial_index, Algorithm algorithm, std::uint64_t master_seed,
                      const TrialSettings& settings = {});

struct SweepGrid {
  Index n = 1000;
  std::vector<std::size_t> sparsity_levels;
  std::vector<std::int64_t> total_bits;
  std::vector<double> isnr_levels{kInf};
  std::vector<int> bit_depths{1};
  std::vector<double> corruption_fractions{0.0};
  int trials = 20;
  std::vector<Algorithm> algorithms;

  /// Cross product in the order k, total_bits, isnr, bit_depth, corruption.
  [[nodiscard]] std::vector<Cell> cells() const;
  void validate() const;

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Worker count from QCS_THREADS, falling back to the hardware concurrency.
unsigned sweep_threads();

/// All (cell, algorithm, trial) records, sorted by (cell, algorithm, trial).
std::vector<TrialRecord> run_sweep(const SweepGrid& grid, std::uint64_t master_seed,
                                   const TrialSettings& settings = {}, const ProgressCallback& progress = {},
                                   unsigned threads = 0);

/// Orders records by cell values, then algorithm rank, then trial.
void sort_records(std::vector<TrialRecord>& records);

}  // namespace qcs
