#include "qcs/experiment.hpp"

#include "qcs/format.hpp"
#include "qcs/linalg.hpp"
#include "qcs/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

namespace qcs {

namespace {

/// First `count` entries of a Fisher-Yates shuffle of 0..n-1.
std::vector<Index> sample_without_replacement(Index n, std::size_t count, CounterRng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(n) - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

Problem gen_problem(Index n, Index m, std::size_t k, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidArgument("gen_problem: N and M must be positive");
  if (k < 1 || k > static_cast<std::size_t>(n)) throw InvalidArgument("gen_problem: sparsity must be in [1, N]");
  Problem p;
  p.master_seed = seed;

  CounterRng matrix_rng(derive_seed(seed, "phi"));
  p.phi.resize(m, n);
  double* data = p.phi.data();
  for (Index i = 0; i < m * n; ++i) data[i] = matrix_rng.normal();

  CounterRng support_rng(derive_seed(seed, "support"));
  CounterRng value_rng(derive_seed(seed, "values"));
  const auto support = sample_without_replacement(n, k, support_rng);
  p.x_true = Vector::Zero(n);
  for (Index j : support) p.x_true[j] = value_rng.normal();
  p.x_true = normalize(p.x_true);

  p.clean_measurements = p.phi * p.x_true;
  p.noisy_measurements = p.clean_measurements;
  return p;
}

Problem add_noise(Problem p, double isnr_db, std::uint64_t seed) {
  if (std::isnan(isnr_db) || !(isnr_db > 0.0)) throw InvalidArgument("add_noise: ISNR must be positive or inf");
  if (std::isinf(isnr_db)) return p;
  CounterRng rng(derive_seed(seed, "noise"));
  Vector noise(p.clean_measurements.size());
  for (Index i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
  const double raw = noise.squaredNorm();
  const double target = p.clean_measurements.squaredNorm() * std::pow(10.0, -isnr_db / 10.0);
  if (raw > 0.0) noise *= std::sqrt(target / raw);
  p.noisy_measurements += noise;
  return p;
}

Problem corrupt(Problem p, double fraction, std::uint64_t seed) {
  if (std::isnan(fraction) || fraction < 0.0 || fraction > 1.0)
    throw InvalidArgument("corrupt: fraction must be in [0, 1]");
  const Index m = p.noisy_measurements.size();
  // The epsilon keeps products such as 0.29 * 100 from flooring one short.
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m) + 1e-9));
  if (count == 0) return p;
  CounterRng rng(derive_seed(seed, "corrupt"));
  auto flipped = sample_without_replacement(m, count, rng);
  for (Index i : flipped) p.noisy_measurements[i] = -p.noisy_measurements[i];
  p.corrupted_indices = IndexSet(std::move(flipped));
  return p;
}

Problem quantize_problem(Problem p, const Quantizer& quantizer) {
  p.y = quantizer.quantize(p.noisy_measurements);
  return p;
}

double rsnr(const Vector& estimate, const Vector& truth) {
  if (estimate.size() != truth.size()) throw InvalidArgument("rsnr: length mismatch");
  const double err = (estimate - truth).squaredNorm();
  if (err < 1e-300) return kInf;
  return 10.0 * std::log10(truth.squaredNorm() / err);
}

QuantizerKind parse_quantizer_kind(std::string_view name) {
  if (name == "auto") return QuantizerKind::Auto;
  if (name == "sign") return QuantizerKind::Sign;
  if (name == "uniform") return QuantizerKind::Uniform;
  throw InvalidArgument("quantizer kind must be 'auto', 'sign' or 'uniform'");
}

std::string_view to_string(QuantizerKind kind) {
  switch (kind) {
    case QuantizerKind::Auto:
      return "auto";
    case QuantizerKind::Sign:
      return "sign";
    case QuantizerKind::Uniform:
      return "uniform";
  }
  return "auto";
}

Quantizer make_quantizer(QuantizerKind kind, int bit_depth, double saturation) {
  switch (kind) {
    case QuantizerKind::Sign:
      if (bit_depth != 1) throw InvalidArgument("sign quantizer requires bit depth 1");
      return build_sign_quantizer();
    case QuantizerKind::Uniform:
      return build_uniform_quantizer(bit_depth, saturation);
    case QuantizerKind::Auto:
      break;
  }
  return bit_depth == 1 ? build_sign_quantizer() : build_uniform_quantizer(bit_depth, saturation);
}

std::string Cell::id() const {
  return "n=" + std::to_string(n) + ";k=" + std::to_string(k) + ";tb=" + std::to_string(total_bits) +
         ";b=" + std::to_string(bit_depth) + ";isnr=" + format_double(isnr_db) +
         ";corr=" + format_double(corruption);
}

void Cell::validate() const {
  if (n < 1) throw InvalidArgument("cell: N must be positive");
  if (bit_depth < 1) throw InvalidArgument("cell: bit depth must be positive");
  if (total_bits < 1 || m() < 1) throw InvalidArgument("cell: floor(total_bits / bit_depth) must be >= 1");
  if (k < 1) throw InvalidArgument("cell: sparsity must be positive");
  if (k > static_cast<std::size_t>(n)) throw InvalidArgument("sparsity exceeds dimension");
  if (std::isnan(isnr_db) || !(isnr_db > 0.0)) throw InvalidArgument("cell: ISNR must be positive or inf");
  if (std::isnan(corruption) || corruption < 0.0 || corruption > 1.0)
    throw InvalidArgument("cell: corruption must be in [0, 1]");
}

bool cell_less(const Cell& a, const Cell& b) {
  return std::tie(a.n, a.k, a.total_bits, a.isnr_db, a.bit_depth, a.corruption) <
         std::tie(b.n, b.k, b.total_bits, b.isnr_db, b.bit_depth, b.corruption);
}

std::uint64_t trial_seed(std::uint64_t master_seed, const Cell& cell, int trial_index) {
  return derive_seed(master_seed, cell.id(), static_cast<std::uint64_t>(trial_index));
}

Problem build_trial_problem(const Cell& cell, int trial_index, std::uint64_t master_seed,
                            const Quantizer& quantizer) {
  cell.validate();
  const std::uint64_t seed = trial_seed(master_seed, cell, trial_index);
  Problem p = gen_problem(cell.n, cell.m(), cell.k, derive_seed(seed, "problem"));
  p = add_noise(std::move(p), cell.isnr_db, derive_seed(seed, "noise"));
  p = corrupt(std::move(p), cell.corruption, derive_seed(seed, "corrupt"));
  p = quantize_problem(std::move(p), quantizer);
  p.master_seed = master_seed;
  return p;
}

std::vector<TrialRecord> run_trials(const Cell& cell, int trial_index, const std::vector<Algorithm>& algorithms,
                                    std::uint64_t master_seed, const TrialSettings& settings) {
  const Quantizer quantizer = make_quantizer(settings.quantizer, cell.bit_depth, settings.saturation);
  const Problem p = build_trial_problem(cell, trial_index, master_seed, quantizer);
  const std::uint64_t seed = trial_seed(master_seed, cell, trial_index);

  // The auto step depends only on phi; compute it once for every algorithm.
  std::optional<double> step = settings.step_size;
  const bool needs_step = std::any_of(algorithms.begin(), algorithms.end(), [](Algorithm a) {
    return a == Algorithm::Qiht || a == Algorithm::AopQiht || a == Algorithm::Iht || a == Algorithm::Biht;
  });
  if (!step && needs_step) step = auto_step_size(p.phi);

  std::vector<TrialRecord> out;
  out.reserve(algorithms.size());
  for (Algorithm alg : algorithms) {
    SolverConfig cfg;
    cfg.sparsity = cell.k;
    cfg.max_iterations = settings.max_iterations;
    cfg.step_size = step;
    cfg.outlier_budget = settings.outlier_budget.value_or(p.corrupted_indices.size());
    cfg.projection = settings.projection;
    cfg.prune = settings.prune;
    cfg.consistency_stop = settings.consistency_stop;

    TrialRecord rec;
    rec.algorithm = alg;
    rec.bit_depth = cell.bit_depth;
    rec.total_bits = cell.total_bits;
    rec.m = cell.m();
    rec.n = cell.n;
    rec.k = cell.k;
    rec.isnr_db = cell.isnr_db;
    rec.corruption = cell.corruption;
    rec.trial = trial_index;
    rec.seed = seed;

    const auto start = std::chrono::steady_clock::now();
    try {
      const SolverResult res = solve(alg, p.phi, p.y, quantizer, cfg);
      rec.rsnr_db = rsnr(res.estimate, p.x_true);
      rec.iterations = res.iterations_run;
      rec.mismatch = res.mismatch_count;
    } catch (const InvalidArgument&) {
      // Recorded as the zero estimate: 0 dB, every measurement inconsistent.
      rec.rsnr_db = rsnr(Vector::Zero(cell.n), p.x_true);
      rec.iterations = 0;
      rec.mismatch = static_cast<std::size_t>(cell.m());
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.push_back(rec);
  }
  return out;
}

TrialRecord run_trial(const Cell& cell, int trial_index, Algorithm algorithm, std::uint64_t master_seed,
                      const TrialSettings& settings) {
  return run_trials(cell, trial_index, {algorithm}, master_seed, settings).front();
}

std::vector<Cell> SweepGrid::cells() const {
  std::vector<Cell> out;
  for (auto k : sparsity_levels)
    for (auto tb : total_bits)
      for (auto isnr : isnr_levels)
        for (auto b : bit_depths)
          for (auto c : corruption_fractions) out.push_back(Cell{n, k, tb, b, isnr, c});
  return out;
}

void SweepGrid::validate() const {
  if (sparsity_levels.empty() || total_bits.empty() || isnr_levels.empty() || bit_depths.empty() ||
      corruption_fractions.empty())
    throw InvalidArgument("sweep grid: every parameter list must be nonempty");
  if (algorithms.empty()) throw InvalidArgument("sweep grid: algorithm list is empty");
  if (trials < 1) throw InvalidArgument("sweep grid: trials must be positive");
  for (const Cell& c : cells()) c.validate();
  const bool cosamp = std::any_of(algorithms.begin(), algorithms.end(), [](Algorithm a) {
    return a == Algorithm::Qcosamp || a == Algorithm::Cosamp;
  });
  if (cosamp)
    for (auto k : sparsity_levels)
      if (2 * k > static_cast<std::size_t>(n)) throw InvalidArgument("sweep grid: qcosamp requires 2K <= N");
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("QCS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    const Cell ca = a.cell();
    const Cell cb = b.cell();
    if (cell_less(ca, cb)) return true;
    if (cell_less(cb, ca)) return false;
    if (a.algorithm != b.algorithm) return algorithm_rank(a.algorithm) < algorithm_rank(b.algorithm);
    return a.trial < b.trial;
  });
}

std::vector<TrialRecord> run_sweep(const SweepGrid& grid, std::uint64_t master_seed, const TrialSettings& settings,
                                   const ProgressCallback& progress, unsigned threads) {
  grid.validate();
  const auto cells = grid.cells();
  const std::size_t total = cells.size() * static_cast<std::size_t>(grid.trials);
  std::vector<std::vector<TrialRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  const auto worker = [&] {
    for (std::size_t item = next++; item < total; item = next++) {
      const Cell& cell = cells[item / static_cast<std::size_t>(grid.trials)];
      const int trial = static_cast<int>(item % static_cast<std::size_t>(grid.trials));
      slots[item] = run_trials(cell, trial, grid.algorithms, master_seed, settings);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(threads ? threads : sweep_threads(),
                                                         static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }

  std::vector<TrialRecord> records;
  records.reserve(total * grid.algorithms.size());
  for (auto& slot : slots) records.insert(records.end(), slot.begin(), slot.end());
  sort_records(records);
  return records;
}

}  // namespace qcs
