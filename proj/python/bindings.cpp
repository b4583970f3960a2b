#include "qcs/experiment.hpp"
#include "qcs/linalg.hpp"
#include "qcs/projection.hpp"
#include "qcs/rng.hpp"
#include "qcs/solvers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qcs;

namespace {

std::vector<Index> to_list(const IndexSet& s) { return s.indices(); }

ProjectionOptions projection_options(const std::string& mode, int max_iterations, double tolerance) {
  return {parse_projection_mode(mode), max_iterations, tolerance};
}

SolverConfig solver_config(std::size_t k, std::optional<int> max_iterations, std::optional<double> step_size,
                           std::size_t outlier_budget, const std::string& projection, bool consistency_stop,
                           bool prune, std::optional<IterateObserver> observer) {
  SolverConfig cfg;
  cfg.sparsity = k;
  cfg.max_iterations = max_iterations;
  cfg.step_size = step_size;
  cfg.outlier_budget = outlier_budget;
  cfg.projection.mode = parse_projection_mode(projection);
  cfg.consistency_stop = consistency_stop;
  cfg.prune = prune;
  if (observer) cfg.observer = *observer;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qcs, m) {
  m.doc() = "Quantized compressed sensing: quantizers, region projection and greedy solvers";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<Region>(m, "Region")
      .def_readonly("lower", &Region::lower)
      .def_readonly("upper", &Region::upper)
      .def("__repr__", [](const Region& r) {
        return "Region(" + std::to_string(r.lower) + ", " + std::to_string(r.upper) + ")";
      });

  py::class_<RegionBox>(m, "RegionBox")
      .def_readonly("lower", &RegionBox::lower)
      .def_readonly("upper", &RegionBox::upper)
      .def("clip", &RegionBox::clip, py::arg("z"))
      .def("contains", &RegionBox::contains, py::arg("z"));

  py::class_<Quantizer>(m, "Quantizer")
      .def_static("sign", &build_sign_quantizer)
      .def_static("uniform", &build_uniform_quantizer, py::arg("bit_depth"), py::arg("saturation") = 3.0)
      .def_static("identity", &Quantizer::identity)
      .def_static(
          "from_levels",
          [](std::vector<double> thresholds, std::vector<double> levels, int bit_depth) {
            return Quantizer(QuantizerSpec{std::move(thresholds), std::move(levels), bit_depth});
          },
          py::arg("thresholds"), py::arg("levels"), py::arg("bit_depth"))
      .def_property_readonly("is_identity", &Quantizer::is_identity)
      .def_property_readonly("bit_depth", &Quantizer::bit_depth)
      .def_property_readonly("thresholds", [](const Quantizer& q) { return q.spec().thresholds; })
      .def_property_readonly("levels", [](const Quantizer& q) { return q.spec().levels; })
      .def("quantize", py::overload_cast<const Vector&>(&Quantizer::quantize, py::const_), py::arg("z"))
      .def("quantize_scalar", py::overload_cast<double>(&Quantizer::quantize, py::const_), py::arg("z"))
      .def("region_of", &Quantizer::region_of, py::arg("level"))
      .def("regions_of", &Quantizer::regions_of, py::arg("y"))
      .def("clip_to_regions", &Quantizer::clip_to_regions, py::arg("z"), py::arg("y"))
      .def("level_weights", &Quantizer::level_weights)
      .def("phi_penalty", &Quantizer::phi_penalty, py::arg("x"), py::arg("y"))
      .def("mismatch_count", &Quantizer::mismatch_count, py::arg("z"), py::arg("y"))
      .def("__eq__", [](const Quantizer& a, const Quantizer& b) { return a == b; })
      .def("__repr__", &Quantizer::describe);

  m.def("top_support", [](const Vector& x, std::size_t k) { return to_list(top_support(x, k)); }, py::arg("x"),
        py::arg("k"));
  m.def("hard_threshold", &hard_threshold, py::arg("x"), py::arg("k"));
  m.def("least_squares", &least_squares, py::arg("a"), py::arg("b"));
  m.def("normalize", &normalize, py::arg("x"));
  m.def("operator_norm", &operator_norm_lanczos, py::arg("phi"), py::arg("tolerance") = 1e-12,
        py::arg("max_steps") = 100);

  py::class_<ProjectionResult>(m, "ProjectionResult")
      .def_readonly("coefficients", &ProjectionResult::coefficients)
      .def_readonly("consistent_point", &ProjectionResult::consistent_point)
      .def_readonly("residual", &ProjectionResult::residual)
      .def_readonly("iterations", &ProjectionResult::iterations)
      .def_readonly("objective_trace", &ProjectionResult::objective_trace);

  m.def(
      "project_consistent",
      [](const Matrix& phi_t, const Vector& y, const Quantizer& q, const std::string& mode, int max_iterations,
         double tolerance) {
        return project_consistent(phi_t, y, q, projection_options(mode, max_iterations, tolerance));
      },
      py::arg("phi_t"), py::arg("y"), py::arg("quantizer"), py::arg("mode") = "joint", py::arg("max_iterations") = 50,
      py::arg("tolerance") = 1e-6);

  py::class_<SolverResult>(m, "SolverResult")
      .def_readonly("estimate", &SolverResult::estimate)
      .def_readonly("iterations", &SolverResult::iterations_run)
      .def_readonly("mismatch_count", &SolverResult::mismatch_count)
      .def_readonly("outlier_mask", &SolverResult::outlier_mask)
      .def_readonly("objective_trace", &SolverResult::objective_trace)
      .def_readonly("degenerate", &SolverResult::degenerate);

  m.def(
      "solve",
      [](const std::string& algorithm, const Matrix& phi, const Vector& y, const Quantizer& q, std::size_t k,
         std::optional<int> max_iterations, std::optional<double> step_size, std::size_t outlier_budget,
         const std::string& projection, bool consistency_stop, bool prune, std::optional<IterateObserver> observer) {
        const SolverConfig cfg = solver_config(k, max_iterations, step_size, outlier_budget, projection,
                                               consistency_stop, prune, std::move(observer));
        const Algorithm alg = parse_algorithm(algorithm);
        py::gil_scoped_release release;
        return solve(alg, phi, y, q, cfg);
      },
      py::arg("algorithm"), py::arg("phi"), py::arg("y"), py::arg("quantizer"), py::arg("k"),
      py::arg("max_iterations") = py::none(), py::arg("step_size") = py::none(), py::arg("outlier_budget") = 0,
      py::arg("projection") = "joint", py::arg("consistency_stop") = true, py::arg("prune") = true,
      py::arg("observer") = py::none());
  m.def("auto_step_size", &auto_step_size, py::arg("phi"));
  m.def("select_outliers", &select_outliers, py::arg("penalties"), py::arg("budget"));
  m.def("consistency_penalties", &consistency_penalties, py::arg("quantizer"), py::arg("measurements"), py::arg("y"));
  m.def("algorithms", [] {
    std::vector<std::string> names;
    for (auto a : {Algorithm::Qiht, Algorithm::AopQiht, Algorithm::Qcosamp, Algorithm::Qsp, Algorithm::Iht,
                   Algorithm::Biht, Algorithm::Cosamp, Algorithm::Sp})
      names.emplace_back(to_string(a));
    return names;
  });

  py::class_<Problem>(m, "Problem")
      .def_readonly("phi", &Problem::phi)
      .def_readonly("x_true", &Problem::x_true)
      .def_readonly("clean_measurements", &Problem::clean_measurements)
      .def_readonly("noisy_measurements", &Problem::noisy_measurements)
      .def_readonly("y", &Problem::y)
      .def_property_readonly("corrupted_indices", [](const Problem& p) { return to_list(p.corrupted_indices); })
      .def_readonly("master_seed", &Problem::master_seed);

  m.def("gen_problem", &gen_problem, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"));
  m.def("add_noise", &add_noise, py::arg("problem"), py::arg("isnr_db"), py::arg("seed"));
  m.def("corrupt", &corrupt, py::arg("problem"), py::arg("fraction"), py::arg("seed"));
  m.def("quantize_problem", &quantize_problem, py::arg("problem"), py::arg("quantizer"));
  m.def("rsnr", &rsnr, py::arg("estimate"), py::arg("truth"));

  py::class_<Cell>(m, "Cell")
      .def(py::init([](Index n, std::size_t k, std::int64_t total_bits, int bit_depth, double isnr_db,
                       double corruption) { return Cell{n, k, total_bits, bit_depth, isnr_db, corruption}; }),
           py::arg("n"), py::arg("k"), py::arg("total_bits"), py::arg("bit_depth") = 1,
           py::arg("isnr_db") = kInf, py::arg("corruption") = 0.0)
      .def_readonly("n", &Cell::n)
      .def_readonly("k", &Cell::k)
      .def_readonly("total_bits", &Cell::total_bits)
      .def_readonly("bit_depth", &Cell::bit_depth)
      .def_readonly("isnr_db", &Cell::isnr_db)
      .def_readonly("corruption", &Cell::corruption)
      .def_property_readonly("m", &Cell::m)
      .def("id", &Cell::id);

  py::class_<TrialRecord>(m, "TrialRecord")
      .def_property_readonly("algorithm", [](const TrialRecord& r) { return std::string(to_string(r.algorithm)); })
      .def_readonly("bit_depth", &TrialRecord::bit_depth)
      .def_readonly("total_bits", &TrialRecord::total_bits)
      .def_readonly("m", &TrialRecord::m)
      .def_readonly("n", &TrialRecord::n)
      .def_readonly("k", &TrialRecord::k)
      .def_readonly("isnr_db", &TrialRecord::isnr_db)
      .def_readonly("corruption", &TrialRecord::corruption)
      .def_readonly("trial", &TrialRecord::trial)
      .def_readonly("seed", &TrialRecord::seed)
      .def_readonly("rsnr_db", &TrialRecord::rsnr_db)
      .def_readonly("iterations", &TrialRecord::iterations)
      .def_readonly("mismatch", &TrialRecord::mismatch)
      .def_readonly("runtime_ms", &TrialRecord::runtime_ms);

  m.def(
      "run_trial",
      [](const Cell& cell, int trial, const std::string& algorithm, std::uint64_t master_seed) {
        const Algorithm alg = parse_algorithm(algorithm);
        py::gil_scoped_release release;
        return run_trial(cell, trial, alg, master_seed);
      },
      py::arg("cell"), py::arg("trial"), py::arg("algorithm"), py::arg("master_seed"));
  m.def("build_trial_problem", &build_trial_problem, py::arg("cell"), py::arg("trial"), py::arg("master_seed"),
        py::arg("quantizer"));
  m.def("trial_seed", &trial_seed, py::arg("master_seed"), py::arg("cell"), py::arg("trial"));
  m.def("derive_seed", &derive_seed, py::arg("parent"), py::arg("label"), py::arg("index") = 0);
}
