#include "qcs/config.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qcs {

namespace {

std::string dotted(std::string_view table, std::string_view key) {
  return table.empty() ? std::string(key) : std::string(table) + "." + std::string(key);
}

void reject_unknown(const toml::table& tbl, std::string_view table, const std::set<std::string>& allowed) {
  for (auto&& [k, v] : tbl) {
    const std::string name(k.str());
    if (!allowed.count(name)) throw ConfigError(dotted(table, name), "unknown key");
  }
}

std::int64_t as_int(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  throw ConfigError(key, "expected an integer");
}

double as_real(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
  if (auto s = node.value_exact<std::string>()) {
    if (*s == "inf") return kInf;
  }
  throw ConfigError(key, "expected a number");
}

bool as_bool(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<bool>()) return *v;
  throw ConfigError(key, "expected true or false");
}

std::string as_string(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<std::string>()) return *v;
  throw ConfigError(key, "expected a string");
}

const toml::array& as_array(const toml::node& node, const std::string& key) {
  if (const auto* arr = node.as_array()) {
    if (arr->empty()) throw ConfigError(key, "list must be nonempty");
    return *arr;
  }
  throw ConfigError(key, "expected a list");
}

template <class F>
auto map_array(const toml::node& node, const std::string& key, F&& f) {
  using T = decltype(f(node, key));
  std::vector<T> out;
  std::size_t i = 0;
  for (const auto& item : as_array(node, key)) out.push_back(f(item, key + "[" + std::to_string(i++) + "]"));
  return out;
}

const toml::node& required(const toml::table& tbl, const std::string& key) {
  const toml::node* node = tbl.get(key);
  if (!node) throw ConfigError(key, "required key is missing");
  return *node;
}

void check_bit_depth(std::int64_t b, const std::string& key) {
  if (b < 1 || b > 24) throw ConfigError(key, "bit depth must be in [1, 24]");
}

void parse_quantizer(const toml::node& node, RunConfig& cfg, std::optional<int>& bits) {
  const auto* tbl = node.as_table();
  if (!tbl) throw ConfigError("quantizer", "expected a table");
  reject_unknown(*tbl, "quantizer", {"kind", "bits", "saturation"});
  if (const auto* n = tbl->get("kind")) {
    const auto kind = as_string(*n, "quantizer.kind");
    try {
      cfg.settings.quantizer = parse_quantizer_kind(kind);
    } catch (const InvalidArgument& e) {
      throw ConfigError("quantizer.kind", e.what());
    }
  }
  if (const auto* n = tbl->get("bits")) {
    const auto b = as_int(*n, "quantizer.bits");
    check_bit_depth(b, "quantizer.bits");
    bits = static_cast<int>(b);
  }
  if (const auto* n = tbl->get("saturation")) {
    const double s = as_real(*n, "quantizer.saturation");
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("quantizer.saturation", "must be positive and finite");
    cfg.settings.saturation = s;
  }
}

void parse_solver(const toml::node& node, RunConfig& cfg) {
  const auto* tbl = node.as_table();
  if (!tbl) throw ConfigError("solver", "expected a table");
  reject_unknown(*tbl, "solver",
                 {"step_size", "max_iterations", "outlier_budget", "projection", "projection_max_iterations",
                  "projection_tolerance", "prune", "consistency_stop"});
  TrialSettings& s = cfg.settings;
  if (const auto* n = tbl->get("step_size")) {
    if (n->value_exact<std::string>() == std::optional<std::string>("auto")) {
      s.step_size.reset();
    } else {
      const double mu = as_real(*n, "solver.step_size");
      if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("solver.step_size", "must be \"auto\" or positive");
      s.step_size = mu;
    }
  }
  if (const auto* n = tbl->get("max_iterations")) {
    if (n->value_exact<std::string>() == std::optional<std::string>("default")) {
      s.max_iterations.reset();
    } else {
      const auto it = as_int(*n, "solver.max_iterations");
      if (it < 1) throw ConfigError("solver.max_iterations", "must be positive");
      s.max_iterations = static_cast<int>(it);
    }
  }
  if (const auto* n = tbl->get("outlier_budget")) {
    if (n->value_exact<std::string>() == std::optional<std::string>("auto")) {
      s.outlier_budget.reset();
    } else {
      const auto l = as_int(*n, "solver.outlier_budget");
      if (l < 0) throw ConfigError("solver.outlier_budget", "must be nonnegative");
      s.outlier_budget = static_cast<std::size_t>(l);
    }
  }
  if (const auto* n = tbl->get("projection")) {
    try {
      s.projection.mode = parse_projection_mode(as_string(*n, "solver.projection"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("solver.projection", e.what());
    }
  }
  if (const auto* n = tbl->get("projection_max_iterations")) {
    const auto it = as_int(*n, "solver.projection_max_iterations");
    if (it < 1) throw ConfigError("solver.projection_max_iterations", "must be positive");
    s.projection.max_iterations = static_cast<int>(it);
  }
  if (const auto* n = tbl->get("projection_tolerance")) {
    const double t = as_real(*n, "solver.projection_tolerance");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("solver.projection_tolerance", "must be >= 0");
    s.projection.tolerance = t;
  }
  if (const auto* n = tbl->get("prune")) s.prune = as_bool(*n, "solver.prune");
  if (const auto* n = tbl->get("consistency_stop")) s.consistency_stop = as_bool(*n, "solver.consistency_stop");
}

void validate(const RunConfig& cfg) {
  const SweepGrid& g = cfg.grid;
  for (std::size_t i = 0; i < g.sparsity_levels.size(); ++i)
    if (g.sparsity_levels[i] > static_cast<std::size_t>(g.n))
      throw ConfigError("sparsity", "sparsity exceeds dimension");
  for (auto tb : g.total_bits)
    for (int b : g.bit_depths)
      if (tb / b < 1) throw ConfigError("total_bits", "floor(total_bits / bit_depth) must be >= 1");
  if (cfg.settings.quantizer == QuantizerKind::Sign)
    for (int b : g.bit_depths)
      if (b != 1) throw ConfigError("quantizer.kind", "sign quantizer requires bit_depths = [1]");
  const bool cosamp = std::any_of(g.algorithms.begin(), g.algorithms.end(),
                                  [](Algorithm a) { return a == Algorithm::Qcosamp || a == Algorithm::Cosamp; });
  if (cosamp)
    for (auto k : g.sparsity_levels)
      if (2 * k > static_cast<std::size_t>(g.n)) throw ConfigError("sparsity", "qcosamp requires 2K <= N");
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("", e.what());
  }
}

}  // namespace

RunConfig parse_config_text(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError("", msg.str());
  }
  reject_unknown(root, "",
                 {"master_seed", "n", "trials", "algorithms", "sparsity", "total_bits", "bit_depths", "isnr",
                  "corruption", "out_dir", "record_runtime", "quantizer", "solver"});

  RunConfig cfg;
  if (const auto* n = root.get("master_seed")) {
    const auto seed = as_int(*n, "master_seed");
    if (seed < 0) throw ConfigError("master_seed", "must be nonnegative");
    cfg.master_seed = static_cast<std::uint64_t>(seed);
  }
  const auto n = as_int(required(root, "n"), "n");
  if (n < 1) throw ConfigError("n", "must be positive");
  cfg.grid.n = static_cast<Index>(n);

  if (const auto* t = root.get("trials")) {
    const auto trials = as_int(*t, "trials");
    if (trials < 1) throw ConfigError("trials", "must be positive");
    cfg.grid.trials = static_cast<int>(trials);
  }
  cfg.grid.algorithms = map_array(required(root, "algorithms"), "algorithms", [](const toml::node& v, const std::string& key) {
    try {
      return parse_algorithm(as_string(v, key));
    } catch (const InvalidArgument& e) {
      throw ConfigError(key, e.what());
    }
  });
  cfg.grid.sparsity_levels = map_array(required(root, "sparsity"), "sparsity", [](const toml::node& v, const std::string& key) {
    const auto k = as_int(v, key);
    if (k < 1) throw ConfigError(key, "sparsity must be positive");
    return static_cast<std::size_t>(k);
  });
  cfg.grid.total_bits = map_array(required(root, "total_bits"), "total_bits", [](const toml::node& v, const std::string& key) {
    const auto tb = as_int(v, key);
    if (tb < 1) throw ConfigError(key, "total bits must be positive");
    return tb;
  });

  std::optional<int> quantizer_bits;
  if (const auto* q = root.get("quantizer")) parse_quantizer(*q, cfg, quantizer_bits);
  if (const auto* b = root.get("bit_depths")) {
    cfg.grid.bit_depths = map_array(*b, "bit_depths", [](const toml::node& v, const std::string& key) {
      const auto bits = as_int(v, key);
      check_bit_depth(bits, key);
      return static_cast<int>(bits);
    });
    if (quantizer_bits && (cfg.grid.bit_depths.size() != 1 || cfg.grid.bit_depths.front() != *quantizer_bits))
      throw ConfigError("quantizer.bits", "conflicts with bit_depths");
  } else if (quantizer_bits) {
    cfg.grid.bit_depths = {*quantizer_bits};
  }
  if (const auto* v = root.get("isnr")) {
    cfg.grid.isnr_levels = map_array(*v, "isnr", [](const toml::node& node, const std::string& key) {
      const double isnr = as_real(node, key);
      if (std::isnan(isnr) || !(isnr > 0.0)) throw ConfigError(key, "ISNR must be positive or inf");
      return isnr;
    });
  }
  if (const auto* v = root.get("corruption")) {
    cfg.grid.corruption_fractions = map_array(*v, "corruption", [](const toml::node& node, const std::string& key) {
      const double f = as_real(node, key);
      if (!(f >= 0.0 && f <= 1.0)) throw ConfigError(key, "corruption fraction must be in [0, 1]");
      return f;
    });
  }
  if (const auto* v = root.get("out_dir")) cfg.out_dir = as_string(*v, "out_dir");
  if (const auto* v = root.get("record_runtime")) cfg.record_runtime = as_bool(*v, "record_runtime");
  if (const auto* s = root.get("solver")) parse_solver(*s, cfg);

  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

std::string serialize_config(const RunConfig& cfg) {
  const auto list = [](const auto& values, auto&& convert) {
    toml::array arr;
    for (const auto& v : values) arr.push_back(convert(v));
    return arr;
  };
  toml::table root;
  root.insert("master_seed", static_cast<std::int64_t>(cfg.master_seed));
  root.insert("n", static_cast<std::int64_t>(cfg.grid.n));
  root.insert("trials", static_cast<std::int64_t>(cfg.grid.trials));
  root.insert("algorithms", list(cfg.grid.algorithms, [](Algorithm a) { return std::string(to_string(a)); }));
  root.insert("sparsity", list(cfg.grid.sparsity_levels, [](std::size_t k) { return static_cast<std::int64_t>(k); }));
  root.insert("total_bits", list(cfg.grid.total_bits, [](std::int64_t tb) { return tb; }));
  root.insert("bit_depths", list(cfg.grid.bit_depths, [](int b) { return static_cast<std::int64_t>(b); }));
  root.insert("isnr", list(cfg.grid.isnr_levels, [](double v) { return v; }));
  root.insert("corruption", list(cfg.grid.corruption_fractions, [](double v) { return v; }));
  root.insert("out_dir", cfg.out_dir);
  root.insert("record_runtime", cfg.record_runtime);

  toml::table quantizer;
  quantizer.insert("kind", std::string(to_string(cfg.settings.quantizer)));
  quantizer.insert("saturation", cfg.settings.saturation);
  root.insert("quantizer", std::move(quantizer));

  const TrialSettings& s = cfg.settings;
  toml::table solver;
  if (s.step_size)
    solver.insert("step_size", *s.step_size);
  else
    solver.insert("step_size", "auto");
  if (s.max_iterations)
    solver.insert("max_iterations", static_cast<std::int64_t>(*s.max_iterations));
  else
    solver.insert("max_iterations", "default");
  if (s.outlier_budget)
    solver.insert("outlier_budget", static_cast<std::int64_t>(*s.outlier_budget));
  else
    solver.insert("outlier_budget", "auto");
  solver.insert("projection", std::string(to_string(s.projection.mode)));
  solver.insert("projection_max_iterations", static_cast<std::int64_t>(s.projection.max_iterations));
  solver.insert("projection_tolerance", s.projection.tolerance);
  solver.insert("prune", s.prune);
  solver.insert("consistency_stop", s.consistency_stop);
  root.insert("solver", std::move(solver));

  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

}  // namespace qcs
