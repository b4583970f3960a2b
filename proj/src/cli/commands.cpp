#include "qcs/commands.hpp"

#include "qcs/catalog.hpp"
#include "qcs/config.hpp"
#include "qcs/csv.hpp"
#include "qcs/format.hpp"
#include "qcs/plot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace qcs {

namespace {

namespace fs = std::filesystem;

/// Bad flags, configs or input files; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_isnr_flag(const std::string& text) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--isnr: expected a number or inf");
  }
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::string labeled(const TrialRecord& r) {
  std::string s = "algorithm=" + std::string(to_string(r.algorithm));
  s += " bit_depth=" + std::to_string(r.bit_depth);
  s += " total_bits=" + std::to_string(r.total_bits);
  s += " m=" + std::to_string(r.m);
  s += " n=" + std::to_string(r.n);
  s += " k=" + std::to_string(r.k);
  s += " isnr_db=" + format_double(r.isnr_db);
  s += " corruption=" + format_double(r.corruption);
  s += " trial=" + std::to_string(r.trial);
  s += " seed=" + std::to_string(r.seed);
  s += " rsnr_db=" + format_double(r.rsnr_db);
  s += " iterations=" + std::to_string(r.iterations);
  s += " mismatch=" + std::to_string(r.mismatch);
  return s;
}

// ---------------------------------------------------------------- run

struct RunFlags {
  std::string alg;
  Index n = 0;
  std::optional<Index> m;
  std::optional<std::int64_t> total_bits;
  int bits = 1;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string isnr = "inf";
  double corruption = 0.0;
  std::string projection = "joint";
  std::optional<double> mu;
  std::optional<int> max_iters;
  std::optional<std::size_t> outlier_budget;
  bool no_prune = false;
  std::string quantizer = "auto";
  double saturation = 3.0;
};

void add_run(CLI::App& app, RunFlags& f) {
  app.add_option("--alg", f.alg, "qiht | aop-qiht | qcosamp | qsp | iht | biht | cosamp | sp")->required();
  app.add_option("--n", f.n, "signal dimension N")->required();
  app.add_option("--m", f.m, "measurement count M (total bits = M * B)");
  app.add_option("--total-bits", f.total_bits, "bit budget T_B (M = floor(T_B / B))");
  app.add_option("--bits", f.bits, "bit depth B")->capture_default_str();
  app.add_option("--k", f.k, "sparsity K")->required();
  app.add_option("--seed", f.seed, "master seed")->capture_default_str();
  app.add_option("--isnr", f.isnr, "input SNR in dB, or inf")->capture_default_str();
  app.add_option("--corruption", f.corruption, "fraction of sign-flipped measurements")->capture_default_str();
  app.add_option("--projection", f.projection, "literal | joint")->capture_default_str();
  app.add_option("--mu", f.mu, "gradient step (default 1 / ||Phi||^2)");
  app.add_option("--max-iters", f.max_iters, "iteration cap (default per algorithm)");
  app.add_option("--outlier-budget", f.outlier_budget, "AOP outlier count L (default: true corruption count)");
  app.add_flag("--no-prune", f.no_prune, "QCoSaMP keeps the merged support after projection");
  app.add_option("--quantizer", f.quantizer, "auto | sign | uniform")->capture_default_str();
  app.add_option("--saturation", f.saturation, "uniform quantizer saturation")->capture_default_str();
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  if (f.m.has_value() == f.total_bits.has_value()) throw UsageError("give exactly one of --m and --total-bits");
  if (f.bits < 1 || f.bits > 24) throw UsageError("--bits must be in [1, 24]");
  if (f.n < 1) throw UsageError("--n must be positive");
  if (f.k > static_cast<std::size_t>(f.n)) throw UsageError("sparsity exceeds dimension");
  if (f.m && *f.m < 1) throw UsageError("--m must be positive");

  Algorithm alg;
  TrialSettings settings;
  try {
    alg = parse_algorithm(f.alg);
    settings.projection.mode = parse_projection_mode(f.projection);
    settings.quantizer = parse_quantizer_kind(f.quantizer);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (settings.quantizer == QuantizerKind::Sign && f.bits != 1) throw UsageError("sign quantizer requires --bits 1");
  if ((alg == Algorithm::Qcosamp || alg == Algorithm::Cosamp) && 2 * f.k > static_cast<std::size_t>(f.n))
    throw UsageError("qcosamp requires 2K <= N");
  if (f.mu && !(*f.mu > 0.0)) throw UsageError("--mu must be positive");
  if (f.max_iters && *f.max_iters < 1) throw UsageError("--max-iters must be positive");
  if (!(f.saturation > 0.0)) throw UsageError("--saturation must be positive");
  settings.saturation = f.saturation;
  settings.step_size = f.mu;
  settings.max_iterations = f.max_iters;
  settings.outlier_budget = f.outlier_budget;
  settings.prune = !f.no_prune;

  Cell cell{f.n, f.k, f.total_bits ? *f.total_bits : static_cast<std::int64_t>(*f.m) * f.bits, f.bits,
            parse_isnr_flag(f.isnr), f.corruption};
  try {
    cell.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (f.outlier_budget && *f.outlier_budget > static_cast<std::size_t>(cell.m()))
    throw UsageError("--outlier-budget exceeds the measurement count");

  const TrialRecord rec = run_trial(cell, 0, alg, f.seed, settings);
  out << labeled(rec) << '\n';
  std::string header;
  for (const auto& c : record_columns()) header += (header.empty() ? "" : ",") + c;
  out << header << '\n' << record_csv_row(rec, false) << '\n';
  err << "runtime_ms=" << format_double(rec.runtime_ms) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> trials;
};

int cmd_sweep(const SweepFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg = parse_config(f.config);
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.trials) {
    if (*f.trials < 1) throw UsageError("--trials must be positive");
    cfg.grid.trials = *f.trials;
  }

  const std::size_t total = cfg.grid.cells().size() * static_cast<std::size_t>(cfg.grid.trials);
  err << "sweep: " << cfg.grid.cells().size() << " cells x " << cfg.grid.trials << " trials x "
      << cfg.grid.algorithms.size() << " algorithms\n";
  std::size_t last_pct = 101;
  const auto progress = [&](std::size_t done, std::size_t count) {
    const std::size_t pct = done * 100 / count;
    if (pct != last_pct && (pct % 5 == 0 || done == count)) {
      err << "progress " << done << "/" << count << " (" << pct << "%)\n" << std::flush;
      last_pct = pct;
    }
  };
  const auto records = run_sweep(cfg.grid, cfg.master_seed, cfg.settings, progress);

  const fs::path dir(cfg.out_dir);
  std::ostringstream rec_csv;
  write_records_csv(rec_csv, records, cfg.record_runtime);
  write_file(dir / "records.csv", rec_csv.str());
  std::ostringstream sum_csv;
  write_summary_csv(sum_csv, summarize(records));
  write_file(dir / "summary.csv", sum_csv.str());
  write_file(dir / "config.toml", serialize_config(cfg));
  err << "wrote " << records.size() << " records from " << total << " trials to " << dir.string() << '\n';
  out << (dir / "records.csv").string() << '\n' << (dir / "summary.csv").string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- best

struct BestFlags {
  std::string records;
  std::string group_by = "total_bits,isnr";
  std::string outer = "k";
  std::optional<std::string> out;
};

std::string cell_label(const CatalogRow& r) {
  return std::string(to_string(r.algorithm)) + "/B" + std::to_string(r.bit_depth);
}

/// One grid per outer value: rows are the leading inner fields, columns the last.
void print_catalog(std::ostream& out, const std::vector<CatalogRow>& rows, std::size_t outer_count) {
  if (rows.empty()) return;
  const auto& fields = rows.front().fields;
  const std::size_t inner = fields.size() - outer_count;

  std::map<std::vector<double>, std::vector<const CatalogRow*>> blocks;
  for (const auto& r : rows)
    blocks[std::vector<double>(r.key.begin(), r.key.begin() + static_cast<std::ptrdiff_t>(outer_count))].push_back(&r);

  for (const auto& [outer_key, members] : blocks) {
    if (outer_count > 0) {
      std::string title;
      for (std::size_t i = 0; i < outer_count; ++i)
        title += (i ? ", " : "") + std::string(field_name(fields[i])) + " = " + format_double(outer_key[i]);
      out << "[" << title << "]\n";
    }
    std::vector<double> cols;
    std::vector<std::vector<double>> row_keys;
    std::map<std::pair<std::vector<double>, double>, std::string> cell;
    for (const CatalogRow* r : members) {
      const double col = inner > 0 ? r->key.back() : 0.0;
      std::vector<double> rk(r->key.begin() + static_cast<std::ptrdiff_t>(outer_count),
                             r->key.end() - (inner > 0 ? 1 : 0));
      if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
      if (std::find(row_keys.begin(), row_keys.end(), rk) == row_keys.end()) row_keys.push_back(rk);
      cell[{rk, col}] = cell_label(*r);
    }
    std::sort(cols.begin(), cols.end());
    std::sort(row_keys.begin(), row_keys.end());

    std::string corner;
    for (std::size_t i = outer_count; i + 1 < fields.size(); ++i)
      corner += (corner.empty() ? "" : ",") + std::string(field_name(fields[i]));
    if (inner > 0) corner += (corner.empty() ? "" : " \\ ") + std::string(field_name(fields.back()));

    std::vector<std::vector<std::string>> table;
    table.push_back({corner});
    for (double c : cols) table.back().push_back(inner > 0 ? format_double(c) : "best");
    for (const auto& rk : row_keys) {
      std::string label;
      for (double v : rk) label += (label.empty() ? "" : ",") + format_double(v);
      table.push_back({label});
      for (double c : cols) {
        const auto it = cell.find({rk, c});
        table.back().push_back(it == cell.end() ? "-" : it->second);
      }
    }
    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& row : table)
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += row[i] + std::string(width[i] - row[i].size(), ' ');
        if (i + 1 < row.size()) line += "  ";
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
    out << '\n';
  }
}

int cmd_best(const BestFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<Field> outer;
  std::vector<Field> inner;
  try {
    outer = parse_field_list(f.outer);
    inner = parse_field_list(f.group_by);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  std::vector<Field> group = outer;
  for (Field g : inner)
    if (std::find(group.begin(), group.end(), g) == group.end()) group.push_back(g);
  if (group.empty()) throw UsageError("--group-by and --outer are both empty");

  auto in = open_input(f.records);
  const auto records = read_records_csv(in);
  if (records.empty()) throw UsageError("records file has no rows");
  const auto catalog = best_catalog(records, group);

  const fs::path out_path = f.out ? fs::path(*f.out) : fs::path(f.records).parent_path() / "catalog.csv";
  std::ostringstream csv;
  write_catalog_csv(csv, catalog);
  write_file(out_path, csv.str());
  print_catalog(out, catalog, outer.size());
  err << "wrote " << catalog.size() << " catalog rows to " << out_path.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- plot

struct PlotFlags {
  std::string summary;
  std::optional<std::string> out;
  std::optional<std::size_t> k;
  std::optional<std::string> isnr;
  std::optional<Index> n;
  std::optional<double> corruption;
  double ceiling = 60.0;
  std::string title;
};

int cmd_plot(const PlotFlags& f, std::ostream& out, std::ostream& err) {
  PlotOptions opt;
  opt.k = f.k;
  opt.n = f.n;
  opt.corruption = f.corruption;
  if (f.isnr) opt.isnr_db = parse_isnr_flag(*f.isnr);
  opt.ceiling_db = f.ceiling;
  opt.title = f.title;

  auto in = open_input(f.summary);
  const auto rows = read_summary_csv(in);
  std::string svg;
  try {
    svg = render_rsnr_svg(rows, opt);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const fs::path out_path = f.out ? fs::path(*f.out) : fs::path(f.summary).parent_path() / "rsnr.svg";
  write_file(out_path, svg);
  out << out_path.string() << '\n';
  err << "wrote " << plot_series(rows, opt).size() << " series\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantized compressed sensing recovery experiments", "qcs"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one trial and print its record");
  add_run(*run, run_flags);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Run a configured parameter sweep and write CSV files");
  sweep->add_option("--config", sweep_flags.config, "TOML sweep configuration")->required();
  sweep->add_option("--seed", sweep_flags.seed, "override master_seed");
  sweep->add_option("--out-dir", sweep_flags.out_dir, "override out_dir");
  sweep->add_option("--trials", sweep_flags.trials, "override trials");

  BestFlags best_flags;
  auto* best = app.add_subcommand("best", "Best algorithm and bit depth per group of records");
  best->add_option("records", best_flags.records, "records.csv from a sweep")->required();
  best->add_option("--group-by", best_flags.group_by, "comma-separated grouping fields")->capture_default_str();
  best->add_option("--outer", best_flags.outer, "fields that split the text table into grids")->capture_default_str();
  best->add_option("--out", best_flags.out, "catalog CSV path (default: catalog.csv next to records)");

  PlotFlags plot_flags;
  auto* plot = app.add_subcommand("plot", "SVG chart of mean RSNR against total bits");
  plot->add_option("summary", plot_flags.summary, "summary.csv from a sweep")->required();
  plot->add_option("--out", plot_flags.out, "SVG path (default: rsnr.svg next to summary)");
  plot->add_option("--k", plot_flags.k, "keep rows with this sparsity");
  plot->add_option("--isnr", plot_flags.isnr, "keep rows with this ISNR (number or inf)");
  plot->add_option("--n", plot_flags.n, "keep rows with this dimension");
  plot->add_option("--corruption", plot_flags.corruption, "keep rows with this corruption fraction");
  plot->add_option("--ceiling", plot_flags.ceiling, "clip RSNR at this value (dB)")->capture_default_str();
  plot->add_option("--title", plot_flags.title, "chart title");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, out, err);
    if (best->parsed()) return cmd_best(best_flags, out, err);
    if (plot->parsed()) return cmd_plot(plot_flags, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << " (column " << e.column() << ")\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace qcs
