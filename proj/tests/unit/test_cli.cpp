#include "helpers.hpp"

#include "qcs/commands.hpp"
#include "qcs/config.hpp"
#include "qcs/csv.hpp"
#include "qcs/format.hpp"
#include "qcs/plot.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qcs;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qcs_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

const char* kMinimal = R"(
n = 40
algorithms = ["qiht", "qsp"]
sparsity = [2]
total_bits = [80]
)";

ConfigError config_error(const std::string& text) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", "");
}

}  // namespace

TEST_SUITE("format") {

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(2.5) == "2.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 gen(71);
  for (int i = 0; i < 500; ++i) {
    const double v = testing::random_vector(gen, 1, 1e3)[0];
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double("inf") == kInf);
  CHECK(parse_double("1e-3") == 0.001);
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK(parse_integer("-12") == -12);
  CHECK_THROWS_AS(parse_integer("1.0"), std::invalid_argument);
}

}  // TEST_SUITE

TEST_SUITE("csv") {

TEST_CASE("quoting and parsing") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,,3\n\n\"multi\nline\",x");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "", "3"});
  CHECK(rows[2] == std::vector<std::string>{"multi\nline", "x"});
}

TEST_CASE("record round trip") {
  TrialRecord r;
  r.algorithm = Algorithm::AopQiht;
  r.bit_depth = 2;
  r.total_bits = 1000;
  r.m = 500;
  r.n = 100;
  r.k = 4;
  r.isnr_db = kInf;
  r.corruption = 0.04;
  r.trial = 3;
  r.seed = 18446744073709551615ULL;
  r.rsnr_db = kInf;
  r.iterations = 12;
  r.mismatch = 7;
  r.runtime_ms = 1.25;
  std::stringstream s;
  write_records_csv(s, {r, r});
  const std::string text = s.str();
  CHECK(text.rfind(
            "schema_version,algorithm,bit_depth,total_bits,m,n,k,isnr_db,corruption,trial,seed,rsnr_db,iterations,"
            "mismatch,runtime_ms\n1,aop-qiht,2,1000,500,100,4,inf,0.04,3,18446744073709551615,inf,12,7,1.25\n",
            0) == 0);
  const auto back = read_records_csv(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].algorithm == r.algorithm);
  CHECK(back[0].seed == r.seed);
  CHECK(back[0].rsnr_db == kInf);
  CHECK(back[0].corruption == 0.04);
  CHECK(back[0].runtime_ms == 1.25);
  CHECK(record_csv_row(r, false).back() == ',');
}

TEST_CASE("schema errors name the column") {
  std::istringstream missing("schema_version,algorithm\n1,qiht\n");
  try {
    (void)read_records_csv(missing);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "bit_depth");
  }
  std::string header;
  for (const auto& c : record_columns()) header += (header.empty() ? "" : ",") + c;
  std::istringstream bad_cell(header + "\n1,qiht,one,1000,1000,100,4,inf,0,0,1,3,1,0,\n");
  try {
    (void)read_records_csv(bad_cell);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "bit_depth");
  }
  std::istringstream version(header + "\n2,qiht,1,1000,1000,100,4,inf,0,0,1,3,1,0,\n");
  CHECK_THROWS_AS(read_records_csv(version), SchemaError);
  std::istringstream extra("bogus," + header + "\n");
  try {
    (void)read_records_csv(extra);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "bogus");
  }
}

TEST_CASE("summary round trip") {
  SummaryRow s;
  s.algorithm = Algorithm::Qsp;
  s.trials = 3;
  s.mean_rsnr_db = 12.5;
  s.stderr_rsnr_db = std::nan("");
  std::stringstream io;
  write_summary_csv(io, {s});
  const auto back = read_summary_csv(io);
  REQUIRE(back.size() == 1);
  CHECK(back[0].algorithm == Algorithm::Qsp);
  CHECK(back[0].mean_rsnr_db == 12.5);
  CHECK(std::isnan(back[0].stderr_rsnr_db));
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config_text(kMinimal);
  CHECK(c.grid.n == 40);
  CHECK(c.grid.trials == 20);
  CHECK(c.grid.bit_depths == std::vector<int>{1});
  CHECK(c.grid.isnr_levels.size() == 1);
  CHECK(std::isinf(c.grid.isnr_levels[0]));
  CHECK(c.grid.corruption_fractions == std::vector<double>{0.0});
  CHECK_FALSE(c.settings.step_size.has_value());
  CHECK(c.settings.projection.mode == ProjectionMode::Joint);
  CHECK(c.settings.saturation == 3.0);
  CHECK(c.master_seed == 0);
}

TEST_CASE("full config") {
  const RunConfig c = parse_config_text(R"(
master_seed = 7
n = 500
algorithms = ["qiht", "aop-qiht", "qcosamp", "qsp"]
sparsity = [2, 4]
total_bits = [500, 1000]
bit_depths = [1, 2, 3, 4]
isnr = [35, 20.5, inf, "inf"]
corruption = [0.0, 0.02]
trials = 10
out_dir = "results"
record_runtime = false
quantizer = { kind = "uniform", saturation = 2.5 }
[solver]
step_size = 0.001
max_iterations = 100
outlier_budget = 3
projection = "literal"
projection_max_iterations = 20
projection_tolerance = 1e-8
prune = false
consistency_stop = false
)");
  CHECK(c.master_seed == 7);
  CHECK(c.grid.isnr_levels.size() == 4);
  CHECK(c.grid.isnr_levels[1] == 20.5);
  CHECK(std::isinf(c.grid.isnr_levels[3]));
  CHECK(c.settings.quantizer == QuantizerKind::Uniform);
  CHECK(c.settings.saturation == 2.5);
  CHECK(c.settings.step_size == 0.001);
  CHECK(c.settings.max_iterations == 100);
  CHECK(c.settings.outlier_budget == 3u);
  CHECK(c.settings.projection.mode == ProjectionMode::Literal);
  CHECK(c.settings.projection.max_iterations == 20);
  CHECK_FALSE(c.settings.prune);
  CHECK_FALSE(c.record_runtime);
  CHECK(c.out_dir == "results");
}

TEST_CASE("quantizer table forms") {
  const std::string base = kMinimal;
  CHECK(parse_config_text(base + "quantizer = { kind = \"sign\" }\n").settings.quantizer == QuantizerKind::Sign);
  const RunConfig u = parse_config_text(base + "quantizer = { kind = \"uniform\", bits = 3, saturation = 2.0 }\n");
  CHECK(u.grid.bit_depths == std::vector<int>{3});
  CHECK(u.settings.saturation == 2.0);
  CHECK(config_error(base + "bit_depths = [2]\nquantizer = { kind = \"sign\" }\n").key() == "quantizer.kind");
  CHECK(config_error(base + "bit_depths = [2]\nquantizer = { bits = 3 }\n").key() == "quantizer.bits");
}

TEST_CASE("errors name the offending key") {
  const std::string base = kMinimal;
  CHECK(config_error(base + "quantizer = { kind = \"uniform\", bits = 0 }\n").key() == "quantizer.bits");
  CHECK(config_error(base + "bit_depths = [0]\n").key() == "bit_depths[0]");
  CHECK(config_error(base + "colour = 3\n").key() == "colour");
  CHECK(config_error(base + "[solver]\nstepsize = 1.0\n").key() == "solver.stepsize");
  CHECK(config_error(base + "trials = \"many\"\n").key() == "trials");
  CHECK(config_error(base + "trials = 0\n").key() == "trials");
  CHECK(config_error("n = 40\nalgorithms = []\nsparsity = [2]\ntotal_bits = [80]\n").key() == "algorithms");
  CHECK(config_error("n = 40\nalgorithms = [\"qiht\"]\nsparsity = [2]\n").key() == "total_bits");
  CHECK(config_error("n = 40\nalgorithms = [\"omp\"]\nsparsity = [2]\ntotal_bits = [80]\n").key() == "algorithms[0]");
  CHECK(config_error("n = 4\nalgorithms = [\"qsp\"]\nsparsity = [5]\ntotal_bits = [80]\n").key() == "sparsity");
  CHECK(config_error(base + "isnr = [-3]\n").key() == "isnr[0]");
  CHECK(config_error(base + "corruption = [1.5]\n").key() == "corruption[0]");
  CHECK(config_error(base + "[solver]\nprojection = \"exact\"\n").key() == "solver.projection");
  CHECK(config_error(base + "[solver]\nstep_size = -1\n").key() == "solver.step_size");
  CHECK(config_error(base + "n = 3 = 4\n").key().empty());
}

TEST_CASE("serialize and parse round trip") {
  RunConfig c = parse_config_text(kMinimal);
  CHECK(parse_config_text(serialize_config(c)) == c);
  c.master_seed = 99;
  c.grid.isnr_levels = {10.0, 35.0, kInf};
  c.grid.bit_depths = {1, 2, 3};
  c.grid.corruption_fractions = {0.0, 0.1};
  c.settings.step_size = 0.125;
  c.settings.max_iterations = 77;
  c.settings.outlier_budget = 4;
  c.settings.projection = {ProjectionMode::Literal, 9, 1e-7};
  c.settings.saturation = 2.75;
  c.settings.prune = false;
  c.record_runtime = false;
  c.out_dir = "some dir/with \"quotes\"";
  const RunConfig back = parse_config_text(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("unreadable file") { CHECK_THROWS_AS(parse_config("/nonexistent/qcs.toml"), ConfigError); }

}  // TEST_SUITE

TEST_SUITE("plot") {

TEST_CASE("series styling") {
  CHECK(series_color(Algorithm::Qiht) == "red");
  CHECK(series_color(Algorithm::AopQiht) == "magenta");
  CHECK(series_color(Algorithm::Qcosamp) == "green");
  CHECK(series_color(Algorithm::Qsp) == "blue");
  CHECK(series_marker(1) == "circle");
  CHECK(series_marker(2) == "square");
  CHECK(series_marker(3) == "triangle");
  CHECK(series_marker(4) == "star");
}

TEST_CASE("two series chart") {
  std::vector<SummaryRow> rows;
  for (auto alg : {Algorithm::Qiht, Algorithm::Qsp})
    for (std::int64_t tb : {500, 1000, 2000}) {
      SummaryRow r;
      r.algorithm = alg;
      r.total_bits = tb;
      r.k = 4;
      r.mean_rsnr_db = alg == Algorithm::Qiht ? tb / 100.0 : kInf;
      rows.push_back(r);
    }
  const std::string svg = render_rsnr_svg(rows);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
    return n;
  };
  CHECK(count("<polyline") == 2);
  CHECK(count("class=\"legend\"") == 1);
  CHECK(svg.find("stroke=\"red\"") != std::string::npos);
  CHECK(svg.find("stroke=\"blue\"") != std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(render_rsnr_svg(rows) == svg);

  const auto series = plot_series(rows, {});
  REQUIRE(series.size() == 2);
  CHECK(series[1].points.back().second == 60.0);  // +inf drawn at the ceiling
  PlotOptions low;
  low.ceiling_db = 10.0;
  CHECK(plot_series(rows, low)[0].points.back().second == 10.0);

  PlotOptions none;
  none.k = 9;
  CHECK_THROWS_WITH_AS(render_rsnr_svg(rows, none), "no rows after filtering", InvalidArgument);
  CHECK_THROWS_AS(render_rsnr_svg({}), InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("run prints a labeled record and one CSV row") {
  const auto r = cli({"run", "--alg", "qiht", "--n", "1000", "--total-bits", "2000", "--bits", "1", "--k", "10",
                      "--seed", "7"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string labeled, header, row;
  std::getline(lines, labeled);
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(labeled.find("m=2000") != std::string::npos);
  CHECK(labeled.find("algorithm=qiht") != std::string::npos);
  std::istringstream csv(header + "\n" + row + "\n");
  const auto recs = read_records_csv(csv);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].m == 2000);
  CHECK(recs[0].n == 1000);
  CHECK(r.err.find("runtime_ms=") != std::string::npos);
  const auto again = cli({"run", "--alg", "qiht", "--n", "1000", "--total-bits", "2000", "--bits", "1", "--k", "10",
                          "--seed", "7"});
  CHECK(again.out == r.out);
}

TEST_CASE("run flag validation") {
  auto r = cli({"run", "--alg", "qsp", "--k", "2000", "--n", "1000", "--total-bits", "1000"});
  CHECK(r.code == 2);
  CHECK(r.err.find("sparsity exceeds dimension") != std::string::npos);
  CHECK(cli({"run", "--alg", "qsp", "--k", "2", "--n", "10", "--m", "5", "--total-bits", "10"}).code == 2);
  CHECK(cli({"run", "--alg", "qsp", "--k", "2", "--n", "10"}).code == 2);
  CHECK(cli({"run", "--alg", "omp", "--k", "2", "--n", "10", "--m", "5"}).code == 2);
  CHECK(cli({"run", "--alg", "qsp", "--k", "2", "--n", "10", "--m", "5", "--projection", "exact"}).code == 2);
  CHECK(cli({"run", "--alg", "qsp", "--k", "2", "--n", "10", "--m", "5", "--bogus"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("run with every option") {
  const auto r = cli({"run", "--alg", "aop-qiht", "--n", "60", "--m", "80", "--bits", "2", "--k", "3", "--seed", "5",
                      "--isnr", "20", "--corruption", "0.05", "--projection", "literal", "--mu", "0.01",
                      "--max-iters", "40", "--outlier-budget", "4", "--no-prune", "--quantizer", "uniform",
                      "--saturation", "2.5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("total_bits=160") != std::string::npos);
  CHECK(r.out.find("isnr_db=20") != std::string::npos);
}

TEST_CASE("sweep, best and plot end to end") {
  const fs::path dir = scratch("sweep");
  const std::string config = std::string(R"(
master_seed = 11
n = 40
algorithms = ["qiht", "aop-qiht", "qcosamp", "qsp"]
sparsity = [2, 3]
total_bits = [60, 120]
bit_depths = [1, 2]
isnr = [20, inf]
trials = 2
record_runtime = false
out_dir = ")") + (dir / "out").string() + "\"\n";
  spit(dir / "c.toml", config);

  const auto r = cli({"sweep", "--config", (dir / "c.toml").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("records.csv") != std::string::npos);
  CHECK(r.err.find("progress") != std::string::npos);
  const std::string records = slurp(dir / "out" / "records.csv");
  std::istringstream rin(records);
  CHECK(read_records_csv(rin).size() == 2 * 2 * 2 * 2 * 4 * 2);
  std::istringstream sin(slurp(dir / "out" / "summary.csv"));
  CHECK(read_summary_csv(sin).size() == 2 * 2 * 2 * 2 * 4);

  // rerun: byte-identical CSVs
  REQUIRE(cli({"sweep", "--config", (dir / "c.toml").string(), "--out-dir", (dir / "again").string()}).code == 0);
  CHECK(slurp(dir / "again" / "records.csv") == records);
  CHECK(slurp(dir / "again" / "summary.csv") == slurp(dir / "out" / "summary.csv"));
  // the written config reproduces the run
  CHECK(parse_config(dir / "out" / "config.toml").grid.n == 40);

  const auto trials = cli({"sweep", "--config", (dir / "c.toml").string(), "--out-dir", (dir / "t").string(),
                           "--trials", "1", "--seed", "3"});
  REQUIRE(trials.code == 0);
  std::istringstream tin(slurp(dir / "t" / "records.csv"));
  CHECK(read_records_csv(tin).size() == 2 * 2 * 2 * 2 * 4);

  const auto best = cli({"best", (dir / "out" / "records.csv").string()});
  REQUIRE(best.code == 0);
  CHECK(best.out.find("[k = 2]") != std::string::npos);
  CHECK(best.out.find("[k = 3]") != std::string::npos);
  const auto catalog = parse_csv(slurp(dir / "out" / "catalog.csv"));
  REQUIRE(catalog.size() == 1 + 2 * 2 * 2);
  CHECK(catalog[0] == std::vector<std::string>{"k", "total_bits", "isnr_db", "algorithm", "bit_depth", "mean_rsnr_db",
                                               "records"});

  const auto plot = cli({"plot", (dir / "out" / "summary.csv").string(), "--k", "2", "--isnr", "inf", "--out",
                         (dir / "p.svg").string()});
  REQUIRE(plot.code == 0);
  const std::string svg = slurp(dir / "p.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  REQUIRE(cli({"plot", (dir / "out" / "summary.csv").string(), "--k", "2", "--isnr", "inf", "--out",
               (dir / "p2.svg").string()})
              .code == 0);
  CHECK(slurp(dir / "p2.svg") == svg);
  const auto empty = cli({"plot", (dir / "out" / "summary.csv").string(), "--k", "9"});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("no rows after filtering") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("best with a single cell") {
  const fs::path dir = scratch("best");
  spit(dir / "c.toml", std::string(kMinimal) + "trials = 2\nrecord_runtime = false\nout_dir = \"" +
                           (dir / "o").string() + "\"\n");
  REQUIRE(cli({"sweep", "--config", (dir / "c.toml").string()}).code == 0);
  const auto r = cli({"best", (dir / "o" / "records.csv").string(), "--out", (dir / "cat.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(parse_csv(slurp(dir / "cat.csv")).size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("errors");
  spit(dir / "empty.toml", "n = 40\nalgorithms = []\nsparsity = [2]\ntotal_bits = [80]\n");
  auto r = cli({"sweep", "--config", (dir / "empty.toml").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("algorithms") != std::string::npos);
  CHECK(cli({"sweep", "--config", (dir / "missing.toml").string()}).code == 2);
  CHECK(cli({"sweep"}).code == 2);

  spit(dir / "bad.csv", "schema_version,algorithm,bit_depth,colour\n1,qiht,1,red\n");
  r = cli({"best", (dir / "bad.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
  CHECK(cli({"best", (dir / "nothing.csv").string()}).code == 2);
  CHECK(cli({"best", (dir / "bad.csv").string(), "--group-by", "colour"}).code == 2);

  spit(dir / "summary.csv", "algorithm,bit_depth\nqiht,1\n");
  r = cli({"plot", (dir / "summary.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("total_bits") != std::string::npos);
  fs::remove_all(dir);
}

}  // TEST_SUITE
