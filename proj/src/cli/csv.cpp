#include "qcs/csv.hpp"

#include "qcs/format.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

namespace qcs {

namespace {

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out;
}

std::string read_all(std::istream& is) { return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()}; }

/// Maps the expected columns to their position in the header, naming the
/// first missing or unexpected column on failure.
std::map<std::string, std::size_t> bind_header(const std::vector<std::string>& header,
                                               const std::vector<std::string>& expected) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (std::find(expected.begin(), expected.end(), header[i]) == expected.end())
      throw SchemaError(header[i], "unexpected column '" + header[i] + "'");
    if (!pos.emplace(header[i], i).second) throw SchemaError(header[i], "duplicate column '" + header[i] + "'");
  }
  for (const auto& col : expected)
    if (!pos.count(col)) throw SchemaError(col, "missing column '" + col + "'");
  return pos;
}

class RowReader {
 public:
  RowReader(const std::vector<std::string>& row, const std::map<std::string, std::size_t>& pos, std::size_t line)
      : row_(row), pos_(pos), line_(line) {}

  [[nodiscard]] const std::string& text(const std::string& col) const {
    const auto i = pos_.at(col);
    if (i >= row_.size()) throw SchemaError(col, "line " + std::to_string(line_) + ": missing value for '" + col + "'");
    return row_[i];
  }
  [[nodiscard]] double real(const std::string& col) const {
    try {
      return parse_double(text(col));
    } catch (const std::invalid_argument&) {
      throw SchemaError(col, "line " + std::to_string(line_) + ": bad number in column '" + col + "'");
    }
  }
  [[nodiscard]] long long integer(const std::string& col) const {
    try {
      return parse_integer(text(col));
    } catch (const std::invalid_argument&) {
      throw SchemaError(col, "line " + std::to_string(line_) + ": bad integer in column '" + col + "'");
    }
  }
  [[nodiscard]] Algorithm algorithm(const std::string& col) const {
    try {
      return parse_algorithm(text(col));
    } catch (const InvalidArgument&) {
      throw SchemaError(col, "line " + std::to_string(line_) + ": unknown algorithm in column '" + col + "'");
    }
  }

 private:
  const std::vector<std::string>& row_;
  const std::map<std::string, std::size_t>& pos_;
  std::size_t line_;
};

std::vector<std::vector<std::string>> checked_rows(std::istream& is, const std::vector<std::string>& expected,
                                                   std::map<std::string, std::size_t>& pos) {
  auto rows = parse_csv(read_all(is));
  if (rows.empty()) throw SchemaError(expected.front(), "empty CSV: missing header");
  pos = bind_header(rows.front(), expected);
  rows.erase(rows.begin());
  return rows;
}

}  // namespace

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "schema_version", "algorithm", "bit_depth", "total_bits", "m",         "n",          "k",         "isnr_db",
      "corruption",     "trial",     "seed",      "rsnr_db",    "iterations", "mismatch", "runtime_ms"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "algorithm", "bit_depth",    "total_bits",     "m",               "n",           "k",           "isnr_db",
      "corruption", "trials", "mean_rsnr_db", "stderr_rsnr_db", "mean_iterations", "mean_mismatch"};
  return cols;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_started = false;
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string record_csv_row(const TrialRecord& r, bool include_runtime) {
  return join_row({std::to_string(kRecordSchemaVersion), std::string(to_string(r.algorithm)),
                   std::to_string(r.bit_depth), std::to_string(r.total_bits), std::to_string(r.m),
                   std::to_string(r.n), std::to_string(r.k), format_double(r.isnr_db), format_double(r.corruption),
                   std::to_string(r.trial), std::to_string(r.seed), format_double(r.rsnr_db),
                   std::to_string(r.iterations), std::to_string(r.mismatch),
                   include_runtime ? format_double(r.runtime_ms) : std::string()});
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records, bool include_runtime) {
  os << join_row(record_columns()) << '\n';
  for (const auto& r : records) os << record_csv_row(r, include_runtime) << '\n';
}

std::vector<TrialRecord> read_records_csv(std::istream& is) {
  std::map<std::string, std::size_t> pos;
  const auto rows = checked_rows(is, record_columns(), pos);
  std::vector<TrialRecord> out;
  out.reserve(rows.size());
  std::size_t line = 1;
  for (const auto& row : rows) {
    ++line;
    if (row.size() != pos.size())
      throw SchemaError(record_columns().front(), "line " + std::to_string(line) + ": expected " +
                                                      std::to_string(pos.size()) + " fields");
    const RowReader rd(row, pos, line);
    if (rd.integer("schema_version") != kRecordSchemaVersion)
      throw SchemaError("schema_version", "unsupported schema_version on line " + std::to_string(line));
    TrialRecord r;
    r.algorithm = rd.algorithm("algorithm");
    r.bit_depth = static_cast<int>(rd.integer("bit_depth"));
    r.total_bits = rd.integer("total_bits");
    r.m = rd.integer("m");
    r.n = rd.integer("n");
    r.k = static_cast<std::size_t>(rd.integer("k"));
    r.isnr_db = rd.real("isnr_db");
    r.corruption = rd.real("corruption");
    r.trial = static_cast<int>(rd.integer("trial"));
    try {
      r.seed = std::stoull(rd.text("seed"));
    } catch (const std::exception&) {
      throw SchemaError("seed", "line " + std::to_string(line) + ": bad seed");
    }
    r.rsnr_db = rd.real("rsnr_db");
    r.iterations = static_cast<int>(rd.integer("iterations"));
    r.mismatch = static_cast<std::size_t>(rd.integer("mismatch"));
    r.runtime_ms = rd.text("runtime_ms").empty() ? 0.0 : rd.real("runtime_ms");
    out.push_back(r);
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << join_row(summary_columns()) << '\n';
  for (const auto& s : rows)
    os << join_row({std::string(to_string(s.algorithm)), std::to_string(s.bit_depth), std::to_string(s.total_bits),
                    std::to_string(s.m), std::to_string(s.n), std::to_string(s.k), format_double(s.isnr_db),
                    format_double(s.corruption), std::to_string(s.trials), format_double(s.mean_rsnr_db),
                    format_double(s.stderr_rsnr_db), format_double(s.mean_iterations),
                    format_double(s.mean_mismatch)})
       << '\n';
}

std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  std::map<std::string, std::size_t> pos;
  const auto rows = checked_rows(is, summary_columns(), pos);
  std::vector<SummaryRow> out;
  std::size_t line = 1;
  for (const auto& row : rows) {
    ++line;
    const RowReader rd(row, pos, line);
    SummaryRow s;
    s.algorithm = rd.algorithm("algorithm");
    s.bit_depth = static_cast<int>(rd.integer("bit_depth"));
    s.total_bits = rd.integer("total_bits");
    s.m = rd.integer("m");
    s.n = rd.integer("n");
    s.k = static_cast<std::size_t>(rd.integer("k"));
    s.isnr_db = rd.real("isnr_db");
    s.corruption = rd.real("corruption");
    s.trials = static_cast<std::size_t>(rd.integer("trials"));
    s.mean_rsnr_db = rd.real("mean_rsnr_db");
    s.stderr_rsnr_db = rd.real("stderr_rsnr_db");
    s.mean_iterations = rd.real("mean_iterations");
    s.mean_mismatch = rd.real("mean_mismatch");
    out.push_back(s);
  }
  return out;
}

void write_catalog_csv(std::ostream& os, const std::vector<CatalogRow>& rows) {
  std::vector<std::string> header;
  if (!rows.empty())
    for (Field f : rows.front().fields) header.emplace_back(field_name(f));
  for (const char* c : {"algorithm", "bit_depth", "mean_rsnr_db", "records"}) header.emplace_back(c);
  os << join_row(header) << '\n';
  for (const auto& r : rows) {
    std::vector<std::string> fields;
    for (double v : r.key) fields.push_back(format_double(v));
    fields.emplace_back(to_string(r.algorithm));
    fields.push_back(std::to_string(r.bit_depth));
    fields.push_back(format_double(r.mean_rsnr_db));
    fields.push_back(std::to_string(r.records));
    os << join_row(fields) << '\n';
  }
}

}  // namespace qcs
