#pragma once

#include "qcs/catalog.hpp"
#include "qcs/experiment.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcs {

inline constexpr int kRecordSchemaVersion = 1;

/// A CSV file whose header or cells do not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string column, const std::string& what) : std::runtime_error(what), column_(std::move(column)) {}
  [[nodiscard]] const std::string& column() const { return column_; }

 private:
  std::string column_;
};

const std::vector<std::string>& record_columns();
const std::vector<std::string>& summary_columns();

/// RFC-4180 quoting when the field holds a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// Splits CSV text into rows of fields, honouring quoted fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// runtime_ms is left empty when include_runtime is false.
std::string record_csv_row(const TrialRecord& rec, bool include_runtime = true);
void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records, bool include_runtime = true);
std::vector<TrialRecord> read_records_csv(std::istream& is);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& is);

void write_catalog_csv(std::ostream& os, const std::vector<CatalogRow>& rows);

}  // namespace qcs
