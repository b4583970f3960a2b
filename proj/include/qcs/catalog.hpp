#pragma once

#include "qcs/experiment.hpp"

#include <string_view>
#include <vector>

namespace qcs {

/// Record columns usable as grouping keys.
enum class Field { N, K, TotalBits, M, BitDepth, Isnr, Corruption };

/// Accepts n, k, total_bits, m, bit_depth, isnr (or isnr_db), corruption.
Field parse_field(std::string_view name);
std::string_view field_name(Field field);
double field_value(const TrialRecord& rec, Field field);
/// Comma-separated field list; empty text gives an empty list.
std::vector<Field> parse_field_list(std::string_view text);

/// Per-(algorithm, cell) statistics over trials.
struct SummaryRow {
  Algorithm algorithm = Algorithm::Qiht;
  int bit_depth = 1;
  std::int64_t total_bits = 0;
  Index m = 0;
  Index n = 0;
  std::size_t k = 0;
  double isnr_db = kInf;
  double corruption = 0.0;
  std::size_t trials = 0;
  double mean_rsnr_db = 0.0;
  /// Sample standard deviation / sqrt(trials); NaN with one trial or infinite RSNR values.
  double stderr_rsnr_db = 0.0;
  double mean_iterations = 0.0;
  double mean_mismatch = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

struct CatalogRow {
  std::vector<Field> fields;
  std::vector<double> key;  ///< one value per field
  Algorithm algorithm = Algorithm::Qiht;
  int bit_depth = 1;
  double mean_rsnr_db = 0.0;
  std::size_t records = 0;  ///< records behind the winning mean
};

/// For each group of records sharing the group_by values, the (algorithm,
/// bit depth) pair with the highest mean RSNR. Ties go to the lower bit depth,
/// then to the earlier algorithm in qiht < aop-qiht < qcosamp < qsp.
std::vector<CatalogRow> best_catalog(const std::vector<TrialRecord>& records, const std::vector<Field>& group_by);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qcs
