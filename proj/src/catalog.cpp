#include "qcs/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace qcs {

Field parse_field(std::string_view name) {
  if (name == "n") return Field::N;
  if (name == "k") return Field::K;
  if (name == "total_bits") return Field::TotalBits;
  if (name == "m") return Field::M;
  if (name == "bit_depth") return Field::BitDepth;
  if (name == "isnr" || name == "isnr_db") return Field::Isnr;
  if (name == "corruption") return Field::Corruption;
  throw InvalidArgument("unknown grouping field '" + std::string(name) + "'");
}

std::string_view field_name(Field field) {
  switch (field) {
    case Field::N:
      return "n";
    case Field::K:
      return "k";
    case Field::TotalBits:
      return "total_bits";
    case Field::M:
      return "m";
    case Field::BitDepth:
      return "bit_depth";
    case Field::Isnr:
      return "isnr_db";
    case Field::Corruption:
      return "corruption";
  }
  return "?";
}

double field_value(const TrialRecord& rec, Field field) {
  switch (field) {
    case Field::N:
      return static_cast<double>(rec.n);
    case Field::K:
      return static_cast<double>(rec.k);
    case Field::TotalBits:
      return static_cast<double>(rec.total_bits);
    case Field::M:
      return static_cast<double>(rec.m);
    case Field::BitDepth:
      return rec.bit_depth;
    case Field::Isnr:
      return rec.isnr_db;
    case Field::Corruption:
      return rec.corruption;
  }
  return 0.0;
}

std::vector<Field> parse_field_list(std::string_view text) {
  std::vector<Field> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) {
      const Field f = parse_field(item);
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<Index, std::size_t, std::int64_t, double, int, double, int>;
  std::map<Key, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records)
    groups[{r.n, r.k, r.total_bits, r.isnr_db, r.bit_depth, r.corruption, algorithm_rank(r.algorithm)}].push_back(&r);

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    const TrialRecord& first = *members.front();
    SummaryRow row;
    row.algorithm = first.algorithm;
    row.bit_depth = first.bit_depth;
    row.total_bits = first.total_bits;
    row.m = first.m;
    row.n = first.n;
    row.k = first.k;
    row.isnr_db = first.isnr_db;
    row.corruption = first.corruption;
    row.trials = members.size();
    const double count = static_cast<double>(members.size());
    double sum = 0.0;
    double iters = 0.0;
    double mism = 0.0;
    bool any_inf = false;
    for (const auto* r : members) {
      sum += r->rsnr_db;
      iters += r->iterations;
      mism += static_cast<double>(r->mismatch);
      any_inf = any_inf || std::isinf(r->rsnr_db);
    }
    row.mean_rsnr_db = sum / count;
    row.mean_iterations = iters / count;
    row.mean_mismatch = mism / count;
    if (members.size() < 2 || any_inf) {
      row.stderr_rsnr_db = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (const auto* r : members) ss += (r->rsnr_db - row.mean_rsnr_db) * (r->rsnr_db - row.mean_rsnr_db);
      row.stderr_rsnr_db = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    out.push_back(row);
  }
  return out;
}

std::vector<CatalogRow> best_catalog(const std::vector<TrialRecord>& records, const std::vector<Field>& group_by) {
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
  };
  // group key -> (bit_depth, algorithm rank) -> accumulator
  std::map<std::vector<double>, std::map<std::pair<int, int>, Acc>> groups;
  for (const auto& r : records) {
    std::vector<double> key;
    key.reserve(group_by.size());
    for (Field f : group_by) key.push_back(field_value(r, f));
    auto& acc = groups[key][{r.bit_depth, algorithm_rank(r.algorithm)}];
    acc.sum += r.rsnr_db;
    ++acc.count;
  }

  std::vector<CatalogRow> out;
  for (const auto& [key, candidates] : groups) {
    CatalogRow row;
    row.fields = group_by;
    row.key = key;
    bool have = false;
    // Candidates iterate in (bit_depth, rank) order, so strict > keeps the tie-break winner.
    for (const auto& [which, acc] : candidates) {
      const double mean = acc.sum / static_cast<double>(acc.count);
      if (!have || mean > row.mean_rsnr_db) {
        have = true;
        row.mean_rsnr_db = mean;
        row.bit_depth = which.first;
        row.algorithm = static_cast<Algorithm>(which.second);
        row.records = acc.count;
      }
    }
    if (have) out.push_back(std::move(row));
  }
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman: need two equal-length samples");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace qcs
