#pragma once

#include "qcs/catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcs {

/// Row filters and axis settings for the RSNR chart.
struct PlotOptions {
  std::optional<std::size_t> k;
  std::optional<double> isnr_db;
  std::optional<Index> n;
  std::optional<double> corruption;
  double ceiling_db = 60.0;  ///< values above (and +inf) are drawn at the ceiling
  std::string title;
};

struct PlotSeries {
  Algorithm algorithm = Algorithm::Qiht;
  int bit_depth = 1;
  std::vector<std::pair<double, double>> points;  ///< (total_bits, clipped mean RSNR), ascending in total_bits
};

/// Filters rows and groups them into one series per (algorithm, bit depth).
/// Rows sharing a total-bits value inside a series are averaged.
std::vector<PlotSeries> plot_series(const std::vector<SummaryRow>& rows, const PlotOptions& options);

std::string series_color(Algorithm alg);
/// circle, square, triangle, star for B = 1..4; diamond otherwise.
std::string series_marker(int bit_depth);

/// SVG 1.1 line chart of mean RSNR against total bits. Throws InvalidArgument
/// ("no rows after filtering") when nothing survives the filters.
std::string render_rsnr_svg(const std::vector<SummaryRow>& rows, const PlotOptions& options = {});

}  // namespace qcs
