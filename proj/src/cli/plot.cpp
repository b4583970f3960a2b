#include "qcs/plot.hpp"

#include "qcs/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace qcs {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

/// Round step (1, 2, 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (raw <= f * mag) return f * mag;
  return 10.0 * mag;
}

std::string marker_svg(const std::string& shape, double x, double y, const std::string& color) {
  const std::string attrs = " fill=\"" + color + "\" stroke=\"" + color + "\"";
  if (shape == "circle") return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"4\"" + attrs + "/>";
  if (shape == "square")
    return "<rect x=\"" + num(x - 4) + "\" y=\"" + num(y - 4) + "\" width=\"8\" height=\"8\"" + attrs + "/>";
  std::vector<std::pair<double, double>> pts;
  if (shape == "triangle") {
    pts = {{x, y - 5}, {x + 5, y + 4}, {x - 5, y + 4}};
  } else if (shape == "star") {
    for (int i = 0; i < 10; ++i) {
      const double r = (i % 2 == 0) ? 6.0 : 2.5;
      const double a = -M_PI / 2 + i * M_PI / 5;
      pts.emplace_back(x + r * std::cos(a), y + r * std::sin(a));
    }
  } else {
    pts = {{x, y - 5}, {x + 5, y}, {x, y + 5}, {x - 5, y}};
  }
  std::string s = "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
  return s + "\"" + attrs + "/>";
}

}  // namespace

std::string series_color(Algorithm alg) {
  switch (alg) {
    case Algorithm::Qiht: return "red";
    case Algorithm::AopQiht: return "magenta";
    case Algorithm::Qcosamp: return "green";
    case Algorithm::Qsp: return "blue";
    case Algorithm::Iht: return "orange";
    case Algorithm::Biht: return "black";
    case Algorithm::Cosamp: return "olive";
    case Algorithm::Sp: return "teal";
  }
  return "gray";
}

std::string series_marker(int bit_depth) {
  switch (bit_depth) {
    case 1: return "circle";
    case 2: return "square";
    case 3: return "triangle";
    case 4: return "star";
    default: return "diamond";
  }
}

std::vector<PlotSeries> plot_series(const std::vector<SummaryRow>& rows, const PlotOptions& options) {
  std::map<std::pair<int, int>, std::map<std::int64_t, std::pair<double, int>>> acc;
  for (const auto& r : rows) {
    if (options.k && r.k != *options.k) continue;
    if (options.n && r.n != *options.n) continue;
    if (options.isnr_db && !same(r.isnr_db, *options.isnr_db)) continue;
    if (options.corruption && !same(r.corruption, *options.corruption)) continue;
    if (std::isnan(r.mean_rsnr_db)) continue;
    const double v = std::min(r.mean_rsnr_db, options.ceiling_db);
    auto& slot = acc[{algorithm_rank(r.algorithm), r.bit_depth}][r.total_bits];
    slot.first += v;
    slot.second += 1;
  }
  std::vector<PlotSeries> out;
  for (const auto& [key, pts] : acc) {
    PlotSeries s;
    s.algorithm = static_cast<Algorithm>(key.first);
    s.bit_depth = key.second;
    for (const auto& [tb, sum] : pts) s.points.emplace_back(static_cast<double>(tb), sum.first / sum.second);
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_rsnr_svg(const std::vector<SummaryRow>& rows, const PlotOptions& options) {
  const auto series = plot_series(rows, options);
  if (series.empty()) throw InvalidArgument("no rows after filtering");

  double xmin = kInf, xmax = -kInf, ymin = 0.0, ymax = 0.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin == xmax) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  const double ystep = nice_step(ymax - ymin, 6);
  ymin = std::floor(ymin / ystep) * ystep;
  ymax = std::ceil(ymax / ystep) * ystep;
  if (ymin == ymax) ymax = ymin + ystep;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth) << "\" height=\""
     << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"15\">" << escape_xml(options.title) << "</text>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
  for (double y = ymin; y <= ymax + ystep * 1e-9; y += ystep) {
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
       << num(py(y)) << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
       << format_double(y) << "</text>\n";
  }
  const double xstep = nice_step(xmax - xmin, 6);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + xstep * 1e-9; x += xstep)
    os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(x)) << "\" y2=\""
       << num(kTop + ph) << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
       << format_double(x) << "</text>\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
     << "\" text-anchor=\"middle\" font-size=\"13\">total bits</text>\n"
     << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << num(kTop + ph / 2) << ")\">mean RSNR (dB)</text>\n"
     << "</g>\n";

  for (const auto& s : series) {
    const std::string color = series_color(s.algorithm);
    const std::string shape = series_marker(s.bit_depth);
    os << "<g class=\"series\" data-algorithm=\"" << to_string(s.algorithm) << "\" data-bit-depth=\"" << s.bit_depth
       << "\">\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i)
      os << (i ? " " : "") << num(px(s.points[i].first)) << "," << num(py(s.points[i].second));
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) os << marker_svg(shape, px(x), py(y), color) << "\n";
    os << "</g>\n";
  }

  os << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = kTop + 10;
  for (const auto& s : series) {
    const double lx = kLeft + pw + 14;
    const std::string color = series_color(s.algorithm);
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 28) << "\" y2=\"" << num(ly)
       << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
       << marker_svg(series_marker(s.bit_depth), lx + 14, ly, color) << "\n"
       << "<text x=\"" << num(lx + 36) << "\" y=\"" << num(ly + 4) << "\">" << to_string(s.algorithm)
       << ", B=" << s.bit_depth << "</text>\n";
    ly += 20;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qcs
