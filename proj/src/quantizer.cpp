#include "qcs/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcs {

namespace {

constexpr int kMaxBitDepth = 24;
constexpr double kLevelRelTol = 1e-12;

}  // namespace

void QuantizerSpec::validate() const {
  if (bit_depth < 1 || bit_depth > kMaxBitDepth)
    throw InvalidArgument("quantizer: bit_depth must be in [1, 24]");
  const std::size_t q = std::size_t{1} << bit_depth;
  if (levels.size() != q) throw InvalidArgument("quantizer: expected 2^B levels");
  if (thresholds.size() != q + 1) throw InvalidArgument("quantizer: expected 2^B + 1 thresholds");
  if (thresholds.front() != -kInf || thresholds.back() != kInf)
    throw InvalidArgument("quantizer: outer thresholds must be -inf and +inf");
  for (std::size_t i = 1; i + 1 < thresholds.size(); ++i)
    if (!std::isfinite(thresholds[i])) throw InvalidArgument("quantizer: interior thresholds must be finite");
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i + 1])) throw InvalidArgument("quantizer: thresholds not strictly increasing");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i])) throw InvalidArgument("quantizer: levels must be finite");
    if (i > 0 && !(levels[i - 1] < levels[i])) throw InvalidArgument("quantizer: levels not strictly increasing");
    if (!(thresholds[i] <= levels[i] && levels[i] < thresholds[i + 1]))
      throw InvalidArgument("quantizer: level outside its own bin");
  }
}

Vector RegionBox::clip(const Vector& z) const {
  if (z.size() != lower.size()) throw InvalidArgument("clip: length mismatch");
  return z.cwiseMax(lower).cwiseMin(upper);
}

bool RegionBox::contains(const Vector& z) const {
  if (z.size() != lower.size()) return false;
  for (Index k = 0; k < z.size(); ++k)
    if (!(z[k] >= lower[k] && z[k] <= upper[k])) return false;
  return true;
}

Quantizer::Quantizer(QuantizerSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Quantizer Quantizer::identity() {
  Quantizer q;
  q.identity_ = true;
  return q;
}

std::vector<double> Quantizer::interior_thresholds() const {
  if (identity_) return {};
  return {spec_.thresholds.begin() + 1, spec_.thresholds.end() - 1};
}

double Quantizer::quantize(double z) const {
  if (std::isnan(z)) throw InvalidArgument("quantize: NaN input");
  if (identity_) return z;
  // Interior thresholds live at [1, Q); a value equal to a threshold goes up.
  const auto first = spec_.thresholds.begin() + 1;
  const auto last = spec_.thresholds.end() - 1;
  const auto bin = std::upper_bound(first, last, z) - first;
  return spec_.levels[static_cast<std::size_t>(bin)];
}

Vector Quantizer::quantize(const Vector& z) const {
  Vector out(z.size());
  for (Index k = 0; k < z.size(); ++k) out[k] = quantize(z[k]);
  return out;
}

std::size_t Quantizer::level_index(double level) const {
  if (identity_) throw InvalidArgument("level_index: identity quantizer has no level table");
  const auto& lv = spec_.levels;
  const auto it = std::lower_bound(lv.begin(), lv.end(), level);
  if (it != lv.end() && *it == level) return static_cast<std::size_t>(it - lv.begin());
  for (auto cand : {it, it == lv.begin() ? it : it - 1}) {
    if (cand == lv.end()) continue;
    const double scale = std::max(std::abs(*cand), 1.0);
    if (std::abs(*cand - level) <= kLevelRelTol * scale) return static_cast<std::size_t>(cand - lv.begin());
  }
  std::ostringstream msg;
  msg << "value " << level << " is not a level of quantizer " << describe();
  throw InvalidArgument(msg.str());
}

Region Quantizer::region_of(double level) const {
  if (identity_) {
    if (!std::isfinite(level)) throw InvalidArgument("region_of: non-finite measurement");
    return {level, level};
  }
  const auto i = level_index(level);
  return {spec_.thresholds[i], spec_.thresholds[i + 1]};
}

RegionBox Quantizer::regions_of(const Vector& y) const {
  RegionBox box{Vector(y.size()), Vector(y.size())};
  for (Index k = 0; k < y.size(); ++k) {
    const Region r = region_of(y[k]);
    box.lower[k] = r.lower;
    box.upper[k] = r.upper;
  }
  return box;
}

Vector Quantizer::clip_to_regions(const Vector& z, const Vector& y) const {
  if (z.size() != y.size()) throw InvalidArgument("clip_to_regions: length mismatch");
  return regions_of(y).clip(z);
}

Vector Quantizer::level_weights() const {
  if (identity_) return Vector(0);
  const auto& lv = spec_.levels;
  Vector w(static_cast<Index>(lv.size() - 1));
  for (std::size_t j = 1; j < lv.size(); ++j) w[static_cast<Index>(j - 1)] = lv[j] - lv[j - 1];
  return w;
}

double Quantizer::phi_penalty(double x, double y) const {
  if (identity_) return 0.0;
  double total = 0.0;
  for (std::size_t j = 1; j + 1 < spec_.thresholds.size(); ++j) {
    const double t = spec_.thresholds[j];
    const double prod = (x - t) * (y - t);
    if (prod < 0.0) total -= prod;
  }
  return total;
}

std::size_t Quantizer::mismatch_count(const Vector& z, const Vector& y) const {
  if (z.size() != y.size()) throw InvalidArgument("mismatch_count: length mismatch");
  std::size_t n = 0;
  for (Index k = 0; k < z.size(); ++k)
    if (quantize(z[k]) != y[k]) ++n;
  return n;
}

std::string Quantizer::describe() const {
  if (identity_) return "identity";
  std::ostringstream os;
  os << "B=" << spec_.bit_depth << " levels[";
  for (std::size_t i = 0; i < spec_.levels.size() && i < 4; ++i) os << (i ? "," : "") << spec_.levels[i];
  if (spec_.levels.size() > 4) os << ",...";
  os << "]";
  return os.str();
}

Quantizer build_sign_quantizer() {
  return Quantizer(QuantizerSpec{{-kInf, 0.0, kInf}, {-1.0, 1.0}, 1});
}

Quantizer build_uniform_quantizer(int bit_depth, double saturation) {
  if (bit_depth < 1 || bit_depth > kMaxBitDepth) throw InvalidArgument("uniform quantizer: bit_depth must be in [1, 24]");
  if (!(saturation > 0.0) || !std::isfinite(saturation))
    throw InvalidArgument("uniform quantizer: saturation must be positive and finite");
  const std::size_t q = std::size_t{1} << bit_depth;
  const double step = 2.0 * saturation / static_cast<double>(q);
  QuantizerSpec spec;
  spec.bit_depth = bit_depth;
  spec.thresholds.reserve(q + 1);
  spec.thresholds.push_back(-kInf);
  for (std::size_t j = 1; j < q; ++j) spec.thresholds.push_back(-saturation + static_cast<double>(j) * step);
  spec.thresholds.push_back(kInf);
  spec.levels.reserve(q);
  for (std::size_t i = 0; i < q; ++i) spec.levels.push_back(-saturation + (static_cast<double>(i) + 0.5) * step);
  return Quantizer(std::move(spec));
}

}  // namespace qcs
