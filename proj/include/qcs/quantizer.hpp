#pragma once

#include "qcs/types.hpp"

#include <limits>
#include <string>
#include <vector>

namespace qcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thresholds and levels of a finite scalar quantizer with Q = 2^B bins.
///
/// Bin i is the half-open interval [thresholds[i], thresholds[i+1]) and maps
/// to levels[i]. thresholds.front() is -inf and thresholds.back() is +inf.
struct QuantizerSpec {
  std::vector<double> thresholds;
  std::vector<double> levels;
  int bit_depth = 0;

  /// Throws InvalidArgument if any structural invariant is violated.
  void validate() const;

  friend bool operator==(const QuantizerSpec&, const QuantizerSpec&) = default;
};

/// Closed-or-half-open interval of the real line, lower < upper for finite
/// quantizers; the identity quantizer produces degenerate points.
struct Region {
  double lower = -kInf;
  double upper = kInf;

  [[nodiscard]] bool contains_half_open(double v) const { return v >= lower && v < upper; }
  [[nodiscard]] bool contains_closed(double v) const { return v >= lower && v <= upper; }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Per-measurement closed intervals of a quantization region box R_y.
struct RegionBox {
  Vector lower;
  Vector upper;

  [[nodiscard]] Index size() const { return lower.size(); }
  /// Componentwise Euclidean projection onto the closed box.
  [[nodiscard]] Vector clip(const Vector& z) const;
  [[nodiscard]] bool contains(const Vector& z) const;
};

/// A scalar quantizer f_Q applied componentwise.
///
/// Either a finite quantizer described by a QuantizerSpec, or the identity
/// (no-op) map used to recover the classical unquantized algorithms.
class Quantizer {
 public:
  /// Validates spec.
  explicit Quantizer(QuantizerSpec spec);

  static Quantizer identity();

  [[nodiscard]] bool is_identity() const { return identity_; }
  /// Empty spec for the identity quantizer.
  [[nodiscard]] const QuantizerSpec& spec() const { return spec_; }
  [[nodiscard]] int bit_depth() const { return spec_.bit_depth; }
  [[nodiscard]] std::size_t num_levels() const { return spec_.levels.size(); }
  /// tau_2 .. tau_Q (the finite thresholds).
  [[nodiscard]] std::vector<double> interior_thresholds() const;

  [[nodiscard]] double quantize(double z) const;
  [[nodiscard]] Vector quantize(const Vector& z) const;

  /// Index of the level equal to `level` (exact, then 1e-12 relative);
  /// throws InvalidArgument when it is not a level.
  [[nodiscard]] std::size_t level_index(double level) const;

  [[nodiscard]] Region region_of(double level) const;
  /// Closed region box for a vector of levels.
  [[nodiscard]] RegionBox regions_of(const Vector& y) const;

  /// Projection of z onto the closed region box of y.
  [[nodiscard]] Vector clip_to_regions(const Vector& z, const Vector& y) const;

  /// w_j = m_j - m_{j-1}, j = 2..Q.
  [[nodiscard]] Vector level_weights() const;

  /// Sum over interior thresholds t of |min(0, (x - t)(y - t))|.
  [[nodiscard]] double phi_penalty(double x, double y) const;

  /// Count of components where quantize(z) differs from y.
  [[nodiscard]] std::size_t mismatch_count(const Vector& z, const Vector& y) const;

  /// Human-readable description, e.g. "sign" or "uniform(B=2, alpha=3)".
  [[nodiscard]] std::string describe() const;

  friend bool operator==(const Quantizer&, const Quantizer&) = default;

 private:
  Quantizer() = default;

  QuantizerSpec spec_;
  bool identity_ = false;
};

/// 1-bit quantizer: thresholds (-inf, 0, +inf), levels (-1, +1).
Quantizer build_sign_quantizer();

/// Midpoint quantizer with 2^bit_depth bins uniformly spaced on
/// [-saturation, saturation]; the unbounded end bins saturate.
Quantizer build_uniform_quantizer(int bit_depth, double saturation);

}  // namespace qcs
