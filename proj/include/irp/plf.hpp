#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace irp {

// Absolute/relative tolerance used when comparing function values and when
// snapping breakpoints to integers.
inline constexpr double kPlfTolerance = 1e-9;

inline double plf_tolerance(double magnitude) {
  return kPlfTolerance * std::max(1.0, std::abs(magnitude));
}

// y = y_lo + slope * (x - x_lo) on the closed interval [x_lo, x_hi].
struct Segment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double slope = 0.0;

  double value(double x) const { return y_lo + slope * (x - x_lo); }
  double y_hi() const { return value(x_hi); }
  bool is_point() const { return x_hi == x_lo; }
  bool contains(double x) const { return x_lo <= x && x <= x_hi; }
  bool operator==(const Segment&) const = default;
};

/// A piecewise-linear function stored as segments sorted by x_lo with
/// non-overlapping interiors. Segments may touch, may leave gaps, and may be
/// single points. Where several segments cover x (shared endpoints), the
/// function value is the smallest of their values, so every function is the
/// pointwise minimum over its segments.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  /// Checks the ordering invariants and throws std::invalid_argument if they
  /// do not hold.
  explicit PiecewiseLinear(std::vector<Segment> segments);

  static PiecewiseLinear point(double x, double y);
  static PiecewiseLinear linear(double x_lo, double x_hi, double y_lo, double slope);
  // Segments already known to satisfy the invariants (checked by assert only).
  static PiecewiseLinear from_sorted(std::vector<Segment> segments);

  /// Value at x, or nullopt when x lies in no segment.
  std::optional<double> evaluate(double x) const;

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t piece_count() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  double domain_lo() const { return segments_.front().x_lo; }
  double domain_hi() const { return segments_.back().x_hi; }

  struct IntegerMinimum {
    long x = 0;
    double value = 0.0;
  };
  /// Minimum over the integer points of the domain; ties go to the smallest x.
  std::optional<IntegerMinimum> integer_minimum() const;

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<Segment> segments_;
};

/// g(x) = f(x + a).
PiecewiseLinear translate(const PiecewiseLinear& f, double a);

/// g(x) = f(x) + slope * x + offset.
PiecewiseLinear add_affine(const PiecewiseLinear& f, double slope, double offset);

/// g(x) = min(f1(x), f2(x)) over the union of the domains. Ties keep f1.
PiecewiseLinear lower_envelope(const PiecewiseLinear& f1, const PiecewiseLinear& f2);

/// Lower envelope of any number of functions, merged pairwise.
PiecewiseLinear lower_envelope(std::vector<PiecewiseLinear> functions);

/// g(x) = min_y f1(x - y) + f2(y) over all y where both terms are defined.
/// Built as the lower envelope of the convolutions of every segment pair.
PiecewiseLinear infimal_convolution(const PiecewiseLinear& f1, const PiecewiseLinear& f2);

/// Same as restrict_and_prune(infimal_convolution(f1, f2), lo, hi) but skips
/// segment pairs whose result falls outside [lo, hi].
PiecewiseLinear infimal_convolution_within(const PiecewiseLinear& f1, const PiecewiseLinear& f2,
                                           double lo, double hi);

/// Restricts f to the integer points of [lo, hi]: clips every segment to
/// [lo, hi], shrinks it to the integer hull [ceil(x_lo), floor(x_hi)], drops
/// segments containing no integer, and merges colinear neighbours. Values at
/// every integer of [lo, hi] inside f's domain are preserved exactly.
PiecewiseLinear restrict_and_prune(const PiecewiseLinear& f, double lo, double hi);

}  // namespace irp
