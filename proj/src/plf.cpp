#include "irp/plf.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>
#include <string>

namespace irp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool well_ordered(const std::vector<Segment>& segs, std::string* why) {
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& s = segs[k];
    if (!std::isfinite(s.x_lo) || !std::isfinite(s.x_hi) || !std::isfinite(s.y_lo) ||
        !std::isfinite(s.slope)) {
      if (why) *why = "segment " + std::to_string(k) + " has a non-finite field";
      return false;
    }
    if (s.x_lo > s.x_hi) {
      if (why) *why = "segment " + std::to_string(k) + " has x_lo > x_hi";
      return false;
    }
    if (k > 0 && segs[k - 1].x_hi > s.x_lo) {
      if (why) *why = "segments " + std::to_string(k - 1) + " and " + std::to_string(k) + " overlap";
      return false;
    }
  }
  return true;
}

bool near(double a, double b) { return std::abs(a - b) <= plf_tolerance(std::max(std::abs(a), std::abs(b))); }

// Appends segments left to right, absorbing points covered by a neighbour and
// fusing colinear neighbours. With `bridge_unit_gaps`, two colinear pieces
// whose integer endpoints are one apart are fused too (no integer is lost).
class Appender {
 public:
  Appender(std::vector<Segment>& out, bool bridge_unit_gaps)
      : out_(out), bridge_(bridge_unit_gaps) {}

  void push(Segment s) {
    if (out_.empty()) {
      out_.push_back(s);
      return;
    }
    Segment& last = out_.back();
    const double gap = s.x_lo - last.x_hi;
    if (gap == 0.0) {
      const double junction = last.y_hi();
      if (s.is_point() && s.y_lo >= junction - plf_tolerance(junction)) return;
      if (last.is_point() && last.y_lo >= s.y_lo - plf_tolerance(s.y_lo)) {
        out_.pop_back();
        push(s);
        return;
      }
    }
    if ((gap == 0.0 || (bridge_ && gap == 1.0)) && colinear(last, s)) {
      const double y_end = s.y_hi();
      last.x_hi = s.x_hi;
      last.slope = (y_end - last.y_lo) / (last.x_hi - last.x_lo);
      return;
    }
    out_.push_back(s);
  }

 private:
  static bool colinear(const Segment& last, const Segment& s) {
    if (last.is_point() && s.is_point()) {
      return false;
    }
    if (last.is_point()) {
      // Point followed by a segment: fuse when the point lies on the segment's line.
      return near(s.value(last.x_lo), last.y_lo);
    }
    return near(last.value(s.x_lo), s.y_lo) && near(last.value(s.x_hi), s.y_hi());
  }

  std::vector<Segment>& out_;
  bool bridge_;
};

// First index whose x_hi >= x, starting the scan at `from`.
std::size_t advance_to(const std::vector<Segment>& segs, std::size_t from, double x) {
  while (from < segs.size() && segs[from].x_hi < x) ++from;
  return from;
}

// Segment whose interior covers (e, next event), if any.
const Segment* active_on(const std::vector<Segment>& segs, std::size_t from, double e) {
  while (from < segs.size() && segs[from].x_hi <= e) ++from;
  if (from < segs.size() && segs[from].x_lo <= e) return &segs[from];
  return nullptr;
}

double min_value_at(const std::vector<Segment>& segs, std::size_t from, double e) {
  double v = kInf;
  for (std::size_t i = from; i < segs.size() && segs[i].x_lo <= e; ++i) {
    v = std::min(v, segs[i].value(e));
  }
  return v;
}

Segment restricted(const Segment& s, double l, double r) { return {l, r, s.value(l), s.slope}; }

// Envelope of two lines over [l, r]; writes one or two pieces.
int envelope_interval(const Segment& sa, const Segment& sb, double l, double r, Segment* out) {
  const double ya_l = sa.value(l), yb_l = sb.value(l);
  const double ya_r = sa.value(r), yb_r = sb.value(r);
  const bool b_left = yb_l < ya_l - plf_tolerance(ya_l);
  const bool b_right = yb_r < ya_r - plf_tolerance(ya_r);
  if (b_left == b_right) {
    out[0] = restricted(b_left ? sb : sa, l, r);
    return 1;
  }
  const double diff_l = ya_l - yb_l;
  const double diff_r = ya_r - yb_r;
  const double xc = l + diff_l / (diff_l - diff_r) * (r - l);
  const Segment& left = b_left ? sb : sa;
  const Segment& right = b_left ? sa : sb;
  if (!(xc > l)) {
    out[0] = restricted(right, l, r);
    return 1;
  }
  if (!(xc < r)) {
    out[0] = restricted(left, l, r);
    return 1;
  }
  out[0] = restricted(left, l, xc);
  out[1] = restricted(right, xc, r);
  return 2;
}

// Lower edge of the Minkowski sum of two segments: walk the smaller slope first.
int pair_convolution(const Segment& s1, const Segment& s2, Segment* out) {
  const double x0 = s1.x_lo + s2.x_lo;
  const double y0 = s1.y_lo + s2.y_lo;
  const bool second_first = s2.slope < s1.slope;
  const Segment& a = second_first ? s2 : s1;
  const Segment& b = second_first ? s1 : s2;
  const double wa = a.x_hi - a.x_lo;
  const double wb = b.x_hi - b.x_lo;
  int n = 0;
  if (wa > 0) out[n++] = {x0, x0 + wa, y0, a.slope};
  if (wb > 0) out[n++] = {x0 + wa, x0 + wa + wb, y0 + a.slope * wa, b.slope};
  if (n == 0) out[n++] = {x0, x0, y0, 0.0};
  return n;
}

std::vector<PiecewiseLinear> pairwise_pieces(const PiecewiseLinear& f1, const PiecewiseLinear& f2,
                                             double lo, double hi) {
  std::vector<PiecewiseLinear> parts;
  parts.reserve(f1.piece_count() * f2.piece_count());
  Segment buf[2];
  for (const Segment& s2 : f2.segments()) {
    for (const Segment& s1 : f1.segments()) {
      const double x_lo = s1.x_lo + s2.x_lo;
      const double x_hi = s1.x_hi + s2.x_hi;
      if (x_hi < lo || x_lo > hi) continue;
      const int n = pair_convolution(s1, s2, buf);
      parts.push_back(PiecewiseLinear::from_sorted(std::vector<Segment>(buf, buf + n)));
    }
  }
  return parts;
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<Segment> segments) : segments_(std::move(segments)) {
  std::string why;
  if (!well_ordered(segments_, &why)) throw std::invalid_argument("PiecewiseLinear: " + why);
}

PiecewiseLinear PiecewiseLinear::from_sorted(std::vector<Segment> segments) {
  assert(well_ordered(segments, nullptr));
  PiecewiseLinear f;
  f.segments_ = std::move(segments);
  return f;
}

PiecewiseLinear PiecewiseLinear::point(double x, double y) { return from_sorted({{x, x, y, 0.0}}); }

PiecewiseLinear PiecewiseLinear::linear(double x_lo, double x_hi, double y_lo, double slope) {
  return PiecewiseLinear({{x_lo, x_hi, y_lo, slope}});
}

std::optional<double> PiecewiseLinear::evaluate(double x) const {
  auto it = std::lower_bound(segments_.begin(), segments_.end(), x,
                             [](const Segment& s, double v) { return s.x_hi < v; });
  std::optional<double> best;
  for (; it != segments_.end() && it->x_lo <= x; ++it) {
    const double v = it->value(x);
    if (!best || v < *best) best = v;
  }
  return best;
}

std::optional<PiecewiseLinear::IntegerMinimum> PiecewiseLinear::integer_minimum() const {
  std::optional<IntegerMinimum> best;
  auto consider = [&](double x, double v) {
    if (!best || v < best->value - plf_tolerance(best->value)) {
      best = IntegerMinimum{static_cast<long>(x), v};
    }
  };
  for (const Segment& s : segments_) {
    const double lo = std::ceil(s.x_lo - plf_tolerance(s.x_lo));
    const double hi = std::floor(s.x_hi + plf_tolerance(s.x_hi));
    if (lo > hi) continue;
    consider(lo, s.value(lo));
    if (hi > lo) consider(hi, s.value(hi));
  }
  return best;
}

PiecewiseLinear translate(const PiecewiseLinear& f, double a) {
  std::vector<Segment> out(f.segments());
  for (Segment& s : out) {
    s.x_lo -= a;
    s.x_hi -= a;
  }
  return PiecewiseLinear::from_sorted(std::move(out));
}

PiecewiseLinear add_affine(const PiecewiseLinear& f, double slope, double offset) {
  std::vector<Segment> out(f.segments());
  for (Segment& s : out) {
    s.y_lo += slope * s.x_lo + offset;
    s.slope += slope;
  }
  return PiecewiseLinear::from_sorted(std::move(out));
}

PiecewiseLinear lower_envelope(const PiecewiseLinear& f1, const PiecewiseLinear& f2) {
  if (f2.empty()) return f1;
  if (f1.empty()) return f2;
  const auto& a = f1.segments();
  const auto& b = f2.segments();

  std::vector<Segment> out;
  out.reserve(a.size() + b.size() + 4);
  Appender app(out, false);

  if (a.back().x_hi < b.front().x_lo || b.back().x_hi < a.front().x_lo) {
    const auto& first = a.back().x_hi < b.front().x_lo ? a : b;
    const auto& second = &first == &a ? b : a;
    for (const Segment& s : first) app.push(s);
    for (const Segment& s : second) app.push(s);
    return PiecewiseLinear::from_sorted(std::move(out));
  }

  std::vector<double> events;
  events.reserve(2 * (a.size() + b.size()));
  for (const Segment& s : a) {
    events.push_back(s.x_lo);
    events.push_back(s.x_hi);
  }
  for (const Segment& s : b) {
    events.push_back(s.x_lo);
    events.push_back(s.x_hi);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::size_t pa = 0, pb = 0;
  Segment pending[2];
  for (std::size_t k = 0; k < events.size(); ++k) {
    const double e = events[k];
    pa = advance_to(a, pa, e);
    pb = advance_to(b, pb, e);
    const double at_e = std::min(min_value_at(a, pa, e), min_value_at(b, pb, e));

    int npending = 0;
    if (k + 1 < events.size()) {
      const double r = events[k + 1];
      const Segment* sa = active_on(a, pa, e);
      const Segment* sb = active_on(b, pb, e);
      if (sa && sb) {
        npending = envelope_interval(*sa, *sb, e, r, pending);
      } else if (sa || sb) {
        pending[0] = restricted(sa ? *sa : *sb, e, r);
        npending = 1;
      }
    }

    double neighbours = kInf;
    if (!out.empty() && out.back().x_hi == e) neighbours = out.back().y_hi();
    if (npending > 0) neighbours = std::min(neighbours, pending[0].y_lo);
    if (at_e < kInf && at_e < neighbours - plf_tolerance(at_e)) app.push({e, e, at_e, 0.0});
    for (int p = 0; p < npending; ++p) app.push(pending[p]);
  }
  return PiecewiseLinear::from_sorted(std::move(out));
}

PiecewiseLinear lower_envelope(std::vector<PiecewiseLinear> functions) {
  if (functions.empty()) return {};
  while (functions.size() > 1) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < functions.size(); r += 2) {
      functions[w++] = r + 1 < functions.size() ? lower_envelope(functions[r], functions[r + 1])
                                                : std::move(functions[r]);
    }
    functions.resize(w);
  }
  return std::move(functions.front());
}

PiecewiseLinear infimal_convolution(const PiecewiseLinear& f1, const PiecewiseLinear& f2) {
  return lower_envelope(pairwise_pieces(f1, f2, -kInf, kInf));
}

PiecewiseLinear infimal_convolution_within(const PiecewiseLinear& f1, const PiecewiseLinear& f2,
                                           double lo, double hi) {
  return restrict_and_prune(lower_envelope(pairwise_pieces(f1, f2, lo, hi)), lo, hi);
}

PiecewiseLinear restrict_and_prune(const PiecewiseLinear& f, double lo, double hi) {
  std::vector<Segment> out;
  out.reserve(f.piece_count());
  Appender app(out, true);
  for (const Segment& s : f.segments()) {
    const double clip_lo = std::max(s.x_lo, lo);
    const double clip_hi = std::min(s.x_hi, hi);
    if (clip_lo > clip_hi) continue;
    const double ilo = std::ceil(clip_lo - plf_tolerance(clip_lo));
    const double ihi = std::floor(clip_hi + plf_tolerance(clip_hi));
    if (ilo > ihi || ilo < lo - plf_tolerance(lo) || ihi > hi + plf_tolerance(hi)) continue;
    app.push({ilo, ihi, s.value(ilo), ilo == ihi ? 0.0 : s.slope});
  }
  return PiecewiseLinear::from_sorted(std::move(out));
}

}  // namespace irp
