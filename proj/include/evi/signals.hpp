#pragma once

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "evi/common.hpp"

namespace evi {

/// Regularity class of a time-dependent quantity. Staircase signals and
/// floor-based expressions are right-continuous BV; everything else here is
/// absolutely continuous.
enum class Regularity { absolutely_continuous, right_continuous_bv };

/// One scalar term of an expression signal: amplitude * fn(rate * t + phase).
/// `constant` ignores rate/phase, `linear` is the argument itself.
struct SignalTerm {
  enum class Fn { constant, linear, sin, cos, floor, ramp };
  Fn fn = Fn::constant;
  double amplitude = 0.0;
  double rate = 0.0;
  double phase = 0.0;

  double value(double t) const {
    const double s = rate * t + phase;
    switch (fn) {
      case Fn::constant: return amplitude;
      case Fn::linear: return amplitude * s;
      case Fn::sin: return amplitude * std::sin(s);
      case Fn::cos: return amplitude * std::cos(s);
      case Fn::floor: return amplitude * std::floor(snap_integer(s));
      case Fn::ramp: return amplitude * std::max(s, 0.0);
    }
    return 0.0;
  }

  double left_value(double t) const {
    if (fn != Fn::floor) return value(t);
    const double s = snap_integer(rate * t + phase);
    // Left limit of floor drops by one exactly at integers.
    if (s == std::round(s)) return amplitude * (s - 1.0);
    return amplitude * std::floor(s);
  }

  /// Almost-everywhere derivative; zero on the plateaus of floor.
  double derivative(double t) const {
    const double s = rate * t + phase;
    switch (fn) {
      case Fn::constant: return 0.0;
      case Fn::linear: return amplitude * rate;
      case Fn::sin: return amplitude * rate * std::cos(s);
      case Fn::cos: return -amplitude * rate * std::sin(s);
      case Fn::floor: return 0.0;
      case Fn::ramp: return s > 0.0 ? amplitude * rate : 0.0;
    }
    return 0.0;
  }

  bool has_jumps() const { return fn == Fn::floor && rate != 0.0 && amplitude != 0.0; }

  /// Jump times of this term in the half-open interval (t0, t1].
  void append_breakpoints(double t0, double t1, std::vector<double>* out) const {
    if (!has_jumps()) return;
    detail::require(rate > 0.0, "floor signal terms require positive rate");
    // floor(rate*t + phase) jumps where rate*t + phase crosses an integer.
    const double k0 = std::floor(snap_integer(rate * t0 + phase)) + 1.0;
    const double k1 = std::floor(snap_integer(rate * t1 + phase));
    for (double k = k0; k <= k1; k += 1.0) out->push_back((k - phase) / rate);
  }

 private:
  // Grid-aligned breakpoints land within rounding noise of integers; snap so
  // that value/left_value agree on which side of the jump a sample sits.
  static double snap_integer(double s) {
    const double r = std::round(s);
    if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s))) return r;
    return s;
  }
};

namespace sig_detail {

struct Constant {
  Vector value;
};

struct PiecewiseLinear {
  std::vector<double> times;            // strictly increasing
  std::vector<Vector> values;           // one per time
};

struct Staircase {
  Vector initial;                       // value before the first breakpoint
  std::vector<double> times;            // strictly increasing jump times
  std::vector<Vector> values;           // value on [times[i], times[i+1])
};

struct Expression {
  std::vector<std::vector<SignalTerm>> components;  // summed per component
};

}  // namespace sig_detail

/// A vector-valued time signal. Right-continuous by convention; `left_value`
/// gives the limit from below, which differs from `value` only at jumps.
class Signal {
 public:
  Signal() : dim_(0), repr_(sig_detail::Constant{Vector::Zero(0)}) {}

  static Signal constant(Vector v) {
    Signal s;
    s.dim_ = static_cast<int>(v.size());
    s.repr_ = sig_detail::Constant{std::move(v)};
    return s;
  }

  static Signal zero(int dim) { return constant(Vector::Zero(dim)); }

  static Signal piecewise_linear(std::vector<double> times, std::vector<Vector> values) {
    detail::require(times.size() == values.size() && times.size() >= 2,
                    "piecewise_linear needs matching times/values, at least two");
    check_increasing(times);
    Signal s;
    s.dim_ = static_cast<int>(values.front().size());
    s.repr_ = sig_detail::PiecewiseLinear{std::move(times), std::move(values)};
    return s;
  }

  static Signal staircase(Vector initial, std::vector<double> times, std::vector<Vector> values) {
    detail::require(times.size() == values.size(), "staircase needs matching times/values");
    check_increasing(times);
    Signal s;
    s.dim_ = static_cast<int>(initial.size());
    s.repr_ = sig_detail::Staircase{std::move(initial), std::move(times), std::move(values)};
    return s;
  }

  static Signal expression(std::vector<std::vector<SignalTerm>> components) {
    detail::require(!components.empty(), "expression signal needs at least one component");
    Signal s;
    s.dim_ = static_cast<int>(components.size());
    s.repr_ = sig_detail::Expression{std::move(components)};
    return s;
  }

  int dim() const { return dim_; }

  Vector value(double t) const {
    return std::visit([&](const auto& r) { return eval(r, t, false); }, repr_);
  }

  Vector left_value(double t) const {
    return std::visit([&](const auto& r) { return eval(r, t, true); }, repr_);
  }

  /// Almost-everywhere time derivative (zero across staircase plateaus).
  Vector derivative(double t) const {
    if (const auto* c = std::get_if<sig_detail::Constant>(&repr_)) {
      (void)c;
      return Vector::Zero(dim_);
    }
    if (const auto* p = std::get_if<sig_detail::PiecewiseLinear>(&repr_)) {
      const auto& ts = p->times;
      if (t <= ts.front() || t >= ts.back()) return Vector::Zero(dim_);
      auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - ts.begin());
      const double span = ts[i] - ts[i - 1];
      return (p->values[i] - p->values[i - 1]) / span;
    }
    if (std::holds_alternative<sig_detail::Staircase>(repr_)) return Vector::Zero(dim_);
    const auto& e = std::get<sig_detail::Expression>(repr_);
    Vector d(dim_);
    for (int i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (const auto& term : e.components[static_cast<std::size_t>(i)]) acc += term.derivative(t);
      d(i) = acc;
    }
    return d;
  }

  bool has_jumps() const {
    if (std::holds_alternative<sig_detail::Staircase>(repr_)) return true;
    if (const auto* e = std::get_if<sig_detail::Expression>(&repr_)) {
      for (const auto& comp : e->components)
        for (const auto& term : comp)
          if (term.has_jumps()) return true;
    }
    return false;
  }

  Regularity regularity() const {
    return has_jumps() ? Regularity::right_continuous_bv : Regularity::absolutely_continuous;
  }

  /// Sorted unique jump times in the half-open interval (t0, t1].
  std::vector<double> breakpoints_in(double t0, double t1) const {
    std::vector<double> out;
    if (const auto* st = std::get_if<sig_detail::Staircase>(&repr_)) {
      for (double bt : st->times)
        if (bt > t0 && bt <= t1) out.push_back(bt);
    } else if (const auto* e = std::get_if<sig_detail::Expression>(&repr_)) {
      for (const auto& comp : e->components)
        for (const auto& term : comp) term.append_breakpoints(t0, t1, &out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              out.end());
    return out;
  }

  const auto& repr() const { return repr_; }

 private:
  static void check_increasing(const std::vector<double>& ts) {
    for (std::size_t i = 1; i < ts.size(); ++i)
      detail::require(ts[i] > ts[i - 1], "signal breakpoint times must be strictly increasing");
  }

  static Vector eval(const sig_detail::Constant& c, double, bool) { return c.value; }

  static Vector eval(const sig_detail::PiecewiseLinear& p, double t, bool) {
    const auto& ts = p.times;
    if (t <= ts.front()) return p.values.front();
    if (t >= ts.back()) return p.values.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return (1.0 - w) * p.values[i - 1] + w * p.values[i];
  }

  static Vector eval(const sig_detail::Staircase& s, double t, bool left) {
    // Right-continuous: value on [times[i], times[i+1]) is values[i]. The
    // left limit at exactly times[i] is the previous piece.
    const auto& ts = s.times;
    auto it = left ? std::lower_bound(ts.begin(), ts.end(), t - 1e-12)
                   : std::upper_bound(ts.begin(), ts.end(), t + 1e-12);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    return i == 0 ? s.initial : s.values[i - 1];
  }

  static Vector eval(const sig_detail::Expression& e, double t, bool left) {
    Vector v(static_cast<Index>(e.components.size()));
    for (std::size_t i = 0; i < e.components.size(); ++i) {
      double acc = 0.0;
      for (const auto& term : e.components[i]) acc += left ? term.left_value(t) : term.value(t);
      v(static_cast<Index>(i)) = acc;
    }
    return v;
  }

  int dim_;
  std::variant<sig_detail::Constant, sig_detail::PiecewiseLinear, sig_detail::Staircase,
               sig_detail::Expression>
      repr_;
};

}  // namespace evi
