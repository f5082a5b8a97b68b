#pragma once

// Closed-form description of a half-line potential q on [0, inf): a list of
// contiguous pieces starting at 0, followed by either q = 0 or a real
// periodic tail, together with the boundary angle eta of the mixed
// condition cos(eta) u(0) - sin(eta) u'(0) = 0.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"

namespace specbar {

/// q(x) = value
struct Constant {
  cdouble value{};
};

/// q(x) = amplitude * sin(frequency * x + phase), all parameters real
struct Sinusoid {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
};

using Expression = std::variant<Constant, Sinusoid>;

template <class Real>
std::complex<Real> evaluate(const Expression& e, Real x) {
  if (const auto* c = std::get_if<Constant>(&e)) return std::complex<Real>(c->value);
  const auto& s = std::get<Sinusoid>(e);
  return {Real(s.amplitude) * std::sin(Real(s.frequency) * x + Real(s.phase)), Real(0)};
}

inline bool is_constant(const Expression& e) { return std::holds_alternative<Constant>(e); }
inline bool is_real(const Expression& e) {
  if (const auto* c = std::get_if<Constant>(&e)) return c->value.imag() == 0.0;
  return true;
}

struct Piece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  Expression expr;
};

struct ZeroTail {};

struct PeriodicTail {
  double period = 1.0;
  double start = 0.0;  // X: the tail is periodic on [X, inf)
  Expression expr;
};

using Tail = std::variant<ZeroTail, PeriodicTail>;

class PotentialModel {
 public:
  PotentialModel() = default;

  PotentialModel(std::vector<Piece> pieces, Tail tail, cdouble eta = {})
      : pieces_(std::move(pieces)), tail_(std::move(tail)), eta_(eta) {
    validate();
  }

  static PotentialModel free(cdouble eta = {}) { return PotentialModel({}, ZeroTail{}, eta); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Tail& tail() const { return tail_; }
  cdouble eta() const { return eta_; }

  bool has_periodic_tail() const { return std::holds_alternative<PeriodicTail>(tail_); }
  const PeriodicTail& periodic() const {
    if (!has_periodic_tail()) throw ArgumentError("model has no periodic tail");
    return std::get<PeriodicTail>(tail_);
  }

  /// End of the compact description (0 if there are no pieces).
  double support_end() const { return pieces_.empty() ? 0.0 : pieces_.back().x_hi; }

  /// Left end of the region where the exterior solution is known in closed form
  /// (support end for q = 0 tails, X for periodic tails).
  double tail_start() const { return has_periodic_tail() ? periodic().start : support_end(); }

  /// The expression active at x together with the coordinate at which to
  /// evaluate it (x itself, or the reduced coordinate inside the tail).
  std::pair<Expression, double> expression_at(double x) const {
    if (x < 0.0) throw DomainError("potential evaluated at x < 0");
    if (const auto* t = std::get_if<PeriodicTail>(&tail_); t && x >= t->start) {
      return {t->expr, reduce(x)};
    }
    for (const auto& p : pieces_)
      if (x >= p.x_lo && x < p.x_hi) return {p.expr, x};
    return {Constant{}, x};
  }

  /// X + ((x - X) mod a) for x >= X.
  double reduce(double x) const {
    const auto& t = periodic();
    double r = std::fmod(x - t.start, t.period);
    if (r < 0) r += t.period;
    return t.start + r;
  }

 private:
  void validate() const {
    double expected = 0.0;
    for (const auto& p : pieces_) {
      if (!(std::isfinite(p.x_lo) && std::isfinite(p.x_hi)))
        throw ModelError("piece bounds must be finite");
      if (p.x_lo != expected)
        throw ModelError("pieces must be contiguous from 0 (expected x_lo = " + std::to_string(expected) + ")");
      if (!(p.x_hi > p.x_lo)) throw ModelError("piece must have x_hi > x_lo");
      expected = p.x_hi;
    }
    if (const auto* t = std::get_if<PeriodicTail>(&tail_)) {
      if (!(t->period > 0.0) || !std::isfinite(t->period)) throw ModelError("tail period must be positive");
      if (t->start < support_end()) throw ModelError("tail start X must not precede the end of the last piece");
      if (!is_real(t->expr)) throw ModelError("periodic tail must be real-valued");
    }
    if (!is_finite(eta_)) throw ModelError("eta must be finite");
  }

  std::vector<Piece> pieces_;
  Tail tail_ = ZeroTail{};
  cdouble eta_{};
};

/// q(x). The periodic tail is evaluated at the reduced coordinate, so
/// q(x) and q(x + a) are bitwise equal for x >= X.
inline cdouble eval_potential(const PotentialModel& m, double x) {
  const auto [expr, at] = m.expression_at(x);
  return evaluate<double>(expr, at);
}

/// Parameters of T_R = T_0 + i gamma chi_[0,R].
struct BarrierProblem {
  PotentialModel model;
  cdouble gamma{1.0, 0.0};
  double R = 1.0;

  BarrierProblem() = default;
  BarrierProblem(PotentialModel m, cdouble g, double r) : model(std::move(m)), gamma(g), R(r) {
    if (gamma == cdouble(0.0)) throw ArgumentError("barrier strength gamma must be nonzero");
    if (!(R > 0.0)) throw ArgumentError("barrier length R must be positive");
  }
};

}  // namespace specbar
