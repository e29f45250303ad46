#pragma once

#include <variant>
#include <vector>

#include "signorini/vec2.hpp"

namespace signorini {

/// c * x^px * y^py
struct Monomial {
  double coef = 0.0;
  int px = 0;
  int py = 0;
};

/// scale * rho^exponent * cos(exponent * (theta - phase)) in polar coordinates
/// about `center`. The angle theta is taken in [cut - 2pi, cut), so the branch
/// cut is the ray leaving `center` in direction `cut`; it must lie outside the
/// domain. Harmonic away from the center.
struct CornerPower {
  Vec2 center;
  double exponent = 1.0;
  double scale = 1.0;
  double phase = 0.0;
  double cut = 0.0;
};

/// Closed-form scalar field on the plane: a finite sum of monomials and corner
/// power terms. Values, gradients and Laplacians are exact.
class AnalyticField {
 public:
  using Term = std::variant<Monomial, CornerPower>;

  AnalyticField() = default;
  explicit AnalyticField(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static AnalyticField zero() { return {}; }
  static AnalyticField constant(double c);
  static AnalyticField polynomial(std::vector<Monomial> monomials);
  static AnalyticField corner(const CornerPower& term);

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  double laplacian(Vec2 p) const;

  /// Exact Laplacian as a field; corner terms are harmonic and drop out.
  AnalyticField laplacian_field() const;

  AnalyticField operator+(const AnalyticField& other) const;
  AnalyticField scaled(double s) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_polynomial() const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

/// Angle of p - center in [cut - 2pi, cut).
double branch_angle(Vec2 p, Vec2 center, double cut);

}  // namespace signorini
