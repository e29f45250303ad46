#include "signorini/field.hpp"

#include <cmath>
#include <numbers>

namespace signorini {
namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct ValueVisitor {
  Vec2 p;
  double operator()(const Monomial& m) const {
    return m.coef * ipow(p.x, m.px) * ipow(p.y, m.py);
  }
  double operator()(const CornerPower& c) const {
    const Vec2 d = p - c.center;
    const double rho = norm(d);
    if (rho == 0.0) return 0.0;
    const double theta = branch_angle(p, c.center, c.cut);
    return c.scale * std::pow(rho, c.exponent) * std::cos(c.exponent * (theta - c.phase));
  }
};

struct GradientVisitor {
  Vec2 p;
  Vec2 operator()(const Monomial& m) const {
    Vec2 g;
    if (m.px > 0) g.x = m.coef * m.px * ipow(p.x, m.px - 1) * ipow(p.y, m.py);
    if (m.py > 0) g.y = m.coef * m.py * ipow(p.x, m.px) * ipow(p.y, m.py - 1);
    return g;
  }
  Vec2 operator()(const CornerPower& c) const {
    const Vec2 d = p - c.center;
    const double rho = norm(d);
    const double theta = branch_angle(p, c.center, c.cut);
    const double arg = c.exponent * (theta - c.phase);
    const double radial = c.scale * c.exponent * std::pow(rho, c.exponent - 1.0);
    const double d_rho = radial * std::cos(arg);
    const double d_theta = -radial * std::sin(arg);  // (1/rho) d/dtheta
    const double ct = d.x / rho;
    const double st = d.y / rho;
    return {d_rho * ct - d_theta * st, d_rho * st + d_theta * ct};
  }
};

}  // namespace

double branch_angle(Vec2 p, Vec2 center, double cut) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Vec2 d = p - center;
  double theta = std::atan2(d.y, d.x);
  while (theta >= cut) theta -= two_pi;
  while (theta < cut - two_pi) theta += two_pi;
  return theta;
}

AnalyticField AnalyticField::constant(double c) {
  if (c == 0.0) return {};
  return AnalyticField({Monomial{c, 0, 0}});
}

AnalyticField AnalyticField::polynomial(std::vector<Monomial> monomials) {
  std::vector<Term> terms;
  for (const auto& m : monomials) {
    if (m.coef != 0.0) terms.emplace_back(m);
  }
  return AnalyticField(std::move(terms));
}

AnalyticField AnalyticField::corner(const CornerPower& term) {
  return AnalyticField({term});
}

double AnalyticField::value(Vec2 p) const {
  double v = 0.0;
  for (const auto& t : terms_) v += std::visit(ValueVisitor{p}, t);
  return v;
}

Vec2 AnalyticField::gradient(Vec2 p) const {
  Vec2 g;
  for (const auto& t : terms_) g = g + std::visit(GradientVisitor{p}, t);
  return g;
}

double AnalyticField::laplacian(Vec2 p) const { return laplacian_field().value(p); }

AnalyticField AnalyticField::laplacian_field() const {
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (const auto* m = std::get_if<Monomial>(&t)) {
      if (m->px >= 2) out.push_back({m->coef * m->px * (m->px - 1), m->px - 2, m->py});
      if (m->py >= 2) out.push_back({m->coef * m->py * (m->py - 1), m->px, m->py - 2});
    }
  }
  return polynomial(std::move(out));
}

AnalyticField AnalyticField::operator+(const AnalyticField& other) const {
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return AnalyticField(std::move(terms));
}

AnalyticField AnalyticField::scaled(double s) const {
  if (s == 0.0) return {};
  std::vector<Term> terms = terms_;
  for (auto& t : terms) {
    std::visit([s](auto& term) {
      if constexpr (std::is_same_v<std::decay_t<decltype(term)>, Monomial>) {
        term.coef *= s;
      } else {
        term.scale *= s;
      }
    }, t);
  }
  return AnalyticField(std::move(terms));
}

bool AnalyticField::is_polynomial() const {
  for (const auto& t : terms_) {
    if (!std::holds_alternative<Monomial>(t)) return false;
  }
  return true;
}

}  // namespace signorini
