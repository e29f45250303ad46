#include "signorini/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "signorini/error.hpp"

namespace signorini {
namespace {

constexpr double kPi = std::numbers::pi;

BoundarySpec square(const char* tags) {
  BoundarySpec spec;
  spec.polygon.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (std::size_t e = 0; e < 4; ++e) spec.segments.push_back({e, e, tag_from_letter(tags[e]), {}});
  return spec;
}

double radical_inverse(int i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

/// Outward unit normal of polygon edge e (counter-clockwise polygon).
Vec2 outward_normal(const Polygon& poly, std::size_t e) {
  const Vec2 d = poly.edge_end(e) - poly.edge_start(e);
  return (1.0 / norm(d)) * Vec2{d.y, -d.x};
}

std::vector<Vec2> singular_centers(const AnalyticField& f) {
  std::vector<Vec2> out;
  for (const auto& term : f.terms()) {
    if (const auto* c = std::get_if<CornerPower>(&term)) out.push_back(c->center);
  }
  return out;
}

double extrapolated_laplacian(const AnalyticField& f, Vec2 p, double h) {
  auto five_point = [&](double s) {
    return (f.value(p + Vec2{s, 0}) + f.value(p - Vec2{s, 0}) + f.value(p + Vec2{0, s}) +
            f.value(p - Vec2{0, s}) - 4.0 * f.value(p)) /
           (s * s);
  };
  return (4.0 * five_point(0.5 * h) - five_point(h)) / 3.0;
}

}  // namespace

CaseSpec endpoint_case() {
  CaseSpec c;
  c.name = "endpoint";
  c.description = "Re(z^(3/2)) on [-1,1]x[0,1]: contact on the left half of the Signorini bottom edge";
  c.spec.polygon.vertices = {{-1, 0}, {1, 0}, {1, 1}, {-1, 1}};
  c.spec.segments = {{0, 0, ConditionTag::Signorini, {}}, {1, 3, ConditionTag::Dirichlet, {}}};
  c.exact = AnalyticField::corner({{0, 0}, 1.5, 1.0, 0.0, 1.5 * kPi});
  c.spec.lifting = c.exact;
  c.spec = validate_boundary(c.spec);
  c.expected_contact = {{{-1, 0}, {0, 0}}};
  c.expected_endpoints = {{0, 0}};
  c.exponents = {{{0, 0}, 1.5}};
  return c;
}

CaseSpec l_domain_sd_case() {
  CaseSpec c;
  c.name = "l-domain-sd";
  c.description = "rho^(1/3) cos(theta/3) on the L-domain, Signorini on one leg of the reentrant corner";
  c.spec.polygon.vertices = {{0, 0}, {1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {0, -1}};
  c.spec.segments = {{0, 0, ConditionTag::Signorini, {}}, {1, 5, ConditionTag::Dirichlet, {}}};
  c.exact = AnalyticField::corner({{0, 0}, 1.0 / 3, 1.0, 0.0, 1.75 * kPi});
  c.spec.lifting = c.exact;
  c.spec = validate_boundary(c.spec);
  c.exponents = {{{0, 0}, 1.0 / 3}};
  c.grading = {{{0, 0}, 1.0 / 3, 0.5}};
  return c;
}

CaseSpec l_domain_ss_case() {
  CaseSpec c;
  c.name = "l-domain-ss";
  c.description =
      "-rho^(2/3) cos(2(theta - 3pi/4)/3) on the L-domain, Signorini on both legs, full contact";
  c.spec.polygon.vertices = {{0, -1}, {0, 0}, {1, 0}, {1, 1}, {-1, 1}, {-1, -1}};
  c.spec.segments = {{0, 1, ConditionTag::Signorini, {}}, {2, 5, ConditionTag::Dirichlet, {}}};
  c.exact = AnalyticField::corner({{0, 0}, 2.0 / 3, -1.0, 0.75 * kPi, 1.75 * kPi});
  c.spec.lifting = c.exact;
  c.spec = validate_boundary(c.spec);
  c.expected_contact = {{{0, -1}, {1, 0}}};
  c.exponents = {{{0, 0}, 2.0 / 3}};
  c.grading = {{{0, 0}, 2.0 / 3, 0.5}};
  return c;
}

CaseSpec square_full_signorini_case(const AnalyticField& load) {
  CaseSpec c;
  c.name = "square-full-signorini";
  c.description = "unit square, Signorini on three sides, Dirichlet on the left";
  c.spec = square("SSSD");
  c.spec.segments = {{0, 2, ConditionTag::Signorini, {}}, {3, 3, ConditionTag::Dirichlet, {}}};
  c.spec.load = load;
  c.spec = validate_boundary(c.spec);
  return c;
}

CaseSpec square_mixed_load_case() {
  auto c = square_full_signorini_case(AnalyticField::polynomial({{1.0, 0, 0}, {-4.0, 0, 1}}));
  c.name = "square-full-signorini-mixed";
  c.description = "unit square, Signorini on three sides, load 1 - 4y pulling the top into contact";
  return c;
}

CaseSpec homogenized_case(const BoundarySpec& base, const AnalyticField& y_star) {
  const auto spec = validate_boundary(base);
  const auto tags = spec.edge_tags();
  double scale = 1.0;
  for (const auto& v : spec.polygon.vertices) scale = std::max(scale, std::abs(y_star.value(v)));
  const double tol = 1e-10 * scale;
  constexpr int kProbes = 64;
  for (std::size_t e = 0; e < tags.size(); ++e) {
    const Vec2 a = spec.polygon.edge_start(e), b = spec.polygon.edge_end(e);
    const Vec2 n = outward_normal(spec.polygon, e);
    for (int k = 0; k <= kProbes; ++k) {
      const Vec2 p = a + (static_cast<double>(k) / kProbes) * (b - a);
      if (tags[e] == ConditionTag::Dirichlet) {
        if (std::abs(y_star.value(p)) > tol) {
          throw Error(ErrorCode::IncompatibleYStar, "y_star does not vanish on Dirichlet edge " +
                                                        std::to_string(e));
        }
      } else if (std::abs(dot(y_star.gradient(p), n)) > tol) {
        throw Error(ErrorCode::IncompatibleYStar,
                    "y_star has a nonzero normal derivative on edge " + std::to_string(e));
      }
    }
  }
  CaseSpec c;
  c.name = "homogenized";
  c.description = "homogenization: f = -laplace(y_star), psi = y_star on the Signorini boundary";
  c.spec = spec;
  c.spec.load = y_star.laplacian_field().scaled(-1.0);
  c.spec.gap = y_star;
  return c;
}

CaseSpec homogenized_bubble_case() {
  const double px[] = {0, 0, 1, -2, 1};  // x^2 (1 - x)^2
  std::vector<Monomial> terms;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      if (px[i] != 0 && px[j] != 0) terms.push_back({256.0 * px[i] * px[j], i, j});
    }
  }
  auto c = homogenized_case(square("SDND"), AnalyticField::polynomial(terms));
  c.name = "homogenized-bubble";
  c.description = "homogenization of the bubble 256 x^2(1-x)^2 y^2(1-y)^2 on the unit square";
  return c;
}

CaseSpec zero_data_case() {
  CaseSpec c;
  c.name = "zero-data";
  c.description = "unit square with zero data; y = 0, reported as full contact";
  c.spec = validate_boundary(square("SDUD"));
  c.exact = AnalyticField::zero();
  c.expected_contact = {{{0, 0}, {1, 0}}};
  return c;
}

std::vector<std::string> case_names() {
  return {"endpoint",
          "l-domain-sd",
          "l-domain-ss",
          "square-full-signorini",
          "square-full-signorini-mixed",
          "homogenized-bubble",
          "zero-data"};
}

CaseSpec make_case(const std::string& name) {
  if (name == "endpoint") return endpoint_case();
  if (name == "l-domain-sd") return l_domain_sd_case();
  if (name == "l-domain-ss") return l_domain_ss_case();
  if (name == "square-full-signorini") return square_full_signorini_case();
  if (name == "square-full-signorini-mixed") return square_mixed_load_case();
  if (name == "homogenized-bubble") return homogenized_bubble_case();
  if (name == "zero-data") return zero_data_case();
  throw Error(ErrorCode::InvalidArgument, "unknown case '" + name + "'");
}

ProbeReport probe_strong_form(const CaseSpec& c, int count) {
  if (!c.exact) throw Error(ErrorCode::NoExactSolution, "case '" + c.name + "' has no exact solution");
  const AnalyticField& y = *c.exact;
  const BoundarySpec& spec = c.spec;
  const Polygon& poly = spec.polygon;
  ProbeReport report;

  constexpr double kStep = 2e-3;
  constexpr double kSingularMargin = 0.25;
  const auto centers = singular_centers(y);
  Vec2 lo = poly.vertices.front(), hi = lo;
  for (const auto& v : poly.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  for (int i = 1; report.interior_probes < count && i < 100 * count; ++i) {
    const Vec2 p{lo.x + (hi.x - lo.x) * radical_inverse(i, 2),
                 lo.y + (hi.y - lo.y) * radical_inverse(i, 3)};
    bool ok = contains(poly, p);
    for (const Vec2 s : {Vec2{kStep, 0}, Vec2{-kStep, 0}, Vec2{0, kStep}, Vec2{0, -kStep}}) {
      ok = ok && contains(poly, p + s);
    }
    for (const auto& cc : centers) ok = ok && distance(p, cc) >= kSingularMargin;
    if (!ok) continue;
    const double r = std::abs(extrapolated_laplacian(y, p, kStep) + spec.load.value(p));
    report.laplacian_residual = std::max(report.laplacian_residual, r);
    ++report.interior_probes;
  }

  const auto tags = spec.edge_tags();
  const auto owner = spec.edge_segments();
  const double total = perimeter(poly);
  std::size_t e = 0;
  double edge_begin = 0.0;
  for (int k = 0; k < count; ++k) {
    const double s = (k + 0.5) / count * total;
    while (s > edge_begin + poly.edge_length(e)) edge_begin += poly.edge_length(e++);
    const double t = (s - edge_begin) / poly.edge_length(e);
    const Vec2 p = poly.edge_start(e) + t * (poly.edge_end(e) - poly.edge_start(e));
    bool singular = false;
    for (const auto& cc : centers) singular |= distance(p, cc) < 1e-9;
    if (singular) continue;
    const double datum = spec.segment_datum(owner[e], spec.segment_parameter(owner[e], e, t));
    const double value = y.value(p);
    const double flux = dot(y.gradient(p), outward_normal(poly, e));
    double r = 0.0;
    switch (tags[e]) {
      case ConditionTag::Dirichlet:
        r = std::abs(value - (spec.lifting ? spec.lifting->value(p) : datum));
        break;
      case ConditionTag::Neumann:
      case ConditionTag::Control:
        r = std::abs(flux - datum);
        break;
      case ConditionTag::Signorini: {
        const double gap = value - spec.gap.value(p);
        r = std::max({-gap, -flux, std::abs(gap * flux), 0.0});
        break;
      }
    }
    report.boundary_residual = std::max(report.boundary_residual, r);
    ++report.boundary_probes;
  }
  report.passed = report.interior_probes == count && report.laplacian_residual <= 1e-8 &&
                  report.boundary_residual <= 1e-10;
  return report;
}

}  // namespace signorini
