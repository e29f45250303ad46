#include "signorini/conformal.hpp"

#include <cmath>
#include <numbers>

#include "signorini/error.hpp"

namespace signorini {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

std::complex<double> to_complex(Vec2 v) { return {v.x, v.y}; }
Vec2 to_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

}  // namespace

CornerMap make_corner_map(Vec2 center, double alpha, double rotation) {
  if (!(alpha > 0.0 && alpha < 2.0 * kPi)) {
    throw Error(ErrorCode::OutOfSector, "sector opening must lie in (0, 2 pi)");
  }
  return {center, alpha, rotation};
}

double CornerMap::exponent() const { return kPi / alpha; }

Vec2 CornerMap::map_point(Vec2 z) const {
  const auto local = to_complex(z - center) * std::polar(1.0, -rotation);
  const double r = std::abs(local);
  if (r == 0.0) throw Error(ErrorCode::OutOfSector, "the corner itself has no image angle");
  double theta = std::arg(local);
  if (theta < 0.0) theta = theta > -kAngleSlack ? 0.0 : theta + 2.0 * kPi;
  if (theta > alpha * (1.0 + kAngleSlack)) {
    throw Error(ErrorCode::OutOfSector, "point lies outside the sector");
  }
  theta = std::min(theta, alpha);
  const double k = exponent();
  return to_vec(std::polar(std::pow(r, k), theta * k));
}

Vec2 CornerMap::inverse(Vec2 zhat) const {
  const auto w = to_complex(zhat);
  const double r = std::abs(w);
  if (r == 0.0) throw Error(ErrorCode::OutOfSector, "the origin has no preimage angle");
  double theta = std::arg(w);
  if (theta < 0.0) {
    if (theta < -kAngleSlack && theta > -kPi + kAngleSlack) {
      throw Error(ErrorCode::OutOfSector, "point lies below the half plane");
    }
    theta = theta > -kAngleSlack ? 0.0 : kPi;
  }
  const double k = exponent();
  const auto local = std::polar(std::pow(r, 1.0 / k), theta / k);
  return center + to_vec(local * std::polar(1.0, rotation));
}

std::complex<double> CornerMap::derivative(Vec2 z) const {
  const auto rot = std::polar(1.0, -rotation);
  const auto local = to_complex(z - center) * rot;
  const double r = std::abs(local);
  if (r == 0.0) throw Error(ErrorCode::OutOfSector, "derivative is singular at the corner");
  double theta = std::arg(local);
  if (theta < 0.0) theta = theta > -kAngleSlack ? 0.0 : theta + 2.0 * kPi;
  const double k = exponent();
  return k * std::polar(std::pow(r, k - 1.0), theta * (k - 1.0)) * rot;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one point");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

EnergyIdentity energy_identity_check(const AnalyticField& y, const CornerMap& map, int resolution,
                                     double radius) {
  const auto g = gauss_legendre(resolution);
  const double k = map.exponent();
  const double rhat_max = std::pow(radius, k);
  EnergyIdentity out;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      // sector: r in (0, R), theta in (0, alpha)
      const double r = 0.5 * radius * (g.nodes[i] + 1.0);
      const double th = 0.5 * map.alpha * (g.nodes[j] + 1.0);
      const Vec2 z = map.center + r * Vec2{std::cos(th + map.rotation), std::sin(th + map.rotation)};
      const Vec2 grad = y.gradient(z);
      const double wsec = 0.25 * radius * map.alpha * g.weights[i] * g.weights[j];
      out.sector += wsec * dot(grad, grad) * r;

      // half disk: rhat in (0, R^k), thetahat in (0, pi); the pulled-back
      // gradient is grad y divided by |dzhat/dz| (conformal chain rule)
      const double rh = 0.5 * rhat_max * (g.nodes[i] + 1.0);
      const double thh = 0.5 * kPi * (g.nodes[j] + 1.0);
      const Vec2 zm = map.inverse(rh * Vec2{std::cos(thh), std::sin(thh)});
      const Vec2 gm = y.gradient(zm);
      const double d = std::abs(map.derivative(zm));
      const double whd = 0.25 * rhat_max * kPi * g.weights[i] * g.weights[j];
      out.mapped += whd * dot(gm, gm) / (d * d) * rh;
    }
  }
  const double scale = std::max(std::abs(out.sector), std::abs(out.mapped));
  out.relative_difference = scale > 0.0 ? std::abs(out.sector - out.mapped) / scale : 0.0;
  return out;
}

BoundaryGradientSample BoundaryGradientSample::from_derivatives(double s, double t, double n) {
  return {s, t, n, {n, t}};
}

BoundaryGradientSample sample_boundary_gradient(const AnalyticField& y, Vec2 p, Vec2 tangent,
                                                double s) {
  const Vec2 tau = (1.0 / norm(tangent)) * tangent;
  const Vec2 inward{-tau.y, tau.x};
  const Vec2 grad = y.gradient(p);
  return BoundaryGradientSample::from_derivatives(s, dot(grad, tau), dot(grad, inward));
}

double imag_w_squared(const BoundaryGradientSample& sample) { return (sample.w * sample.w).imag(); }

double mapped_laplacian(const AnalyticField& y, const CornerMap& map, Vec2 zhat, double step) {
  auto yhat = [&](Vec2 p) { return y.value(map.inverse(p)); };
  const double c = yhat(zhat);
  const double sum = yhat(zhat + Vec2{step, 0}) + yhat(zhat - Vec2{step, 0}) +
                     yhat(zhat + Vec2{0, step}) + yhat(zhat - Vec2{0, step});
  return (sum - 4.0 * c) / (step * step);
}

}  // namespace signorini
