#pragma once

#include <complex>
#include <vector>

#include "signorini/field.hpp"
#include "signorini/vec2.hpp"

namespace signorini {

/// The power map z -> z^(pi/alpha) about a corner, straightening a sector of
/// opening alpha into the upper half plane. `rotation` is the direction of the
/// sector's first leg; in local coordinates that leg is theta = 0.
struct CornerMap {
  Vec2 center;
  double alpha = 0.0;
  double rotation = 0.0;

  double exponent() const;

  /// Polar rule r^(pi/alpha), theta pi/alpha; throws OutOfSector for points
  /// outside the closed sector or at the center.
  Vec2 map_point(Vec2 z) const;
  /// Inverse map from the closed upper half plane (minus the origin).
  Vec2 inverse(Vec2 zhat) const;
  /// Complex derivative dzhat/dz at z.
  std::complex<double> derivative(Vec2 z) const;
};

/// Throws OutOfSector unless alpha lies in (0, 2 pi).
CornerMap make_corner_map(Vec2 center, double alpha, double rotation);

struct EnergyIdentity {
  double sector = 0.0;
  double mapped = 0.0;
  double relative_difference = 0.0;
};

/// Dirichlet energy of y on the sector of radius `radius` and of the pulled
/// back field on the image half disk, both by `resolution` x `resolution`
/// Gauss-Legendre quadrature in polar coordinates.
EnergyIdentity energy_identity_check(const AnalyticField& y, const CornerMap& map, int resolution,
                                     double radius = 1.0);

/// Gradient of y at a boundary point in the local frame whose first axis is
/// the boundary tangent and whose second axis points into the domain.
struct BoundaryGradientSample {
  double s = 0.0;
  double t = 0.0;  // tangential derivative
  double n = 0.0;  // derivative along the interior normal
  std::complex<double> w;  // n + i t

  static BoundaryGradientSample from_derivatives(double s, double t, double n);
};

/// Gradient sample of y at p; `tangent` is the boundary direction with the
/// domain on its left.
BoundaryGradientSample sample_boundary_gradient(const AnalyticField& y, Vec2 p, Vec2 tangent,
                                                double s);

/// Im(w^2) = 2 t n.
double imag_w_squared(const BoundaryGradientSample& sample);

/// Five-point Laplacian, with spacing `step`, of y composed with the inverse
/// map, evaluated at zhat in the image half plane.
double mapped_laplacian(const AnalyticField& y, const CornerMap& map, Vec2 zhat, double step);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

}  // namespace signorini
