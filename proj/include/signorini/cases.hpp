#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signorini/field.hpp"
#include "signorini/geometry.hpp"
#include "signorini/mesh.hpp"

namespace signorini {

/// Leading exponent the theory predicts at a point of the boundary.
struct ExpectedExponent {
  Vec2 location;
  double lambda = 0.0;
};

/// Benchmark problem with its known structure.
struct CaseSpec {
  std::string name;
  std::string description;
  BoundarySpec spec;
  std::optional<AnalyticField> exact;
  /// Expected contact intervals as (begin, end) boundary points.
  std::vector<std::pair<Vec2, Vec2>> expected_contact;
  /// Expected coincidence endpoints (transitions inside the Signorini boundary).
  std::vector<Vec2> expected_endpoints;
  std::vector<ExpectedExponent> exponents;
  /// Suggested grading toward singular corners (empty: uniform meshes).
  std::vector<GradingParams> grading;
};

/// Rectangle [-1,1]x[0,1], Signorini bottom, exact solution Re(z^(3/2)); the
/// contact set is the left half of the bottom edge.
CaseSpec endpoint_case();
/// L-shaped domain, Signorini on the leg theta = 0 of the reentrant corner,
/// exact solution rho^(1/3) cos(theta/3) without contact.
CaseSpec l_domain_sd_case();
/// L-shaped domain, Signorini on both legs, exact solution
/// -rho^(2/3) cos(2(theta - 3pi/4)/3) in full contact.
CaseSpec l_domain_ss_case();
/// Unit square, Signorini on three sides and Dirichlet on the left, volume
/// load f (constant 1 by default); no exact solution.
CaseSpec square_full_signorini_case(const AnalyticField& load = AnalyticField::constant(1.0));
/// The same square with f = 1 - 4y, which produces two contact intervals.
CaseSpec square_mixed_load_case();
/// f = -laplace(y_star), psi = y_star on the given geometry. Throws
/// IncompatibleYStar unless y_star vanishes on Dirichlet edges and has zero
/// normal derivative on the other edges.
CaseSpec homogenized_case(const BoundarySpec& base, const AnalyticField& y_star);
/// Homogenization of the bubble 256 x^2(1-x)^2 y^2(1-y)^2 on the unit square
/// (Signorini bottom, Dirichlet left and right, Neumann top).
CaseSpec homogenized_bubble_case();
/// Unit square with zero data; the solution is y = 0.
CaseSpec zero_data_case();

/// Names accepted by make_case, in listing order.
std::vector<std::string> case_names();
/// Throws InvalidArgument for unknown names.
CaseSpec make_case(const std::string& name);

/// Numerical check of the strong form for a case with an exact solution.
struct ProbeReport {
  int interior_probes = 0;
  int boundary_probes = 0;
  /// max |laplace(y) + f| by an extrapolated five-point stencil.
  double laplacian_residual = 0.0;
  /// max violation of the boundary conditions (Dirichlet, flux, Signorini).
  double boundary_residual = 0.0;
  bool passed = false;
};

/// Probes `count` interior points (a Halton sequence kept away from critical
/// points) and `count` boundary points. Throws NoExactSolution if the case
/// has none.
ProbeReport probe_strong_form(const CaseSpec& c, int count = 1000);

}  // namespace signorini
