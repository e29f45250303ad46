#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signorini/geometry.hpp"
#include "signorini/mesh.hpp"
#include "signorini/vi_solver.hpp"

namespace signorini {

// ---------------------------------------------------------------------------
// Coincidence set
// ---------------------------------------------------------------------------

/// Boundary arclength is measured from polygon vertex 0 along the boundary;
/// along a Signorini chain it increases monotonically (and may exceed the
/// perimeter when the chain wraps past vertex 0).
struct ContactInterval {
  double s_begin = 0.0;
  double s_end = 0.0;
  Vec2 begin;
  Vec2 end;
  int first_node = -1;
  int last_node = -1;
};

struct IsolatedContact {
  double s = 0.0;
  Vec2 location;
  int node = -1;
};

/// Transition between contact and non-contact inside a Signorini chain,
/// placed at the midpoint of the transition edge.
struct ContactEndpoint {
  double s = 0.0;
  Vec2 location;
};

struct CoincidenceReport {
  int level = 0;
  double h = 0.0;
  std::vector<ContactInterval> intervals;
  std::vector<IsolatedContact> isolated;
  std::vector<ContactEndpoint> endpoints;

  std::size_t components() const { return intervals.size() + isolated.size(); }
};

/// A Signorini node is in contact iff it is in the active set or y == psi
/// exactly (the latter makes y = 0 with zero data report full contact).
/// Consecutive contact nodes along each maximal Signorini chain of boundary
/// edges form an interval; a maximal group of one node is an isolated point.
CoincidenceReport extract_coincidence(const DiscreteSolution& sol, const TriMesh& mesh,
                                      const DofPartition& partition);

struct StabilityVerdict {
  bool stable = false;
  std::size_t components = 0;
  /// Largest endpoint displacement between consecutive levels, per pair.
  std::vector<double> endpoint_shifts;
  std::string reason;
};

/// Needs at least three levels. Stable iff the component count agrees on the
/// last two levels and endpoints move by at most 2h (h of the coarser level)
/// between consecutive levels with matching endpoint counts.
StabilityVerdict component_stability(std::span<const CoincidenceReport> levels);

// ---------------------------------------------------------------------------
// Complementarity product of tangential and normal derivatives
// ---------------------------------------------------------------------------

struct ComplementaritySample {
  int node = -1;
  double s = 0.0;
  /// Larger one-sided difference quotient of y along the boundary.
  double tangential = 0.0;
  /// Multiplier divided by the node's Signorini edge mass.
  double normal = 0.0;
  double product = 0.0;
  bool excluded = false;
};

struct ComplementarityReport {
  double max_product = 0.0;
  double max_tangential = 0.0;
  double max_normal = 0.0;
  std::vector<ComplementaritySample> samples;
};

/// Max |t_h n_h| over Signorini nodes farther than delta from every point in
/// `exclude` (normally the critical points of the geometry).
ComplementarityReport complementarity_product(const DiscreteSolution& sol, const TriMesh& mesh,
                                              const DofPartition& partition,
                                              std::span<const CriticalPoint> exclude, double delta);

// ---------------------------------------------------------------------------
// Singular exponents
// ---------------------------------------------------------------------------

/// Unordered pair of boundary conditions at a critical point, or the endpoint
/// of a coincidence interval.
struct ConditionPair {
  ConditionTag first = ConditionTag::Dirichlet;
  ConditionTag second = ConditionTag::Dirichlet;
  bool endpoint = false;

  static ConditionPair of(const CriticalPoint& cp);
  static ConditionPair coincidence_endpoint() { return {ConditionTag::Signorini, ConditionTag::Signorini, true}; }
  std::string label() const;
};

/// Smallest admissible j for the pair's row (2 for S-S, otherwise 1).
int minimum_index(const ConditionPair& pair);

/// lambda_j for the pair at opening angle alpha:
///   D-D, N-N, U-U, U-N : j pi / alpha
///   D-N, D-U           : (j - 1/2) pi / alpha
///   S-S (j >= 2), S-D, S-N : j pi / (2 alpha)
///   coincidence endpoint : 3/2
/// Throws InvalidIndex below the row's index bound.
double singular_exponent(const ConditionPair& pair, double alpha, int j);

struct LeadingExponent {
  double lambda = 0.0;
  int j = 1;
};

/// Smallest table entry different from 1 for the point's row and angle.
LeadingExponent predicted_leading_exponent(const CriticalPoint& cp);

/// Sorted distinct values 2 / (2 - k pi / (2 alpha)) > 2 over all angles and
/// k >= 1 with k pi / (2 alpha) < 2.
std::vector<double> exceptional_p(std::span<const double> angles);

// ---------------------------------------------------------------------------
// Exponent fit
// ---------------------------------------------------------------------------

struct FitOptions {
  /// Window; defaults are [4 h_loc, d/2] with d the distance to the nearest
  /// other critical point.
  std::optional<double> r_min;
  std::optional<double> r_max;
  /// Number of arcs spanning the window; 0 selects ratio-sqrt(2) spacing.
  int arcs = 0;
  int samples_per_arc = 256;
};

struct ArcSample {
  double r = 0.0;
  double g = 0.0;
  int inside = 0;
};

struct ExponentReport {
  CriticalPoint point;
  double fitted = 0.0;
  double predicted = 0.0;
  int predicted_index = 1;
  double r_min = 0.0;
  double r_max = 0.0;
  int arcs = 0;
  double r_squared = 0.0;
  /// Arc norm at the outermost arc.
  double coefficient_proxy = 0.0;
  std::vector<ArcSample> samples;
};

/// Least-squares slope of log g(r) against log r, where g(r) is the angular
/// L2 norm of y - y(c) on the part of the circle |x - c| = r inside the mesh.
/// Throws WindowTooNarrow (fewer than 4 usable arcs) or SingularityNotExcited.
ExponentReport fit_exponent(std::span<const double> y, const TriMesh& mesh,
                            const CriticalPoint& cp, std::span<const CriticalPoint> others,
                            const FitOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Discretization error
// ---------------------------------------------------------------------------

struct ErrorNorms {
  double l2 = 0.0;
  double h1_seminorm = 0.0;
};

/// L2 and H1-seminorm errors of the P1 function y against an exact field.
/// Triangles touching a point in `singular` are integrated on a composite
/// rule (four levels of uniform subdivision).
ErrorNorms discretization_errors(std::span<const double> y, const TriMesh& mesh,
                                 const AnalyticField& exact, std::span<const Vec2> singular = {});

}  // namespace signorini
