#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signorini/field.hpp"
#include "signorini/vec2.hpp"

namespace signorini {

/// Boundary condition type of a boundary part.
enum class ConditionTag { Dirichlet, Neumann, Control, Signorini };

char tag_letter(ConditionTag tag);
ConditionTag tag_from_letter(char c);

/// Counterclockwise simple polygon. Edge i joins vertex i to vertex i+1 (mod n).
struct Polygon {
  std::vector<Vec2> vertices;

  std::size_t size() const { return vertices.size(); }
  Vec2 vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
  Vec2 edge_start(std::size_t e) const { return vertex(e); }
  Vec2 edge_end(std::size_t e) const { return vertex(e + 1); }
  double edge_length(std::size_t e) const { return distance(edge_start(e), edge_end(e)); }
};

double signed_area(const Polygon& polygon);
double perimeter(const Polygon& polygon);
bool contains(const Polygon& polygon, Vec2 p);
/// Interior angle at vertex i, measured inside the domain, in (0, 2pi).
double interior_angle(const Polygon& polygon, std::size_t vertex);
/// Throws NonSimplePolygon unless the polygon satisfies all Polygon invariants.
void validate_polygon(const Polygon& polygon);

/// A contiguous run of polygon edges sharing one boundary condition.
/// `first_edge..last_edge` is inclusive and wraps around the polygon when
/// first_edge > last_edge.
struct Segment {
  std::size_t first_edge = 0;
  std::size_t last_edge = 0;
  ConditionTag tag = ConditionTag::Dirichlet;
  /// Polynomial coefficients (degree <= 4) in normalized arclength along the
  /// segment: Neumann flux / control datum u on N and U segments, lifting on D
  /// segments when no global lifting field is given. Empty means zero.
  std::vector<double> data;
};

/// Polygon plus boundary decomposition and problem data.
struct BoundarySpec {
  Polygon polygon;
  std::vector<Segment> segments;
  /// Dirichlet lifting g_D; overrides the per-segment D data when present.
  std::optional<AnalyticField> lifting;
  /// Volume load f in -laplace(y) = f.
  AnalyticField load;
  /// Gap psi in y >= psi on the Signorini boundary.
  AnalyticField gap;

  /// Tag of each polygon edge; valid after validate_boundary.
  std::vector<ConditionTag> edge_tags() const;
  /// Segment index owning each polygon edge.
  std::vector<std::size_t> edge_segments() const;
  /// Edges of segment s in boundary order.
  std::vector<std::size_t> segment_edges(std::size_t s) const;
  double segment_length(std::size_t s) const;
  /// Normalized arclength in [0, 1] along segment s of the point at parameter
  /// t in [0, 1] on polygon edge `edge` (which must belong to s).
  double segment_parameter(std::size_t s, std::size_t edge, double t) const;
  /// Per-segment datum evaluated at normalized arclength.
  double segment_datum(std::size_t s, double param) const;
};

/// Returns the spec unchanged iff every BoundarySpec invariant holds; throws
/// MissingDirichlet, SignoriniTouchesControl, UncoveredEdge or NonSimplePolygon.
BoundarySpec validate_boundary(BoundarySpec spec);

enum class CriticalKind { Corner, ConditionChange, Both, CoincidenceEndpoint };

struct CriticalPoint {
  Vec2 location;
  double angle = 0.0;
  /// Tags of the incoming and outgoing boundary arcs (boundary order).
  ConditionTag before = ConditionTag::Dirichlet;
  ConditionTag after = ConditionTag::Dirichlet;
  CriticalKind kind = CriticalKind::Corner;
  /// Polygon vertex index; unset for coincidence endpoints.
  std::optional<std::size_t> vertex;
};

/// Corners (|alpha - pi| > kCornerTolerance) and tag changes, ordered along
/// the boundary starting at vertex 0.
std::vector<CriticalPoint> critical_points(const BoundarySpec& spec);

inline constexpr double kCornerTolerance = 1e-9;

}  // namespace signorini
