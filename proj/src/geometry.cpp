#include "signorini/geometry.hpp"

#include <cmath>
#include <numbers>

#include "signorini/error.hpp"

namespace signorini {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

std::vector<std::size_t> expand_range(std::size_t first, std::size_t last, std::size_t n) {
  std::vector<std::size_t> edges;
  for (std::size_t e = first;; e = (e + 1) % n) {
    edges.push_back(e);
    if (e == last || edges.size() > n) break;
  }
  return edges;
}

}  // namespace

char tag_letter(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::Dirichlet: return 'D';
    case ConditionTag::Neumann: return 'N';
    case ConditionTag::Control: return 'U';
    case ConditionTag::Signorini: return 'S';
  }
  return '?';
}

ConditionTag tag_from_letter(char c) {
  switch (c) {
    case 'D': return ConditionTag::Dirichlet;
    case 'N': return ConditionTag::Neumann;
    case 'U': return ConditionTag::Control;
    case 'S': return ConditionTag::Signorini;
    default: throw Error(ErrorCode::ParseError, std::string("unknown boundary tag '") + c + "'");
  }
}

double signed_area(const Polygon& polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    a += cross(polygon.vertex(i), polygon.vertex(i + 1));
  }
  return 0.5 * a;
}

double perimeter(const Polygon& polygon) {
  double p = 0.0;
  for (std::size_t e = 0; e < polygon.size(); ++e) p += polygon.edge_length(e);
  return p;
}

bool contains(const Polygon& polygon, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2 a = polygon.vertex(i);
    const Vec2 b = polygon.vertex(i + 1);
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double interior_angle(const Polygon& polygon, std::size_t vertex) {
  const std::size_t n = polygon.size();
  const Vec2 v = polygon.vertex(vertex);
  const Vec2 to_next = polygon.vertex(vertex + 1) - v;
  const Vec2 to_prev = polygon.vertex(vertex + n - 1) - v;
  double angle = std::atan2(cross(to_next, to_prev), dot(to_next, to_prev));
  if (angle <= 0.0) angle += kTwoPi;
  return angle;
}

void validate_polygon(const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw Error(ErrorCode::NonSimplePolygon, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon.vertex(i) == polygon.vertex(i + 1)) {
      throw Error(ErrorCode::NonSimplePolygon,
                  "consecutive vertices " + std::to_string(i) + " coincide");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Vec2 a = polygon.edge_start(i), b = polygon.edge_end(i);
      const Vec2 c = polygon.edge_start(j), d = polygon.edge_end(j);
      if (adjacent) {
        // Adjacent edges may only share their common vertex: reject folding back.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 p = (j == i + 1) ? a : b;
        const Vec2 q = (j == i + 1) ? d : c;
        if (orient(p, shared, q) == 0.0 && dot(p - shared, q - shared) > 0.0) {
          throw Error(ErrorCode::NonSimplePolygon,
                      "edges " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        throw Error(ErrorCode::NonSimplePolygon,
                    "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }
  if (!(signed_area(polygon) > 0.0)) {
    throw Error(ErrorCode::NonSimplePolygon, "polygon is not counterclockwise");
  }
}

std::vector<ConditionTag> BoundarySpec::edge_tags() const {
  std::vector<ConditionTag> tags(polygon.size(), ConditionTag::Dirichlet);
  for (const auto& seg : segments) {
    for (auto e : expand_range(seg.first_edge, seg.last_edge, polygon.size())) tags[e] = seg.tag;
  }
  return tags;
}

std::vector<std::size_t> BoundarySpec::edge_segments() const {
  std::vector<std::size_t> owner(polygon.size(), 0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (auto e : segment_edges(s)) owner[e] = s;
  }
  return owner;
}

std::vector<std::size_t> BoundarySpec::segment_edges(std::size_t s) const {
  return expand_range(segments[s].first_edge, segments[s].last_edge, polygon.size());
}

double BoundarySpec::segment_length(std::size_t s) const {
  double len = 0.0;
  for (auto e : segment_edges(s)) len += polygon.edge_length(e);
  return len;
}

double BoundarySpec::segment_parameter(std::size_t s, std::size_t edge, double t) const {
  double before = 0.0;
  for (auto e : segment_edges(s)) {
    if (e == edge) break;
    before += polygon.edge_length(e);
  }
  return (before + t * polygon.edge_length(edge)) / segment_length(s);
}

double BoundarySpec::segment_datum(std::size_t s, double param) const {
  double v = 0.0;
  const auto& c = segments[s].data;
  for (std::size_t k = c.size(); k-- > 0;) v = v * param + c[k];
  return v;
}

BoundarySpec validate_boundary(BoundarySpec spec) {
  validate_polygon(spec.polygon);
  const std::size_t n = spec.polygon.size();
  std::vector<int> cover(n, 0);
  for (const auto& seg : spec.segments) {
    if (seg.first_edge >= n || seg.last_edge >= n) {
      throw Error(ErrorCode::UncoveredEdge, "segment references an edge outside the polygon");
    }
    if (seg.data.size() > 5) {
      throw Error(ErrorCode::InvalidArgument, "segment data must have degree <= 4");
    }
    for (auto e : expand_range(seg.first_edge, seg.last_edge, n)) ++cover[e];
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (cover[e] != 1) {
      throw Error(ErrorCode::UncoveredEdge,
                  "edge " + std::to_string(e) + " is covered " + std::to_string(cover[e]) +
                      " times; every edge needs exactly one tag");
    }
  }
  const auto tags = spec.edge_tags();
  bool has_dirichlet = false;
  for (std::size_t e = 0; e < n; ++e) {
    has_dirichlet |= tags[e] == ConditionTag::Dirichlet;
    const ConditionTag a = tags[e];
    const ConditionTag b = tags[(e + 1) % n];
    if ((a == ConditionTag::Signorini && b == ConditionTag::Control) ||
        (a == ConditionTag::Control && b == ConditionTag::Signorini)) {
      throw Error(ErrorCode::SignoriniTouchesControl,
                  "Signorini and control boundary meet at vertex " + std::to_string((e + 1) % n));
    }
  }
  if (!has_dirichlet) {
    throw Error(ErrorCode::MissingDirichlet, "the Dirichlet boundary must be non-empty");
  }
  return spec;
}

std::vector<CriticalPoint> critical_points(const BoundarySpec& spec) {
  const auto tags = spec.edge_tags();
  const std::size_t n = spec.polygon.size();
  std::vector<CriticalPoint> out;
  for (std::size_t v = 0; v < n; ++v) {
    const double alpha = interior_angle(spec.polygon, v);
    const ConditionTag before = tags[(v + n - 1) % n];
    const ConditionTag after = tags[v];
    const bool corner = std::abs(alpha - std::numbers::pi) > kCornerTolerance;
    const bool change = before != after;
    if (!corner && !change) continue;
    CriticalPoint cp;
    cp.location = spec.polygon.vertex(v);
    cp.angle = alpha;
    cp.before = before;
    cp.after = after;
    cp.kind = corner && change ? CriticalKind::Both
                               : (corner ? CriticalKind::Corner : CriticalKind::ConditionChange);
    cp.vertex = v;
    out.push_back(cp);
  }
  return out;
}

}  // namespace signorini
