#include "signorini/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "signorini/error.hpp"
#include "signorini/format.hpp"

namespace signorini {
namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey make_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct KeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    return std::hash<long long>()((static_cast<long long>(k.first) << 32) ^ k.second);
  }
};

bool in_closed_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

double min_angle(Vec2 a, Vec2 b, Vec2 c) {
  auto angle = [](Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

std::vector<std::array<int, 3>> ear_clip(const Polygon& polygon) {
  std::vector<int> ring(polygon.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> out;
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    int best = -1;
    double best_quality = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const int ip = ring[(i + m - 1) % m], ic = ring[i], in = ring[(i + 1) % m];
      const Vec2 a = polygon.vertex(ip), b = polygon.vertex(ic), c = polygon.vertex(in);
      if (orient(a, b, c) <= 0.0) continue;
      bool empty = true;
      for (std::size_t j = 0; j < m && empty; ++j) {
        const int v = ring[j];
        if (v == ip || v == ic || v == in) continue;
        if (in_closed_triangle(polygon.vertex(v), a, b, c)) empty = false;
      }
      if (!empty) continue;
      const double q = min_angle(a, b, c);
      if (q > best_quality) {
        best_quality = q;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) throw Error(ErrorCode::DegenerateGeometry, "ear clipping found no ear");
    const std::size_t i = static_cast<std::size_t>(best);
    out.push_back({ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]});
    ring.erase(ring.begin() + best);
  }
  if (orient(polygon.vertex(ring[0]), polygon.vertex(ring[1]), polygon.vertex(ring[2])) <= 0.0) {
    throw Error(ErrorCode::DegenerateGeometry, "ear clipping produced a degenerate triangle");
  }
  out.push_back({ring[0], ring[1], ring[2]});
  return out;
}

/// Conforming longest-edge (Rivara LEPP) bisection.
class Bisector {
 public:
  Bisector(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> tris,
           std::map<EdgeKey, std::size_t> boundary)
      : nodes_(std::move(nodes)), tris_(std::move(tris)), boundary_(std::move(boundary)) {
    for (std::size_t t = 0; t < tris_.size(); ++t) attach(static_cast<int>(t));
  }

  void refine_to(double h) {
    const double h2 = h * h;
    std::deque<int> queue;
    for (std::size_t t = 0; t < tris_.size(); ++t) queue.push_back(static_cast<int>(t));
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      if (length2(longest(t)) <= h2) continue;
      const std::size_t before = tris_.size();
      const auto touched = lepp_step(t);
      for (int u : touched) queue.push_back(u);
      for (std::size_t u = before; u < tris_.size(); ++u) queue.push_back(static_cast<int>(u));
      queue.push_back(t);
    }
  }

  std::vector<Vec2>& nodes() { return nodes_; }
  std::vector<std::array<int, 3>>& triangles() { return tris_; }
  const std::map<EdgeKey, std::size_t>& boundary() const { return boundary_; }

 private:
  double length2(EdgeKey e) const {
    const Vec2 d = nodes_[e.first] - nodes_[e.second];
    return dot(d, d);
  }

  // Strict total order on edges: length, then node indices.
  bool longer(EdgeKey a, EdgeKey b) const {
    const double la = length2(a), lb = length2(b);
    if (la != lb) return la > lb;
    return a > b;
  }

  EdgeKey longest(int t) const {
    const auto& tri = tris_[t];
    EdgeKey best = make_key(tri[0], tri[1]);
    for (int k = 1; k < 3; ++k) {
      const EdgeKey e = make_key(tri[k], tri[(k + 1) % 3]);
      if (longer(e, best)) best = e;
    }
    return best;
  }

  int neighbor(int t, EdgeKey e) const {
    const auto& adj = edges_.at(e);
    return adj[0] == t ? adj[1] : adj[0];
  }

  void attach(int t) {
    const auto& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      auto& adj = edges_.try_emplace(make_key(tri[k], tri[(k + 1) % 3]), std::array<int, 2>{-1, -1})
                      .first->second;
      (adj[0] < 0 ? adj[0] : adj[1]) = t;
    }
  }

  void detach(int t) {
    const auto& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      const EdgeKey e = make_key(tri[k], tri[(k + 1) % 3]);
      auto it = edges_.find(e);
      auto& adj = it->second;
      if (adj[0] == t) adj[0] = adj[1];
      adj[1] = -1;
      if (adj[0] < 0) edges_.erase(it);
    }
  }

  std::vector<int> lepp_step(int start) {
    int cur = start;
    for (;;) {
      const EdgeKey e = longest(cur);
      const int nb = neighbor(cur, e);
      if (nb < 0 || longest(nb) == e) {
        std::vector<int> touched{cur};
        if (nb >= 0) touched.push_back(nb);
        bisect(e);
        return touched;
      }
      cur = nb;
    }
  }

  void bisect(EdgeKey e) {
    const int m = static_cast<int>(nodes_.size());
    nodes_.push_back(midpoint(nodes_[e.first], nodes_[e.second]));
    const auto adj = edges_.at(e);
    for (int t : adj) {
      if (t < 0) continue;
      detach(t);
      auto tri = tris_[t];
      // rotate so that the split edge is (tri[0], tri[1])
      while (make_key(tri[0], tri[1]) != e) tri = {tri[1], tri[2], tri[0]};
      tris_[t] = {tri[0], m, tri[2]};
      tris_.push_back({m, tri[1], tri[2]});
      attach(t);
      attach(static_cast<int>(tris_.size() - 1));
    }
    if (auto it = boundary_.find(e); it != boundary_.end()) {
      const std::size_t pe = it->second;
      boundary_.erase(it);
      boundary_[make_key(e.first, m)] = pe;
      boundary_[make_key(m, e.second)] = pe;
    }
  }

  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> tris_;
  std::map<EdgeKey, std::size_t> boundary_;
  std::map<EdgeKey, std::array<int, 2>> edges_;
};

void smooth_interior(TriMesh& mesh) {
  const std::size_t n = mesh.num_nodes();
  std::vector<char> on_boundary(n, 0);
  for (const auto& be : mesh.boundary) on_boundary[be.a] = on_boundary[be.b] = 1;
  std::vector<std::vector<int>> neighbors(n), incident(n);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      incident[tri[k]].push_back(static_cast<int>(t));
      neighbors[tri[k]].push_back(tri[(k + 1) % 3]);
      neighbors[tri[k]].push_back(tri[(k + 2) % 3]);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (on_boundary[v]) continue;
    auto& nb = neighbors[v];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    if (nb.empty()) continue;
    Vec2 avg;
    for (int u : nb) avg = avg + mesh.nodes[u];
    avg = (1.0 / static_cast<double>(nb.size())) * avg;
    const Vec2 old = mesh.nodes[v];
    mesh.nodes[v] = avg;
    for (int t : incident[v]) {
      if (!(mesh.area(t) > 0.0)) {
        mesh.nodes[v] = old;
        break;
      }
    }
  }
}

void orient_boundary(TriMesh& mesh, const std::map<EdgeKey, std::size_t>& boundary,
                     const BoundarySpec& spec) {
  const auto tags = spec.edge_tags();
  const auto owners = spec.edge_segments();
  mesh.boundary.clear();
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      auto it = boundary.find(make_key(a, b));
      if (it == boundary.end()) continue;
      mesh.boundary.push_back({a, b, owners[it->second], it->second, tags[it->second]});
    }
  }
  // boundary order: by polygon edge, then position along it
  std::sort(mesh.boundary.begin(), mesh.boundary.end(),
            [&](const BoundaryEdge& x, const BoundaryEdge& y) {
              if (x.polygon_edge != y.polygon_edge) return x.polygon_edge < y.polygon_edge;
              const Vec2 s = spec.polygon.edge_start(x.polygon_edge);
              return distance(mesh.nodes[x.a], s) < distance(mesh.nodes[y.a], s);
            });
}

}  // namespace

double TriMesh::area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * orient(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

std::vector<unsigned> TriMesh::node_tags() const {
  std::vector<unsigned> tags(nodes.size(), 0u);
  for (const auto& be : boundary) {
    tags[be.a] |= tag_bit(be.tag);
    tags[be.b] |= tag_bit(be.tag);
  }
  return tags;
}

std::optional<int> TriMesh::find_node(Vec2 p, double tol) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (distance(nodes[i], p) <= tol) return static_cast<int>(i);
  }
  return std::nullopt;
}

double TriMesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) h = std::max(h, distance(nodes[tri[k]], nodes[tri[(k + 1) % 3]]));
  }
  return h;
}

double TriMesh::local_size(int node) const {
  double h = 0.0;
  for (const auto& tri : triangles) {
    if (tri[0] != node && tri[1] != node && tri[2] != node) continue;
    for (int k = 0; k < 3; ++k) h = std::max(h, distance(nodes[tri[k]], nodes[tri[(k + 1) % 3]]));
  }
  return h;
}

MeshDiagnostics check_mesh(const TriMesh& mesh) {
  MeshDiagnostics d;
  d.vertices = mesh.num_nodes();
  d.faces = mesh.num_triangles();
  std::unordered_map<EdgeKey, int, KeyHash> count;
  count.reserve(3 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!(mesh.area(t) > 0.0)) ++d.nonpositive_triangles;
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) ++count[make_key(tri[k], tri[(k + 1) % 3])];
  }
  d.edges = count.size();
  std::size_t boundary_edges = 0;
  for (const auto& [key, c] : count) {
    if (c > 2) ++d.nonconforming_edges;
    if (c == 1) ++boundary_edges;
  }
  for (const auto& be : mesh.boundary) {
    auto it = count.find(make_key(be.a, be.b));
    if (it == count.end() || it->second != 1) ++d.boundary_mismatches;
  }
  if (boundary_edges != mesh.boundary.size()) {
    // edges used once but not declared as boundary are hanging-node artifacts
    d.nonconforming_edges += boundary_edges > mesh.boundary.size()
                                 ? boundary_edges - mesh.boundary.size()
                                 : mesh.boundary.size() - boundary_edges;
  }
  return d;
}

TriMesh triangulate(const BoundarySpec& spec, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh size must be positive");
  const auto& poly = spec.polygon;
  auto tris = ear_clip(poly);
  std::map<EdgeKey, std::size_t> boundary;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    boundary[make_key(static_cast<int>(e), static_cast<int>((e + 1) % poly.size()))] = e;
  }
  Bisector bisector(poly.vertices, std::move(tris), std::move(boundary));
  bisector.refine_to(h);

  TriMesh mesh;
  mesh.nodes = std::move(bisector.nodes());
  mesh.triangles = std::move(bisector.triangles());
  orient_boundary(mesh, bisector.boundary(), spec);
  smooth_interior(mesh);
  const auto diag = check_mesh(mesh);
  if (!diag.valid()) throw Error(ErrorCode::DegenerateGeometry, "triangulation is not valid");
  return mesh;
}

TriMesh refine_red(const TriMesh& mesh) {
  TriMesh out;
  out.level = mesh.level + 1;
  out.nodes = mesh.nodes;
  Lineage lineage;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    lineage.nodes.push_back({static_cast<int>(i), static_cast<int>(i)});
  }
  std::unordered_map<EdgeKey, int, KeyHash> mid;
  mid.reserve(3 * mesh.num_triangles());
  auto midpoint_of = [&](int a, int b) {
    auto [it, inserted] = mid.try_emplace(make_key(a, b), static_cast<int>(out.nodes.size()));
    if (inserted) {
      out.nodes.push_back(midpoint(mesh.nodes[a], mesh.nodes[b]));
      lineage.nodes.push_back({std::min(a, b), std::max(a, b)});
    }
    return it->second;
  };
  out.triangles.reserve(4 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto [a, b, c] = mesh.triangles[t];
    const int ab = midpoint_of(a, b), bc = midpoint_of(b, c), ca = midpoint_of(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
    for (int k = 0; k < 4; ++k) lineage.triangles.push_back(static_cast<int>(t));
  }
  for (const auto& be : mesh.boundary) {
    const int m = mid.at(make_key(be.a, be.b));
    out.boundary.push_back({be.a, m, be.segment, be.polygon_edge, be.tag});
    out.boundary.push_back({m, be.b, be.segment, be.polygon_edge, be.tag});
  }
  out.parent = std::move(lineage);
  return out;
}

TriMesh grade(const TriMesh& mesh, const GradingParams& params) {
  if (!(params.mu > 0.0 && params.mu <= 1.0)) {
    throw Error(ErrorCode::InvalidGrading, "grading exponent must lie in (0, 1]");
  }
  if (!(params.radius > 0.0)) throw Error(ErrorCode::InvalidGrading, "grading radius must be > 0");
  const double scale = std::max(1.0, norm(params.center));
  if (!mesh.find_node(params.center, 1e-12 * scale)) {
    throw Error(ErrorCode::InvalidGrading, "grading center is not a mesh node");
  }
  const Vec2 c = params.center;
  const double R = params.radius;
  // Boundary nodes inside the radius must sit on edges through the center,
  // otherwise radial motion would pull them off the boundary.
  for (const auto& be : mesh.boundary) {
    const Vec2 a = mesh.nodes[be.a], b = mesh.nodes[be.b];
    if (std::min(distance(a, c), distance(b, c)) >= R) continue;
    const double tol = 1e-10 * std::max(1.0, distance(a, b) * R);
    if (std::abs(orient(c, a, b)) > tol) {
      throw Error(ErrorCode::InvalidGrading,
                  "grading radius reaches a boundary edge not incident to the center");
    }
  }
  TriMesh out = mesh;
  if (params.mu == 1.0) return out;
  const double power = 1.0 / params.mu;
  for (auto& p : out.nodes) {
    const double r = distance(p, c);
    if (r >= R || r == 0.0) continue;
    const double r_new = R * std::pow(r / R, power);
    p = c + (r_new / r) * (p - c);
  }
  for (std::size_t t = 0; t < out.num_triangles(); ++t) {
    if (!(out.area(t) > 0.0)) {
      throw Error(ErrorCode::TangledMesh,
                  "grading produced a non-positive triangle; reduce grading strength");
    }
  }
  return out;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "level " << mesh.level << '\n';
  out << "nodes " << mesh.num_nodes() << '\n';
  for (const auto& p : mesh.nodes) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary " << mesh.boundary.size() << '\n';
  for (const auto& be : mesh.boundary) {
    out << be.a << ' ' << be.b << ' ' << be.segment << ' ' << be.polygon_edge << ' '
        << tag_letter(be.tag) << '\n';
  }
}

TriMesh read_mesh(std::istream& in) {
  auto expect = [&](const std::string& key) {
    std::string word;
    std::size_t count = 0;
    if (!(in >> word >> count) || word != key) {
      throw Error(ErrorCode::ParseError, "mesh file: expected section '" + key + "'");
    }
    return count;
  };
  auto fail = [] { throw Error(ErrorCode::ParseError, "mesh file: truncated record"); };
  TriMesh mesh;
  mesh.level = static_cast<int>(expect("level"));
  const std::size_t n = expect("nodes");
  mesh.nodes.resize(n);
  for (auto& p : mesh.nodes) {
    std::string x, y;
    if (!(in >> x >> y)) fail();
    p = {parse_double(x), parse_double(y)};
  }
  const std::size_t nt = expect("triangles");
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) fail();
    for (int v : t) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        throw Error(ErrorCode::ParseError, "mesh file: node index out of range");
      }
    }
  }
  const std::size_t nb = expect("boundary");
  mesh.boundary.resize(nb);
  for (auto& be : mesh.boundary) {
    char tag = 0;
    if (!(in >> be.a >> be.b >> be.segment >> be.polygon_edge >> tag)) fail();
    be.tag = tag_from_letter(tag);
  }
  return mesh;
}

PointLocator::PointLocator(const TriMesh& mesh) : mesh_(&mesh) {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& p : mesh.nodes) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  lo_ = lo;
  const double extent = std::max(hi.x - lo.x, hi.y - lo.y);
  const double cells = std::max(1.0, std::sqrt(static_cast<double>(mesh.num_triangles())));
  cell_ = std::max(extent / cells, 1e-300);
  nx_ = static_cast<int>((hi.x - lo.x) / cell_) + 1;
  ny_ = static_cast<int>((hi.y - lo.y) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (int v : tri) {
      x0 = std::min(x0, mesh.nodes[v].x);
      x1 = std::max(x1, mesh.nodes[v].x);
      y0 = std::min(y0, mesh.nodes[v].y);
      y1 = std::max(y1, mesh.nodes[v].y);
    }
    const int i0 = std::clamp(static_cast<int>((x0 - lo_.x) / cell_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((x1 - lo_.x) / cell_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((y0 - lo_.y) / cell_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((y1 - lo_.y) / cell_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<int>(t));
    }
  }
}

std::optional<Location> PointLocator::locate(Vec2 p) const {
  const int i = static_cast<int>(std::floor((p.x - lo_.x) / cell_));
  const int j = static_cast<int>(std::floor((p.y - lo_.y) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  const auto& mesh = *mesh_;
  std::optional<Location> best;
  double best_min = -1e300;
  for (int t : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    const double area2 = orient(a, b, c);
    const std::array<double, 3> w{orient(p, b, c) / area2, orient(a, p, c) / area2,
                                  orient(a, b, p) / area2};
    const double wmin = std::min({w[0], w[1], w[2]});
    if (wmin >= 0.0) return Location{t, w};
    if (wmin > best_min) {
      best_min = wmin;
      best = Location{t, w};
    }
  }
  // accept points on edges up to round-off
  if (best && best_min > -1e-12) return best;
  return std::nullopt;
}

std::optional<double> PointLocator::evaluate(std::span<const double> values, Vec2 p) const {
  const auto loc = locate(p);
  if (!loc) return std::nullopt;
  const auto& tri = mesh_->triangles[loc->triangle];
  return loc->weights[0] * values[tri[0]] + loc->weights[1] * values[tri[1]] +
         loc->weights[2] * values[tri[2]];
}

}  // namespace signorini
