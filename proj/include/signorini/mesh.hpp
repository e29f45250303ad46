#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "signorini/geometry.hpp"

namespace signorini {

/// Boundary edge a -> b, oriented with the domain on its left.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  std::size_t segment = 0;
  std::size_t polygon_edge = 0;
  ConditionTag tag = ConditionTag::Dirichlet;
};

/// Relation of a refined mesh to the mesh it came from. Node i of the child
/// is the midpoint of nodes[i] = {p, q} of the parent (p == q for inherited
/// nodes); triangle t of the child lies inside triangle triangles[t].
struct Lineage {
  std::vector<std::array<int, 2>> nodes;
  std::vector<int> triangles;
};

/// Conforming P1 triangulation with tagged boundary edges.
struct TriMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  int level = 0;
  std::optional<Lineage> parent;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double area(std::size_t t) const;
  /// Bitmask over ConditionTag (bit = 1 << tag) of the boundary edges touching
  /// each node; zero for interior nodes.
  std::vector<unsigned> node_tags() const;
  /// Index of the node within `tol` of p, if any.
  std::optional<int> find_node(Vec2 p, double tol = 1e-12) const;
  double max_edge_length() const;
  /// Largest edge length among triangles incident to `node`.
  double local_size(int node) const;
};

inline unsigned tag_bit(ConditionTag tag) { return 1u << static_cast<unsigned>(tag); }

struct MeshDiagnostics {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  std::size_t nonconforming_edges = 0;
  std::size_t nonpositive_triangles = 0;
  std::size_t boundary_mismatches = 0;

  long euler() const {
    return static_cast<long>(vertices) - static_cast<long>(edges) + static_cast<long>(faces);
  }
  bool valid() const {
    return nonconforming_edges == 0 && nonpositive_triangles == 0 && boundary_mismatches == 0 &&
           euler() == 1;
  }
};

/// Conformity, positivity, Euler characteristic and boundary-edge consistency.
MeshDiagnostics check_mesh(const TriMesh& mesh);

/// Ear clipping followed by longest-edge bisection until every edge is at most
/// h long, then one Laplacian smoothing pass on interior nodes.
TriMesh triangulate(const BoundarySpec& spec, double h);

/// Splits every triangle into four congruent children.
TriMesh refine_red(const TriMesh& mesh);

struct GradingParams {
  Vec2 center;
  /// 1 means no grading.
  double mu = 1.0;
  double radius = 1.0;
};

/// Radial node motion r -> R (r/R)^(1/mu) inside the grading radius.
TriMesh grade(const TriMesh& mesh, const GradingParams& params);

void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

/// Barycentric location of a point in a triangle.
struct Location {
  int triangle = -1;
  std::array<double, 3> weights{};
};

/// Bucket grid over triangle bounding boxes for point location.
class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh);

  std::optional<Location> locate(Vec2 p) const;
  /// P1 interpolation of nodal values at p; empty outside the mesh.
  std::optional<double> evaluate(std::span<const double> values, Vec2 p) const;

 private:
  const TriMesh* mesh_;
  Vec2 lo_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace signorini
