#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "signorini/error.hpp"
#include "signorini/mesh.hpp"

using namespace signorini;
using signorini::testing::l_domain;
using signorini::testing::unit_square;

namespace {

void check_valid(const TriMesh& mesh) {
  const auto d = check_mesh(mesh);
  CHECK(d.nonconforming_edges == 0);
  CHECK(d.nonpositive_triangles == 0);
  CHECK(d.boundary_mismatches == 0);
  CHECK(d.euler() == 1);
}

std::map<std::size_t, std::size_t> boundary_nodes_per_segment(const TriMesh& mesh) {
  std::map<std::size_t, std::size_t> edges;
  for (const auto& be : mesh.boundary) ++edges[be.segment];
  for (auto& [s, count] : edges) count += 1;  // open chain of edges
  return edges;
}

}  // namespace

TEST_CASE("triangulate the unit square") {
  const auto mesh = triangulate(validate_boundary(unit_square("SDND")), 0.5);
  CHECK(mesh.num_triangles() >= 8);
  CHECK(mesh.max_edge_length() <= 0.5 + 1e-15);
  check_valid(mesh);
  for (const auto& be : mesh.boundary) CHECK(distance(mesh.nodes[be.a], mesh.nodes[be.b]) <= 0.5);
}

TEST_CASE("triangulate keeps polygon vertices and tag changes as nodes") {
  const auto l = triangulate(validate_boundary(l_domain("SDDDDD")), 0.5);
  check_valid(l);
  for (const auto& v : l_domain("SDDDDD").polygon.vertices) CHECK(l.find_node(v).has_value());

  BoundarySpec split;
  split.polygon.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
  split.segments = {{0, 0, ConditionTag::Dirichlet, {}}, {1, 4, ConditionTag::Neumann, {}}};
  const auto mesh = triangulate(validate_boundary(split), 0.3);
  check_valid(mesh);
  const auto node = mesh.find_node({0.5, 0});
  REQUIRE(node.has_value());
  const auto tags = mesh.node_tags();
  CHECK(tags[*node] == (tag_bit(ConditionTag::Dirichlet) | tag_bit(ConditionTag::Neumann)));
}

TEST_CASE("boundary edges carry the tag of their polygon edge") {
  const auto spec = validate_boundary(l_domain("SDDNDD"));
  const auto mesh = triangulate(spec, 0.25);
  const auto tags = spec.edge_tags();
  for (const auto& be : mesh.boundary) {
    CHECK(be.tag == tags[be.polygon_edge]);
    const Vec2 a = spec.polygon.edge_start(be.polygon_edge), b = spec.polygon.edge_end(be.polygon_edge);
    CHECK(std::abs(orient(a, b, mesh.nodes[be.a])) < 1e-14);
    CHECK(std::abs(orient(a, b, mesh.nodes[be.b])) < 1e-14);
  }
}

TEST_CASE("red refinement") {
  const auto spec = validate_boundary(l_domain("SDDDDD"));
  const auto coarse = triangulate(spec, 0.5);
  const auto fine = refine_red(coarse);
  CHECK(fine.num_triangles() == 4 * coarse.num_triangles());
  CHECK(fine.level == coarse.level + 1);
  check_valid(fine);
  CHECK(std::abs(fine.max_edge_length() - 0.5 * coarse.max_edge_length()) <=
        1e-12 * coarse.max_edge_length());
  const auto before = boundary_nodes_per_segment(coarse);
  const auto after = boundary_nodes_per_segment(fine);
  for (const auto& [s, count] : before) CHECK(after.at(s) == 2 * count - 1);
  REQUIRE(fine.parent.has_value());
  for (std::size_t i = 0; i < fine.num_nodes(); ++i) {
    const auto [p, q] = fine.parent->nodes[i];
    const Vec2 expected = midpoint(coarse.nodes[p], coarse.nodes[q]);
    CHECK(fine.nodes[i] == expected);
  }
  check_valid(refine_red(fine));
}

TEST_CASE("grading") {
  const auto spec = validate_boundary(l_domain("SDDDDD"));
  const auto mesh = refine_red(triangulate(spec, 0.25));
  SUBCASE("mu = 1 is the identity") {
    const auto same = grade(mesh, {{0, 0}, 1.0, 0.5});
    CHECK(same.nodes == mesh.nodes);
  }
  SUBCASE("mu = 1/3 maps r = R/2 to R/8 and fixes the rest") {
    const double R = 0.5;
    const auto g = grade(mesh, {{0, 0}, 1.0 / 3.0, R});
    check_valid(g);
    const auto node = mesh.find_node({0.25, 0});
    REQUIRE(node.has_value());
    CHECK(g.nodes[*node].x == doctest::Approx(R / 8).epsilon(1e-14));
    CHECK(g.nodes[*node].y == 0.0);
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if (norm(mesh.nodes[i]) >= R || norm(mesh.nodes[i]) == 0.0) CHECK(g.nodes[i] == mesh.nodes[i]);
    }
    CHECK(g.node_tags() == mesh.node_tags());
    for (const auto& v : spec.polygon.vertices) CHECK(g.find_node(v).has_value());
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(grade(mesh, {{0.123, 0.456}, 0.5, 0.5}), Error);
    CHECK_THROWS_AS(grade(mesh, {{0, 0}, 0.0, 0.5}), Error);
    // radius reaching the outer edges x = 1 and y = -1
    CHECK_THROWS_AS(grade(mesh, {{0, 0}, 0.5, 1.5}), Error);
  }
}

TEST_CASE("mesh export round-trips bit-exactly") {
  const auto mesh = grade(refine_red(triangulate(validate_boundary(l_domain("SDDDDD")), 0.4)),
                          {{0, 0}, 0.4, 0.5});
  std::stringstream ss;
  write_mesh(ss, mesh);
  const auto back = read_mesh(ss);
  CHECK(back.nodes == mesh.nodes);
  CHECK(back.triangles == mesh.triangles);
  CHECK(back.level == mesh.level);
  REQUIRE(back.boundary.size() == mesh.boundary.size());
  for (std::size_t k = 0; k < back.boundary.size(); ++k) {
    CHECK(back.boundary[k].a == mesh.boundary[k].a);
    CHECK(back.boundary[k].segment == mesh.boundary[k].segment);
    CHECK(back.boundary[k].tag == mesh.boundary[k].tag);
  }
  std::stringstream again;
  write_mesh(again, back);
  std::stringstream first;
  write_mesh(first, mesh);
  CHECK(again.str() == first.str());

  std::stringstream bad("level 0\nnodes 2\n0 0\n");
  CHECK_THROWS_AS(read_mesh(bad), Error);
}

TEST_CASE("point location interpolates linear data exactly") {
  const auto mesh = refine_red(triangulate(validate_boundary(l_domain("SDDDDD")), 0.5));
  std::vector<double> values;
  for (const auto& p : mesh.nodes) values.push_back(2.0 * p.x - 3.0 * p.y + 1.0);
  const PointLocator locator(mesh);
  for (Vec2 p : {Vec2{0.3, 0.7}, Vec2{-0.9, -0.2}, Vec2{0.5, 0.0}, Vec2{-1, -1}}) {
    const auto v = locator.evaluate(values, p);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(2.0 * p.x - 3.0 * p.y + 1.0).epsilon(1e-13));
  }
  CHECK_FALSE(locator.evaluate(values, {0.5, -0.5}).has_value());
}
