#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "signorini/analysis.hpp"
#include "signorini/assembly.hpp"
#include "signorini/error.hpp"
#include "signorini/vi_solver.hpp"

using namespace signorini;
using namespace signorini::testing;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> interpolate(const TriMesh& mesh, const AnalyticField& f) {
  std::vector<double> v(mesh.num_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.value(mesh.nodes[i]);
  return v;
}

// Fake solution on a Signorini-bottom square: y = 1 everywhere except at the
// nodes selected by `contact`, which are put onto the obstacle and activated.
struct Synthetic {
  TriMesh mesh;
  DofPartition part;
  DiscreteSolution sol;
  std::vector<int> bottom;  // Signorini-chain nodes ordered by x
};

Synthetic synthetic(double h) {
  const auto spec = validate_boundary(unit_square("SDDD"));
  Synthetic s{triangulate(spec, h), {}, {}, {}};
  s.part = make_partition(s.mesh, spec);
  s.sol.y.assign(s.mesh.num_nodes(), 1.0);
  s.sol.psi.assign(s.mesh.num_nodes(), 0.0);
  s.sol.multiplier.assign(s.mesh.num_nodes(), 0.0);
  for (std::size_t i = 0; i < s.mesh.num_nodes(); ++i) {
    if (std::abs(s.mesh.nodes[i].y) < 1e-14) s.bottom.push_back(static_cast<int>(i));
  }
  std::sort(s.bottom.begin(), s.bottom.end(),
            [&](int a, int b) { return s.mesh.nodes[a].x < s.mesh.nodes[b].x; });
  return s;
}

void put_in_contact(Synthetic& s, const std::vector<int>& nodes) {
  for (int n : nodes) {
    s.sol.y[n] = 0.0;
    s.sol.multiplier[n] = 1.0;
    s.sol.active.push_back(n);
  }
  std::sort(s.sol.active.begin(), s.sol.active.end());
}

CriticalPoint endpoint_at(Vec2 p) {
  CriticalPoint cp;
  cp.location = p;
  cp.angle = kPi;
  cp.before = cp.after = ConditionTag::Signorini;
  cp.kind = CriticalKind::CoincidenceEndpoint;
  return cp;
}

const CriticalPoint& corner_at(const std::vector<CriticalPoint>& cps, Vec2 p) {
  for (const auto& cp : cps) {
    if (distance(cp.location, p) < 1e-12) return cp;
  }
  throw std::runtime_error("no critical point there");
}

}  // namespace

TEST_CASE("extract_coincidence") {
  SUBCASE("no contact gives an empty report") {
    auto s = synthetic(0.125);
    const auto r = extract_coincidence(s.sol, s.mesh, s.part);
    CHECK(r.intervals.empty());
    CHECK(r.isolated.empty());
    CHECK(r.endpoints.empty());
    CHECK(r.components() == 0);
  }
  SUBCASE("all Signorini nodes active covers the whole Signorini edge") {
    auto s = synthetic(0.125);
    std::vector<int> inner(s.bottom.begin() + 1, s.bottom.end() - 1);
    put_in_contact(s, inner);
    const auto r = extract_coincidence(s.sol, s.mesh, s.part);
    REQUIRE(r.intervals.size() == 1);
    CHECK(r.intervals[0].s_begin == doctest::Approx(0.0));
    CHECK(r.intervals[0].s_end == doctest::Approx(1.0));
    CHECK(r.endpoints.empty());
  }
  SUBCASE("a half-edge contact has one endpoint at the transition midpoint") {
    auto s = synthetic(0.125);
    std::vector<int> left;
    for (int n : s.bottom) {
      if (s.mesh.nodes[n].x > 0 && s.mesh.nodes[n].x <= 0.5 + 1e-12) left.push_back(n);
    }
    put_in_contact(s, left);
    const auto r = extract_coincidence(s.sol, s.mesh, s.part);
    REQUIRE(r.intervals.size() == 1);
    REQUIRE(r.endpoints.size() == 1);
    CHECK(r.intervals[0].s_begin == doctest::Approx(0.0));
    CHECK(r.endpoints[0].location.x == doctest::Approx(0.5625));
    CHECK(r.endpoints[0].location.y == doctest::Approx(0.0));
  }
  SUBCASE("single contact nodes are isolated points") {
    auto s = synthetic(0.125);
    put_in_contact(s, {s.bottom[2], s.bottom[5]});
    const auto r = extract_coincidence(s.sol, s.mesh, s.part);
    CHECK(r.intervals.empty());
    REQUIRE(r.isolated.size() == 2);
    CHECK(r.isolated[0].location.x == doctest::Approx(0.25));
    CHECK(r.isolated[1].location.x == doctest::Approx(0.625));
    CHECK(r.isolated[0].s < r.isolated[1].s);
  }
  SUBCASE("intervals are disjoint, sorted and on the Signorini edge") {
    auto s = synthetic(1.0 / 32);
    std::vector<int> pick;
    for (std::size_t k = 1; k + 1 < s.bottom.size(); ++k) {
      if ((k / 3) % 2 == 0) pick.push_back(s.bottom[k]);
    }
    put_in_contact(s, pick);
    const auto r = extract_coincidence(s.sol, s.mesh, s.part);
    REQUIRE(r.intervals.size() > 2);
    for (std::size_t k = 0; k < r.intervals.size(); ++k) {
      CHECK(r.intervals[k].s_begin < r.intervals[k].s_end);
      CHECK(r.intervals[k].begin.y == doctest::Approx(0.0));
      if (k > 0) CHECK(r.intervals[k - 1].s_end < r.intervals[k].s_begin);
    }
  }
}

TEST_CASE("extract_coincidence is invariant under node relabeling") {
  auto s = synthetic(1.0 / 16);
  put_in_contact(s, {s.bottom[3], s.bottom[4], s.bottom[5], s.bottom[9], s.bottom[12]});
  const auto before = extract_coincidence(s.sol, s.mesh, s.part);

  const std::size_t n = s.mesh.num_nodes();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(11);
  std::shuffle(perm.begin(), perm.end(), rng);  // old index -> new index
  TriMesh m = s.mesh;
  DofPartition part = s.part;
  DiscreteSolution sol = s.sol;
  for (std::size_t i = 0; i < n; ++i) {
    m.nodes[perm[i]] = s.mesh.nodes[i];
    part.kind[perm[i]] = s.part.kind[i];
    sol.y[perm[i]] = s.sol.y[i];
    sol.psi[perm[i]] = s.sol.psi[i];
    sol.multiplier[perm[i]] = s.sol.multiplier[i];
  }
  for (auto& t : m.triangles) {
    for (auto& v : t) v = perm[v];
  }
  for (auto& e : m.boundary) {
    e.a = perm[e.a];
    e.b = perm[e.b];
  }
  for (auto& a : sol.active) a = perm[a];
  std::sort(sol.active.begin(), sol.active.end());
  const auto after = extract_coincidence(sol, m, part);
  REQUIRE(after.intervals.size() == before.intervals.size());
  REQUIRE(after.isolated.size() == before.isolated.size());
  REQUIRE(after.endpoints.size() == before.endpoints.size());
  for (std::size_t k = 0; k < before.intervals.size(); ++k) {
    CHECK(after.intervals[k].s_begin == before.intervals[k].s_begin);
    CHECK(after.intervals[k].s_end == before.intervals[k].s_end);
  }
  for (std::size_t k = 0; k < before.isolated.size(); ++k) {
    CHECK(after.isolated[k].s == before.isolated[k].s);
  }
}

TEST_CASE("component_stability") {
  SUBCASE("fewer than three levels is rejected") {
    std::vector<CoincidenceReport> two(2);
    CHECK_THROWS_AS(component_stability(two), Error);
  }
  SUBCASE("a fixed half contact is stable across levels") {
    std::vector<CoincidenceReport> reports;
    for (double h : {0.125, 0.0625, 0.03125}) {
      auto s = synthetic(h);
      std::vector<int> left;
      for (int n : s.bottom) {
        if (s.mesh.nodes[n].x > 0 && s.mesh.nodes[n].x <= 0.5 + 1e-12) left.push_back(n);
      }
      put_in_contact(s, left);
      reports.push_back(extract_coincidence(s.sol, s.mesh, s.part));
    }
    const auto v = component_stability(reports);
    CHECK(v.stable);
    CHECK(v.components == 1);
    CHECK(v.endpoint_shifts.size() == 2);
  }
  SUBCASE("an alternating pattern that refines with the mesh is unstable") {
    std::vector<CoincidenceReport> reports;
    for (double h : {0.125, 0.0625, 0.03125}) {
      auto s = synthetic(h);
      std::vector<int> pick;
      for (std::size_t k = 1; k + 1 < s.bottom.size(); k += 2) pick.push_back(s.bottom[k]);
      put_in_contact(s, pick);
      reports.push_back(extract_coincidence(s.sol, s.mesh, s.part));
    }
    const auto v = component_stability(reports);
    CHECK_FALSE(v.stable);
    CHECK_FALSE(v.reason.empty());
  }
  SUBCASE("zero data reports full contact, stable") {
    std::vector<CoincidenceReport> reports;
    for (double h : {0.25, 0.125, 0.0625}) {
      auto spec = validate_boundary(unit_square("SDUD"));
      auto mesh = triangulate(spec, h);
      const auto part = make_partition(mesh, spec);
      const auto a = stiffness(mesh);
      const std::vector<double> b(mesh.num_nodes(), 0.0);
      const auto sol = solve_signorini(a, b, part, make_obstacle(mesh, part, spec.gap));
      reports.push_back(extract_coincidence(sol, mesh, part));
    }
    const auto v = component_stability(reports);
    CHECK(v.stable);
    CHECK(v.components == 1);
  }
}

TEST_CASE("complementarity_product") {
  SUBCASE("zero data gives zero") {
    auto spec = validate_boundary(unit_square("SDUD"));
    auto mesh = triangulate(spec, 0.125);
    const auto part = make_partition(mesh, spec);
    const auto a = stiffness(mesh);
    const std::vector<double> b(mesh.num_nodes(), 0.0);
    const auto sol = solve_signorini(a, b, part, make_obstacle(mesh, part, spec.gap));
    const auto cps = critical_points(spec);
    CHECK(complementarity_product(sol, mesh, part, cps, 0.1).max_product == 0.0);
  }
  SUBCASE("bounded by the product of the maxima") {
    auto spec = unit_square("SDUD");
    spec.segments[2].data = {-1.0, 4.0, -4.0};
    spec.lifting = AnalyticField::polynomial({{-0.2, 1, 0}, {0.1, 0, 0}});
    spec = validate_boundary(spec);
    auto mesh = triangulate(spec, 1.0 / 16);
    const auto part = make_partition(mesh, spec);
    const auto a = stiffness(mesh);
    auto b = load_volume(mesh, spec.load);
    const auto bc = load_control(mesh, spec);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += bc[i];
    const auto sol = solve_signorini(a, b, part, make_obstacle(mesh, part, spec.gap));
    const auto cps = critical_points(spec);
    const auto r = complementarity_product(sol, mesh, part, cps, 0.1);
    CHECK(r.max_product <= r.max_tangential * r.max_normal * (1 + 1e-12));
    CHECK(r.samples.size() == part.signorini.size());
    for (const auto& smp : r.samples) {
      CHECK(smp.normal >= 0.0);
      if (smp.normal == 0.0) CHECK(smp.product == 0.0);
    }
  }
  SUBCASE("non-positive radius is rejected") {
    auto s = synthetic(0.25);
    CHECK_THROWS_AS(complementarity_product(s.sol, s.mesh, s.part, {}, 0.0), Error);
  }
}

TEST_CASE("singular exponent table") {
  using T = ConditionTag;
  const ConditionPair sd{T::Signorini, T::Dirichlet, false};
  const ConditionPair ss{T::Signorini, T::Signorini, false};
  const ConditionPair dn{T::Dirichlet, T::Neumann, false};
  const ConditionPair dd{T::Dirichlet, T::Dirichlet, false};
  CHECK(singular_exponent(sd, 1.5 * kPi, 1) == doctest::Approx(1.0 / 3));
  CHECK(singular_exponent(ss, 1.5 * kPi, 2) == doctest::Approx(2.0 / 3));
  CHECK(singular_exponent(dn, 0.5 * kPi, 1) == doctest::Approx(1.0));
  CHECK(singular_exponent(ConditionPair::coincidence_endpoint(), kPi, 1) == 1.5);
  CHECK(singular_exponent({T::Neumann, T::Neumann, false}, kPi, 1) == doctest::Approx(1.0));
  CHECK(singular_exponent({T::Control, T::Neumann, false}, kPi, 2) == doctest::Approx(2.0));
  CHECK(singular_exponent({T::Dirichlet, T::Control, false}, kPi, 1) == doctest::Approx(0.5));
  CHECK(singular_exponent({T::Neumann, T::Signorini, false}, kPi, 1) == doctest::Approx(0.5));

  SUBCASE("index bounds") {
    CHECK_THROWS_AS(singular_exponent(ss, kPi, 1), Error);
    CHECK_THROWS_AS(singular_exponent(dd, kPi, 0), Error);
    try {
      singular_exponent(ss, kPi, 1);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidIndex);
    }
  }
  SUBCASE("Signorini next to a control edge has no row") {
    CHECK_THROWS_AS(singular_exponent({T::Signorini, T::Control, false}, kPi, 1), Error);
  }
  SUBCASE("monotone in j and in alpha") {
    for (const auto& pair : {sd, ss, dn, dd}) {
      const int j0 = minimum_index(pair);
      for (double alpha : {0.3, 1.0, kPi, 4.0, 6.0}) {
        for (int j = j0; j < j0 + 5; ++j) {
          CHECK(singular_exponent(pair, alpha, j + 1) > singular_exponent(pair, alpha, j));
          CHECK(singular_exponent(pair, alpha + 0.1, j) < singular_exponent(pair, alpha, j));
        }
      }
    }
  }
}

TEST_CASE("predicted_leading_exponent") {
  const auto sd = critical_points(validate_boundary(l_domain("SDDDDD")));
  CHECK(predicted_leading_exponent(corner_at(sd, {0, 0})).lambda == doctest::Approx(1.0 / 3));
  const auto ss = critical_points(validate_boundary(l_domain("SDDDDS")));
  const auto lead = predicted_leading_exponent(corner_at(ss, {0, 0}));
  CHECK(lead.lambda == doctest::Approx(2.0 / 3));
  CHECK(lead.j == 2);
  const auto dd = critical_points(validate_boundary(unit_square("DDDD")));
  const auto c = predicted_leading_exponent(corner_at(dd, {1, 0}));
  CHECK(c.lambda == doctest::Approx(2.0));
  CHECK(c.j == 1);
  // D-N at a right angle: j = 1 gives exactly 1, so j = 2 is the leading term.
  const auto dn = critical_points(validate_boundary(unit_square("DNDD")));
  CHECK(predicted_leading_exponent(corner_at(dn, {1, 0})).lambda == doctest::Approx(3.0));
  CHECK(predicted_leading_exponent(endpoint_at({0, 0})).lambda == 1.5);
}

TEST_CASE("exceptional_p") {
  const std::vector<double> l{1.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi};
  const auto p = exceptional_p(l);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(3.0));
  CHECK(p[1] == doctest::Approx(6.0));
  const std::vector<double> right{0.5 * kPi};
  CHECK(exceptional_p(right).empty());
  const std::vector<double> flat{kPi};
  const auto q = exceptional_p(flat);
  REQUIRE(q.size() == 1);
  CHECK(q[0] == doctest::Approx(4.0));
  for (double alpha : {0.2, 1.0, 2.5, 4.0, 5.5, 6.2}) {
    const std::vector<double> one{alpha};
    for (double v : exceptional_p(one)) {
      CHECK(v > 2.0);
      CHECK(std::isfinite(v));
    }
  }
  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(exceptional_p(bad), Error);
}

TEST_CASE("least_squares") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> noisy{1, 0, 1, 0};
  const auto g = least_squares(x, noisy);
  CHECK(g.r_squared >= 0.0);
  CHECK(g.r_squared <= 1.0);
}

TEST_CASE("fit_exponent on interpolated fields") {
  SUBCASE("linear field gives slope one") {
    const auto spec = validate_boundary(unit_square("SDDD"));
    const auto mesh = triangulate(spec, 1.0 / 32);
    const auto y = interpolate(mesh, AnalyticField::polynomial({{1.0, 1, 0}, {0.5, 0, 1}}));
    const auto cps = critical_points(spec);
    const auto r = fit_exponent(y, mesh, endpoint_at({0.5, 0.5}), cps, {});
    CHECK(r.fitted == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.arcs >= 4);
    CHECK(r.r_squared >= 0.0);
    CHECK(r.r_squared <= 1.0);
  }
  SUBCASE("zero field is not excited") {
    const auto spec = validate_boundary(unit_square("SDDD"));
    const auto mesh = triangulate(spec, 1.0 / 64);
    const std::vector<double> y(mesh.num_nodes(), 0.0);
    const auto cps = critical_points(spec);
    try {
      fit_exponent(y, mesh, endpoint_at({0.5, 0.0}), cps, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularityNotExcited);
    }
  }
  SUBCASE("a window that is too narrow is reported") {
    const auto spec = validate_boundary(unit_square("SDDD"));
    const auto mesh = triangulate(spec, 1.0 / 8);
    const auto y = interpolate(mesh, AnalyticField::polynomial({{1.0, 1, 0}}));
    const auto cps = critical_points(spec);
    try {
      fit_exponent(y, mesh, endpoint_at({0.5, 0.0}), cps, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WindowTooNarrow);
    }
  }
  SUBCASE("window below twice the local mesh size is rejected") {
    const auto spec = validate_boundary(unit_square("SDDD"));
    const auto mesh = triangulate(spec, 1.0 / 16);
    const auto y = interpolate(mesh, AnalyticField::polynomial({{1.0, 1, 0}}));
    FitOptions opt;
    opt.r_min = 1e-4;
    CHECK_THROWS_AS(fit_exponent(y, mesh, endpoint_at({0.5, 0.0}), critical_points(spec), opt), Error);
  }
}

TEST_CASE("fit_exponent recovers corner exponents on graded meshes") {
  struct Case {
    const char* tags;
    double lambda;
    double phase;
  };
  for (const Case& c : {Case{"SDDDDD", 1.0 / 3, 0.0}, Case{"SDDDDS", 2.0 / 3, 0.75 * kPi}}) {
    CAPTURE(c.lambda);
    const auto spec = validate_boundary(l_domain(c.tags));
    const auto base = triangulate(spec, 1.0 / 16);
    const auto mesh = grade(base, {{0, 0}, c.lambda, 0.5});
    const auto field = AnalyticField::corner({{0, 0}, c.lambda, 1.0, c.phase, 1.75 * kPi});
    const auto y = interpolate(mesh, field);
    const auto cps = critical_points(spec);
    const auto& cp = corner_at(cps, {0, 0});
    const auto r = fit_exponent(y, mesh, cp, cps, {});
    CHECK(r.predicted == doctest::Approx(c.lambda));
    CHECK(std::abs(r.fitted - c.lambda) <= 0.05);
    CHECK(r.r_squared > 0.99);
  }
  SUBCASE("three-halves at a coincidence endpoint") {
    BoundarySpec spec;
    spec.polygon.vertices = {{-1, 0}, {1, 0}, {1, 1}, {-1, 1}};
    spec.segments = {{0, 0, ConditionTag::Signorini, {}}, {1, 3, ConditionTag::Dirichlet, {}}};
    spec = validate_boundary(spec);
    const auto mesh = triangulate(spec, 1.0 / 64);
    const auto y = interpolate(mesh, AnalyticField::corner({{0, 0}, 1.5, 1.0, 0.0, 1.5 * kPi}));
    const auto r = fit_exponent(y, mesh, endpoint_at({0, 0}), critical_points(spec), {});
    CHECK(std::abs(r.fitted - 1.5) <= 0.05);
  }
}

TEST_CASE("discretization_errors") {
  const auto spec = validate_boundary(unit_square("DDDD"));
  SUBCASE("linear fields are reproduced exactly") {
    const auto mesh = triangulate(spec, 0.2);
    const auto f = AnalyticField::polynomial({{2.0, 1, 0}, {-1.0, 0, 1}, {0.5, 0, 0}});
    const auto e = discretization_errors(interpolate(mesh, f), mesh, f);
    CHECK(e.l2 <= 1e-13);
    CHECK(e.h1_seminorm <= 1e-13);
  }
  SUBCASE("quadratic interpolation error converges at the P1 rates") {
    const auto f = AnalyticField::polynomial({{1.0, 2, 0}, {1.0, 0, 2}});
    auto mesh = triangulate(spec, 0.25);
    auto e0 = discretization_errors(interpolate(mesh, f), mesh, f);
    mesh = refine_red(mesh);
    auto e1 = discretization_errors(interpolate(mesh, f), mesh, f);
    CHECK(std::log2(e0.l2 / e1.l2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(e0.h1_seminorm / e1.h1_seminorm) == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("y = 0 gives the norms of the exact field") {
    const auto mesh = triangulate(spec, 0.25);
    const auto f = AnalyticField::polynomial({{1.0, 1, 0}});
    const std::vector<double> zero(mesh.num_nodes(), 0.0);
    const auto e = discretization_errors(zero, mesh, f);
    CHECK(e.l2 == doctest::Approx(std::sqrt(1.0 / 3)));
    CHECK(e.h1_seminorm == doctest::Approx(1.0));
  }
}
