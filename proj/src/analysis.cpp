#include "signorini/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "signorini/error.hpp"

namespace signorini {
namespace {

constexpr double kPi = std::numbers::pi;

/// Maximal run of Signorini-tagged boundary edges, as a node path.
struct Chain {
  std::vector<int> nodes;
  std::vector<double> s;  // arclength of each node
};

std::vector<Chain> signorini_chains(const TriMesh& mesh) {
  const auto& be = mesh.boundary;
  const std::size_t m = be.size();
  std::vector<Chain> chains;
  if (m == 0) return chains;
  // arclength of polygon vertices, reconstructed from the boundary edges
  std::size_t edges_in_polygon = 0;
  for (const auto& e : be) edges_in_polygon = std::max(edges_in_polygon, e.polygon_edge + 1);
  std::vector<double> edge_len(edges_in_polygon, 0.0);
  std::vector<Vec2> edge_start(edges_in_polygon);
  std::vector<char> seen(edges_in_polygon, 0);
  for (const auto& e : be) {
    edge_len[e.polygon_edge] += distance(mesh.nodes[e.a], mesh.nodes[e.b]);
    if (!seen[e.polygon_edge]) {
      seen[e.polygon_edge] = 1;
      edge_start[e.polygon_edge] = mesh.nodes[e.a];
    }
  }
  std::vector<double> cum(edges_in_polygon + 1, 0.0);
  for (std::size_t e = 0; e < edges_in_polygon; ++e) cum[e + 1] = cum[e] + edge_len[e];
  auto arclength = [&](const BoundaryEdge& e) {
    return cum[e.polygon_edge] + distance(mesh.nodes[e.a], edge_start[e.polygon_edge]);
  };

  const auto is_s = [&](std::size_t k) { return be[k % m].tag == ConditionTag::Signorini; };
  std::size_t start = m;
  for (std::size_t k = 0; k < m; ++k) {
    if (!is_s(k + m - 1)) {
      start = k;
      break;
    }
  }
  if (start == m) start = 0;  // whole boundary Signorini (not a valid spec)
  for (std::size_t off = 0; off < m;) {
    const std::size_t k = (start + off) % m;
    if (!is_s(k)) {
      ++off;
      continue;
    }
    Chain chain;
    chain.nodes.push_back(be[k].a);
    chain.s.push_back(arclength(be[k]));
    while (off < m && is_s(start + off)) {
      const auto& e = be[(start + off) % m];
      chain.s.push_back(chain.s.back() + distance(mesh.nodes[e.a], mesh.nodes[e.b]));
      chain.nodes.push_back(e.b);
      ++off;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

bool in_contact(const DiscreteSolution& sol, const DofPartition& part, int node) {
  if (part.kind[node] != DofKind::Signorini) return false;
  return sol.is_active(node) || sol.y[node] == sol.psi[node];
}

double nearest_distance(Vec2 p, std::span<const CriticalPoint> points, double skip_below) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& q : points) {
    const double dq = distance(p, q.location);
    if (dq > skip_below) d = std::min(d, dq);
  }
  return d;
}

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

const std::array<QuadPoint, 7>& dunavant5() {
  static const std::array<QuadPoint, 7> rule = [] {
    const double r15 = std::sqrt(15.0);
    const double a1 = (9.0 - 2.0 * r15) / 21.0, b1 = (6.0 + r15) / 21.0;
    const double a2 = (9.0 + 2.0 * r15) / 21.0, b2 = (6.0 - r15) / 21.0;
    const double w0 = 9.0 / 40.0, w1 = (155.0 + r15) / 1200.0, w2 = (155.0 - r15) / 1200.0;
    return std::array<QuadPoint, 7>{{{{1.0 / 3, 1.0 / 3, 1.0 / 3}, w0},
                                     {{a1, b1, b1}, w1},
                                     {{b1, a1, b1}, w1},
                                     {{b1, b1, a1}, w1},
                                     {{a2, b2, b2}, w2},
                                     {{b2, a2, b2}, w2},
                                     {{b2, b2, a2}, w2}}};
  }();
  return rule;
}

void subdivide(const std::array<Vec2, 3>& t, int depth, std::vector<std::array<Vec2, 3>>& out) {
  if (depth == 0) {
    out.push_back(t);
    return;
  }
  const Vec2 ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
  subdivide({t[0], ab, ca}, depth - 1, out);
  subdivide({ab, t[1], bc}, depth - 1, out);
  subdivide({ca, bc, t[2]}, depth - 1, out);
  subdivide({ab, bc, ca}, depth - 1, out);
}

}  // namespace

CoincidenceReport extract_coincidence(const DiscreteSolution& sol, const TriMesh& mesh,
                                      const DofPartition& partition) {
  CoincidenceReport report;
  report.level = mesh.level;
  report.h = mesh.max_edge_length();
  for (const auto& chain : signorini_chains(mesh)) {
    const std::size_t len = chain.nodes.size();
    std::vector<char> contact(len);
    for (std::size_t i = 0; i < len; ++i) contact[i] = in_contact(sol, partition, chain.nodes[i]);
    for (std::size_t p = 0; p < len;) {
      if (!contact[p]) {
        ++p;
        continue;
      }
      std::size_t q = p;
      while (q + 1 < len && contact[q + 1]) ++q;
      auto pos = [&](std::size_t i) { return mesh.nodes[chain.nodes[i]]; };
      ContactInterval iv;
      iv.first_node = chain.nodes[p];
      iv.last_node = chain.nodes[q];
      bool open_begin = false, open_end = false;
      if (p == 0) {
        iv.begin = pos(0);
        iv.s_begin = chain.s[0];
      } else if (p == 1 && partition.kind[chain.nodes[0]] != DofKind::Signorini) {
        iv.begin = pos(0);
        iv.s_begin = chain.s[0];
      } else {
        open_begin = true;
        iv.begin = midpoint(pos(p - 1), pos(p));
        iv.s_begin = 0.5 * (chain.s[p - 1] + chain.s[p]);
      }
      if (q == len - 1) {
        iv.end = pos(q);
        iv.s_end = chain.s[q];
      } else if (q == len - 2 && partition.kind[chain.nodes[len - 1]] != DofKind::Signorini) {
        iv.end = pos(len - 1);
        iv.s_end = chain.s[len - 1];
      } else {
        open_end = true;
        iv.end = midpoint(pos(q), pos(q + 1));
        iv.s_end = 0.5 * (chain.s[q] + chain.s[q + 1]);
      }
      if (p == q && open_begin && open_end) {
        report.isolated.push_back({chain.s[p], pos(p), chain.nodes[p]});
      } else {
        if (open_begin) report.endpoints.push_back({iv.s_begin, iv.begin});
        if (open_end) report.endpoints.push_back({iv.s_end, iv.end});
        report.intervals.push_back(iv);
      }
      p = q + 1;
    }
  }
  auto by_s = [](const auto& x, const auto& y) { return x.s < y.s; };
  std::sort(report.intervals.begin(), report.intervals.end(),
            [](const ContactInterval& x, const ContactInterval& y) { return x.s_begin < y.s_begin; });
  std::sort(report.isolated.begin(), report.isolated.end(), by_s);
  std::sort(report.endpoints.begin(), report.endpoints.end(), by_s);
  return report;
}

StabilityVerdict component_stability(std::span<const CoincidenceReport> levels) {
  if (levels.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "stability needs at least three refinement levels");
  }
  StabilityVerdict v;
  const auto& last = levels.back();
  const auto& prev = levels[levels.size() - 2];
  v.components = last.components();
  v.stable = true;
  if (last.components() != prev.components() || last.intervals.size() != prev.intervals.size()) {
    v.stable = false;
    v.reason = "component count changes on the last two levels (" +
               std::to_string(prev.components()) + " -> " + std::to_string(last.components()) + ")";
  }
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const auto& a = levels[k - 1];
    const auto& b = levels[k];
    if (a.endpoints.size() != b.endpoints.size()) {
      v.endpoint_shifts.push_back(std::numeric_limits<double>::infinity());
      if (k + 1 == levels.size() && v.stable) {
        v.stable = false;
        v.reason = "endpoint count changes on the last two levels";
      }
      continue;
    }
    double shift = 0.0;
    for (std::size_t e = 0; e < a.endpoints.size(); ++e) {
      shift = std::max(shift, distance(a.endpoints[e].location, b.endpoints[e].location));
    }
    v.endpoint_shifts.push_back(shift);
    if (shift > 2.0 * a.h && v.stable) {
      v.stable = false;
      v.reason = "endpoints move by more than 2h between levels " + std::to_string(a.level) +
                 " and " + std::to_string(b.level);
    }
  }
  return v;
}

ComplementarityReport complementarity_product(const DiscreteSolution& sol, const TriMesh& mesh,
                                              const DofPartition& partition,
                                              std::span<const CriticalPoint> exclude, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "exclusion radius must be positive");
  ComplementarityReport report;
  for (const auto& chain : signorini_chains(mesh)) {
    const std::size_t len = chain.nodes.size();
    for (std::size_t i = 0; i < len; ++i) {
      const int node = chain.nodes[i];
      if (partition.kind[node] != DofKind::Signorini) continue;
      ComplementaritySample smp;
      smp.node = node;
      smp.s = chain.s[i];
      double mass = 0.0;
      if (i > 0) {
        const double l = chain.s[i] - chain.s[i - 1];
        smp.tangential = std::max(smp.tangential, std::abs(sol.y[node] - sol.y[chain.nodes[i - 1]]) / l);
        mass += 0.5 * l;
      }
      if (i + 1 < len) {
        const double l = chain.s[i + 1] - chain.s[i];
        smp.tangential = std::max(smp.tangential, std::abs(sol.y[chain.nodes[i + 1]] - sol.y[node]) / l);
        mass += 0.5 * l;
      }
      smp.normal = mass > 0.0 ? sol.multiplier[node] / mass : 0.0;
      smp.product = std::abs(smp.tangential * smp.normal);
      for (const auto& cp : exclude) {
        if (distance(mesh.nodes[node], cp.location) < delta) smp.excluded = true;
      }
      if (!smp.excluded) {
        report.max_product = std::max(report.max_product, smp.product);
        report.max_tangential = std::max(report.max_tangential, smp.tangential);
        report.max_normal = std::max(report.max_normal, std::abs(smp.normal));
      }
      report.samples.push_back(smp);
    }
  }
  return report;
}

ConditionPair ConditionPair::of(const CriticalPoint& cp) {
  if (cp.kind == CriticalKind::CoincidenceEndpoint) return coincidence_endpoint();
  return {cp.before, cp.after, false};
}

std::string ConditionPair::label() const {
  if (endpoint) return "endpoint";
  return std::string{tag_letter(first), '-', tag_letter(second)};
}

namespace {

enum class Row { Pure, Mixed, SignoriniBoth, SignoriniOne, Endpoint };

Row row_of(const ConditionPair& pair) {
  if (pair.endpoint) return Row::Endpoint;
  using T = ConditionTag;
  const auto has = [&](T t) { return pair.first == t || pair.second == t; };
  const auto both = [&](T t) { return pair.first == t && pair.second == t; };
  if (both(T::Signorini)) return Row::SignoriniBoth;
  if (has(T::Signorini)) {
    if (has(T::Control)) {
      throw Error(ErrorCode::InvalidArgument, "Signorini and control boundaries cannot meet");
    }
    return Row::SignoriniOne;
  }
  if (has(T::Dirichlet) && !both(T::Dirichlet)) return Row::Mixed;
  return Row::Pure;  // D-D, N-N, U-U, U-N
}

}  // namespace

int minimum_index(const ConditionPair& pair) {
  return row_of(pair) == Row::SignoriniBoth ? 2 : 1;
}

double singular_exponent(const ConditionPair& pair, double alpha, int j) {
  const Row row = row_of(pair);
  if (j < minimum_index(pair)) {
    throw Error(ErrorCode::InvalidIndex, "index j=" + std::to_string(j) + " is below the bound " +
                                             std::to_string(minimum_index(pair)) + " for " +
                                             pair.label());
  }
  switch (row) {
    case Row::Pure: return j * kPi / alpha;
    case Row::Mixed: return (j - 0.5) * kPi / alpha;
    case Row::SignoriniBoth:
    case Row::SignoriniOne: return j * kPi / (2.0 * alpha);
    case Row::Endpoint: return 1.5;
  }
  return 0.0;
}

LeadingExponent predicted_leading_exponent(const CriticalPoint& cp) {
  const auto pair = ConditionPair::of(cp);
  if (pair.endpoint) return {1.5, 1};
  for (int j = minimum_index(pair);; ++j) {
    const double lambda = singular_exponent(pair, cp.angle, j);
    if (std::abs(lambda - 1.0) > 1e-12) return {lambda, j};
  }
}

std::vector<double> exceptional_p(std::span<const double> angles) {
  std::vector<double> out;
  for (double alpha : angles) {
    if (!(alpha > 0.0 && alpha < 2.0 * kPi)) {
      throw Error(ErrorCode::InvalidArgument, "angles must lie in (0, 2 pi)");
    }
    for (int k = 1;; ++k) {
      const double q = k * kPi / (2.0 * alpha);
      if (q >= 2.0 - 1e-12) break;
      const double p = 2.0 / (2.0 - q);
      if (p > 2.0 + 1e-12) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double p : out) {
    if (unique.empty() || std::abs(p - unique.back()) > 1e-12 * p) unique.push_back(p);
  }
  return unique;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

ExponentReport fit_exponent(std::span<const double> y, const TriMesh& mesh,
                            const CriticalPoint& cp, std::span<const CriticalPoint> others,
                            const FitOptions& options) {
  const Vec2 c = cp.location;
  int nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double d = distance(mesh.nodes[i], c);
    if (d < best) {
      best = d;
      nearest = static_cast<int>(i);
    }
  }
  const double h_loc = mesh.local_size(nearest);
  double d_other = nearest_distance(c, others, 1e-12);
  if (!std::isfinite(d_other)) {
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (const auto& p : mesh.nodes) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    d_other = distance(lo, hi);
  }
  ExponentReport rep;
  rep.point = cp;
  const auto lead = predicted_leading_exponent(cp);
  rep.predicted = lead.lambda;
  rep.predicted_index = lead.j;
  rep.r_min = options.r_min.value_or(4.0 * h_loc);
  rep.r_max = options.r_max.value_or(0.5 * d_other);
  if (rep.r_min < 2.0 * h_loc * (1.0 - 1e-12) || rep.r_max > 0.5 * d_other * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument,
                "fit window must satisfy r_min >= 2 h_loc and r_max <= half the distance to the "
                "nearest other critical point");
  }

  std::vector<double> radii;
  if (options.arcs > 1) {
    const double q = std::pow(rep.r_max / rep.r_min, 1.0 / (options.arcs - 1));
    for (int k = 0; k < options.arcs; ++k) radii.push_back(rep.r_min * std::pow(q, k));
  } else {
    for (double r = rep.r_min; r <= rep.r_max * (1.0 + 1e-12); r *= std::numbers::sqrt2) {
      radii.push_back(r);
    }
  }

  if (radii.size() < 4) {
    throw Error(ErrorCode::WindowTooNarrow,
                "only " + std::to_string(radii.size()) + " arcs fit in the window");
  }

  const PointLocator locator(mesh);
  const auto yc = locator.evaluate(y, c);
  if (!yc) throw Error(ErrorCode::InvalidArgument, "fit center lies outside the mesh");
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));

  const int m = std::max(8, options.samples_per_arc);
  const double dtheta = 2.0 * kPi / m;
  std::vector<double> log_r, log_g;
  for (double r : radii) {
    ArcSample arc{r, 0.0, 0};
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
      const double theta = (k + 0.5) * dtheta;
      const auto v = locator.evaluate(y, c + r * Vec2{std::cos(theta), std::sin(theta)});
      if (!v) continue;
      sum += (*v - *yc) * (*v - *yc) * dtheta;
      ++arc.inside;
    }
    arc.g = std::sqrt(sum);
    rep.samples.push_back(arc);
  }
  if (rep.samples.back().g <= 1e-8 * ymax) {
    throw Error(ErrorCode::SingularityNotExcited,
                "arc norm at r_max is below 1e-8 of max|y|; no singular behaviour to fit");
  }
  for (const auto& arc : rep.samples) {
    if (arc.inside < 3 || !(arc.g > 0.0)) continue;
    log_r.push_back(std::log(arc.r));
    log_g.push_back(std::log(arc.g));
  }
  if (log_r.size() < 4) {
    throw Error(ErrorCode::WindowTooNarrow,
                "only " + std::to_string(log_r.size()) + " usable arcs in the fit window");
  }
  const auto fit = least_squares(log_r, log_g);
  rep.fitted = fit.slope;
  rep.r_squared = fit.r_squared;
  rep.arcs = static_cast<int>(log_r.size());
  rep.coefficient_proxy = rep.samples.back().g;
  return rep;
}

ErrorNorms discretization_errors(std::span<const double> y, const TriMesh& mesh,
                                 const AnalyticField& exact, std::span<const Vec2> singular) {
  double l2 = 0.0, h1 = 0.0;
  std::vector<std::array<Vec2, 3>> pieces;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const std::array<Vec2, 3> p{mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    const double area2 = orient(p[0], p[1], p[2]);
    Vec2 grad;
    for (int k = 0; k < 3; ++k) {
      const Vec2 e = p[(k + 2) % 3] - p[(k + 1) % 3];
      grad = grad + y[tri[k]] * Vec2{-e.y / area2, e.x / area2};
    }
    bool near = false;
    for (const auto& s : singular) {
      for (const auto& v : p) near |= distance(v, s) <= 1e-12 * std::max(1.0, norm(s));
    }
    pieces.clear();
    subdivide(p, near ? 4 : 0, pieces);
    for (const auto& sub : pieces) {
      const double area = 0.5 * orient(sub[0], sub[1], sub[2]);
      for (const auto& q : dunavant5()) {
        const Vec2 x = q.bary[0] * sub[0] + q.bary[1] * sub[1] + q.bary[2] * sub[2];
        // barycentric coordinates with respect to the parent triangle
        const double w0 = orient(x, p[1], p[2]) / area2;
        const double w1 = orient(p[0], x, p[2]) / area2;
        const double w2 = 1.0 - w0 - w1;
        const double yh = w0 * y[tri[0]] + w1 * y[tri[1]] + w2 * y[tri[2]];
        const double e = exact.value(x) - yh;
        const Vec2 ge = exact.gradient(x) - grad;
        l2 += q.weight * area * e * e;
        h1 += q.weight * area * dot(ge, ge);
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace signorini
