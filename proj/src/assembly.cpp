#include "signorini/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "signorini/format.hpp"

namespace signorini {
namespace {

// Dunavant degree-5 rule on the reference triangle: barycentric weights.
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;  // sums to 1
};

const std::array<QuadPoint, 7>& dunavant5() {
  static const std::array<QuadPoint, 7> rule = [] {
    const double r15 = std::sqrt(15.0);
    const double a1 = (9.0 - 2.0 * r15) / 21.0, b1 = (6.0 + r15) / 21.0;
    const double a2 = (9.0 + 2.0 * r15) / 21.0, b2 = (6.0 - r15) / 21.0;
    const double w0 = 9.0 / 40.0, w1 = (155.0 + r15) / 1200.0, w2 = (155.0 - r15) / 1200.0;
    return std::array<QuadPoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
        {{a1, b1, b1}, w1},
        {{b1, a1, b1}, w1},
        {{b1, b1, a1}, w1},
        {{a2, b2, b2}, w2},
        {{b2, a2, b2}, w2},
        {{b2, b2, a2}, w2},
    }};
  }();
  return rule;
}

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussX{0.11270166537925831, 0.5, 0.88729833462074169};
constexpr std::array<double, 3> kGaussW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

SymmetricSparseOperator SymmetricSparseOperator::from_triplets(std::size_t n,
                                                               std::vector<Triplet> triplets) {
  for (auto& t : triplets) {
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SymmetricSparseOperator op;
  op.n_ = n;
  op.row_ptr_.assign(n + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& first = triplets[k];
    double sum = 0.0;
    std::size_t m = k;
    while (m < triplets.size() && triplets[m].row == first.row && triplets[m].col == first.col) {
      sum += triplets[m].value;
      ++m;
    }
    op.cols_.push_back(first.col);
    op.values_.push_back(sum);
    ++op.row_ptr_[first.row + 1];
    k = m;
  }
  for (std::size_t i = 0; i < n; ++i) op.row_ptr_[i + 1] += op.row_ptr_[i];
  return op;
}

void SymmetricSparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    const double xi = x[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = cols_[k];
      const double v = values_[k];
      acc += v * x[j];
      if (static_cast<std::size_t>(j) != i) y[j] += v * xi;
    }
    y[i] += acc;
  }
}

std::vector<double> SymmetricSparseOperator::apply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  apply(x, y);
  return y;
}

double SymmetricSparseOperator::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<double> SymmetricSparseOperator::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_ptr_[i] < row_ptr_[i + 1] && static_cast<std::size_t>(cols_[row_ptr_[i]]) == i) {
      d[i] = values_[row_ptr_[i]];
    }
  }
  return d;
}

double SymmetricSparseOperator::max_abs_entry() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SymmetricSparseOperator SymmetricSparseOperator::restrict_to(std::span<const char> keep) const {
  std::vector<int> map(n_, -1);
  int m = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (keep[i]) map[i] = m++;
  }
  SymmetricSparseOperator op;
  op.n_ = static_cast<std::size_t>(m);
  op.row_ptr_.assign(op.n_ + 1, 0);
  op.cols_.reserve(cols_.size());
  op.values_.reserve(values_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    if (map[i] < 0) continue;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = map[cols_[k]];
      if (j < 0) continue;
      op.cols_.push_back(j);
      op.values_.push_back(values_[k]);
    }
    op.row_ptr_[map[i] + 1] = op.cols_.size();
  }
  return op;
}

void write_coordinate(std::ostream& out, const SymmetricSparseOperator& a) {
  const auto& rp = a.row_ptr();
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      out << i << ' ' << a.columns()[k] << ' ' << format_double(a.values()[k]) << '\n';
    }
  }
}

DofPartition make_partition(const TriMesh& mesh, const BoundarySpec& spec) {
  DofPartition p;
  const std::size_t n = mesh.num_nodes();
  p.kind.assign(n, DofKind::Free);
  p.lifting.assign(n, 0.0);
  const auto tags = mesh.node_tags();
  for (std::size_t i = 0; i < n; ++i) {
    if (tags[i] & tag_bit(ConditionTag::Dirichlet)) {
      p.kind[i] = DofKind::Dirichlet;
    } else if (tags[i] & tag_bit(ConditionTag::Signorini)) {
      p.kind[i] = DofKind::Signorini;
    }
  }
  // Lifting from the global field, else from per-segment polynomial data.
  std::vector<char> assigned(n, 0);
  for (const auto& be : mesh.boundary) {
    if (be.tag != ConditionTag::Dirichlet) continue;
    for (int v : {be.a, be.b}) {
      if (assigned[v]) continue;
      assigned[v] = 1;
      if (spec.lifting) {
        p.lifting[v] = spec.lifting->value(mesh.nodes[v]);
      } else if (!spec.segments[be.segment].data.empty()) {
        const Vec2 s = spec.polygon.edge_start(be.polygon_edge);
        const double t = distance(mesh.nodes[v], s) / spec.polygon.edge_length(be.polygon_edge);
        p.lifting[v] = spec.segment_datum(be.segment,
                                          spec.segment_parameter(be.segment, be.polygon_edge, t));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    switch (p.kind[i]) {
      case DofKind::Dirichlet: p.dirichlet.push_back(static_cast<int>(i)); break;
      case DofKind::Signorini: p.signorini.push_back(static_cast<int>(i)); break;
      case DofKind::Free: p.free.push_back(static_cast<int>(i)); break;
    }
  }
  return p;
}

SymmetricSparseOperator stiffness(const TriMesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(6 * mesh.num_triangles());
  for (const auto& tri : mesh.triangles) {
    const Vec2 p[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    const double area2 = orient(p[0], p[1], p[2]);
    // grad(phi_k) = rot90(opposite edge) / (2 area)
    Vec2 g[3];
    for (int k = 0; k < 3; ++k) {
      const Vec2 e = p[(k + 2) % 3] - p[(k + 1) % 3];
      g[k] = {-e.y / area2, e.x / area2};
    }
    const double area = 0.5 * area2;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        triplets.push_back({tri[i], tri[j], area * dot(g[i], g[j])});
      }
    }
  }
  return SymmetricSparseOperator::from_triplets(mesh.num_nodes(), std::move(triplets));
}

std::vector<double> load_control(const TriMesh& mesh, const BoundarySpec& spec) {
  std::vector<double> b(mesh.num_nodes(), 0.0);
  for (const auto& be : mesh.boundary) {
    if (be.tag != ConditionTag::Control && be.tag != ConditionTag::Neumann) continue;
    if (spec.segments[be.segment].data.empty()) continue;
    const Vec2 pa = mesh.nodes[be.a], pb = mesh.nodes[be.b];
    const Vec2 s = spec.polygon.edge_start(be.polygon_edge);
    const double len_edge = spec.polygon.edge_length(be.polygon_edge);
    const double ta = distance(pa, s) / len_edge;
    const double tb = distance(pb, s) / len_edge;
    const double len = distance(pa, pb);
    for (int q = 0; q < 3; ++q) {
      const double xi = kGaussX[q];
      const double t = ta + xi * (tb - ta);
      const double u = spec.segment_datum(be.segment,
                                          spec.segment_parameter(be.segment, be.polygon_edge, t));
      b[be.a] += kGaussW[q] * len * u * (1.0 - xi);
      b[be.b] += kGaussW[q] * len * u * xi;
    }
  }
  return b;
}

std::vector<double> load_volume(const TriMesh& mesh, const AnalyticField& f) {
  std::vector<double> b(mesh.num_nodes(), 0.0);
  if (f.is_zero()) return b;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.area(t);
    for (const auto& q : dunavant5()) {
      const Vec2 x = q.bary[0] * mesh.nodes[tri[0]] + q.bary[1] * mesh.nodes[tri[1]] +
                     q.bary[2] * mesh.nodes[tri[2]];
      const double fx = f.value(x) * q.weight * area;
      for (int k = 0; k < 3; ++k) b[tri[k]] += fx * q.bary[k];
    }
  }
  return b;
}

std::vector<double> ReducedSystem::expand(std::span<const double> reduced) const {
  std::vector<double> y = lifting;
  for (std::size_t k = 0; k < nodes.size(); ++k) y[nodes[k]] = reduced[k];
  return y;
}

ReducedSystem reduce_dirichlet(const SymmetricSparseOperator& a, std::span<const double> b,
                               const DofPartition& partition) {
  const std::size_t n = partition.size();
  ReducedSystem sys;
  sys.lifting = partition.lifting;
  std::vector<char> keep(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (partition.kind[i] != DofKind::Dirichlet) {
      keep[i] = 1;
      sys.nodes.push_back(static_cast<int>(i));
    }
  }
  const auto ag = a.apply(sys.lifting);
  sys.matrix = a.restrict_to(keep);
  sys.rhs.reserve(sys.nodes.size());
  for (int i : sys.nodes) sys.rhs.push_back(b[i] - ag[i]);
  return sys;
}

}  // namespace signorini
