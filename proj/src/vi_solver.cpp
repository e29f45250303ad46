#include "signorini/vi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "signorini/error.hpp"

namespace signorini {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double energy(const SymmetricSparseOperator& a, std::span<const double> b,
              std::span<const double> y) {
  const auto ay = a.apply(y);
  double e = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) e += 0.5 * y[i] * ay[i] - b[i] * y[i];
  return e;
}

std::string describe(const std::vector<char>& set, std::span<const int> candidates) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : candidates) {
    if (!set[i]) continue;
    os << (first ? "" : ",") << i;
    first = false;
  }
  os << '}';
  return os.str();
}

/// Rounding level of a computed residual b - Ax: a small multiple of
/// eps * || |A||x| + |b| ||. Residuals below it carry no information.
double attainable_residual(const SymmetricSparseOperator& a, std::span<const double> b,
                           std::span<const double> x) {
  std::vector<double> ax(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) ax[i] = std::abs(b[i]);
  const auto& rp = a.row_ptr();
  const auto& cols = a.columns();
  const auto& vals = a.values();
  for (std::size_t i = 0; i + 1 < rp.size(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(cols[k]);
      ax[i] += std::abs(vals[k] * x[j]);
      if (j != i) ax[j] += std::abs(vals[k] * x[i]);
    }
  }
  return 16.0 * std::numeric_limits<double>::epsilon() * norm2(ax);
}

}  // namespace

CgResult solve_spd(const SymmetricSparseOperator& a, std::span<const double> b, double tol,
                   std::span<const double> initial_guess) {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "CG tolerance must lie in (0, 1)");
  const std::size_t n = a.dimension();
  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return res;
  if (initial_guess.size() == n) std::copy(initial_guess.begin(), initial_guess.end(), res.x.begin());

  const auto diag = a.diagonal();
  std::vector<double> r(n), z(n), p(n), q(n);
  auto residual = [&] {
    a.apply(res.x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  };
  residual();
  const int cap = static_cast<int>(20 * n);
  // Recurrence residuals drift; restart from the true residual until it converges.
  for (int restart = 0; restart < 5; ++restart) {
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    double target = std::max(tol * bnorm, attainable_residual(a, b, res.x));
    while (norm2(r) > target) {
      if (res.iterations % 64 == 63) {
        target = std::max(tol * bnorm, attainable_residual(a, b, res.x));
      }
      if (res.iterations >= cap) {
        throw Error(ErrorCode::NoConvergence,
                    "conjugate gradients reached the iteration cap (" + std::to_string(cap) + ")");
      }
      a.apply(p, q);
      const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
      if (!(pq > 0.0)) {
        throw Error(ErrorCode::NoConvergence, "operator is not positive definite");
      }
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        res.x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
        z[i] = r[i] / diag[i];
      }
      const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
      ++res.iterations;
    }
    residual();
    res.relative_residual = norm2(r) / bnorm;
    if (res.relative_residual <= tol) return res;
    if (norm2(r) <= attainable_residual(a, b, res.x)) return res;
  }
  throw Error(ErrorCode::NoConvergence, "conjugate gradients stagnated above the tolerance");
}

ObstacleData make_obstacle(const TriMesh& mesh, const DofPartition& partition,
                           const AnalyticField& gap) {
  ObstacleData obs;
  obs.psi.assign(mesh.num_nodes(), 0.0);
  if (gap.is_zero()) return obs;
  for (int i : partition.signorini) obs.psi[i] = gap.value(mesh.nodes[i]);
  return obs;
}

bool DiscreteSolution::is_active(int node) const {
  return std::binary_search(active.begin(), active.end(), node);
}

DiscreteSolution solve_signorini(const SymmetricSparseOperator& a, std::span<const double> b,
                                 const DofPartition& partition, const ObstacleData& obstacle,
                                 const SolverOptions& opts) {
  const std::size_t n = partition.size();
  DiscreteSolution sol;
  sol.psi.assign(n, 0.0);
  for (int i : partition.signorini) sol.psi[i] = obstacle.psi[i];
  sol.multiplier.assign(n, 0.0);
  sol.y = partition.lifting;
  if (partition.dirichlet.size() == n) return sol;

  const auto diag = a.diagonal();
  std::vector<char> active(n, 0);
  std::vector<std::vector<char>> history;
  std::vector<double> previous;

  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    std::vector<char> unknown(n, 0);
    std::vector<double> fixed = partition.lifting;
    for (std::size_t i = 0; i < n; ++i) {
      if (partition.kind[i] == DofKind::Dirichlet) continue;
      if (active[i]) {
        fixed[i] = sol.psi[i];
      } else {
        unknown[i] = 1;
        fixed[i] = 0.0;
      }
    }
    const auto a_fixed = a.apply(fixed);
    std::vector<double> rhs, guess;
    std::vector<int> nodes;
    for (std::size_t i = 0; i < n; ++i) {
      if (!unknown[i]) continue;
      nodes.push_back(static_cast<int>(i));
      rhs.push_back(b[i] - a_fixed[i]);
      guess.push_back(previous.empty() ? 0.0 : previous[i]);
    }
    IterationRecord rec;
    std::vector<double> y = fixed;
    if (!nodes.empty()) {
      const auto reduced = a.restrict_to(unknown);
      const auto cg = solve_spd(reduced, rhs, opts.cg_tol, guess);
      for (std::size_t k = 0; k < nodes.size(); ++k) y[nodes[k]] = cg.x[k];
      rec.cg_iterations = cg.iterations;
      rec.cg_residual = cg.relative_residual;
    }
    const auto ay = a.apply(y);
    std::vector<double> lambda(n, 0.0);
    for (int i : partition.signorini) {
      if (active[i]) lambda[i] = ay[i] - b[i];
    }
    rec.active = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
    rec.energy = energy(a, b, y);
    sol.trace.push_back(rec);
    sol.iterations = outer;
    sol.y = y;
    sol.multiplier = lambda;
    previous = y;

    std::vector<char> next(n, 0);
    for (int i : partition.signorini) {
      // ties (exactly zero) stay inactive
      if (y[i] - sol.psi[i] - opts.c * lambda[i] / diag[i] < 0.0) next[i] = 1;
    }
    if (next == active) {
      for (int i : partition.signorini) {
        if (active[i]) sol.active.push_back(i);
      }
      return sol;
    }
    if (std::find(history.begin(), history.end(), next) != history.end()) {
      throw Error(ErrorCode::CycleDetected, "active set cycles: last sets " +
                                                describe(active, partition.signorini) + " and " +
                                                describe(next, partition.signorini));
    }
    history.push_back(active);
    active = std::move(next);
  }
  throw Error(ErrorCode::CycleDetected,
              "active set did not settle within " + std::to_string(opts.max_outer) +
                  " iterations; last set " + describe(active, partition.signorini));
}

double KktResiduals::scaled_max() const {
  return std::max({scaled_primal(), scaled_dual(), scaled_complementarity(), scaled_stationarity()});
}

KktResiduals kkt_residuals(const DiscreteSolution& sol, const SymmetricSparseOperator& a,
                           std::span<const double> b, const DofPartition& partition) {
  KktResiduals k;
  const auto ay = a.apply(sol.y);
  double ymax = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    ymax = std::max(ymax, std::abs(sol.y[i]));
    if (partition.kind[i] == DofKind::Dirichlet) continue;
    ymax = std::max(ymax, std::abs(sol.psi[i]));
    fmax = std::max({fmax, std::abs(ay[i]), std::abs(b[i])});
  }
  // Ay is a sum of terms of size |A_ij| |y_j|; when they cancel (harmonic y,
  // zero load) that size is the reference for the flux residuals.
  fmax = std::max(fmax, a.max_abs_entry() * ymax);
  k.y_scale = ymax > 0.0 ? ymax : 1.0;
  k.flux_scale = fmax > 0.0 ? fmax : 1.0;
  for (int i : partition.signorini) {
    const double gap = sol.y[i] - sol.psi[i];
    const double lambda = ay[i] - b[i];
    k.primal = std::max(k.primal, -gap);
    k.dual = std::max(k.dual, -lambda);
    k.complementarity = std::max(k.complementarity, std::abs(gap * lambda));
  }
  for (int i : partition.free) k.stationarity = std::max(k.stationarity, std::abs(ay[i] - b[i]));
  return k;
}

}  // namespace signorini
