#pragma once

#include <span>
#include <vector>

#include "signorini/assembly.hpp"

namespace signorini {

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  /// ||Ax - b|| / ||b|| recomputed from the returned x.
  double relative_residual = 0.0;
};

/// Diagonally preconditioned conjugate gradients to ||Ax - b|| <= tol ||b||, or
/// to the rounding level of the residual when that is larger. Throws
/// NoConvergence after 20 n iterations.
CgResult solve_spd(const SymmetricSparseOperator& a, std::span<const double> b, double tol,
                   std::span<const double> initial_guess = {});

/// Gap psi at every node (only Signorini entries are used).
struct ObstacleData {
  std::vector<double> psi;
};

ObstacleData make_obstacle(const TriMesh& mesh, const DofPartition& partition,
                           const AnalyticField& gap);

struct SolverOptions {
  /// Active-set weight, applied to multipliers scaled by diag(A).
  double c = 1.0;
  int max_outer = 100;
  double cg_tol = 1e-13;
};

struct IterationRecord {
  std::size_t active = 0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  /// 0.5 y'Ay - b'y of the iterate.
  double energy = 0.0;
};

struct DiscreteSolution {
  /// Nodal values, lifting included.
  std::vector<double> y;
  /// (Ay - b) on active Signorini nodes, zero elsewhere (full length).
  std::vector<double> multiplier;
  /// Gap at every node (zero off the Signorini set).
  std::vector<double> psi;
  /// Sorted node indices of the final active set.
  std::vector<int> active;
  int iterations = 0;
  std::vector<IterationRecord> trace;

  bool is_active(int node) const;
};

/// Primal-dual active set method for
///   min 0.5 y'Ay - b'y  s.t.  y = g_D on Dirichlet nodes, y >= psi on Signorini nodes.
/// Takes the unreduced operator and load. Throws CycleDetected when the
/// active set does not settle within opts.max_outer iterations.
DiscreteSolution solve_signorini(const SymmetricSparseOperator& a, std::span<const double> b,
                                 const DofPartition& partition, const ObstacleData& obstacle,
                                 const SolverOptions& opts = {});

struct KktResiduals {
  double primal = 0.0;        ///< max (psi - y)+ on Signorini nodes
  double dual = 0.0;          ///< max (-lambda)+ on Signorini nodes
  double complementarity = 0.0;  ///< max |(y - psi) lambda| on Signorini nodes
  double stationarity = 0.0;  ///< max |Ay - b| on free nodes
  /// max |y|, |psi| over non-Dirichlet nodes (and |y| everywhere).
  double y_scale = 1.0;
  /// max of |Ay|, |b| over non-Dirichlet nodes and max|A_ij| * y_scale.
  double flux_scale = 1.0;

  double scaled_primal() const { return primal / y_scale; }
  double scaled_dual() const { return dual / flux_scale; }
  double scaled_complementarity() const { return complementarity / (y_scale * flux_scale); }
  double scaled_stationarity() const { return stationarity / flux_scale; }
  double scaled_max() const;
};

/// Recomputes residuals from y alone: lambda = Ay - b at every Signorini node.
KktResiduals kkt_residuals(const DiscreteSolution& sol, const SymmetricSparseOperator& a,
                           std::span<const double> b, const DofPartition& partition);

}  // namespace signorini
