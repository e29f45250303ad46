#pragma once

#include <span>
#include <vector>

#include "signorini/assembly.hpp"
#include "signorini/geometry.hpp"
#include "signorini/mesh.hpp"
#include "signorini/vi_solver.hpp"

namespace signorini {

/// Meshes for levels 0..levels-1: level k is the base triangulation with
/// mesh size h refined k times, then graded toward each listed center.
std::vector<TriMesh> build_levels(const BoundarySpec& spec, double h, int levels,
                                  std::span<const GradingParams> grading = {});

/// Everything produced by one solve on one mesh.
struct LevelResult {
  TriMesh mesh;
  DofPartition partition;
  SymmetricSparseOperator matrix;
  std::vector<double> load;
  DiscreteSolution solution;
  KktResiduals kkt;
};

LevelResult solve_level(const BoundarySpec& spec, TriMesh mesh, const SolverOptions& options = {});

}  // namespace signorini
