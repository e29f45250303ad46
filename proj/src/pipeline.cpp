#include "signorini/pipeline.hpp"

#include "signorini/error.hpp"

namespace signorini {

std::vector<TriMesh> build_levels(const BoundarySpec& spec, double h, int levels,
                                  std::span<const GradingParams> grading) {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "at least one level is required");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh size must be positive");
  std::vector<TriMesh> out;
  TriMesh uniform = triangulate(spec, h);
  for (int k = 0; k < levels; ++k) {
    if (k > 0) uniform = refine_red(uniform);
    TriMesh mesh = uniform;
    for (const auto& g : grading) mesh = grade(mesh, g);
    out.push_back(std::move(mesh));
  }
  return out;
}

LevelResult solve_level(const BoundarySpec& spec, TriMesh mesh, const SolverOptions& options) {
  LevelResult r;
  r.mesh = std::move(mesh);
  r.partition = make_partition(r.mesh, spec);
  r.matrix = stiffness(r.mesh);
  r.load = load_volume(r.mesh, spec.load);
  const auto boundary = load_control(r.mesh, spec);
  for (std::size_t i = 0; i < r.load.size(); ++i) r.load[i] += boundary[i];
  const auto obstacle = make_obstacle(r.mesh, r.partition, spec.gap);
  r.solution = solve_signorini(r.matrix, r.load, r.partition, obstacle, options);
  r.kkt = kkt_residuals(r.solution, r.matrix, r.load, r.partition);
  return r;
}

}  // namespace signorini
