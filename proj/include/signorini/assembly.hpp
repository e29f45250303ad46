#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "signorini/geometry.hpp"
#include "signorini/mesh.hpp"

namespace signorini {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Symmetric sparse matrix in compressed-row storage of its upper triangle
/// (diagonal included). Products apply the stored triangle symmetrically.
class SymmetricSparseOperator {
 public:
  SymmetricSparseOperator() = default;

  /// Entries below the diagonal are mirrored into the upper triangle;
  /// duplicates are summed in input order.
  static SymmetricSparseOperator from_triplets(std::size_t n, std::vector<Triplet> triplets);

  std::size_t dimension() const { return n_; }
  std::size_t stored_entries() const { return values_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
  double entry(int i, int j) const;
  std::vector<double> diagonal() const;
  double max_abs_entry() const;

  /// Principal submatrix on the rows where keep[i] != 0, renumbered in order.
  SymmetricSparseOperator restrict_to(std::span<const char> keep) const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& columns() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

/// Coordinate text dump: one "row col value" line per stored entry.
void write_coordinate(std::ostream& out, const SymmetricSparseOperator& a);

enum class DofKind : char { Free, Dirichlet, Signorini };

/// Split of the mesh nodes into Dirichlet, Signorini and free nodes.
/// A node touching a Dirichlet edge is Dirichlet; otherwise a node touching a
/// Signorini edge is Signorini.
struct DofPartition {
  std::vector<DofKind> kind;
  std::vector<int> dirichlet;
  std::vector<int> signorini;
  std::vector<int> free;
  /// g_D at Dirichlet nodes, zero elsewhere (full length).
  std::vector<double> lifting;

  std::size_t size() const { return kind.size(); }
};

DofPartition make_partition(const TriMesh& mesh, const BoundarySpec& spec);

/// Exact P1 stiffness: A_ij = sum_T int_T grad(phi_i) . grad(phi_j).
SymmetricSparseOperator stiffness(const TriMesh& mesh);

/// b_i = int u phi_i over Neumann and control edges carrying data.
std::vector<double> load_control(const TriMesh& mesh, const BoundarySpec& spec);

/// b_i = sum_T int_T f phi_i, 7-point degree-5 quadrature per triangle.
std::vector<double> load_volume(const TriMesh& mesh, const AnalyticField& f);

struct ReducedSystem {
  SymmetricSparseOperator matrix;
  std::vector<double> rhs;
  /// Reduced index -> mesh node.
  std::vector<int> nodes;
  /// Full-length vector holding g_D at Dirichlet nodes.
  std::vector<double> lifting;

  /// Full nodal vector from reduced values plus lifting.
  std::vector<double> expand(std::span<const double> reduced) const;
};

/// Eliminates Dirichlet rows and columns; rhs becomes b - A g_D on the rest.
ReducedSystem reduce_dirichlet(const SymmetricSparseOperator& a, std::span<const double> b,
                               const DofPartition& partition);

}  // namespace signorini
