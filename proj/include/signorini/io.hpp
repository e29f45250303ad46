#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signorini/analysis.hpp"
#include "signorini/cases.hpp"
#include "signorini/conformal.hpp"
#include "signorini/error.hpp"
#include "signorini/field.hpp"
#include "signorini/geometry.hpp"
#include "signorini/mesh.hpp"
#include "signorini/vi_solver.hpp"

namespace signorini {

/// Contents of a problem file: geometry, data and an optional exact solution.
struct ProblemFile {
  std::string name;
  std::string description;
  BoundarySpec spec;
  std::optional<AnalyticField> exact;
};

/// Parses problem JSON; unknown keys and malformed values raise ParseError,
/// invalid geometry raises the corresponding geometry error.
ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem(const std::string& path);
std::string write_problem(const ProblemFile& problem);
ProblemFile problem_from_case(const CaseSpec& c);

std::string field_to_json(const AnalyticField& field);
AnalyticField field_from_json(const std::string& text);

/// One row per node: node,x,y,value,psi,multiplier,active,kind.
void write_solution_csv(std::ostream& out, const TriMesh& mesh, const DofPartition& partition,
                        const DiscreteSolution& sol);
/// Reads a solution written for `mesh`; ParseError on malformed rows or a
/// node count/coordinate mismatch.
DiscreteSolution read_solution_csv(std::istream& in, const TriMesh& mesh);

std::string trace_json(const DiscreteSolution& sol, const KktResiduals& kkt);
std::string coincidence_json(std::span<const CoincidenceReport> levels,
                             const std::optional<StabilityVerdict>& verdict);
/// Rows level,node,s,tangential,normal,product,excluded.
void write_complementarity_csv(std::ostream& out, int level, const ComplementarityReport& report,
                               bool header);

/// A fit outcome: either a report or the error that prevented it.
struct FitOutcome {
  std::string label;
  CriticalPoint point;
  std::optional<ExponentReport> report;
  std::optional<ErrorCode> error;
  std::string message;
};
std::string exponents_json(std::span<const FitOutcome> fits);
/// Rows point,r,g,inside for log-log plots.
void write_arcs_csv(std::ostream& out, std::span<const FitOutcome> fits);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::size_t nodes = 0;
  double l2 = 0.0;
  double h1 = 0.0;
};
struct ConvergenceRates {
  double l2 = 0.0;
  double h1 = 0.0;
};
/// Least-squares slopes of log error against log h.
ConvergenceRates fitted_rates(std::span<const ConvergenceRow> rows);
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);
std::string convergence_json(std::span<const ConvergenceRow> rows, const ConvergenceRates& rates);

std::string energy_identity_json(double alpha, int resolution,
                                 std::span<const std::pair<std::string, EnergyIdentity>> results);

std::string error_json(ErrorCode code, const std::string& message);

}  // namespace signorini
