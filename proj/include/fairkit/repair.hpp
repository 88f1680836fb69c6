#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"
#include "fairkit/joint.hpp"

namespace fairkit {

// Randomized conditional mapping from source cells (x, y, z) with positive
// empirical mass to target cells (x~, y~). Each table row is a distribution
// over every (x, y) pair of the joint's domains.
struct RepairMap {
  struct SourceCell {
    std::size_t x, y, z;  // indices into the joint's domains
  };
  struct TargetCell {
    std::size_t x, y;
  };

  std::vector<SourceCell> sources;
  std::vector<TargetCell> targets;
  std::vector<double> table;  // row-major, sources.size() x targets.size()

  std::span<const double> row(std::size_t s) const {
    return {table.data() + s * targets.size(), targets.size()};
  }
  std::optional<std::size_t> source_index(std::size_t x, std::size_t y, std::size_t z) const;

  std::string to_json(const JointDistribution& joint) const;
};

struct OptimizeConfig {
  // Per-(y,z) cap on |p(y~=y | z) - target(y)|; scalar broadcast or a full
  // ny*nz table indexed y*nz+z.
  double epsilon = 0.05;
  std::optional<std::vector<double>> epsilon_table;

  // Per-source-cell cap on expected distortion. No default: callers must
  // choose it, and the chosen value is surfaced in every report, because the
  // repaired data depends on it materially.
  std::optional<double> distortion_budget;
  std::optional<std::vector<double>> distortion_budget_table;  // per source cell

  // delta((x,y),(x~,y~)); defaults to label-flip cost 1 plus 1 per changed
  // feature coordinate. Indexed (x*ny+y) source by (x*ny+y) target.
  std::optional<std::vector<double>> distortion_matrix;

  // Target label marginal; defaults to the joint's empirical label marginal.
  std::optional<std::vector<double>> target_marginal;

  double solver_tolerance = 1e-6;
  std::size_t max_iterations = 60000;
  std::uint64_t seed = 0;
};

struct SolveResult {
  RepairMap map;
  double objective = 0.0;       // total-variation distance to the empirical (x,y)
  double max_violation = 0.0;   // worst constraint residual of the returned map
  bool converged = true;
  std::size_t iterations = 0;
  WarningLog warnings;
};

// Default distortion: 1 per changed feature coordinate plus 1 for a label
// flip. Zero on the diagonal by construction.
std::vector<double> default_distortion_matrix(const JointDistribution& joint);

// Minimizes TV(p_induced(x~,y~), p_empirical(x,y)) over the product of
// per-row simplices, subject to the per-(y,z) fairness caps and the per-cell
// expected-distortion budgets. Projected subgradient descent: a feasibility
// phase drives total constraint violation to zero, then objective descent
// keeps the best feasible iterate. Throws Error{infeasible} when the
// feasibility phase stalls above tolerance.
SolveResult solve_repair_map(const JointDistribution& joint, const OptimizeConfig& config);

// Recomputes every constraint of a map from scratch; independent of the
// solver's internal bookkeeping.
struct ConstraintCheck {
  bool ok = true;
  double worst_row_sum_error = 0.0;
  double worst_epsilon_violation = 0.0;
  double worst_budget_violation = 0.0;
  std::string worst_description;
};
ConstraintCheck check_repair_map(const JointDistribution& joint, const OptimizeConfig& config,
                                 const RepairMap& map, double tolerance = 1e-6);

// Objective of a given map; shared by solver, checker and tests.
double repair_objective(const JointDistribution& joint, const RepairMap& map);

// Redraws each row's (features, label) from its source-cell distribution,
// independently with per-row randomness; the protected column passes through
// unchanged and row_ids are preserved. Rows whose cell is not in the map's
// sources raise UnmappedCell.
Dataset apply_repair(const Dataset& data, const JointDistribution& joint, const RepairMap& map,
                     std::uint64_t seed);

// Euclidean projection onto the probability simplex, in place.
void project_to_simplex(std::span<double> v);

}  // namespace fairkit
