#include "fairkit/repair.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fairkit/rng.hpp"
#include "vendor/json.hpp"

namespace fairkit {

std::optional<std::size_t> RepairMap::source_index(std::size_t x, std::size_t y,
                                                   std::size_t z) const {
  auto key = [](const SourceCell& c) { return std::tuple(c.x, c.y, c.z); };
  auto it = std::lower_bound(sources.begin(), sources.end(), std::tuple(x, y, z),
                             [&](const SourceCell& c, const std::tuple<std::size_t, std::size_t,
                                                                       std::size_t>& t) {
                               return key(c) < t;
                             });
  if (it == sources.end() || key(*it) != std::tuple(x, y, z)) return std::nullopt;
  return static_cast<std::size_t>(it - sources.begin());
}

std::string RepairMap::to_json(const JointDistribution& joint) const {
  nlohmann::json j;
  j["feature_columns"] = joint.feature_columns;
  nlohmann::json src = nlohmann::json::array();
  for (const auto& s : sources) {
    nlohmann::json c;
    c["x"] = joint.x_values(s.x);
    c["y"] = joint.label_domain[s.y];
    c["z"] = joint.protected_domain[s.z];
    src.push_back(std::move(c));
  }
  j["sources"] = std::move(src);
  nlohmann::json tgt = nlohmann::json::array();
  for (const auto& t : targets) {
    nlohmann::json c;
    c["x"] = joint.x_values(t.x);
    c["y"] = joint.label_domain[t.y];
    tgt.push_back(std::move(c));
  }
  j["targets"] = std::move(tgt);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < sources.size(); ++s) {
    auto r = row(s);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["table"] = std::move(rows);
  return j.dump(2);
}

std::vector<double> default_distortion_matrix(const JointDistribution& joint) {
  const std::size_t nx = joint.nx(), ny = joint.ny();
  const std::size_t nt = nx * ny;
  std::vector<double> delta(nt * nt);
  std::vector<std::vector<std::string>> xv(nx);
  for (std::size_t x = 0; x < nx; ++x) xv[x] = joint.x_values(x);
  for (std::size_t xs = 0; xs < nx; ++xs)
    for (std::size_t ys = 0; ys < ny; ++ys)
      for (std::size_t xt = 0; xt < nx; ++xt)
        for (std::size_t yt = 0; yt < ny; ++yt) {
          double d = ys == yt ? 0.0 : 1.0;
          for (std::size_t c = 0; c < xv[xs].size(); ++c)
            d += xv[xs][c] == xv[xt][c] ? 0.0 : 1.0;
          delta[(xs * ny + ys) * nt + (xt * ny + yt)] = d;
        }
  return delta;
}

void project_to_simplex(std::span<double> v) {
  static thread_local std::vector<double> sorted;
  sorted.assign(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cum += sorted[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) tau = t;
  }
  for (auto& x : v) x = std::max(x - tau, 0.0);
}

namespace {

// Everything the solver and the checker need, precomputed once per problem.
struct Problem {
  const JointDistribution* joint;
  std::size_t ns, nt, ny, nz;
  std::vector<RepairMap::SourceCell> sources;
  std::vector<RepairMap::TargetCell> targets;
  std::vector<double> mass;          // per source cell
  std::vector<double> z_mass;        // per protected value
  std::vector<double> emp_xy;        // empirical (x, y) marginal per target
  std::vector<double> target_y;     // target label marginal
  std::vector<double> eps;          // ny * nz, indexed y * nz + z
  std::vector<double> budget;       // per source cell
  const std::vector<double>* delta;  // (nx*ny) x (nx*ny)
  std::vector<double> delta_owned;

  double delta_of(std::size_t s, std::size_t t) const {
    const std::size_t src = sources[s].x * ny + sources[s].y;
    return (*delta)[src * nt + t];
  }
};

Problem build_problem(const JointDistribution& joint, const OptimizeConfig& config) {
  Problem p;
  p.joint = &joint;
  p.ny = joint.ny();
  p.nz = joint.nz();
  const std::size_t nx = joint.nx();
  p.nt = nx * p.ny;

  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < p.ny; ++y)
      for (std::size_t z = 0; z < p.nz; ++z)
        if (joint.prob[joint.cell_index(x, y, z)] > 0.0) {
          p.sources.push_back({x, y, z});
          p.mass.push_back(joint.prob[joint.cell_index(x, y, z)]);
        }
  p.ns = p.sources.size();
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < p.ny; ++y) p.targets.push_back({x, y});

  p.z_mass.assign(p.nz, 0.0);
  for (std::size_t s = 0; s < p.ns; ++s) p.z_mass[p.sources[s].z] += p.mass[s];

  p.emp_xy.resize(p.nt);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < p.ny; ++y) p.emp_xy[x * p.ny + y] = joint.marginal_xy(x, y);

  if (config.target_marginal) {
    p.target_y = *config.target_marginal;
    if (p.target_y.size() != p.ny)
      throw Error(Errc::invalid_config, "target_marginal needs one entry per label value");
    double sum = std::accumulate(p.target_y.begin(), p.target_y.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(Errc::invalid_config, "target_marginal must sum to 1");
    for (double v : p.target_y)
      if (v < 0.0) throw Error(Errc::invalid_config, "target_marginal entries must be >= 0");
  } else {
    p.target_y.resize(p.ny);
    for (std::size_t y = 0; y < p.ny; ++y) p.target_y[y] = joint.marginal_y(y);
  }

  if (config.epsilon_table) {
    p.eps = *config.epsilon_table;
    if (p.eps.size() != p.ny * p.nz)
      throw Error(Errc::invalid_config, "epsilon_table needs ny*nz entries");
  } else {
    p.eps.assign(p.ny * p.nz, config.epsilon);
  }
  for (double e : p.eps)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw Error(Errc::invalid_config, "epsilon must be finite and >= 0");

  if (config.distortion_budget_table) {
    p.budget = *config.distortion_budget_table;
    if (p.budget.size() != p.ns)
      throw Error(Errc::invalid_config, "distortion_budget_table needs one entry per source cell ("
                                        + std::to_string(p.ns) + ")");
  } else if (config.distortion_budget) {
    p.budget.assign(p.ns, *config.distortion_budget);
  } else {
    throw Error(Errc::invalid_config,
                "distortion_budget is unset; there is no defensible default, pick one and it "
                "will be recorded in the report");
  }
  for (double c : p.budget)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error(Errc::invalid_config, "distortion_budget must be finite and >= 0");

  if (config.distortion_matrix) {
    p.delta = &*config.distortion_matrix;
    if (p.delta->size() != p.nt * p.nt)
      throw Error(Errc::invalid_config,
                  "distortion_matrix needs (nx*ny)^2 entries, got " +
                      std::to_string(p.delta->size()));
    for (std::size_t i = 0; i < p.nt; ++i)
      if ((*p.delta)[i * p.nt + i] != 0.0)
        throw Error(Errc::invalid_config, "distortion_matrix diagonal must be zero");
    for (double d : *p.delta)
      if (!(d >= 0.0) || !std::isfinite(d))
        throw Error(Errc::invalid_config, "distortion_matrix entries must be finite and >= 0");
  } else {
    p.delta_owned = default_distortion_matrix(joint);
    p.delta = &p.delta_owned;
  }
  return p;
}

// p(y~ = y | z) induced by the table, one value per (y, z).
void induced_conditionals(const Problem& p, const std::vector<double>& table,
                          std::vector<double>* q) {
  q->assign(p.ny * p.nz, 0.0);
  for (std::size_t s = 0; s < p.ns; ++s) {
    const std::size_t z = p.sources[s].z;
    const double w = p.mass[s] / p.z_mass[z];
    const double* row = table.data() + s * p.nt;
    for (std::size_t t = 0; t < p.nt; ++t)
      (*q)[p.targets[t].y * p.nz + z] += w * row[t];
  }
}

void induced_marginal(const Problem& p, const std::vector<double>& table,
                      std::vector<double>* ind) {
  ind->assign(p.nt, 0.0);
  for (std::size_t s = 0; s < p.ns; ++s) {
    const double* row = table.data() + s * p.nt;
    for (std::size_t t = 0; t < p.nt; ++t) (*ind)[t] += p.mass[s] * row[t];
  }
}

double objective_of(const Problem& p, const std::vector<double>& table) {
  std::vector<double> ind;
  induced_marginal(p, table, &ind);
  double tv = 0;
  for (std::size_t t = 0; t < p.nt; ++t) tv += std::abs(ind[t] - p.emp_xy[t]);
  return 0.5 * tv;
}

struct Violations {
  double total = 0.0;  // sum of positive constraint residuals
  double worst = 0.0;
  std::string worst_description;
  double worst_eps = 0.0;
  double worst_budget = 0.0;
};

Violations measure_violations(const Problem& p, const std::vector<double>& table) {
  Violations v;
  std::vector<double> q;
  induced_conditionals(p, table, &q);
  for (std::size_t y = 0; y < p.ny; ++y)
    for (std::size_t z = 0; z < p.nz; ++z) {
      if (p.z_mass[z] == 0.0) continue;
      const double g = std::abs(q[y * p.nz + z] - p.target_y[y]) - p.eps[y * p.nz + z];
      if (g > 0.0) v.total += g;
      if (g > v.worst_eps) v.worst_eps = g;
      if (g > v.worst) {
        v.worst = g;
        v.worst_description = "fairness cap on (y=" + p.joint->label_domain[y] + ", z=" +
                              p.joint->protected_domain[z] + ") exceeded by " + std::to_string(g);
      }
    }
  for (std::size_t s = 0; s < p.ns; ++s) {
    double e = 0;
    const double* row = table.data() + s * p.nt;
    for (std::size_t t = 0; t < p.nt; ++t) e += row[t] * p.delta_of(s, t);
    const double h = e - p.budget[s];
    if (h > 0.0) v.total += h;
    if (h > v.worst_budget) v.worst_budget = h;
    if (h > v.worst) {
      v.worst = h;
      std::ostringstream cell;
      const auto& src = p.sources[s];
      cell << "distortion budget on cell (x=[";
      auto xv = p.joint->x_values(src.x);
      for (std::size_t c = 0; c < xv.size(); ++c) cell << (c ? "," : "") << xv[c];
      cell << "], y=" << p.joint->label_domain[src.y]
           << ", z=" << p.joint->protected_domain[src.z] << ") exceeded by " << h;
      v.worst_description = cell.str();
    }
  }
  return v;
}

// Subgradient of the total violation; returns squared norm.
double violation_subgradient(const Problem& p, const std::vector<double>& table,
                             std::vector<double>* grad) {
  grad->assign(table.size(), 0.0);
  std::vector<double> q;
  induced_conditionals(p, table, &q);
  for (std::size_t y = 0; y < p.ny; ++y)
    for (std::size_t z = 0; z < p.nz; ++z) {
      if (p.z_mass[z] == 0.0) continue;
      const double diff = q[y * p.nz + z] - p.target_y[y];
      if (std::abs(diff) - p.eps[y * p.nz + z] <= 0.0) continue;
      const double sgn = diff > 0.0 ? 1.0 : -1.0;
      for (std::size_t s = 0; s < p.ns; ++s) {
        if (p.sources[s].z != z) continue;
        const double w = sgn * p.mass[s] / p.z_mass[z];
        double* g = grad->data() + s * p.nt;
        for (std::size_t t = 0; t < p.nt; ++t)
          if (p.targets[t].y == y) g[t] += w;
      }
    }
  for (std::size_t s = 0; s < p.ns; ++s) {
    double e = 0;
    const double* row = table.data() + s * p.nt;
    for (std::size_t t = 0; t < p.nt; ++t) e += row[t] * p.delta_of(s, t);
    if (e - p.budget[s] <= 0.0) continue;
    double* g = grad->data() + s * p.nt;
    for (std::size_t t = 0; t < p.nt; ++t) g[t] += p.delta_of(s, t);
  }
  double sq = 0;
  for (double g : *grad) sq += g * g;
  return sq;
}

double objective_subgradient(const Problem& p, const std::vector<double>& table,
                             std::vector<double>* grad) {
  grad->assign(table.size(), 0.0);
  std::vector<double> ind;
  induced_marginal(p, table, &ind);
  for (std::size_t t = 0; t < p.nt; ++t) {
    const double diff = ind[t] - p.emp_xy[t];
    if (diff == 0.0) continue;
    const double sgn = diff > 0.0 ? 0.5 : -0.5;
    for (std::size_t s = 0; s < p.ns; ++s) (*grad)[s * p.nt + t] += sgn * p.mass[s];
  }
  double sq = 0;
  for (double g : *grad) sq += g * g;
  return sq;
}

void project_rows(const Problem& p, std::vector<double>* table) {
  for (std::size_t s = 0; s < p.ns; ++s)
    project_to_simplex(std::span<double>(table->data() + s * p.nt, p.nt));
}

}  // namespace

double repair_objective(const JointDistribution& joint, const RepairMap& map) {
  const std::size_t nt = map.targets.size();
  std::vector<double> ind(nt, 0.0);
  for (std::size_t s = 0; s < map.sources.size(); ++s) {
    const auto& src = map.sources[s];
    const double w = joint.prob[joint.cell_index(src.x, src.y, src.z)];
    auto row = map.row(s);
    for (std::size_t t = 0; t < nt; ++t) ind[t] += w * row[t];
  }
  double tv = 0;
  for (std::size_t t = 0; t < nt; ++t)
    tv += std::abs(ind[t] - joint.marginal_xy(map.targets[t].x, map.targets[t].y));
  return 0.5 * tv;
}

SolveResult solve_repair_map(const JointDistribution& joint, const OptimizeConfig& config) {
  if (!(config.solver_tolerance > 0.0))
    throw Error(Errc::invalid_config, "solver_tolerance must be positive");
  Problem p = build_problem(joint, config);
  const double tol = config.solver_tolerance;

  // Identity start: every source keeps its own (x, y).
  std::vector<double> table(p.ns * p.nt, 0.0);
  for (std::size_t s = 0; s < p.ns; ++s)
    table[s * p.nt + (p.sources[s].x * p.ny + p.sources[s].y)] = 1.0;

  SolveResult result;
  std::vector<double> grad;
  std::size_t used = 0;

  // Phase 1: Polyak steps toward zero total violation.
  Violations v = measure_violations(p, table);
  while (v.total > tol && used < config.max_iterations) {
    const double sq = violation_subgradient(p, table, &grad);
    if (sq == 0.0) break;  // violated but flat: no direction left
    const double step = v.total / sq;
    for (std::size_t i = 0; i < table.size(); ++i) table[i] -= step * grad[i];
    project_rows(p, &table);
    ++used;
    v = measure_violations(p, table);
  }
  if (v.total > tol) {
    throw Error(Errc::infeasible,
                "no feasible mapping found after " + std::to_string(used) +
                    " iterations; residual " + std::to_string(v.total) + "; worst: " +
                    v.worst_description);
  }

  // Phase 2: switching subgradient descent on the objective, keeping the best
  // feasible iterate.
  std::vector<double> best = table;
  double best_obj = objective_of(p, table);
  double checkpoint_obj = best_obj;
  const std::size_t budget = config.max_iterations;
  const std::size_t checkpoint = budget * 3 / 4;
  const double step0 = 0.5;
  std::size_t obj_steps = 0;
  for (std::size_t k = 0; k < budget; ++k) {
    if (k == checkpoint) checkpoint_obj = best_obj;
    v = measure_violations(p, table);
    if (v.total > tol) {
      const double sq = violation_subgradient(p, table, &grad);
      if (sq == 0.0) break;
      const double step = v.total / sq;
      for (std::size_t i = 0; i < table.size(); ++i) table[i] -= step * grad[i];
    } else {
      const double obj = objective_of(p, table);
      if (obj < best_obj) {
        best_obj = obj;
        best = table;
        if (best_obj <= tol) break;  // TV cannot go below zero
      }
      const double sq = objective_subgradient(p, table, &grad);
      if (sq == 0.0) break;  // exact optimum of the objective
      const double step = step0 / (std::sqrt(sq) * std::pow(1.0 + obj_steps, 0.75));
      ++obj_steps;
      for (std::size_t i = 0; i < table.size(); ++i) table[i] -= step * grad[i];
    }
    project_rows(p, &table);
    ++used;
  }

  result.map.sources = p.sources;
  result.map.targets = p.targets;
  result.map.table = std::move(best);
  result.objective = best_obj;
  result.iterations = used;
  Violations final_v = measure_violations(p, result.map.table);
  result.max_violation = std::max(final_v.worst, 0.0);
  if (checkpoint_obj - best_obj > tol) {
    result.converged = false;
    result.warnings.push_back(
        "objective was still moving when the iteration budget ran out; best feasible iterate "
        "returned");
  } else {
    result.converged = true;
  }
  return result;
}

ConstraintCheck check_repair_map(const JointDistribution& joint, const OptimizeConfig& config,
                                 const RepairMap& map, double tolerance) {
  Problem p = build_problem(joint, config);
  ConstraintCheck check;
  if (map.sources.size() != p.ns || map.targets.size() != p.nt ||
      map.table.size() != p.ns * p.nt)
    throw Error(Errc::length_mismatch, "map shape does not match the joint distribution");

  // The description always names the largest failure, whichever kind it is.
  double described = 0.0;
  for (std::size_t s = 0; s < p.ns; ++s) {
    auto row = map.row(s);
    double sum = 0.0, neg = 0.0;
    for (double x : row) {
      sum += x;
      neg = std::min(neg, x);
    }
    const double err = std::max(std::abs(sum - 1.0), -neg);
    if (err > check.worst_row_sum_error) {
      check.worst_row_sum_error = err;
      if (err > 1e-9) {
        check.ok = false;
        if (err > described) {
          described = err;
          check.worst_description = "row " + std::to_string(s) +
                                    " is not a distribution (off by " + std::to_string(err) + ")";
        }
      }
    }
  }

  Violations v = measure_violations(p, map.table);
  check.worst_epsilon_violation = v.worst_eps;
  check.worst_budget_violation = v.worst_budget;
  if (std::max(v.worst_eps, v.worst_budget) > tolerance) {
    check.ok = false;
    if (v.worst > described) check.worst_description = v.worst_description;
  }
  return check;
}

Dataset apply_repair(const Dataset& data, const JointDistribution& joint, const RepairMap& map,
                     std::uint64_t seed) {
  const auto& schema = data.schema();
  std::vector<std::size_t> feat_cols;
  for (const auto& name : joint.feature_columns) feat_cols.push_back(schema.index_of(name));
  const std::size_t label_col = schema.label_index();

  std::vector<Column> cols(data.n_cols());
  for (std::size_t c = 0; c < data.n_cols(); ++c) cols[c] = data.column(c);

  auto domain_index = [](const std::vector<std::string>& dom, const std::string& v,
                         const char* what, std::size_t row) {
    auto it = std::lower_bound(dom.begin(), dom.end(), v);
    if (it == dom.end() || *it != v)
      throw Error(Errc::unmapped_cell, std::string(what) + " value '" + v + "' at row " +
                                           std::to_string(row) + " is outside the table domain");
    return static_cast<std::size_t>(it - dom.begin());
  };

  std::vector<std::string> xvals(feat_cols.size());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < feat_cols.size(); ++c)
      xvals[c] = data.categorical(feat_cols[c])[r];
    std::size_t x;
    try {
      x = joint.x_index(xvals);
    } catch (const Error&) {
      throw Error(Errc::unmapped_cell,
                  "feature values at row " + std::to_string(r) + " are outside the table domain");
    }
    const std::size_t y = domain_index(joint.label_domain, data.label_values()[r], "label", r);
    const std::size_t z =
        domain_index(joint.protected_domain, data.protected_values()[r], "protected", r);
    auto s = map.source_index(x, y, z);
    if (!s) {
      std::ostringstream msg;
      msg << "row " << r << " falls in cell (x=[";
      for (std::size_t c = 0; c < xvals.size(); ++c) msg << (c ? "," : "") << xvals[c];
      msg << "], y=" << data.label_values()[r] << ", z=" << data.protected_values()[r]
          << ") which has no mapping";
      throw Error(Errc::unmapped_cell, msg.str());
    }

    Rng rng(seed, static_cast<std::uint64_t>(data.row_ids()[r]));
    const double u = rng.next_double();
    auto row = map.row(*s);
    double cum = 0.0;
    std::size_t chosen = map.targets.size() - 1;
    for (std::size_t t = 0; t < row.size(); ++t) {
      cum += row[t];
      if (u < cum) {
        chosen = t;
        break;
      }
    }
    const auto& tgt = map.targets[chosen];
    auto tv = joint.x_values(tgt.x);
    for (std::size_t c = 0; c < feat_cols.size(); ++c)
      cols[feat_cols[c]].categorical[r] = tv[c];
    cols[label_col].categorical[r] = joint.label_domain[tgt.y];
  }
  return Dataset(schema, data.row_ids(), std::move(cols), data.synthetic_flags());
}

}  // namespace fairkit
