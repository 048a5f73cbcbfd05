#ifndef FBSDE_RUNNER_HPP
#define FBSDE_RUNNER_HPP

// Experiment dispatch: turns a parsed configuration into simulations,
// estimator runs, and CSV rows.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fbsde/bsde.hpp"
#include "fbsde/config.hpp"
#include "fbsde/errors.hpp"
#include "fbsde/estimators.hpp"
#include "fbsde/model.hpp"
#include "fbsde/oracles.hpp"
#include "fbsde/report.hpp"
#include "fbsde/weights.hpp"

namespace fbsde {

struct ExperimentConfig {
  std::string name;
  ForwardModel model;
  std::string model_kind;
  TimeGrid grid{0.0, 1.0, 1};
  std::size_t n_paths = 0;
  uint64_t seed = 1;
  std::size_t n_outer = 20;
  std::size_t n_inner = 1000;
  WeightKind weight_kind = WeightKind::kElworthyLi;
  double damping_c = 0.0;  // 0 = derive from the model
  int basis_degree = 3;
  std::vector<std::string> estimators;
  Vector x0;
  std::vector<Vector> directions;
  BackwardDriver driver;
  double fd_eps = 1e-3;
  double s_fraction = 0.5;
  std::string csv_path;
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"model",
       {"kind", "dim", "kappa"}},
      {"grid", {"t0", "horizon", "steps"}},
      {"mc", {"paths", "seed", "outer_paths", "inner_paths"}},
      {"weight", {"kind", "c"}},
      {"bsde", {"basis_degree", "picard_tolerance"}},
      {"experiment",
       {"name", "estimators", "x0", "directions", "payoff", "payoff_vector",
        "driver", "driver_alpha", "fd_eps", "s_fraction"}},
      {"output", {"csv"}},
  };
  return schema;
}

inline ForwardModel model_from_config(const RawConfig& cfg) {
  const std::string kind = cfg.get("model", "kind");
  if (kind == "unit")
    return make_unit_diffusion_model(
        static_cast<int>(cfg.get_int_or("model", "dim", 2)));
  if (kind == "ou")
    return make_ou_model(static_cast<int>(cfg.get_int_or("model", "dim", 2)),
                         cfg.get_double_or("model", "kappa", 1.0));
  if (kind == "gruschin") return make_gruschin_model();
  if (kind == "hamiltonian") return make_free_kinetic_model();
  throw ConfigError("section [model], key 'kind': unknown model kind '" +
                    kind + "'");
}

inline WeightKind weight_kind_from_name(const std::string& name) {
  if (name == "elworthy_li") return WeightKind::kElworthyLi;
  if (name == "damped") return WeightKind::kDamped;
  if (name == "gruschin") return WeightKind::kGruschin;
  if (name == "hamiltonian") return WeightKind::kHamiltonian;
  throw ConfigError("section [weight], key 'kind': unknown weight kind '" +
                    name + "'");
}

inline BackwardDriver driver_from_config(const RawConfig& cfg,
                                         const ForwardModel& model) {
  BackwardDriver driver;
  const std::string payoff = cfg.get("experiment", "payoff");
  if (payoff == "linear") {
    const Vector a = cfg.get_vector("experiment", "payoff_vector");
    if (a.size() != model.dim_d)
      throw ConfigError(
          "section [experiment], key 'payoff_vector': wrong dimension");
    driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
    driver.lipschitz_g = a.norm();
  } else if (payoff == "sin") {
    const Vector k = cfg.get_vector("experiment", "payoff_vector");
    if (k.size() != model.dim_d)
      throw ConfigError(
          "section [experiment], key 'payoff_vector': wrong dimension");
    driver.terminal_g = [k](const Vector& x) { return std::sin(k.dot(x)); };
    driver.lipschitz_g = k.norm();
  } else if (payoff == "square_second") {
    const int last = model.dim_d - 1;
    driver.terminal_g = [last](const Vector& x) { return x(last) * x(last); };
    driver.lipschitz_g = 1.0;
  } else {
    throw ConfigError("section [experiment], key 'payoff': unknown payoff '" +
                      payoff + "'");
  }

  const std::string f_name = cfg.get_or("experiment", "driver", "none");
  const double alpha = cfg.get_double_or("experiment", "driver_alpha", 0.5);
  if (f_name == "none") {
    // f == 0
  } else if (f_name == "linear_y") {
    driver.driver_f = [alpha](double, const Vector&, double y, const Vector&) {
      return alpha * y;
    };
    driver.lipschitz_f = std::abs(alpha);
  } else if (f_name == "abs_sin") {
    driver.driver_f = [](double, const Vector&, double y, const Vector& z) {
      return -std::abs(y) + std::sin(z(0));
    };
    driver.lipschitz_f = 1.0;
  } else {
    throw ConfigError("section [experiment], key 'driver': unknown driver '" +
                      f_name + "'");
  }
  return driver;
}

}  // namespace detail

inline ExperimentConfig load_experiment(const RawConfig& raw) {
  raw.check_schema(detail::config_schema());
  raw.require_sections({"model", "grid", "mc", "experiment"});

  ExperimentConfig exp;
  exp.model = detail::model_from_config(raw);
  exp.model_kind = raw.get("model", "kind");
  exp.grid = TimeGrid(raw.get_double("grid", "t0"),
                      raw.get_double("grid", "horizon"),
                      static_cast<std::size_t>(raw.get_int("grid", "steps")));
  exp.n_paths = static_cast<std::size_t>(raw.get_int("mc", "paths"));
  exp.seed = raw.has("mc", "seed") ? raw.get_u64("mc", "seed") : 1;
  exp.n_outer =
      static_cast<std::size_t>(raw.get_int_or("mc", "outer_paths", 20));
  exp.n_inner =
      static_cast<std::size_t>(raw.get_int_or("mc", "inner_paths", 1000));
  exp.weight_kind = detail::weight_kind_from_name(
      raw.get_or("weight", "kind", "elworthy_li"));
  exp.damping_c = raw.get_double_or("weight", "c", 0.0);
  exp.basis_degree =
      static_cast<int>(raw.get_int_or("bsde", "basis_degree", 3));
  exp.name = raw.get("experiment", "name");
  for (const auto& tag :
       detail::split(raw.get("experiment", "estimators"), ',')) {
    if (tag != "bismut" && tag != "conditional" && tag != "finite_difference")
      throw ConfigError(
          "section [experiment], key 'estimators': unknown estimator '" + tag +
          "'");
    exp.estimators.push_back(tag);
  }
  exp.x0 = raw.get_vector("experiment", "x0");
  if (exp.x0.size() != exp.model.dim_d)
    throw ConfigError("section [experiment], key 'x0': wrong dimension");
  exp.directions = raw.get_vector_list("experiment", "directions");
  for (const auto& v : exp.directions)
    if (v.size() != exp.model.dim_d)
      throw ConfigError(
          "section [experiment], key 'directions': wrong dimension");
  exp.driver = detail::driver_from_config(raw, exp.model);
  exp.fd_eps = raw.get_double_or("experiment", "fd_eps", 1e-3);
  exp.s_fraction = raw.get_double_or("experiment", "s_fraction", 0.5);
  exp.csv_path = raw.get_or("output", "csv", exp.name + ".csv");
  return exp;
}

struct RunSummary {
  std::vector<ResultRow> rows;
  double wall_time_ms = 0.0;
};

inline RunSummary run_experiment(const ExperimentConfig& exp) {
  detail::StopWatch watch;
  RunSummary summary;

  BsdeSolution sol;
  const BsdeSolution* sol_ptr = nullptr;
  if (exp.driver.has_driver()) {
    // Fit (Y, Z) once on an ensemble decoupled from the estimator seeds.
    const PathEnsemble fit_ens = simulate_ensemble(
        exp.model, exp.grid, exp.x0, exp.n_paths, mix_seed(exp.seed, 99));
    sol = solve_lsmc(fit_ens, exp.driver, exp.basis_degree);
    sol_ptr = &sol;
  }

  WeightSpec spec;
  spec.kind = exp.weight_kind;
  spec.damping_c =
      exp.damping_c > 0.0 ? exp.damping_c : default_damping_c(exp.model);

  for (const auto& tag : exp.estimators) {
    for (const auto& v : exp.directions) {
      ResultRow row;
      row.experiment = exp.name;
      row.model = exp.model.tag;
      row.estimator_tag = tag;
      row.t = exp.grid.t0();
      row.s = exp.grid.t0();
      row.x0 = exp.x0;
      row.v = v;
      row.seed = exp.seed;
      if (tag == "bismut") {
        const GradientEstimate est =
            bismut_gradient(exp.model, exp.driver, exp.grid, exp.x0, v, spec,
                            sol_ptr, exp.n_paths, exp.seed);
        row.value = est.value;
        row.std_error = est.std_error;
        row.n_paths = est.n_paths;
        row.n_rejected = est.n_rejected;
      } else if (tag == "conditional") {
        const auto s_index = static_cast<std::size_t>(
            exp.s_fraction * static_cast<double>(exp.grid.n_steps()) + 0.5);
        const auto samples = conditional_gradient(
            exp.model, exp.driver, exp.grid, exp.x0, v, s_index, spec, sol_ptr,
            exp.n_outer, exp.n_inner, exp.seed);
        std::vector<double> values;
        values.reserve(samples.size());
        std::size_t rejected = 0;
        for (const auto& sample : samples) {
          values.push_back(sample.estimate.value);
          rejected += sample.estimate.n_rejected;
        }
        const SampleStats stats = summarize(values);
        row.s = exp.grid.node(s_index);
        row.value = stats.mean;
        row.std_error = samples.size() > 1 ? stats.std_error
                                           : samples[0].estimate.std_error;
        row.n_paths = samples.size() * exp.n_inner;
        row.n_rejected = rejected;
      } else {  // finite_difference
        const GradientEstimate est =
            fd_gradient(exp.model, exp.driver, exp.grid, exp.x0, v, exp.fd_eps,
                        exp.n_paths, exp.seed, exp.basis_degree);
        row.value = est.value;
        row.std_error = est.std_error;
        row.n_paths = est.n_paths;
        row.n_rejected = est.n_rejected;
      }
      summary.rows.push_back(std::move(row));
    }
  }
  summary.wall_time_ms = watch.elapsed_ms();
  return summary;
}

}  // namespace fbsde

#endif  // FBSDE_RUNNER_HPP
