// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/report_io.hpp"

#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "bibee/errors.hpp"

namespace bibee
{

namespace
{

std::string lambda_cell(const MethodSpec &spec)
{
  return method_uses_lambda(spec.method) ? format_number(spec.lambda) : std::string();
}

ordered_json summary_to_json(const MethodSummary &s)
{
  ordered_json j;
  j["method"] = std::string(method_name(s.spec.method));
  j["lambda"] = method_uses_lambda(s.spec.method) ? ordered_json(s.spec.lambda) : ordered_json();
  j["rmsd"] = s.rmsd;
  j["mean_dev_pct"] = s.mean_dev_pct;
  j["n"] = s.n;
  return j;
}

}  // namespace

void write_rows_csv(std::ostream &out, const ComparisonReport &report)
{
  std::ostringstream os;
  os << "seed,index,method,lambda,energy_kcal_mol,truncation_estimate\n";
  for (const auto &r : report.rows)
  {
    os << r.seed << ',' << r.index << ',' << method_name(r.spec.method) << ','
       << lambda_cell(r.spec) << ',' << format_number(r.energy) << ','
       << (r.truncation_estimate ? format_number(*r.truncation_estimate) : std::string()) << '\n';
  }
  out << os.str();
}

void write_summary_csv(std::ostream &out, std::span<const MethodSummary> summary)
{
  std::ostringstream os;
  os << "method,lambda,rmsd,mean_dev_pct,n\n";
  for (const auto &s : summary)
  {
    os << method_name(s.spec.method) << ',' << lambda_cell(s.spec) << ',' << format_number(s.rmsd)
       << ',' << format_number(s.mean_dev_pct) << ',' << s.n << '\n';
  }
  out << os.str();
}

void write_checks_csv(std::ostream &out, const ComparisonReport &report)
{
  std::ostringstream os;
  os << "check,violations,configs\n";
  os << "bound_ordering," << report.bound_violations << ',' << report.configs_checked << '\n';
  out << os.str();
}

ordered_json config_to_json(const ExperimentConfig &cfg)
{
  ordered_json j;
  j["seed"] = cfg.seed;
  j["num_configs"] = cfg.num_configs;
  j["charges_per_config"] = cfg.charges_per_config;
  j["sphere_radius"] = cfg.sphere_radius;
  j["max_abs_charge"] = cfg.max_abs_charge;
  j["placement_margin"] = cfg.placement_margin;
  j["eps_in"] = cfg.dielectrics.eps_in();
  j["eps_out"] = cfg.dielectrics.eps_out();
  auto methods = ordered_json::array();
  for (const auto &m : cfg.methods)
  {
    methods.push_back(format_method_spec(m));
  }
  j["methods"] = methods;
  j["lambda_grid"] = cfg.lambda_grid;
  j["n_max"] = cfg.n_max;
  j["auto_escalate"] = cfg.auto_escalate;
  ordered_json solver;
  solver["kind"] = cfg.solver.kind == SolverOptions::Kind::Direct      ? "direct"
                   : cfg.solver.kind == SolverOptions::Kind::Iterative ? "iterative"
                                                                       : "auto";
  solver["tolerance"] = cfg.solver.tolerance;
  solver["restart"] = cfg.solver.restart;
  solver["max_iterations"] = cfg.solver.max_iterations;
  solver["dense_limit"] = cfg.solver.dense_limit;
  j["solver"] = solver;
  return j;
}

ordered_json report_to_json(const ComparisonReport &report)
{
  ordered_json j;
  j["config"] = config_to_json(report.config);
  auto rows = ordered_json::array();
  for (const auto &r : report.rows)
  {
    ordered_json row;
    row["seed"] = r.seed;
    row["index"] = r.index;
    row["method"] = std::string(method_name(r.spec.method));
    row["lambda"] = method_uses_lambda(r.spec.method) ? ordered_json(r.spec.lambda) : ordered_json();
    row["energy_kcal_mol"] = r.energy;
    row["truncation_estimate"] =
        r.truncation_estimate ? ordered_json(*r.truncation_estimate) : ordered_json();
    rows.push_back(row);
  }
  j["rows"] = rows;
  auto summary = ordered_json::array();
  for (const auto &s : report.summary)
  {
    summary.push_back(summary_to_json(s));
  }
  j["summary"] = summary;
  j["checks"] = {{"bound_ordering_violations", report.bound_violations},
                 {"configs", report.configs_checked}};
  return j;
}

ordered_json sweep_to_json(const SweepReport &sweep)
{
  ordered_json j;
  j["config"] = config_to_json(sweep.comparison.config);
  auto per = ordered_json::array();
  for (const auto &s : sweep.per_lambda)
  {
    per.push_back(summary_to_json(s));
  }
  j["per_lambda"] = per;
  j["best_lambda"] = sweep.best_lambda;
  j["checks"] = {{"bound_ordering_violations", sweep.comparison.bound_violations},
                 {"configs", sweep.comparison.configs_checked}};
  return j;
}

ordered_json energy_to_json(const EnergyResult &e)
{
  ordered_json j;
  j["method"] = std::string(method_name(e.method));
  j["lambda"] = e.lambda ? ordered_json(*e.lambda) : ordered_json();
  j["energy_kcal_mol"] = e.value;
  j["truncation_estimate"] =
      e.truncation_error_estimate ? ordered_json(*e.truncation_error_estimate) : ordered_json();
  ordered_json meta = ordered_json::object();
  for (const auto &[k, v] : e.metadata)
  {
    meta[k] = v;
  }
  j["metadata"] = meta;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentConfig cfg)
{
  if (!j.is_object())
  {
    throw ParseError("experiment config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "seed",        "num_configs", "charges_per_config", "sphere_radius", "max_abs_charge",
      "placement_margin", "eps_in", "eps_out",           "methods",       "lambda_grid",
      "n_max",       "auto_escalate", "threads",         "solver",        "mesh"};
  for (const auto &[key, value] : j.items())
  {
    if (!known.contains(key))
    {
      throw ParseError("unknown experiment config key '" + key + "'");
    }
  }
  try
  {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("num_configs")) cfg.num_configs = j.at("num_configs").get<std::size_t>();
    if (j.contains("charges_per_config"))
      cfg.charges_per_config = j.at("charges_per_config").get<std::size_t>();
    if (j.contains("sphere_radius")) cfg.sphere_radius = j.at("sphere_radius").get<double>();
    if (j.contains("max_abs_charge")) cfg.max_abs_charge = j.at("max_abs_charge").get<double>();
    if (j.contains("placement_margin"))
      cfg.placement_margin = j.at("placement_margin").get<double>();
    if (j.contains("eps_in") || j.contains("eps_out"))
    {
      cfg.dielectrics = DielectricPair(j.value("eps_in", cfg.dielectrics.eps_in()),
                                       j.value("eps_out", cfg.dielectrics.eps_out()));
    }
    if (j.contains("methods"))
    {
      cfg.methods.clear();
      for (const auto &m : j.at("methods"))
      {
        cfg.methods.push_back(parse_method_spec(m.get<std::string>()));
      }
    }
    if (j.contains("lambda_grid")) cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("auto_escalate")) cfg.auto_escalate = j.at("auto_escalate").get<bool>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("solver"))
    {
      const auto &s = j.at("solver");
      if (s.contains("kind"))
      {
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "auto") cfg.solver.kind = SolverOptions::Kind::Auto;
        else if (kind == "direct") cfg.solver.kind = SolverOptions::Kind::Direct;
        else if (kind == "iterative") cfg.solver.kind = SolverOptions::Kind::Iterative;
        else throw ParseError("unknown solver kind '" + kind + "'");
      }
      cfg.solver.tolerance = s.value("tolerance", cfg.solver.tolerance);
      cfg.solver.restart = s.value("restart", cfg.solver.restart);
      cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
      cfg.solver.dense_limit = s.value("dense_limit", cfg.solver.dense_limit);
    }
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ParseError(std::string("bad experiment config: ") + e.what());
  }
  return cfg;
}

}  // namespace bibee
