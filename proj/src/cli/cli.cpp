// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bibee/bem.hpp"
#include "bibee/errors.hpp"
#include "bibee/experiments.hpp"
#include "bibee/manifest.hpp"
#include "bibee/mesh.hpp"
#include "bibee/pqr.hpp"
#include "bibee/report_io.hpp"
#include "bibee/sphere.hpp"

namespace bibee
{
namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

// Values as typed on the command line. Presence is tracked through CLI11 counts.
struct Flags
{
  int nmax = kDefaultSeriesOrder;
  double eps_in = 4.0;
  double eps_out = 80.0;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string config;

  std::string charges_pqr;
  std::vector<std::string> inline_charges;
  double radius = 5.0;
  std::string methods;
  double lambda = 0.0;
  double alpha = kGbEpsAlpha;
  bool no_escalate = false;

  std::string mesh;
  std::string mesh_format = "off";
  std::string variants = "exact";
  std::string solver = "auto";
  double tol = 1e-8;
  std::size_t dense_limit = 3000;
  int max_iter = 500;
  int restart = 50;

  std::size_t num_configs = 100;
  std::string lambda_grid;

  int subdivisions = 2;
};

// Fully resolved single-problem parameters for the sphere and bem commands.
struct SingleRun
{
  double radius = 5.0;
  double eps_in = 4.0;
  double eps_out = 80.0;
  int n_max = kDefaultSeriesOrder;
  bool auto_escalate = true;
  int threads = 1;
  std::vector<std::string> methods;
  double lambda = 0.0;
  double alpha = kGbEpsAlpha;
  std::vector<Charge> charges;
  std::string pqr;
  std::string mesh;
  std::string mesh_format = "off";
  SolverOptions solver;
};

struct Outputs
{
  // (suffix, content) pairs; with --out each becomes PREFIX+suffix, otherwise
  // they are concatenated onto stdout separated by blank lines.
  std::vector<std::pair<std::string, std::string>> files;
  RunManifest manifest;
};

std::vector<std::string> split_list(const std::string &text)
{
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos)
    {
      items.push_back(item.substr(b, e - b + 1));
    }
  }
  return items;
}

double parse_double(const std::string &text, const std::string &what)
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod(text, &used);
  }
  catch (const std::exception &)
  {
    used = 0;
  }
  if (used == 0 || used != text.size())
  {
    throw ParseError("bad number '" + text + "' in " + what);
  }
  return v;
}

Charge parse_inline_charge(const std::string &text)
{
  const auto parts = split_list(text);
  if (parts.size() != 4)
  {
    throw ParseError("inline charge '" + text + "' must be x,y,z,q");
  }
  Charge c;
  for (int k = 0; k < 3; k++)
  {
    c.position[k] = parse_double(parts[static_cast<std::size_t>(k)], "--charge");
  }
  c.magnitude = parse_double(parts[3], "--charge");
  return c;
}

SolverOptions::Kind parse_solver_kind(const std::string &s)
{
  if (s == "auto") return SolverOptions::Kind::Auto;
  if (s == "direct") return SolverOptions::Kind::Direct;
  if (s == "iterative") return SolverOptions::Kind::Iterative;
  throw ParseError("unknown solver kind '" + s + "'");
}

const char *solver_kind_name(SolverOptions::Kind k)
{
  switch (k)
  {
    case SolverOptions::Kind::Direct: return "direct";
    case SolverOptions::Kind::Iterative: return "iterative";
    default: return "auto";
  }
}

MeshFormat parse_mesh_format(const std::string &s)
{
  if (s == "off") return MeshFormat::OFF;
  if (s == "msms") return MeshFormat::MSMS;
  throw ParseError("unknown mesh format '" + s + "'");
}

json load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open config '" + path + "'");
  }
  try
  {
    return json::parse(in);
  }
  catch (const json::exception &e)
  {
    throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

// Paths inside a config file are taken relative to the file itself.
std::string config_relative(const std::string &config_path, const std::string &p)
{
  const fs::path path(p);
  if (path.is_absolute() || config_path.empty())
  {
    return p;
  }
  return (fs::path(config_path).parent_path() / path).string();
}

void apply_single_config(const json &j, const std::string &config_path, SingleRun &run)
{
  if (!j.is_object())
  {
    throw ParseError("config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "radius", "eps_in",  "eps_out", "n_max", "auto_escalate", "threads",     "methods",
      "lambda", "alpha",   "charges", "pqr",   "mesh",          "mesh_format", "solver"};
  for (const auto &[key, value] : j.items())
  {
    if (!known.contains(key))
    {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  try
  {
    run.radius = j.value("radius", run.radius);
    run.eps_in = j.value("eps_in", run.eps_in);
    run.eps_out = j.value("eps_out", run.eps_out);
    run.n_max = j.value("n_max", run.n_max);
    run.auto_escalate = j.value("auto_escalate", run.auto_escalate);
    run.threads = j.value("threads", run.threads);
    run.lambda = j.value("lambda", run.lambda);
    run.alpha = j.value("alpha", run.alpha);
    run.mesh_format = j.value("mesh_format", run.mesh_format);
    if (j.contains("methods"))
    {
      run.methods = j.at("methods").get<std::vector<std::string>>();
    }
    if (j.contains("pqr"))
    {
      run.pqr = config_relative(config_path, j.at("pqr").get<std::string>());
    }
    if (j.contains("mesh"))
    {
      run.mesh = config_relative(config_path, j.at("mesh").get<std::string>());
    }
    if (j.contains("charges"))
    {
      run.charges.clear();
      for (const auto &row : j.at("charges"))
      {
        const auto v = row.get<std::vector<double>>();
        if (v.size() != 4)
        {
          throw ParseError("config charge entries must be [x, y, z, q]");
        }
        run.charges.push_back({Vec3(v[0], v[1], v[2]), v[3]});
      }
    }
    if (j.contains("solver"))
    {
      const auto &s = j.at("solver");
      if (s.contains("kind"))
      {
        run.solver.kind = parse_solver_kind(s.at("kind").get<std::string>());
      }
      run.solver.tolerance = s.value("tolerance", run.solver.tolerance);
      run.solver.restart = s.value("restart", run.solver.restart);
      run.solver.max_iterations = s.value("max_iterations", run.solver.max_iterations);
      run.solver.dense_limit = s.value("dense_limit", run.solver.dense_limit);
    }
  }
  catch (const json::exception &e)
  {
    throw ParseError(std::string("bad config: ") + e.what());
  }
}

// Method spec with the command-level lambda/alpha defaults filled in when the
// text does not carry its own parameter.
MethodSpec resolve_spec(const std::string &text, double lambda, double alpha)
{
  MethodSpec spec = parse_method_spec(text);
  if (text.find(':') == std::string::npos)
  {
    if (method_uses_lambda(spec.method))
    {
      spec.lambda = lambda;
    }
    if (spec.method == Method::GBeps)
    {
      spec.alpha = alpha;
    }
  }
  return spec;
}

std::string opt_number(const std::optional<double> &v)
{
  return v ? format_number(*v) : std::string();
}

std::string meta_or_empty(const EnergyResult &e, const std::string &key)
{
  const auto it = e.metadata.find(key);
  return it == e.metadata.end() ? std::string() : it->second;
}

std::string render_energies(const std::vector<EnergyResult> &results, bool json_format,
                            bool bem)
{
  std::ostringstream os;
  if (json_format)
  {
    auto arr = ordered_json::array();
    for (const auto &e : results)
    {
      arr.push_back(energy_to_json(e));
    }
    os << arr.dump(2) << '\n';
    return os.str();
  }
  if (bem)
  {
    os << "method,lambda,energy_kcal_mol,panels,solver,iterations,relative_residual\n";
    for (const auto &e : results)
    {
      os << method_name(e.method) << ',' << opt_number(e.lambda) << ',' << format_number(e.value)
         << ',' << meta_or_empty(e, "panels") << ',' << meta_or_empty(e, "solver") << ','
         << meta_or_empty(e, "iterations") << ',' << meta_or_empty(e, "relative_residual")
         << '\n';
    }
  }
  else
  {
    os << "method,lambda,energy_kcal_mol,truncation_estimate,n_max\n";
    for (const auto &e : results)
    {
      os << method_name(e.method) << ',' << opt_number(e.lambda) << ',' << format_number(e.value)
         << ',' << opt_number(e.truncation_error_estimate) << ',' << meta_or_empty(e, "n_max")
         << '\n';
    }
  }
  return os.str();
}

class Runner
{
public:
  Runner(const Flags &f, const CLI::App &app) : f_(f), app_(app) {}

  bool given(const std::string &name) const
  {
    // Subcommand flags are checked on the active subcommand, globals on the root.
    for (const auto *sub : app_.get_subcommands())
    {
      if (const auto *opt = sub->get_option_no_throw(name); opt && opt->count() > 0)
      {
        return true;
      }
    }
    const auto *opt = app_.get_option_no_throw(name);
    return opt && opt->count() > 0;
  }

  bool json_format() const { return f_.format == "json"; }

  SingleRun resolve_single(std::vector<std::string> default_methods)
  {
    SingleRun run;
    run.methods = std::move(default_methods);
    if (!f_.config.empty())
    {
      apply_single_config(load_config(f_.config), f_.config, run);
      manifest_.add_input(f_.config);
    }
    if (given("--radius")) run.radius = f_.radius;
    if (given("--eps-in")) run.eps_in = f_.eps_in;
    if (given("--eps-out")) run.eps_out = f_.eps_out;
    if (given("--nmax")) run.n_max = f_.nmax;
    if (given("--threads")) run.threads = f_.threads;
    if (given("--no-escalate")) run.auto_escalate = false;
    if (given("--lambda")) run.lambda = f_.lambda;
    if (given("--alpha")) run.alpha = f_.alpha;
    if (given("--methods")) run.methods = split_list(f_.methods);
    if (given("--variant")) run.methods = split_list(f_.variants);
    if (given("--charges"))
    {
      run.pqr = f_.charges_pqr;
      run.charges.clear();
    }
    if (given("--charge"))
    {
      run.pqr.clear();
      run.charges.clear();
      for (const auto &c : f_.inline_charges)
      {
        run.charges.push_back(parse_inline_charge(c));
      }
    }
    if (given("--mesh")) run.mesh = f_.mesh;
    if (given("--mesh-format")) run.mesh_format = f_.mesh_format;
    if (given("--solver")) run.solver.kind = parse_solver_kind(f_.solver);
    if (given("--tol")) run.solver.tolerance = f_.tol;
    if (given("--dense-limit")) run.solver.dense_limit = f_.dense_limit;
    if (given("--max-iter")) run.solver.max_iterations = f_.max_iter;
    if (given("--restart")) run.solver.restart = f_.restart;
    run.solver.threads = run.threads;
    if (run.methods.empty())
    {
      throw ParseError("no methods requested");
    }
    return run;
  }

  ChargeDistribution load_charges(const SingleRun &run)
  {
    if (!run.pqr.empty())
    {
      manifest_.add_input(run.pqr);
      return load_pqr(run.pqr);
    }
    if (run.charges.empty())
    {
      throw EmptyInputError("no charges given; use --charges FILE or --charge x,y,z,q");
    }
    return ChargeDistribution(run.charges, "inline");
  }

  std::shared_ptr<const PanelSurface> load_surface(const std::string &mesh,
                                                   const std::string &format_name)
  {
    const auto format = parse_mesh_format(format_name);
    auto surface = std::make_shared<const PanelSurface>(load_mesh(mesh, format));
    if (format == MeshFormat::OFF)
    {
      manifest_.add_input(mesh);
    }
    else
    {
      fs::path stem(mesh);
      if (stem.extension() == ".vert" || stem.extension() == ".face")
      {
        stem.replace_extension();
      }
      manifest_.add_input(fs::path(stem).concat(".vert"));
      manifest_.add_input(fs::path(stem).concat(".face"));
    }
    return surface;
  }

  static ordered_json single_params(const SingleRun &run, const ChargeDistribution &dist)
  {
    ordered_json p;
    p["radius"] = run.radius;
    p["eps_in"] = run.eps_in;
    p["eps_out"] = run.eps_out;
    p["n_max"] = run.n_max;
    p["auto_escalate"] = run.auto_escalate;
    p["threads"] = run.threads;
    p["methods"] = run.methods;
    p["lambda"] = run.lambda;
    p["alpha"] = run.alpha;
    if (!run.pqr.empty())
    {
      p["pqr"] = run.pqr;
    }
    else
    {
      auto arr = ordered_json::array();
      for (const auto &c : dist.charges())
      {
        arr.push_back({c.position.x(), c.position.y(), c.position.z(), c.magnitude});
      }
      p["charges"] = arr;
    }
    return p;
  }

  Outputs sphere()
  {
    auto run = resolve_single({"kirkwood", "cfa", "p", "m"});
    const auto dist = load_charges(run);
    std::vector<MethodSpec> specs;
    for (const auto &m : run.methods)
    {
      specs.push_back(resolve_spec(m, run.lambda, run.alpha));
    }
    SphereModel model(run.radius, DielectricPair(run.eps_in, run.eps_out), run.n_max);
    if (run.auto_escalate)
    {
      model = escalate_series_order(dist, model);
    }
    const auto results = analytic_energies(dist, model, specs);

    Outputs o;
    o.files.emplace_back(json_format() ? ".json" : ".csv",
                         render_energies(results, json_format(), false));
    o.manifest = std::move(manifest_);
    o.manifest.command = "sphere";
    o.manifest.parameters = single_params(run, dist);
    o.manifest.parameters["n_max_used"] = model.n_max;
    return o;
  }

  Outputs bem()
  {
    auto run = resolve_single({"exact"});
    if (run.mesh.empty())
    {
      throw CLI::RequiredError("--mesh");
    }
    const auto dist = load_charges(run);
    const auto surface = load_surface(run.mesh, run.mesh_format);
    const DielectricPair eps(run.eps_in, run.eps_out);

    std::vector<MethodSpec> specs;
    for (auto name : run.methods)
    {
      if (!name.starts_with("bem-"))
      {
        name = "bem-" + name;
      }
      specs.push_back(resolve_spec(name, run.lambda, run.alpha));
      switch (specs.back().method)
      {
        case Method::BemExact:
        case Method::BemCFA:
        case Method::BemP:
        case Method::BemLambda:
        case Method::BemM: break;
        default: throw ParseError("'" + name + "' is not a boundary-element variant");
      }
    }

    const auto rhs = coulomb_field_rhs(dist, surface, eps);
    std::optional<ExactSolver> solver;
    std::vector<EnergyResult> results;
    for (const auto &spec : specs)
    {
      if (spec.method == Method::BemExact)
      {
        if (!solver)
        {
          solver.emplace(surface, eps, run.solver);
        }
        results.push_back(reaction_energy(solver->solve(rhs), dist));
        continue;
      }
      BibeeVariant v = BibeeVariant::p();
      if (spec.method == Method::BemCFA) v = BibeeVariant::cfa();
      if (spec.method == Method::BemLambda) v = BibeeVariant::with_lambda(spec.lambda);
      if (spec.method == Method::BemM) v = BibeeVariant::m(spec.lambda);
      results.push_back(reaction_energy(bibee_surface_charge(rhs, eps, v), dist));
    }

    Outputs o;
    o.files.emplace_back(json_format() ? ".json" : ".csv",
                         render_energies(results, json_format(), true));
    o.manifest = std::move(manifest_);
    o.manifest.command = "bem";
    auto p = single_params(run, dist);
    p.erase("radius");
    p.erase("n_max");
    p.erase("auto_escalate");
    p.erase("alpha");
    p["mesh"] = run.mesh;
    p["mesh_format"] = run.mesh_format;
    p["panels"] = surface->size();
    p["solver"] = {{"kind", solver_kind_name(run.solver.kind)},
                   {"tolerance", run.solver.tolerance},
                   {"restart", run.solver.restart},
                   {"max_iterations", run.solver.max_iterations},
                   {"dense_limit", run.solver.dense_limit}};
    o.manifest.parameters = p;
    return o;
  }

  ExperimentConfig resolve_experiment(std::string &mesh, std::string &mesh_format)
  {
    ExperimentConfig cfg;
    if (!f_.config.empty())
    {
      const auto j = load_config(f_.config);
      cfg = config_from_json(j, cfg);
      manifest_.add_input(f_.config);
      if (j.contains("mesh"))
      {
        const auto &m = j.at("mesh");
        if (m.is_string())
        {
          mesh = config_relative(f_.config, m.get<std::string>());
        }
        else if (m.is_object() && m.contains("path"))
        {
          mesh = config_relative(f_.config, m.at("path").get<std::string>());
          mesh_format = m.value("format", mesh_format);
        }
        else
        {
          throw ParseError("config 'mesh' must be a path or {\"path\", \"format\"}");
        }
      }
    }
    if (given("--seed")) cfg.seed = f_.seed;
    if (given("--num-configs")) cfg.num_configs = f_.num_configs;
    if (given("--eps-in") || given("--eps-out"))
    {
      cfg.dielectrics = DielectricPair(given("--eps-in") ? f_.eps_in : cfg.dielectrics.eps_in(),
                                       given("--eps-out") ? f_.eps_out : cfg.dielectrics.eps_out());
    }
    if (given("--radius")) cfg.sphere_radius = f_.radius;
    if (given("--nmax")) cfg.n_max = f_.nmax;
    if (given("--threads")) cfg.threads = f_.threads;
    if (given("--no-escalate")) cfg.auto_escalate = false;
    if (given("--methods"))
    {
      cfg.methods.clear();
      for (const auto &m : split_list(f_.methods))
      {
        cfg.methods.push_back(resolve_spec(m, f_.lambda, f_.alpha));
      }
    }
    if (given("--lambda-grid"))
    {
      cfg.lambda_grid.clear();
      for (const auto &v : split_list(f_.lambda_grid))
      {
        cfg.lambda_grid.push_back(parse_double(v, "--lambda-grid"));
      }
    }
    if (given("--mesh")) mesh = f_.mesh;
    if (given("--mesh-format")) mesh_format = f_.mesh_format;
    if (given("--solver")) cfg.solver.kind = parse_solver_kind(f_.solver);
    if (given("--tol")) cfg.solver.tolerance = f_.tol;
    if (given("--dense-limit")) cfg.solver.dense_limit = f_.dense_limit;
    if (given("--max-iter")) cfg.solver.max_iterations = f_.max_iter;
    if (given("--restart")) cfg.solver.restart = f_.restart;
    cfg.solver.threads = cfg.threads;
    cfg.validate();
    return cfg;
  }

  Outputs experiment()
  {
    std::string mesh, mesh_format = "off";
    const auto cfg = resolve_experiment(mesh, mesh_format);
    std::shared_ptr<const PanelSurface> surface;
    if (!mesh.empty())
    {
      surface = load_surface(mesh, mesh_format);
    }
    const auto report = run_comparison(cfg, surface);

    Outputs o;
    if (json_format())
    {
      o.files.emplace_back(".json", report_to_json(report).dump(2) + "\n");
    }
    else
    {
      std::ostringstream rows, summary, checks;
      write_rows_csv(rows, report);
      write_summary_csv(summary, report.summary);
      write_checks_csv(checks, report);
      o.files.emplace_back(".csv", rows.str());
      o.files.emplace_back(".summary.csv", summary.str());
      o.files.emplace_back(".checks.csv", checks.str());
    }
    o.manifest = std::move(manifest_);
    o.manifest.command = "experiment";
    o.manifest.parameters = config_to_json(cfg);
    if (!mesh.empty())
    {
      o.manifest.parameters["mesh"] = {{"path", mesh}, {"format", mesh_format}};
    }
    return o;
  }

  Outputs sweep()
  {
    std::string mesh, mesh_format = "off";
    const auto cfg = resolve_experiment(mesh, mesh_format);
    if (!mesh.empty())
    {
      throw DomainError("the lambda sweep runs on the analytic sphere only; drop the mesh");
    }
    const auto result = lambda_sweep(cfg);

    Outputs o;
    if (json_format())
    {
      o.files.emplace_back(".json", sweep_to_json(result).dump(2) + "\n");
    }
    else
    {
      std::ostringstream rows, summary, best;
      write_rows_csv(rows, result.comparison);
      write_summary_csv(summary, result.per_lambda);
      best << "best_lambda,bound_ordering_violations,configs\n"
           << format_number(result.best_lambda) << ',' << result.comparison.bound_violations
           << ',' << result.comparison.configs_checked << '\n';
      o.files.emplace_back(".summary.csv", summary.str());
      o.files.emplace_back(".best.csv", best.str());
      o.files.emplace_back(".csv", rows.str());
    }
    o.manifest = std::move(manifest_);
    o.manifest.command = "sweep";
    o.manifest.parameters = config_to_json(cfg);
    return o;
  }

  Outputs icosphere()
  {
    const auto surface = make_icosphere(f_.radius, f_.subdivisions);
    std::ostringstream os;
    write_off(os, surface);
    Outputs o;
    o.files.emplace_back(".off", os.str());
    o.manifest.command = "icosphere";
    o.manifest.parameters = {{"radius", f_.radius},
                             {"subdivisions", f_.subdivisions},
                             {"panels", surface.size()}};
    return o;
  }

private:
  const Flags &f_;
  const CLI::App &app_;
  RunManifest manifest_;
};

void write_file(const fs::path &path, const std::string &content)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << content;
  os.close();
  if (!os)
  {
    throw Error("cannot write '" + path.string() + "'");
  }
}

void add_charge_options(CLI::App *sub, Flags &f)
{
  sub->add_option("--charges", f.charges_pqr, "PQR file with the charges")->check(CLI::ExistingFile);
  sub->add_option("--charge", f.inline_charges, "inline charge x,y,z,q (repeatable)")
      ->allow_extra_args(false);
  sub->add_option("--lambda", f.lambda, "lambda for lambda/m methods without an explicit value");
}

void add_solver_options(CLI::App *sub, Flags &f)
{
  sub->add_option("--solver", f.solver, "exact solver: auto, direct or iterative")
      ->check(CLI::IsMember({"auto", "direct", "iterative"}));
  sub->add_option("--tol", f.tol, "iterative relative residual tolerance");
  sub->add_option("--dense-limit", f.dense_limit, "largest panel count solved directly (auto)");
  sub->add_option("--max-iter", f.max_iter, "iteration cap for the iterative solver");
  sub->add_option("--restart", f.restart, "GMRES restart length");
}

void add_mesh_options(CLI::App *sub, Flags &f, bool required)
{
  auto *opt = sub->add_option("--mesh", f.mesh, "surface mesh (OFF file or MSMS .vert/.face stem)");
  if (required)
  {
    opt->required();
  }
  sub->add_option("--mesh-format", f.mesh_format, "off or msms")
      ->check(CLI::IsMember({"off", "msms"}));
}

void add_experiment_options(CLI::App *sub, Flags &f)
{
  sub->add_option("--num-configs", f.num_configs, "number of random configurations");
  sub->add_option("--radius", f.radius, "sphere radius in Angstrom");
  sub->add_option("--methods", f.methods, "comma-separated method list");
  sub->add_option("--lambda", f.lambda, "lambda for lambda/m methods without an explicit value");
  sub->add_option("--alpha", f.alpha, "gbeps alpha when not given inline");
  sub->add_option("--lambda-grid", f.lambda_grid, "comma-separated lambda values for the sweep");
  sub->add_flag("--no-escalate", f.no_escalate, "keep n_max fixed");
  add_mesh_options(sub, f, false);
  add_solver_options(sub, f);
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err)
{
  Flags f;
  CLI::App app{"Electrostatic solvation energies for charges in a dielectric cavity", "bibee"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.add_option("--nmax", f.nmax, "series truncation order")->check(CLI::Range(0, kMaxSeriesOrder));
  app.add_option("--eps-in", f.eps_in, "solute dielectric constant");
  app.add_option("--eps-out", f.eps_out, "solvent dielectric constant");
  app.add_option("--out", f.out, "output prefix; stdout when absent");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", f.seed, "experiment seed");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);

  auto *sphere = app.add_subcommand("sphere", "analytic sphere energies");
  add_charge_options(sphere, f);
  sphere->add_option("--radius", f.radius, "sphere radius in Angstrom");
  sphere->add_option("--methods", f.methods,
                     "comma list of kirkwood,cfa,p,lambda[:l],m[:l],gb,gbeps[:alpha]");
  sphere->add_option("--alpha", f.alpha, "gbeps alpha when not given inline");
  sphere->add_flag("--no-escalate", f.no_escalate, "keep n_max fixed");

  auto *bem = app.add_subcommand("bem", "boundary-element energies on a triangulated surface");
  add_charge_options(bem, f);
  add_mesh_options(bem, f, false);
  bem->add_option("--variant", f.variants, "comma list of exact,cfa,p,lambda[:l],m[:l]");
  add_solver_options(bem, f);

  auto *experiment = app.add_subcommand("experiment", "random sphere comparison");
  add_experiment_options(experiment, f);
  auto *sweep = app.add_subcommand("sweep", "lambda sweep of the hybrid method");
  add_experiment_options(sweep, f);

  auto *ico = app.add_subcommand("icosphere", "write an icosphere mesh as OFF");
  ico->add_option("--radius", f.radius, "radius in Angstrom");
  ico->add_option("--subdivisions", f.subdivisions, "subdivision level (20*4^k panels)")
      ->check(CLI::Range(0, 7));

  for (auto *sub : {sphere, bem, experiment, sweep, ico})
  {
    sub->fallthrough();
  }

  std::vector<std::string> argv_store;
  argv_store.emplace_back("bibee");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const auto &a : argv_store)
  {
    argv.push_back(a.c_str());
  }

  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    Runner runner(f, app);
    Outputs o;
    if (sphere->parsed()) o = runner.sphere();
    else if (bem->parsed()) o = runner.bem();
    else if (experiment->parsed()) o = runner.experiment();
    else if (sweep->parsed()) o = runner.sweep();
    else o = runner.icosphere();

    const std::string manifest = o.manifest.to_json().dump(2) + "\n";
    if (f.out.empty())
    {
      bool first = true;
      for (const auto &[suffix, content] : o.files)
      {
        out << (first ? "" : "\n") << content;
        first = false;
      }
      err << manifest;
    }
    else
    {
      for (const auto &[suffix, content] : o.files)
      {
        write_file(f.out + suffix, content);
      }
      write_file(f.out + ".manifest.json", manifest);
    }
    return kExitOk;
  }
  catch (const CLI::RequiredError &e)
  {
    err << "error: missing required option " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const ParseError &e)
  {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  catch (const EmptyInputError &e)
  {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  catch (const TopologyError &e)
  {
    err << "mesh topology error: " << e.what() << '\n';
    return kExitInput;
  }
  catch (const GeometryError &e)
  {
    err << "mesh geometry error: " << e.what() << '\n';
    return kExitInput;
  }
  catch (const DomainError &e)
  {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }
  catch (const NumericalError &e)
  {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace bibee
