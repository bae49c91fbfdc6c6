// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bibee/errors.hpp"
#include "bibee/parallel.hpp"
#include "bibee/sphere.hpp"

namespace bibee
{

void ExperimentConfig::validate() const
{
  if (num_configs == 0 || charges_per_config == 0)
  {
    throw DomainError("experiment counts must be positive");
  }
  if (!(sphere_radius > 0.0))
  {
    throw DomainError("sphere radius must be positive");
  }
  if (!(max_abs_charge >= 0.0) || !std::isfinite(max_abs_charge))
  {
    throw DomainError("max_abs_charge must be finite and non-negative");
  }
  if (!(placement_margin > 0.0 && placement_margin < 1.0))
  {
    throw DomainError("placement margin must lie in (0, 1)");
  }
  if (placement_margin > kMaxRelativeRadius)
  {
    throw DomainError("placement margin exceeds the solver limit");
  }
  if (methods.empty())
  {
    throw DomainError("no methods requested");
  }
  if (n_max < 0 || n_max > kMaxSeriesOrder)
  {
    throw DomainError("n_max out of range");
  }
  for (const auto &m : methods)
  {
    if (method_uses_lambda(m.method) && !(m.lambda >= -0.5 && m.lambda <= 0.0))
    {
      throw DomainError("lambda must lie in [-0.5, 0]");
    }
  }
}

std::uint64_t SubstreamRng::splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t index)
  : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)))
{
}

double SubstreamRng::uniform()
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

ChargeDistribution random_sphere_config(std::uint64_t seed, std::size_t index,
                                        const ExperimentConfig &cfg)
{
  SubstreamRng rng(seed, index);
  const double rmax = cfg.placement_margin * cfg.sphere_radius;
  std::vector<Charge> charges;
  charges.reserve(cfg.charges_per_config);
  for (std::size_t k = 0; k < cfg.charges_per_config; k++)
  {
    const double r = rmax * std::cbrt(rng.uniform());
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double q = cfg.max_abs_charge * (2.0 * rng.uniform() - 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    charges.push_back(Charge{Vec3(r * s * std::cos(phi), r * s * std::sin(phi), r * z), q});
  }
  return ChargeDistribution(std::move(charges),
                            "seed=" + std::to_string(seed) + ",index=" + std::to_string(index));
}

MethodSummary summarize(const MethodSpec &spec, std::span<const double> approx,
                        std::span<const double> exact)
{
  if (approx.size() != exact.size())
  {
    throw DomainError("summary inputs differ in length");
  }
  MethodSummary s;
  s.spec = spec;
  s.n = approx.size();
  if (s.n == 0)
  {
    return s;
  }
  double sq = 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < s.n; i++)
  {
    const double d = approx[i] - exact[i];
    sq += d * d;
    if (d != 0.0)
    {
      dev += std::abs(d) / std::abs(exact[i]);
    }
  }
  s.rmsd = std::sqrt(sq / static_cast<double>(s.n));
  s.mean_dev_pct = 100.0 * dev / static_cast<double>(s.n);
  return s;
}

namespace
{

bool is_bem(Method m)
{
  return m == Method::BemExact || m == Method::BemCFA || m == Method::BemP ||
         m == Method::BemM || m == Method::BemLambda;
}

struct ConfigResult
{
  std::vector<ComparisonRow> rows;
  double kirkwood = 0.0;
  bool violation = false;
};

bool ordering_violated(const ChargeDistribution &dist, double cfa, double exact, double p,
                       double m0)
{
  const double slack = 1e-10 * std::abs(exact);
  bool bad = cfa < exact - slack || exact < p - slack;
  if (net_charge(dist) != 0.0)
  {
    bad = bad || m0 < p - slack || m0 > exact + slack;
  }
  return bad;
}

std::string failure_prefix(std::uint64_t seed, std::size_t idx)
{
  return "experiment failed at seed " + std::to_string(seed) + ", index " + std::to_string(idx) +
         ": ";
}

}  // namespace

ComparisonReport run_comparison(const ExperimentConfig &cfg,
                                std::shared_ptr<const PanelSurface> surface)
{
  cfg.validate();
  const bool needs_bem = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                     [](const MethodSpec &m) { return is_bem(m.method); });
  if (needs_bem && !surface)
  {
    throw DomainError("boundary-element methods requested without a surface");
  }
  std::optional<ExactSolver> solver;
  const bool needs_exact =
      std::any_of(cfg.methods.begin(), cfg.methods.end(),
                  [](const MethodSpec &m) { return m.method == Method::BemExact; });
  if (needs_exact)
  {
    solver.emplace(surface, cfg.dielectrics, cfg.solver);
  }

  // Kirkwood, CFA, P, M(0) are always evaluated for the ordering check.
  const std::vector<MethodSpec> check_specs = {
      {Method::Kirkwood}, {Method::CFA}, {Method::P}, {Method::M, 0.0}};
  std::vector<MethodSpec> analytic_specs = check_specs;
  for (const auto &m : cfg.methods)
  {
    if (!is_bem(m.method))
    {
      analytic_specs.push_back(m);
    }
  }

  std::vector<ConfigResult> results(cfg.num_configs);
  parallel_for(cfg.num_configs, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; idx++)
    {
      try
      {
        const auto dist = random_sphere_config(cfg.seed, idx, cfg);
        SphereModel model(cfg.sphere_radius, cfg.dielectrics, cfg.n_max);
        if (cfg.auto_escalate)
        {
          model = escalate_series_order(dist, model);
        }
        const auto analytic = analytic_energies(dist, model, analytic_specs);
        auto &res = results[idx];
        res.kirkwood = analytic[0].value;
        res.violation = ordering_violated(dist, analytic[1].value, analytic[0].value,
                                          analytic[2].value, analytic[3].value);
        std::optional<SurfaceField> rhs;
        std::size_t next_analytic = check_specs.size();
        for (const auto &spec : cfg.methods)
        {
          EnergyResult e;
          if (is_bem(spec.method))
          {
            if (!rhs)
            {
              rhs = coulomb_field_rhs(dist, surface, cfg.dielectrics);
            }
            if (spec.method == Method::BemExact)
            {
              e = reaction_energy(solver->solve(*rhs), dist);
            }
            else
            {
              const BibeeVariant v = spec.method == Method::BemCFA ? BibeeVariant::cfa()
                                     : spec.method == Method::BemP ? BibeeVariant::p()
                                     : spec.method == Method::BemM
                                         ? BibeeVariant::m(spec.lambda)
                                         : BibeeVariant::with_lambda(spec.lambda);
              e = reaction_energy(bibee_surface_charge(*rhs, cfg.dielectrics, v), dist);
            }
          }
          else
          {
            e = analytic[next_analytic++];
          }
          res.rows.push_back(
              ComparisonRow{cfg.seed, idx, spec, e.value, e.truncation_error_estimate, model.n_max});
        }
      }
      catch (const NumericalError &err)
      {
        throw NumericalError(failure_prefix(cfg.seed, idx) + err.what());
      }
      catch (const Error &err)
      {
        throw DomainError(failure_prefix(cfg.seed, idx) + err.what());
      }
    }
  });

  ComparisonReport report;
  report.config = cfg;
  report.configs_checked = cfg.num_configs;
  std::vector<double> exact;
  exact.reserve(cfg.num_configs);
  for (auto &r : results)
  {
    exact.push_back(r.kirkwood);
    report.bound_violations += r.violation ? 1 : 0;
    for (auto &row : r.rows)
    {
      report.rows.push_back(std::move(row));
    }
  }
  for (std::size_t m = 0; m < cfg.methods.size(); m++)
  {
    std::vector<double> approx;
    approx.reserve(cfg.num_configs);
    for (const auto &r : results)
    {
      approx.push_back(r.rows[m].energy);
    }
    report.summary.push_back(summarize(cfg.methods[m], approx, exact));
  }
  return report;
}

SweepReport lambda_sweep(const ExperimentConfig &cfg)
{
  if (cfg.lambda_grid.empty())
  {
    throw DomainError("lambda grid is empty");
  }
  ExperimentConfig run = cfg;
  run.methods = {{Method::Kirkwood}};
  for (double lam : cfg.lambda_grid)
  {
    if (!(lam >= -0.5 && lam <= 0.0))
    {
      throw DomainError("lambda grid values must lie in [-0.5, 0]");
    }
    run.methods.push_back({Method::M, lam});
  }
  SweepReport out;
  out.comparison = run_comparison(run);
  out.per_lambda.assign(out.comparison.summary.begin() + 1, out.comparison.summary.end());
  const MethodSummary *best = nullptr;
  for (const auto &s : out.per_lambda)
  {
    if (!best || s.mean_dev_pct < best->mean_dev_pct ||
        (s.mean_dev_pct == best->mean_dev_pct &&
         std::abs(s.spec.lambda) < std::abs(best->spec.lambda)))
    {
      best = &s;
    }
  }
  out.best_lambda = best->spec.lambda;
  return out;
}

}  // namespace bibee
