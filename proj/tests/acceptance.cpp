// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. One PASS/FAIL line per criterion; tolerances and time
// limits are fixed here and never read from the environment.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bibee/bem.hpp"
#include "bibee/cli.hpp"
#include "bibee/experiments.hpp"
#include "bibee/generalized_born.hpp"
#include "bibee/harmonics.hpp"
#include "bibee/mesh.hpp"
#include "bibee/sphere.hpp"

using namespace bibee;

namespace
{

struct Outcome
{
  bool ok = true;
  std::string detail;
};

double rel(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::string fmt(const char *f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

const std::vector<MethodSpec> kAnalytic = {
    {Method::Kirkwood}, {Method::CFA}, {Method::P}, {Method::Lambda, -0.2}, {Method::M, 0.0}};

// Deterministic uniform variates for parameter sweeps inside criteria.
struct Uniform
{
  SubstreamRng rng;
  double operator()(double a, double b) { return a + (b - a) * rng.uniform(); }
};

Outcome c1_born()
{
  Uniform u{SubstreamRng(101, 0)};
  double worst = 0;
  for (int i = 0; i < 200; i++)
  {
    const double b = u(1, 20), e1 = u(1, 20), e2 = u(1, 100), q = u(-2, 2);
    const ChargeDistribution d({{Vec3::Zero(), q}});
    const SphereModel model(b, DielectricPair(e1, e2));
    const double born = -(kCoulomb / 2) * (1 / e1 - 1 / e2) * q * q / b;
    worst = std::max({worst, rel(analytic_energy(d, model, {Method::Kirkwood}).value, born),
                      rel(analytic_energy(d, model, {Method::CFA}).value, born)});
  }
  return {worst <= 1e-12, "max rel err " + fmt("%.2e", worst) + " (tol 1e-12, 200 cases)"};
}

Outcome c2_equal_dielectric()
{
  ExperimentConfig cfg;
  const auto surface = std::make_shared<const PanelSurface>(make_icosphere(5.0, 2));
  std::size_t nonzero = 0, checked = 0;
  for (std::size_t i = 0; i < 20; i++)
  {
    const auto d = random_sphere_config(202, i, cfg);
    const double e = 1.0 + static_cast<double>(i);
    const DielectricPair eps(e, e);
    const SphereModel model(5.0, eps);
    std::vector<MethodSpec> specs = kAnalytic;
    specs.push_back({Method::GB});
    specs.push_back({Method::GBeps});
    for (const auto &r : analytic_energies(d, model, specs))
    {
      nonzero += r.value != 0.0;
      checked++;
    }
    const auto rhs = coulomb_field_rhs(d, surface, eps);
    nonzero += (rhs.values.array() != 0.0).count();
    checked += static_cast<std::size_t>(rhs.values.size());
  }
  return {nonzero == 0, std::to_string(nonzero) + " nonzero of " + std::to_string(checked) + " values"};
}

Outcome c3_bound_ordering()
{
  ExperimentConfig cfg;
  cfg.seed = 303;
  cfg.num_configs = 1000;
  cfg.methods = {{Method::Kirkwood}, {Method::CFA}, {Method::P}, {Method::M, 0.0}};
  cfg.threads = 4;
  const auto report = run_comparison(cfg);
  // Recheck the ordering here from the row energies instead of trusting the report.
  std::size_t violations = 0, net_charged = 0;
  for (std::size_t i = 0; i < cfg.num_configs; i++)
  {
    const double k = report.rows[4 * i].energy, c = report.rows[4 * i + 1].energy;
    const double p = report.rows[4 * i + 2].energy, m = report.rows[4 * i + 3].energy;
    const double slack = 1e-10 * std::abs(k);
    violations += !(c >= k - slack && k >= p - slack);
    if (net_charge(random_sphere_config(cfg.seed, i, cfg)) != 0.0)
    {
      net_charged++;
      violations += !(p <= m + slack && m <= k + slack);
    }
  }
  return {violations == 0 && report.bound_violations == 0,
          std::to_string(violations) + " violations over 1000 configs (" + std::to_string(net_charged) +
              " net-charged)"};
}

Outcome c4_eigenfunctions()
{
  const SphereModel model(5.0, DielectricPair(4, 80), 12);
  double worst = 0;
  for (int np = 0; np <= 6; np++)
  {
    for (int mp = -np; mp <= np; mp++)
    {
      MultipoleCoefficients E(12, CoefficientKind::SourceE);
      E(np, mp) = {0.8, -0.3};
      if (mp != 0)
      {
        E(np, -mp) = std::conj(E(np, mp));
      }
      else
      {
        E(np, 0) = {0.8, 0.0};
      }
      const std::vector<MultipoleCoefficients> outs = {
          kirkwood_reaction_coefficients(E, model),
          bibee_reaction_coefficients(E, model, BibeeVariant::cfa()),
          bibee_reaction_coefficients(E, model, BibeeVariant::p()),
          bibee_reaction_coefficients(E, model, BibeeVariant::with_lambda(-0.2)),
          bibee_reaction_coefficients(E, model, BibeeVariant::m(0.0))};
      for (const auto &B : outs)
      {
        const double on = std::abs(B(np, mp));
        for (int n = 0; n <= 12; n++)
        {
          for (int m = -n; m <= n; m++)
          {
            if (n == np && std::abs(m) == std::abs(mp))
            {
              continue;
            }
            worst = std::max(worst, std::abs(B(n, m)) / on);
          }
        }
      }
    }
  }
  return {worst <= 1e-12, "max off-mode/on-mode " + fmt("%.2e", worst) + " (tol 1e-12)"};
}

Outcome c5_asymptotic_ratios()
{
  const DielectricPair eps(1e-8, 1.0);
  double worst = 0;
  for (int n = 0; n <= 10; n++)
  {
    const double k = kirkwood_mode_factor(n, eps);
    worst = std::max(worst, rel(bibee_mode_factor(n, eps, BibeeVariant::cfa()) / k, (n + 1.0) / (2 * n + 1.0)));
    worst = std::max(worst, rel(bibee_mode_factor(n, eps, BibeeVariant::p()) / k, (n + 1.0) / (n + 0.5)));
  }
  return {worst <= 1e-6, "max rel err " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

Outcome c6_per_mode_recovery()
{
  ExperimentConfig cfg;
  double worst = 0;
  for (std::size_t i = 0; i < 10; i++)
  {
    const auto d = random_sphere_config(606, i, cfg);
    const SphereModel model(5.0, DielectricPair(4, 80), 40);
    const auto E = source_moments(d, 40);
    std::vector<double> lambdas;
    for (int n = 0; n <= 40; n++)
    {
      lambdas.push_back(-1.0 / (2.0 * (2 * n + 1)));
    }
    const auto R = testing::per_mode_lambda_reaction_coefficients(E, model, lambdas);
    const auto K = kirkwood_reaction_coefficients(E, model);
    for (int n = 0; n <= 40; n++)
    {
      for (int m = -n; m <= n; m++)
      {
        if (K(n, m) != std::complex<double>(0, 0))
        {
          worst = std::max(worst, std::abs(R(n, m) - K(n, m)) / std::abs(K(n, m)));
        }
      }
    }
  }
  return {worst <= 1e-13, "max rel err " + fmt("%.2e", worst) + " (tol 1e-13)"};
}

Outcome c7_pair_consistency()
{
  ExperimentConfig cfg;
  double worst = 0;
  for (std::size_t i = 0; i < 100; i++)
  {
    const auto d = random_sphere_config(707, i, cfg);
    const SphereModel model(5.0, DielectricPair(4, 80), kMaxSeriesOrder);
    const double series = analytic_energy(d, model, {Method::Kirkwood}).value;
    worst = std::max(worst, rel(kirkwood_pair_total(d, model), series));
  }
  return {worst <= 1e-10, "max rel err " + fmt("%.2e", worst) + " over 100 configs (tol 1e-10)"};
}

Outcome c8_bem_convergence()
{
  const DielectricPair eps(4, 80);
  const ChargeDistribution d({{Vec3(1.0, 0.5, 2.0), 1.0}, {Vec3(-1.5, 0.3, -0.7), -0.6}});
  const SphereModel model(5.0, eps, 60);
  const std::vector<std::pair<Method, MethodSpec>> pairs = {
      {Method::BemExact, {Method::Kirkwood}}, {Method::BemCFA, {Method::CFA}},
      {Method::BemP, {Method::P}}, {Method::BemM, {Method::M, 0.0}}};
  std::vector<double> exact_err;
  double worst_variant_5120 = 0, exact_5120 = 0;
  std::string detail;
  for (int k : {2, 3, 4})
  {
    const auto s = std::make_shared<const PanelSurface>(make_icosphere(5.0, k));
    const auto rhs = coulomb_field_rhs(d, s, eps);
    const ExactSolver solver(s, eps);
    double variant_worst = 0;
    for (const auto &[bem, ana] : pairs)
    {
      double e = 0;
      if (bem == Method::BemExact)
      {
        e = reaction_energy(solver.solve(rhs), d).value;
      }
      else
      {
        const auto v = bem == Method::BemCFA ? BibeeVariant::cfa()
                       : bem == Method::BemP ? BibeeVariant::p()
                                             : BibeeVariant::m(0.0);
        e = reaction_energy(bibee_surface_charge(rhs, eps, v), d).value;
      }
      const double err = rel(e, analytic_energy(d, model, ana).value);
      if (bem == Method::BemExact)
      {
        exact_err.push_back(err);
      }
      else
      {
        variant_worst = std::max(variant_worst, err);
      }
    }
    detail += std::to_string(s->size()) + ":" + fmt("%.3f%%", 100 * exact_err.back()) + " ";
    if (k == 4)
    {
      worst_variant_5120 = variant_worst;
      exact_5120 = exact_err.back();
    }
  }
  const bool monotone = exact_err[0] > exact_err[1] && exact_err[1] > exact_err[2];
  // "Same envelope": each BIBEE variant within the 2 % bound required of the exact solve.
  const bool ok = monotone && exact_5120 < 0.02 && worst_variant_5120 < 0.02;
  return {ok, "exact err " + detail + "; variants at 5120 max " + fmt("%.3f%%", 100 * worst_variant_5120)};
}

Outcome c9_spectrum()
{
  const auto s = make_icosphere(5.0, 4);
  const auto D = assemble_dstar(s, 4);
  const auto est = estimate_extremal_eigenvalues(D, s.areas());
  Eigen::VectorXd dipole(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); i++)
  {
    dipole[static_cast<Eigen::Index>(i)] = s.centroids()[i].z() / s.centroids()[i].norm();
  }
  const double rq = rayleigh_quotient(D, s.areas(), dipole);
  const bool ok = std::abs(est.lowest + 0.5) <= 0.02 && std::abs(est.highest) <= 0.02 &&
                  std::abs(rq + 1.0 / 6.0) <= 0.02;
  return {ok, "lowest " + fmt("%.5f", est.lowest) + ", highest " + fmt("%.5f", est.highest) +
                  ", dipole " + fmt("%.5f", rq) + " (tol 0.02)"};
}

Outcome c10_gb_epsilon()
{
  // Pinned seed; two charges uniform in the 0.95 b ball, |q| <= 0.5.
  ExperimentConfig cfg;
  cfg.seed = 1;
  cfg.charges_per_config = 2;
  const DielectricPair eps(1, 80);
  const SphereModel model(5.0, eps, kMaxSeriesOrder);
  double err[3] = {0, 0, 0};
  const double alphas[3] = {0.57, 0.0, 1.0};
  for (std::size_t i = 0; i < 100; i++)
  {
    const auto d = random_sphere_config(cfg.seed, i, cfg);
    const double k = kirkwood_pair_total(d, model);
    auto p = sphere_gb_parameters(d, model);
    for (int a = 0; a < 3; a++)
    {
      p.alpha = alphas[a];
      err[a] += rel(gb_epsilon_energy(d, p, eps).value, k) / 100.0;
    }
  }
  const bool ok = err[0] < err[1] && err[0] < err[2];
  return {ok, "mean rel err alpha=0.57 " + fmt("%.4f", err[0]) + ", alpha=0 " + fmt("%.4f", err[1]) +
                  ", alpha=1 " + fmt("%.4f", err[2])};
}

Outcome c11_determinism()
{
  const auto dir = std::filesystem::temp_directory_path() / "bibee_acceptance";
  std::filesystem::create_directories(dir);
  auto once = [&](const std::string &name, const std::string &threads) {
    const auto prefix = (dir / name).string();
    std::ostringstream out, err;
    const std::vector<std::string> args = {"--seed", "1101", "--threads", threads, "--out", prefix,
                                           "experiment", "--num-configs", "200"};
    if (run_cli(args, out, err) != 0)
    {
      return std::string("<failed: ") + err.str() + ">";
    }
    std::ifstream in(prefix + ".csv", std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const auto a = once("run_a", "1");
  const auto b = once("run_b", "1");
  const auto c = once("run_c", "4");
  const bool ok = !a.empty() && a.front() != '<' && a == b && a == c;
  return {ok, std::to_string(a.size()) + " bytes; repeat " + (a == b ? "identical" : "DIFFERENT") +
                  ", 4 threads " + (a == c ? "identical" : "DIFFERENT")};
}

}  // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char *name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Born exactness", 1, c1_born},
      {2, "Equal-dielectric identity", 1, c2_equal_dielectric},
      {3, "Bound ordering", 30, c3_bound_ordering},
      {4, "Eigenfunction preservation", 5, c4_eigenfunctions},
      {5, "Asymptotic ratios", 1, c5_asymptotic_ratios},
      {6, "Per-mode exact recovery", 1, c6_per_mode_recovery},
      {7, "Pairwise consistency", 30, c7_pair_consistency},
      {8, "BEM convergence", 120, c8_bem_convergence},
      {9, "Discrete operator spectrum", 120, c9_spectrum},
      {10, "GB-epsilon sanity", 10, c10_gb_epsilon},
      {11, "Determinism", 10, c11_determinism},
  };
  int failures = 0;
  for (const auto &c : criteria)
  {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::printf("%s  %2d  %-28s %7.2fs (limit %gs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_s, in_time ? "" : ", EXCEEDED", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
