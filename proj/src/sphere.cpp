// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bibee/errors.hpp"
#include "bibee/generalized_born.hpp"

namespace bibee
{

BibeeVariant BibeeVariant::with_lambda(double lambda)
{
  if (!(lambda >= -0.5 && lambda <= 0.0))
  {
    throw DomainError("lambda must lie in [-0.5, 0]");
  }
  return {Kind::Lambda, lambda};
}

BibeeVariant BibeeVariant::m(double lambda)
{
  if (!(lambda >= -0.5 && lambda <= 0.0))
  {
    throw DomainError("lambda must lie in [-0.5, 0]");
  }
  return {Kind::M, lambda};
}

double BibeeVariant::lambda_for_mode(int n) const
{
  switch (kind)
  {
    case Kind::CFA:
      return -0.5;
    case Kind::P:
      return 0.0;
    case Kind::Lambda:
      return lambda;
    case Kind::M:
      return n == 0 ? -0.5 : lambda;
  }
  return lambda;
}

double kirkwood_mode_factor(int n, const DielectricPair &eps)
{
  const double e1 = eps.eps_in();
  const double e2 = eps.eps_out();
  return (e1 - e2) * (n + 1) / (e1 * (e1 * n + e2 * (n + 1)));
}

namespace
{

double cfa_factor(int n, double e1, double e2)
{
  return (e1 - e2) / (e1 * e2) * (n + 1.0) / (2.0 * n + 1.0);
}

double p_factor(int n, double e1, double e2)
{
  return 2.0 * (e1 - e2) / (e1 * (e1 + e2)) * (n + 1.0) / (2.0 * n + 1.0);
}

double lambda_factor(int n, const DielectricPair &eps, double lambda)
{
  const double scale = 1.0 + eps.eps_hat() * lambda;
  if (!(scale > 0.0))
  {
    throw DomainError("degenerate BIBEE scale 1 + eps_hat * lambda <= 0");
  }
  return p_factor(n, eps.eps_in(), eps.eps_out()) / scale;
}

template <class FactorFn>
MultipoleCoefficients scale_modes(const MultipoleCoefficients &E, const SphereModel &model,
                                  FactorFn factor)
{
  if (E.kind() != CoefficientKind::SourceE)
  {
    throw DomainError("reaction coefficients require source moments");
  }
  MultipoleCoefficients B(E.n_max(), CoefficientKind::ReactionB);
  double bpow = model.radius;  // b^(2n+1)
  for (int n = 0; n <= E.n_max(); n++)
  {
    const double s = factor(n) / bpow;
    for (int m = -n; m <= n; m++)
    {
      B(n, m) = s * E(n, m);
    }
    bpow *= model.radius * model.radius;
  }
  return B;
}

void check_inside(const ChargeDistribution &dist, double radius)
{
  for (std::size_t k = 0; k < dist.size(); k++)
  {
    if (dist[k].position.norm() > kMaxRelativeRadius * radius)
    {
      throw DomainError("charge " + std::to_string(k) + " lies outside " +
                        format_number(kMaxRelativeRadius) + " of the sphere radius");
    }
  }
}

}  // namespace

double bibee_mode_factor(int n, const DielectricPair &eps, const BibeeVariant &variant)
{
  const double e1 = eps.eps_in();
  const double e2 = eps.eps_out();
  switch (variant.kind)
  {
    case BibeeVariant::Kind::CFA:
      return cfa_factor(n, e1, e2);
    case BibeeVariant::Kind::P:
      return p_factor(n, e1, e2);
    case BibeeVariant::Kind::Lambda:
      return lambda_factor(n, eps, variant.lambda);
    case BibeeVariant::Kind::M:
      return n == 0 ? cfa_factor(0, e1, e2) : lambda_factor(n, eps, variant.lambda);
  }
  return 0.0;
}

MultipoleCoefficients kirkwood_reaction_coefficients(const MultipoleCoefficients &E,
                                                     const SphereModel &model)
{
  return scale_modes(E, model,
                     [&](int n) { return kirkwood_mode_factor(n, model.dielectrics); });
}

MultipoleCoefficients bibee_reaction_coefficients(const MultipoleCoefficients &E,
                                                  const SphereModel &model,
                                                  const BibeeVariant &variant)
{
  return scale_modes(E, model,
                     [&](int n) { return bibee_mode_factor(n, model.dielectrics, variant); });
}

namespace testing
{

MultipoleCoefficients per_mode_lambda_reaction_coefficients(const MultipoleCoefficients &E,
                                                            const SphereModel &model,
                                                            std::span<const double> lambdas)
{
  if (lambdas.size() < static_cast<std::size_t>(E.n_max()) + 1)
  {
    throw DomainError("need one lambda per series order");
  }
  return scale_modes(E, model,
                     [&](int n) { return lambda_factor(n, model.dielectrics, lambdas[n]); });
}

}  // namespace testing

double series_tail_energy_bound(const ChargeDistribution &dist, const SphereModel &model)
{
  const double e1 = model.dielectrics.eps_in();
  const double e2 = model.dielectrics.eps_out();
  const double c = std::abs(e1 - e2) / (e1 * std::min(e1, e2));
  if (c == 0.0)
  {
    return 0.0;
  }
  return 0.5 * kCoulomb * c * truncation_tail_estimate(dist, model.radius, model.n_max);
}

namespace
{

EnergyResult finish_energy(double q_psi, const MultipoleCoefficients &B,
                           const ChargeDistribution &dist, const SphereModel &model, Method method,
                           std::optional<double> lambda)
{
  EnergyResult out;
  out.value = 0.5 * kCoulomb * q_psi;
  out.method = method;
  out.lambda = lambda;
  SphereModel truncated = model;
  truncated.n_max = B.n_max();
  out.truncation_error_estimate = series_tail_energy_bound(dist, truncated);
  out.metadata["n_max"] = std::to_string(B.n_max());
  return out;
}

// Same energy as solvation_energy, contracted against moments already at hand.
EnergyResult energy_from_moments(const MultipoleCoefficients &B, const MultipoleCoefficients &E,
                                 const ChargeDistribution &dist, const SphereModel &model,
                                 Method method, std::optional<double> lambda)
{
  return finish_energy(moment_contraction(B, E), B, dist, model, method, lambda);
}

}  // namespace

EnergyResult solvation_energy(const MultipoleCoefficients &B, const ChargeDistribution &dist,
                              const SphereModel &model, Method method,
                              std::optional<double> lambda)
{
  if (B.kind() != CoefficientKind::ReactionB)
  {
    throw DomainError("solvation energy requires reaction coefficients");
  }
  check_inside(dist, model.radius);
  double sum = 0.0;
  for (const auto &c : dist.charges())
  {
    sum += c.magnitude * eval_interior_potential(B, c.position);
  }
  return finish_energy(sum, B, dist, model, method, lambda);
}

double mode_ratio(const BibeeVariant &variant, int n)
{
  if (n < 0)
  {
    throw DomainError("mode order must be non-negative");
  }
  switch (variant.kind)
  {
    case BibeeVariant::Kind::CFA:
      return (n + 1.0) / (2.0 * n + 1.0);
    case BibeeVariant::Kind::P:
      return (n + 1.0) / (n + 0.5);
    case BibeeVariant::Kind::Lambda:
    case BibeeVariant::Kind::M:
    {
      // eps_hat -> -2 in the limit.
      const double lam = variant.lambda_for_mode(n);
      return (n + 1.0) / ((n + 0.5) * (1.0 - 2.0 * lam));
    }
  }
  return 0.0;
}

double pair_interaction_kirkwood(const Charge &i, const Charge &j, const SphereModel &model)
{
  const double A = model.radius;
  const double ri = i.position.norm();
  const double rj = j.position.norm();
  const double t = ri * rj / (A * A);
  if (ri >= A || rj >= A || t >= 1.0)
  {
    throw DomainError("pair interaction requires both charges strictly inside the sphere");
  }
  const double x = model.dielectrics.eps_in() / model.dielectrics.eps_out();
  double series = 1.0;
  if (t > 0.0)
  {
    const double c = std::clamp(i.position.dot(j.position) / (ri * rj), -1.0, 1.0);
    double p_prev = 1.0;  // P_0
    double p_cur = c;     // P_1
    double tl = 1.0;
    for (int l = 1; l <= model.n_max; l++)
    {
      tl *= t;
      series += tl * p_cur / (1.0 + x * l / (l + 1.0));
      const double p_next = ((2.0 * l + 1.0) * c * p_cur - l * p_prev) / (l + 1.0);
      p_prev = p_cur;
      p_cur = p_next;
    }
  }
  return -kCoulomb * i.magnitude * j.magnitude * (1.0 - x) / (A * model.dielectrics.eps_in()) *
         series;
}

double kirkwood_pair_total(const ChargeDistribution &dist, const SphereModel &model)
{
  double sum = 0.0;
  for (const auto &a : dist.charges())
  {
    for (const auto &b : dist.charges())
    {
      sum += pair_interaction_kirkwood(a, b, model);
    }
  }
  return 0.5 * sum;
}

SphereModel escalate_series_order(const ChargeDistribution &dist, const SphereModel &model,
                                  double rel_tol)
{
  check_inside(dist, model.radius);
  SphereModel current = model;
  // Moments do not depend on the truncation order; compute them once at the cap.
  const auto full = source_moments(dist, kMaxSeriesOrder);
  while (current.n_max < kMaxSeriesOrder)
  {
    const auto E = truncate_order(full, current.n_max);
    const auto energy = energy_from_moments(kirkwood_reaction_coefficients(E, current), E, dist,
                                            current, Method::Kirkwood, std::nullopt);
    if (*energy.truncation_error_estimate <= rel_tol * std::abs(energy.value))
    {
      break;
    }
    current.n_max = std::min(kMaxSeriesOrder, std::max(1, 2 * current.n_max));
  }
  return current;
}

std::vector<EnergyResult> analytic_energies(const ChargeDistribution &dist,
                                            const SphereModel &model,
                                            std::span<const MethodSpec> specs)
{
  std::vector<EnergyResult> out;
  out.reserve(specs.size());
  std::optional<MultipoleCoefficients> E;
  std::optional<GBParameters> gb;
  for (const auto &spec : specs)
  {
    switch (spec.method)
    {
      case Method::Kirkwood:
      case Method::CFA:
      case Method::P:
      case Method::Lambda:
      case Method::M:
      {
        check_inside(dist, model.radius);
        if (!E)
        {
          E = source_moments(dist, model.n_max);
        }
        std::optional<double> lambda;
        MultipoleCoefficients B = [&] {
          switch (spec.method)
          {
            case Method::Kirkwood:
              return kirkwood_reaction_coefficients(*E, model);
            case Method::CFA:
              return bibee_reaction_coefficients(*E, model, BibeeVariant::cfa());
            case Method::P:
              return bibee_reaction_coefficients(*E, model, BibeeVariant::p());
            case Method::Lambda:
              lambda = spec.lambda;
              return bibee_reaction_coefficients(*E, model, BibeeVariant::with_lambda(spec.lambda));
            default:
              lambda = spec.lambda;
              return bibee_reaction_coefficients(*E, model, BibeeVariant::m(spec.lambda));
          }
        }();
        out.push_back(energy_from_moments(B, *E, dist, model, spec.method, lambda));
        break;
      }
      case Method::GB:
      case Method::GBeps:
      {
        if (!gb)
        {
          gb = sphere_gb_parameters(dist, model);
        }
        if (spec.method == Method::GB)
        {
          out.push_back(gb_still_energy(dist, gb->effective_radii, model.dielectrics));
        }
        else
        {
          GBParameters params = *gb;
          params.alpha = spec.alpha;
          out.push_back(gb_epsilon_energy(dist, params, model.dielectrics));
        }
        break;
      }
      default:
        throw DomainError("method '" + std::string(method_name(spec.method)) +
                          "' is not an analytic sphere method");
    }
  }
  return out;
}

EnergyResult analytic_energy(const ChargeDistribution &dist, const SphereModel &model,
                             const MethodSpec &spec)
{
  return analytic_energies(dist, model, std::span<const MethodSpec>(&spec, 1)).front();
}

}  // namespace bibee
