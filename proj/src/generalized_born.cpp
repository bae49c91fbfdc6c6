// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/generalized_born.hpp"

#include <cmath>
#include <string>

#include "bibee/errors.hpp"

namespace bibee
{

namespace
{

void check_radii(const ChargeDistribution &dist, std::span<const double> radii)
{
  if (radii.size() != dist.size())
  {
    throw DomainError("expected " + std::to_string(dist.size()) + " effective radii, got " +
                      std::to_string(radii.size()));
  }
  for (double R : radii)
  {
    if (!(R > 0.0) || !std::isfinite(R))
    {
      throw DomainError("effective radii must be positive");
    }
  }
}

// sum_ij q_i q_j / f_ij over ordered pairs, diagonal f_ii = R_i.
double still_double_sum(const ChargeDistribution &dist, std::span<const double> radii)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.size(); i++)
  {
    sum += dist[i].magnitude * dist[i].magnitude / radii[i];
    for (std::size_t j = i + 1; j < dist.size(); j++)
    {
      const double r = (dist[i].position - dist[j].position).norm();
      sum += 2.0 * dist[i].magnitude * dist[j].magnitude / still_distance(r, radii[i], radii[j]);
    }
  }
  return sum;
}

}  // namespace

double still_distance(double r, double Ri, double Rj)
{
  const double rr = r * r;
  const double RR = Ri * Rj;
  return std::sqrt(rr + RR * std::exp(-rr / (4.0 * RR)));
}

GBParameters sphere_gb_parameters(const ChargeDistribution &dist, const SphereModel &model)
{
  const double b = model.radius;
  GBParameters params;
  params.electrostatic_radius = b;
  params.effective_radii.reserve(dist.size());
  for (const auto &c : dist.charges())
  {
    const double r2 = c.position.squaredNorm();
    if (r2 >= b * b)
    {
      throw DomainError("charge lies on or outside the sphere");
    }
    params.effective_radii.push_back(b - r2 / b);
  }
  return params;
}

EnergyResult gb_still_energy(const ChargeDistribution &dist, std::span<const double> radii,
                             const DielectricPair &eps)
{
  check_radii(dist, radii);
  EnergyResult out;
  out.method = Method::GB;
  out.value = -0.5 * kCoulomb * eps.born_factor() * still_double_sum(dist, radii);
  return out;
}

EnergyResult gb_still_energy(const ChargeDistribution &dist, const GBParameters &params,
                             const DielectricPair &eps)
{
  return gb_still_energy(dist, std::span<const double>(params.effective_radii), eps);
}

EnergyResult gb_epsilon_energy(const ChargeDistribution &dist, const GBParameters &params,
                               const DielectricPair &eps)
{
  check_radii(dist, params.effective_radii);
  if (!(params.electrostatic_radius > 0.0))
  {
    throw DomainError("electrostatic radius must be positive");
  }
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
  {
    throw DomainError("GBeps alpha must lie in [0, 1]");
  }
  const double ax = params.alpha * eps.eps_in() / eps.eps_out();
  const double q = net_charge(dist);
  // The alpha*x/A term is the same for every pair, so it sums to Q^2 * a x / A.
  const double sum = still_double_sum(dist, params.effective_radii) +
                     q * q * ax / params.electrostatic_radius;
  EnergyResult out;
  out.method = Method::GBeps;
  out.value = -0.5 * kCoulomb * eps.born_factor() / (1.0 + ax) * sum;
  out.metadata["alpha"] = format_number(params.alpha);
  return out;
}

}  // namespace bibee
