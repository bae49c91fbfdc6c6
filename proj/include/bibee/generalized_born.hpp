// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_GENERALIZED_BORN_HPP
#define BIBEE_GENERALIZED_BORN_HPP

#include <span>
#include <vector>

#include "bibee/core.hpp"

namespace bibee
{

struct GBParameters
{
  double electrostatic_radius = 0.0;   // A
  std::vector<double> effective_radii;  // R~_i, one per charge
  double alpha = kGbEpsAlpha;
};

// Still's interpolating distance sqrt(r^2 + Ri Rj exp(-r^2 / (4 Ri Rj))).
double still_distance(double r, double Ri, double Rj);

// Analytic sphere values: A = b and R~_i = b - |r_i|^2 / b.
GBParameters sphere_gb_parameters(const ChargeDistribution &dist, const SphereModel &model);

// -(k_e/2)(1/eps_in - 1/eps_out) sum_ij q_i q_j / f_ij over all ordered pairs,
// with f_ii = R_i.
EnergyResult gb_still_energy(const ChargeDistribution &dist, std::span<const double> radii,
                             const DielectricPair &eps);
EnergyResult gb_still_energy(const ChargeDistribution &dist, const GBParameters &params,
                             const DielectricPair &eps);

// GBeps: pair terms -(1/2)(1/eps_in - 1/eps_out) q_i q_j / (1 + a x)
//        * [1/f_ij(R~_i, R~_j) + a x / A],   x = eps_in / eps_out,
// summed over all ordered pairs.
EnergyResult gb_epsilon_energy(const ChargeDistribution &dist, const GBParameters &params,
                               const DielectricPair &eps);

}  // namespace bibee

#endif  // BIBEE_GENERALIZED_BORN_HPP
