// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_SPHERE_HPP
#define BIBEE_SPHERE_HPP

#include <span>
#include <vector>

#include "bibee/core.hpp"
#include "bibee/harmonics.hpp"

namespace bibee
{

// Diagonal approximation of the normal-field boundary operator by lambda * I.
// CFA is lambda = -1/2 and P is lambda = 0; M applies CFA to the monopole mode
// and lambda to every other mode.
struct BibeeVariant
{
  enum class Kind
  {
    CFA,
    P,
    Lambda,
    M,
  };

  Kind kind = Kind::CFA;
  double lambda = 0.0;

  static BibeeVariant cfa() { return {Kind::CFA, -0.5}; }
  static BibeeVariant p() { return {Kind::P, 0.0}; }
  static BibeeVariant with_lambda(double lambda);
  static BibeeVariant m(double lambda = 0.0);

  // Effective lambda applied to mode n.
  double lambda_for_mode(int n) const;
};

// Eigenvalue of the sphere's normal-field operator for multipole order n.
inline double sphere_operator_eigenvalue(int n)
{
  return -1.0 / (2.0 * (2 * n + 1));
}

// Per-mode factor f_n such that B_nm = f_n E_nm / b^(2n+1).
double kirkwood_mode_factor(int n, const DielectricPair &eps);
double bibee_mode_factor(int n, const DielectricPair &eps, const BibeeVariant &variant);

MultipoleCoefficients kirkwood_reaction_coefficients(const MultipoleCoefficients &E,
                                                     const SphereModel &model);
MultipoleCoefficients bibee_reaction_coefficients(const MultipoleCoefficients &E,
                                                  const SphereModel &model,
                                                  const BibeeVariant &variant);

namespace testing
{
// Lambda variant with an independent lambda per order n (lambdas[n]). With
// lambdas[n] = sphere_operator_eigenvalue(n) this recovers the exact solution.
MultipoleCoefficients per_mode_lambda_reaction_coefficients(const MultipoleCoefficients &E,
                                                            const SphereModel &model,
                                                            std::span<const double> lambdas);
}  // namespace testing

// Charges may sit no further out than this fraction of the radius.
inline constexpr double kMaxRelativeRadius = 0.999;

// (k_e / 2) sum_k q_k psi(r_k), with the series tail bound attached.
EnergyResult solvation_energy(const MultipoleCoefficients &B, const ChargeDistribution &dist,
                              const SphereModel &model, Method method = Method::Kirkwood,
                              std::optional<double> lambda = std::nullopt);

// Upper bound (kcal/mol) on the energy omitted by truncating at model.n_max. Valid
// for the exact solution and every BIBEE variant: each per-mode factor is bounded
// by |eps_in - eps_out| / (eps_in * min(eps_in, eps_out)).
double series_tail_energy_bound(const ChargeDistribution &dist, const SphereModel &model);

// Ratio B^variant_nm / B_nm in the limit eps_in / eps_out -> 0.
double mode_ratio(const BibeeVariant &variant, int n);

// Reaction-field interaction of a charge pair (self-interaction when i == j),
// kcal/mol, from the Legendre series truncated at model.n_max. The total energy
// is half the double sum over ordered pairs including the diagonal.
double pair_interaction_kirkwood(const Charge &i, const Charge &j, const SphereModel &model);
double kirkwood_pair_total(const ChargeDistribution &dist, const SphereModel &model);

// Raises model.n_max (up to kMaxSeriesOrder) until the tail bound is below
// rel_tol of the Kirkwood energy magnitude.
SphereModel escalate_series_order(const ChargeDistribution &dist, const SphereModel &model,
                                  double rel_tol = 1e-6);

// One-call evaluation of any analytic method for the sphere at model.n_max.
EnergyResult analytic_energy(const ChargeDistribution &dist, const SphereModel &model,
                             const MethodSpec &spec);
// Same, for several methods sharing one set of source moments.
std::vector<EnergyResult> analytic_energies(const ChargeDistribution &dist,
                                            const SphereModel &model,
                                            std::span<const MethodSpec> specs);

}  // namespace bibee

#endif  // BIBEE_SPHERE_HPP
