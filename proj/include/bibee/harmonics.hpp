// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_HARMONICS_HPP
#define BIBEE_HARMONICS_HPP

#include <complex>
#include <vector>

#include "bibee/core.hpp"

namespace bibee
{

// Unnormalized associated Legendre function P_n^m(x) for 0 <= m <= n, |x| <= 1,
// WITHOUT the Condon-Shortley phase. Computed by upward recurrence in n.
double assoc_legendre(int n, int m, double x);

// Fills out[n] = P_n^m(x) for n = m..n_max (entries below m are zero).
void assoc_legendre_column(int n_max, int m, double x, std::vector<double> &out);

enum class CoefficientKind
{
  SourceE,
  ReactionB,
};

// Complex coefficients c_{nm} for 0 <= n <= n_max, -n <= m <= n, stored in a
// flat triangular array.
class MultipoleCoefficients
{
public:
  MultipoleCoefficients(int n_max, CoefficientKind kind);

  int n_max() const noexcept { return n_max_; }
  CoefficientKind kind() const noexcept { return kind_; }

  std::complex<double> &operator()(int n, int m) { return data_[index(n, m)]; }
  const std::complex<double> &operator()(int n, int m) const { return data_[index(n, m)]; }

  std::size_t size() const noexcept { return data_.size(); }
  static std::size_t index(int n, int m) noexcept
  {
    return static_cast<std::size_t>(n * n + n + m);
  }

private:
  int n_max_;
  CoefficientKind kind_;
  std::vector<std::complex<double>> data_;
};

// E_nm = sum_k q_k r_k^n (n-|m|)!/(n+|m|)! P_n^|m|(cos theta_k) exp(-i m phi_k),
// with positions taken relative to the origin.
MultipoleCoefficients source_moments(const ChargeDistribution &dist, int n_max);

// psi(r) = sum_nm B_nm r^n P_n^|m|(cos theta) exp(i m phi). Returns the real part;
// throws ConsistencyError when the imaginary part is not negligible.
double eval_interior_potential(const MultipoleCoefficients &B, const Vec3 &point);

// sum_k q_k psi(r_k) for the charges that produced E, without visiting the
// charges: by the addition theorem it equals sum_nm B_nm conj(E_nm) / ratio(n,m).
// Orders beyond B's n_max are ignored. Throws ConsistencyError on a complex result.
double moment_contraction(const MultipoleCoefficients &B, const MultipoleCoefficients &E);

// Copy of the orders 0..n_max.
MultipoleCoefficients truncate_order(const MultipoleCoefficients &C, int n_max);

// Geometric bound on the energy series tail beyond n_max, in e^2/Angstrom,
// before dielectric scaling:  (sum |q|)^2 / b * t^(n_max+1) / (1 - t),
// t = (max |r_k| / b)^2.  See sphere.hpp for the dielectric prefactor that
// turns this into an energy bound.
double truncation_tail_estimate(const ChargeDistribution &dist, double b, int n_max);

}  // namespace bibee

#endif  // BIBEE_HARMONICS_HPP
