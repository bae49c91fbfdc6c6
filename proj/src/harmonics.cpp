// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bibee/errors.hpp"

namespace bibee
{

namespace
{

void check_args(int n, int m, double x)
{
  if (n < 0 || m < 0 || m > n)
  {
    throw DomainError("assoc_legendre requires 0 <= m <= n (n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + ")");
  }
  if (!(std::abs(x) <= 1.0))
  {
    throw DomainError("assoc_legendre requires |x| <= 1");
  }
}

// (n-m)!/(n+m)! as a running product, which stays in range far longer than the
// two factorials do.
double factorial_ratio(int n, int m)
{
  double r = 1.0;
  for (int k = n - m + 1; k <= n + m; k++)
  {
    r /= k;
  }
  return r;
}

struct Spherical
{
  double r;
  double cos_theta;
  double phi;
};

Spherical to_spherical(const Vec3 &p)
{
  const double r = p.norm();
  if (r == 0.0)
  {
    return {0.0, 1.0, 0.0};
  }
  return {r, std::clamp(p.z() / r, -1.0, 1.0), std::atan2(p.y(), p.x())};
}

}  // namespace

void assoc_legendre_column(int n_max, int m, double x, std::vector<double> &out)
{
  check_args(n_max, m, x);
  out.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (m > 0 && std::abs(x) == 1.0)
  {
    return;
  }
  // P_m^m = (2m-1)!! (1-x^2)^{m/2}
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  double pmm = 1.0;
  for (int k = 1; k <= m; k++)
  {
    pmm *= (2.0 * k - 1.0) * s;
  }
  out[m] = pmm;
  if (n_max == m)
  {
    return;
  }
  out[m + 1] = x * (2.0 * m + 1.0) * pmm;
  for (int n = m + 2; n <= n_max; n++)
  {
    out[n] = ((2.0 * n - 1.0) * x * out[n - 1] - (n + m - 1.0) * out[n - 2]) / (n - m);
  }
}

double assoc_legendre(int n, int m, double x)
{
  check_args(n, m, x);
  std::vector<double> col;
  assoc_legendre_column(n, m, x, col);
  return col[n];
}

MultipoleCoefficients::MultipoleCoefficients(int n_max, CoefficientKind kind)
  : n_max_(n_max), kind_(kind)
{
  if (n_max < 0)
  {
    throw DomainError("series order must be non-negative");
  }
  data_.assign(static_cast<std::size_t>((n_max + 1) * (n_max + 1)), {0.0, 0.0});
}

MultipoleCoefficients source_moments(const ChargeDistribution &dist, int n_max)
{
  MultipoleCoefficients E(n_max, CoefficientKind::SourceE);
  std::vector<double> col;
  std::vector<double> rpow(static_cast<std::size_t>(n_max) + 1);
  for (const auto &c : dist.charges())
  {
    const auto sph = to_spherical(c.position);
    if (sph.r == 0.0)
    {
      E(0, 0) += c.magnitude;
      continue;
    }
    rpow[0] = 1.0;
    for (int n = 1; n <= n_max; n++)
    {
      rpow[n] = rpow[n - 1] * sph.r;
    }
    for (int m = 0; m <= n_max; m++)
    {
      assoc_legendre_column(n_max, m, sph.cos_theta, col);
      const std::complex<double> phase = std::polar(1.0, -m * sph.phi);
      double ratio = factorial_ratio(m, m);
      for (int n = m; n <= n_max; n++)
      {
        if (n > m)
        {
          ratio *= static_cast<double>(n - m) / static_cast<double>(n + m);
        }
        const double mag = c.magnitude * rpow[n] * ratio * col[n];
        E(n, m) += mag * phase;
        if (m > 0)
        {
          E(n, -m) += mag * std::conj(phase);
        }
      }
    }
  }
  return E;
}

double eval_interior_potential(const MultipoleCoefficients &B, const Vec3 &point)
{
  const int n_max = B.n_max();
  const auto sph = to_spherical(point);
  if (sph.r == 0.0)
  {
    const auto v = B(0, 0);
    if (std::abs(v.imag()) > 1e-9 * (std::abs(v.real()) + 1e-300))
    {
      throw ConsistencyError("reaction potential has a non-negligible imaginary part");
    }
    return v.real();
  }
  std::vector<double> col;
  std::vector<double> rpow(static_cast<std::size_t>(n_max) + 1);
  rpow[0] = 1.0;
  for (int n = 1; n <= n_max; n++)
  {
    rpow[n] = rpow[n - 1] * sph.r;
  }
  std::complex<double> psi{0.0, 0.0};
  for (int m = 0; m <= n_max; m++)
  {
    assoc_legendre_column(n_max, m, sph.cos_theta, col);
    const std::complex<double> phase = std::polar(1.0, m * sph.phi);
    for (int n = m; n <= n_max; n++)
    {
      const double radial = rpow[n] * col[n];
      psi += B(n, m) * radial * phase;
      if (m > 0)
      {
        psi += B(n, -m) * radial * std::conj(phase);
      }
    }
  }
  if (std::abs(psi.imag()) > 1e-9 * (std::abs(psi.real()) + 1e-300))
  {
    throw ConsistencyError("reaction potential has a non-negligible imaginary part");
  }
  return psi.real();
}

double moment_contraction(const MultipoleCoefficients &B, const MultipoleCoefficients &E)
{
  if (E.n_max() < B.n_max())
  {
    throw DomainError("source moments are truncated below the reaction coefficients");
  }
  std::complex<double> sum{0.0, 0.0};
  for (int m = 0; m <= B.n_max(); m++)
  {
    double inv_ratio = 1.0 / factorial_ratio(m, m);
    for (int n = m; n <= B.n_max(); n++)
    {
      if (n > m)
      {
        inv_ratio *= static_cast<double>(n + m) / static_cast<double>(n - m);
      }
      sum += B(n, m) * std::conj(E(n, m)) * inv_ratio;
      if (m > 0)
      {
        sum += B(n, -m) * std::conj(E(n, -m)) * inv_ratio;
      }
    }
  }
  if (std::abs(sum.imag()) > 1e-9 * (std::abs(sum.real()) + 1e-300))
  {
    throw ConsistencyError("moment contraction has a non-negligible imaginary part");
  }
  return sum.real();
}

MultipoleCoefficients truncate_order(const MultipoleCoefficients &C, int n_max)
{
  if (n_max < 0 || n_max > C.n_max())
  {
    throw DomainError("truncation order out of range");
  }
  MultipoleCoefficients out(n_max, C.kind());
  for (int n = 0; n <= n_max; n++)
  {
    for (int m = -n; m <= n; m++)
    {
      out(n, m) = C(n, m);
    }
  }
  return out;
}

double truncation_tail_estimate(const ChargeDistribution &dist, double b, int n_max)
{
  if (!(b > 0.0))
  {
    throw DomainError("sphere radius must be positive");
  }
  const double rmax = dist.max_radius();
  if (rmax >= b)
  {
    throw DomainError("charge lies on or outside the sphere");
  }
  const double t = (rmax / b) * (rmax / b);
  if (t == 0.0)
  {
    return 0.0;
  }
  const double q = dist.gross_charge();
  return q * q / b * std::pow(t, n_max + 1) / (1.0 - t);
}

}  // namespace bibee
