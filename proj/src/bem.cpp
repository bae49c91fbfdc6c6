// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/bem.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/IterativeSolvers>

#include "bibee/errors.hpp"
#include "bibee/parallel.hpp"

namespace bibee
{

namespace
{

constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_field(const SurfaceField &rhs)
{
  if (!rhs.surface)
  {
    throw DomainError("surface field has no surface");
  }
  if (static_cast<std::size_t>(rhs.values.size()) != rhs.surface->size())
  {
    throw DomainError("surface field length does not match the panel count");
  }
}

Method bem_method(BibeeVariant::Kind kind)
{
  switch (kind)
  {
    case BibeeVariant::Kind::CFA:
      return Method::BemCFA;
    case BibeeVariant::Kind::P:
      return Method::BemP;
    case BibeeVariant::Kind::Lambda:
      return Method::BemLambda;
    case BibeeVariant::Kind::M:
      return Method::BemM;
  }
  return Method::BemP;
}

}  // namespace

SurfaceField coulomb_field_rhs(const ChargeDistribution &dist,
                               std::shared_ptr<const PanelSurface> surface,
                               const DielectricPair &eps)
{
  if (!surface)
  {
    throw DomainError("no surface given");
  }
  const auto &s = *surface;
  for (std::size_t k = 0; k < dist.size(); k++)
  {
    const Vec3 &r = dist[k].position;
    if (s.distance_to_surface(r) < kNearSingularDistance)
    {
      throw DomainError("charge " + std::to_string(k) + " lies within " +
                        format_number(kNearSingularDistance) + " A of a panel");
    }
    if (!s.contains(r))
    {
      throw DomainError("charge " + std::to_string(k) + " is not inside the surface");
    }
  }
  SurfaceField out{surface, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()))};
  const double scale = eps.eps_hat() / eps.eps_in();
  if (scale == 0.0)
  {
    return out;
  }
  for (std::size_t i = 0; i < s.size(); i++)
  {
    const Vec3 &c = s.centroids()[i];
    const Vec3 &n = s.normals()[i];
    double field = 0.0;
    for (const auto &q : dist.charges())
    {
      const Vec3 d = c - q.position;
      const double r = d.norm();
      field += q.magnitude * n.dot(d) / (r * r * r);
    }
    // -eps_hat * d/dn (q / (eps_in |r - r_k|)) = eps_hat q (c - r_k).n / (eps_in r^3)
    out.values[static_cast<Eigen::Index>(i)] = scale * field;
  }
  return out;
}

Eigen::MatrixXd assemble_dstar(const PanelSurface &surface, int threads)
{
  const auto n = static_cast<Eigen::Index>(surface.size());
  const auto &c = surface.centroids();
  const auto &nrm = surface.normals();
  const auto &area = surface.areas();
  Eigen::MatrixXd D(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); i++)
    {
      for (Eigen::Index j = 0; j < n; j++)
      {
        if (i == j)
        {
          D(i, j) = 0.0;
          continue;
        }
        const Vec3 d = c[i] - c[j];
        const double r = d.norm();
        D(i, j) = -area[j] * nrm[i].dot(d) / (kFourPi * r * r * r);
      }
    }
  });
  // Column condition sum_i A_i D_ij = -A_j / 2.
  const Eigen::RowVectorXd weighted = area.transpose() * D;
  for (Eigen::Index j = 0; j < n; j++)
  {
    D(j, j) = (-0.5 * area[j] - weighted[j]) / area[j];
  }
  return D;
}

SurfaceCharge bibee_surface_charge(const SurfaceField &rhs, const DielectricPair &eps,
                                   const BibeeVariant &variant)
{
  check_field(rhs);
  const double eh = eps.eps_hat();
  SurfaceCharge out;
  out.surface = rhs.surface;
  out.method = bem_method(variant.kind);
  switch (variant.kind)
  {
    case BibeeVariant::Kind::CFA:
      out.density = rhs.values / (1.0 - 0.5 * eh);
      break;
    case BibeeVariant::Kind::P:
      out.density = rhs.values;
      break;
    case BibeeVariant::Kind::Lambda:
    {
      const double scale = 1.0 + eh * variant.lambda;
      if (!(scale > 0.0))
      {
        throw DomainError("degenerate BIBEE scale 1 + eps_hat * lambda <= 0");
      }
      out.density = rhs.values / scale;
      out.lambda = variant.lambda;
      break;
    }
    case BibeeVariant::Kind::M:
    {
      const auto &a = rhs.surface->areas();
      const double mean = a.dot(rhs.values) / a.sum();
      const double scale = 1.0 + eh * variant.lambda;
      if (!(scale > 0.0))
      {
        throw DomainError("degenerate BIBEE scale 1 + eps_hat * lambda <= 0");
      }
      out.density = (rhs.values.array() - mean) / scale + mean / (1.0 - 0.5 * eh);
      out.lambda = variant.lambda;
      out.metadata["field_mean"] = format_number(mean);
      break;
    }
  }
  return out;
}

ExactSolver::ExactSolver(std::shared_ptr<const PanelSurface> surface, const DielectricPair &eps,
                         SolverOptions options)
  : surface_(std::move(surface)), eps_(eps), options_(options)
{
  if (!surface_)
  {
    throw DomainError("no surface given");
  }
  const std::size_t n = surface_->size();
  bool use_direct = false;
  switch (options_.kind)
  {
    case SolverOptions::Kind::Auto:
      use_direct = n <= options_.dense_limit;
      break;
    case SolverOptions::Kind::Direct:
      if (n > options_.dense_limit)
      {
        throw DomainError("direct solve requested for " + std::to_string(n) +
                          " panels, above the dense limit of " +
                          std::to_string(options_.dense_limit));
      }
      use_direct = true;
      break;
    case SolverOptions::Kind::Iterative:
      break;
  }
  if (!use_direct && !(options_.tolerance > 0.0 && options_.tolerance <= 1e-2))
  {
    throw DomainError("iterative tolerance must lie in (0, 1e-2]");
  }
  if (!use_direct && (options_.restart < 1 || options_.max_iterations < 1))
  {
    throw DomainError("restart and iteration cap must be positive");
  }
  dstar_ = assemble_dstar(*surface_, options_.threads);
  system_ = eps_.eps_hat() * dstar_;
  system_.diagonal().array() += 1.0;
  if (use_direct)
  {
    lu_.emplace(system_);
  }
}

SurfaceCharge ExactSolver::solve(const SurfaceField &rhs) const
{
  check_field(rhs);
  if (rhs.surface != surface_ && rhs.surface->size() != surface_->size())
  {
    throw DomainError("right-hand side belongs to a different surface");
  }
  SurfaceCharge out;
  out.surface = surface_;
  out.method = Method::BemExact;
  const double rhs_norm = rhs.values.norm();
  if (rhs_norm == 0.0)
  {
    out.density = Eigen::VectorXd::Zero(rhs.values.size());
    out.metadata["solver"] = lu_ ? "direct" : "iterative";
    out.metadata["relative_residual"] = "0";
    out.metadata["iterations"] = "0";
    return out;
  }
  const double tol = lu_ ? 1e-10 : std::max(options_.tolerance, 1e-10);
  if (lu_)
  {
    out.density = lu_->solve(rhs.values);
    out.metadata["solver"] = "direct";
    out.metadata["iterations"] = "0";
  }
  else
  {
    Eigen::GMRES<Eigen::MatrixXd, Eigen::IdentityPreconditioner> gmres;
    gmres.set_restart(options_.restart);
    gmres.setMaxIterations(options_.max_iterations);
    gmres.setTolerance(options_.tolerance);
    gmres.compute(system_);
    out.density = gmres.solve(rhs.values);
    out.metadata["solver"] = "iterative";
    out.metadata["iterations"] = std::to_string(gmres.iterations());
  }
  const double residual = (system_ * out.density - rhs.values).norm() / rhs_norm;
  out.metadata["relative_residual"] = format_number(residual);
  if (!(residual <= tol))
  {
    throw NonConvergenceError("exact solve did not reach the residual target (relative residual " +
                                  format_number(residual) + ")",
                              residual);
  }
  return out;
}

SurfaceCharge exact_surface_charge(const SurfaceField &rhs, const DielectricPair &eps,
                                   const SolverOptions &options)
{
  check_field(rhs);
  return ExactSolver(rhs.surface, eps, options).solve(rhs);
}

EnergyResult reaction_energy(const SurfaceCharge &sigma, const ChargeDistribution &dist)
{
  if (!sigma.surface ||
      static_cast<std::size_t>(sigma.density.size()) != sigma.surface->size())
  {
    throw DomainError("surface charge does not match its surface");
  }
  const auto &s = *sigma.surface;
  const Eigen::VectorXd panel_charge = sigma.density.cwiseProduct(s.areas());
  double sum = 0.0;
  for (const auto &q : dist.charges())
  {
    double psi = 0.0;
    for (std::size_t j = 0; j < s.size(); j++)
    {
      psi += panel_charge[static_cast<Eigen::Index>(j)] / (q.position - s.centroids()[j]).norm();
    }
    sum += q.magnitude * psi / kFourPi;
  }
  EnergyResult out;
  out.value = 0.5 * kCoulomb * sum;
  out.method = sigma.method;
  out.lambda = sigma.lambda;
  out.metadata = sigma.metadata;
  out.metadata["panels"] = std::to_string(s.size());
  return out;
}

double rayleigh_quotient(const Eigen::MatrixXd &D, const Eigen::VectorXd &areas,
                         const Eigen::VectorXd &v)
{
  const Eigen::VectorXd wv = areas.cwiseProduct(v);
  return wv.dot(D * v) / wv.dot(v);
}

SpectrumEstimate estimate_extremal_eigenvalues(const Eigen::MatrixXd &D,
                                               const Eigen::VectorXd &areas, int iterations)
{
  const auto n = D.rows();
  // Deterministic start vector with components in every mode.
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    start[i] = 1.0 + std::sin(1.7 * static_cast<double>(i) + 0.3);
  }
  auto power = [&](double shift) {
    Eigen::VectorXd v = start.normalized();
    for (int it = 0; it < iterations; it++)
    {
      Eigen::VectorXd w = D * v + shift * v;
      v = w / w.norm();
    }
    return rayleigh_quotient(D, areas, v);
  };
  return {power(0.0), power(0.5)};
}

EnergyResult bem_energy(const ChargeDistribution &dist,
                        std::shared_ptr<const PanelSurface> surface, const DielectricPair &eps,
                        const MethodSpec &spec, const SolverOptions &options)
{
  const auto rhs = coulomb_field_rhs(dist, surface, eps);
  switch (spec.method)
  {
    case Method::BemExact:
      return reaction_energy(exact_surface_charge(rhs, eps, options), dist);
    case Method::BemCFA:
      return reaction_energy(bibee_surface_charge(rhs, eps, BibeeVariant::cfa()), dist);
    case Method::BemP:
      return reaction_energy(bibee_surface_charge(rhs, eps, BibeeVariant::p()), dist);
    case Method::BemLambda:
      return reaction_energy(
          bibee_surface_charge(rhs, eps, BibeeVariant::with_lambda(spec.lambda)), dist);
    case Method::BemM:
      return reaction_energy(bibee_surface_charge(rhs, eps, BibeeVariant::m(spec.lambda)), dist);
    default:
      throw DomainError("method '" + std::string(method_name(spec.method)) +
                        "' is not a boundary-element method");
  }
}

}  // namespace bibee
