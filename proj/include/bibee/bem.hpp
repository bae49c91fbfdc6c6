// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_BEM_HPP
#define BIBEE_BEM_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

#include "bibee/core.hpp"
#include "bibee/mesh.hpp"
#include "bibee/sphere.hpp"

namespace bibee
{

// Right-hand side of the polarization-charge equation, one value per panel:
// -eps_hat times the outward normal field of the interior Coulomb potential
// sum_k q_k / (eps_in |r - r_k|), evaluated at panel centroids.
struct SurfaceField
{
  std::shared_ptr<const PanelSurface> surface;
  Eigen::VectorXd values;
};

// Polarization charge density per panel; psi(r) = sum_j sigma_j A_j / (4 pi |r - c_j|).
struct SurfaceCharge
{
  std::shared_ptr<const PanelSurface> surface;
  Eigen::VectorXd density;
  Method method = Method::BemExact;
  std::optional<double> lambda;
  std::map<std::string, std::string> metadata;
};

// Charges closer than this to any panel are rejected.
inline constexpr double kNearSingularDistance = 1e-6;

SurfaceField coulomb_field_rhs(const ChargeDistribution &dist,
                               std::shared_ptr<const PanelSurface> surface,
                               const DielectricPair &eps);

// Dense normal-field operator, one-point centroid collocation:
//   D_ij = A_j d/dn(c_i) 1 / (4 pi |c_i - c_j|)  for i != j,
// diagonal chosen so that sum_i A_i D_ij = -A_j / 2 for every column j.
Eigen::MatrixXd assemble_dstar(const PanelSurface &surface, int threads = 1);

// Diagonal BIBEE approximations. For M the area-weighted mean of the field is
// scaled as CFA and the remainder as Lambda.
SurfaceCharge bibee_surface_charge(const SurfaceField &rhs, const DielectricPair &eps,
                                   const BibeeVariant &variant);

struct SolverOptions
{
  enum class Kind
  {
    Auto,       // direct up to dense_limit panels, iterative beyond
    Direct,
    Iterative,
  };
  Kind kind = Kind::Auto;
  double tolerance = 1e-8;
  int restart = 50;
  int max_iterations = 500;
  std::size_t dense_limit = 3000;
  int threads = 1;
};

// Solves (I + eps_hat D*) sigma = rhs. Reuse one solver across right-hand sides
// on the same surface; the operator (and for direct solves its LU factors) is
// built once.
class ExactSolver
{
public:
  ExactSolver(std::shared_ptr<const PanelSurface> surface, const DielectricPair &eps,
              SolverOptions options = {});

  SurfaceCharge solve(const SurfaceField &rhs) const;

  const Eigen::MatrixXd &dstar() const noexcept { return dstar_; }
  bool direct() const noexcept { return lu_.has_value(); }

private:
  std::shared_ptr<const PanelSurface> surface_;
  DielectricPair eps_;
  SolverOptions options_;
  Eigen::MatrixXd dstar_;
  Eigen::MatrixXd system_;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

SurfaceCharge exact_surface_charge(const SurfaceField &rhs, const DielectricPair &eps,
                                   const SolverOptions &options = {});

// (k_e / 2) sum_k q_k sum_j sigma_j A_j / (4 pi |r_k - c_j|).
EnergyResult reaction_energy(const SurfaceCharge &sigma, const ChargeDistribution &dist);

// Area-weighted Rayleigh quotient  v^T W D v / v^T W v, W = diag(areas).
double rayleigh_quotient(const Eigen::MatrixXd &D, const Eigen::VectorXd &areas,
                         const Eigen::VectorXd &v);

struct SpectrumEstimate
{
  double lowest = 0.0;
  double highest = 0.0;
};

// Power iterations on D and on D + I/2 (whose dominant eigenvalues are the
// lowest and the highest of D when the spectrum lies in [-1/2, 0]).
SpectrumEstimate estimate_extremal_eigenvalues(const Eigen::MatrixXd &D,
                                               const Eigen::VectorXd &areas,
                                               int iterations = 200);

// Convenience: energy of one BEM method for a distribution on a surface.
EnergyResult bem_energy(const ChargeDistribution &dist,
                        std::shared_ptr<const PanelSurface> surface, const DielectricPair &eps,
                        const MethodSpec &spec, const SolverOptions &options = {});

}  // namespace bibee

#endif  // BIBEE_BEM_HPP
