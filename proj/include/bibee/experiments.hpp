// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_EXPERIMENTS_HPP
#define BIBEE_EXPERIMENTS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "bibee/bem.hpp"
#include "bibee/core.hpp"
#include "bibee/mesh.hpp"

namespace bibee
{

struct ExperimentConfig
{
  std::uint64_t seed = 1;
  std::size_t num_configs = 100;
  std::size_t charges_per_config = 25;
  double sphere_radius = 5.0;
  double max_abs_charge = 0.5;
  double placement_margin = 0.95;
  DielectricPair dielectrics{4.0, 80.0};
  std::vector<MethodSpec> methods = {{Method::Kirkwood}, {Method::CFA}, {Method::P},
                                     {Method::M, 0.0}};
  std::vector<double> lambda_grid = {-0.10, -0.12, -0.14, -0.16, -0.18, -0.20, -0.22};
  int n_max = kDefaultSeriesOrder;
  bool auto_escalate = true;
  int threads = 1;
  SolverOptions solver;

  // Throws DomainError when a field is out of range.
  void validate() const;
};

// Deterministic per-(seed, index) random stream: a Mersenne Twister seeded with
// splitmix64(splitmix64(seed) ^ splitmix64(index + 1)). Uniform doubles are
// built from the top 53 bits so the stream does not depend on the standard
// library's distribution implementations.
class SubstreamRng
{
public:
  SubstreamRng(std::uint64_t seed, std::uint64_t index);

  // Uniform in [0, 1).
  double uniform();

  static std::uint64_t splitmix64(std::uint64_t x);

private:
  std::mt19937_64 engine_;
};

// 'charges_per_config' charges uniform in the ball of radius margin * b, with
// magnitudes uniform in [-max_abs_charge, max_abs_charge).
ChargeDistribution random_sphere_config(std::uint64_t seed, std::size_t index,
                                        const ExperimentConfig &cfg);

struct ComparisonRow
{
  std::uint64_t seed = 0;
  std::size_t index = 0;
  MethodSpec spec;
  double energy = 0.0;  // kcal/mol
  std::optional<double> truncation_estimate;
  int n_max = 0;
};

struct MethodSummary
{
  MethodSpec spec;
  double rmsd = 0.0;          // kcal/mol, vs Kirkwood
  double mean_dev_pct = 0.0;  // mean of |approx - exact| / |exact|, in percent
  std::size_t n = 0;
};

struct ComparisonReport
{
  ExperimentConfig config;
  std::vector<ComparisonRow> rows;  // ordered by (index, method order)
  std::vector<MethodSummary> summary;
  // Configurations violating CFA >= Kirkwood >= P, or, when net-charged,
  // P <= M(0) <= Kirkwood (slack 1e-10 |Kirkwood|).
  std::size_t bound_violations = 0;
  std::size_t configs_checked = 0;
};

// Summary statistics of approximations against reference values.
MethodSummary summarize(const MethodSpec &spec, std::span<const double> approx,
                        std::span<const double> exact);

// Analytic sphere methods always; BEM methods only when a surface is supplied.
ComparisonReport run_comparison(const ExperimentConfig &cfg,
                                std::shared_ptr<const PanelSurface> surface = nullptr);

struct SweepReport
{
  ComparisonReport comparison;       // Kirkwood + M(lambda) for every grid point
  std::vector<MethodSummary> per_lambda;  // grid order
  double best_lambda = 0.0;          // argmin of mean deviation, ties to smaller |lambda|
};

SweepReport lambda_sweep(const ExperimentConfig &cfg);

}  // namespace bibee

#endif  // BIBEE_EXPERIMENTS_HPP
