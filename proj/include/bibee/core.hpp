// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_CORE_HPP
#define BIBEE_CORE_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace bibee
{

using Vec3 = Eigen::Vector3d;

// Coulomb constant in kcal mol^-1 Angstrom e^-2 (CHARMM convention). Energies are
// assembled in Gaussian units (e^2/Angstrom) and multiplied by this exactly once.
inline constexpr double kCoulomb = 332.0636;

// A point charge: position in Angstrom, magnitude in elementary charges.
struct Charge
{
  Vec3 position = Vec3::Zero();
  double magnitude = 0.0;
};

// Ordered, non-empty set of point charges.
class ChargeDistribution
{
public:
  explicit ChargeDistribution(std::vector<Charge> charges, std::string label = {});

  std::span<const Charge> charges() const noexcept { return charges_; }
  std::size_t size() const noexcept { return charges_.size(); }
  const Charge &operator[](std::size_t i) const { return charges_[i]; }
  const std::string &label() const noexcept { return label_; }

  // Optional per-charge radii (from PQR input); empty when not supplied.
  std::span<const double> radii() const noexcept { return radii_; }
  ChargeDistribution with_radii(std::vector<double> radii) const;

  // Sum of |q_k|.
  double gross_charge() const;
  // Largest distance of any charge from the origin.
  double max_radius() const;

private:
  std::vector<Charge> charges_;
  std::string label_;
  std::vector<double> radii_;
};

double net_charge(const ChargeDistribution &dist);

// Interior (eps_in) and exterior (eps_out) dielectric constants.
class DielectricPair
{
public:
  DielectricPair(double eps_in, double eps_out);

  double eps_in() const noexcept { return eps_in_; }
  double eps_out() const noexcept { return eps_out_; }

  // (eps_in - eps_out) / ((eps_in + eps_out) / 2), always in (-2, 2).
  double eps_hat() const noexcept;
  // 1/eps_in - 1/eps_out.
  double born_factor() const noexcept { return 1.0 / eps_in_ - 1.0 / eps_out_; }

private:
  double eps_in_;
  double eps_out_;
};

double eps_hat(double eps_in, double eps_out);

// Largest series order for which the unnormalized Legendre/factorial convention
// stays inside double range.
inline constexpr int kMaxSeriesOrder = 80;
inline constexpr int kDefaultSeriesOrder = 25;

struct SphereModel
{
  SphereModel(double radius, DielectricPair dielectrics, int n_max = kDefaultSeriesOrder);

  double radius;
  DielectricPair dielectrics;
  int n_max;
};

enum class Method
{
  Kirkwood,
  CFA,
  P,
  Lambda,
  M,
  GB,
  GBeps,
  BemExact,
  BemCFA,
  BemP,
  BemM,
  BemLambda,
};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
// True for methods whose value depends on a lambda parameter.
bool method_uses_lambda(Method m);

// Default GBeps interpolation parameter.
inline constexpr double kGbEpsAlpha = 0.57;

// A method together with its scalar parameters. lambda applies to the
// Lambda/M families, alpha to GBeps.
struct MethodSpec
{
  Method method = Method::Kirkwood;
  double lambda = 0.0;
  double alpha = kGbEpsAlpha;

  friend bool operator==(const MethodSpec &, const MethodSpec &) = default;
};

// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

// "kirkwood", "m", "m:-0.2", "lambda:-0.1", "gbeps:0.57" ...
MethodSpec parse_method_spec(std::string_view text);
std::string format_method_spec(const MethodSpec &spec);

struct EnergyResult
{
  double value = 0.0;  // kcal/mol
  Method method = Method::Kirkwood;
  std::optional<double> lambda;
  std::optional<double> truncation_error_estimate;  // kcal/mol, >= 0
  std::map<std::string, std::string> metadata;
};

}  // namespace bibee

#endif  // BIBEE_CORE_HPP
