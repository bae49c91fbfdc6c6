// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <stdexcept>
#include <utility>

#include "bibee/errors.hpp"

namespace bibee
{

ChargeDistribution::ChargeDistribution(std::vector<Charge> charges, std::string label)
  : charges_(std::move(charges)), label_(std::move(label))
{
  if (charges_.empty())
  {
    throw EmptyInputError("charge distribution is empty");
  }
  for (std::size_t i = 0; i < charges_.size(); i++)
  {
    const auto &c = charges_[i];
    if (!c.position.allFinite() || !std::isfinite(c.magnitude))
    {
      throw DomainError("charge " + std::to_string(i) + " has a non-finite component");
    }
  }
}

ChargeDistribution ChargeDistribution::with_radii(std::vector<double> radii) const
{
  if (radii.size() != charges_.size())
  {
    throw DomainError("radius count does not match charge count");
  }
  ChargeDistribution out = *this;
  out.radii_ = std::move(radii);
  return out;
}

double ChargeDistribution::gross_charge() const
{
  double s = 0.0;
  for (const auto &c : charges_)
  {
    s += std::abs(c.magnitude);
  }
  return s;
}

double ChargeDistribution::max_radius() const
{
  double r = 0.0;
  for (const auto &c : charges_)
  {
    r = std::max(r, c.position.norm());
  }
  return r;
}

double net_charge(const ChargeDistribution &dist)
{
  double s = 0.0;
  for (const auto &c : dist.charges())
  {
    s += c.magnitude;
  }
  return s;
}

double eps_hat(double eps_in, double eps_out)
{
  return (eps_in - eps_out) / (0.5 * (eps_in + eps_out));
}

DielectricPair::DielectricPair(double eps_in, double eps_out) : eps_in_(eps_in), eps_out_(eps_out)
{
  if (!(eps_in > 0.0) || !(eps_out > 0.0) || !std::isfinite(eps_in) || !std::isfinite(eps_out))
  {
    throw DomainError("dielectric constants must be finite and strictly positive");
  }
}

double DielectricPair::eps_hat() const noexcept
{
  return bibee::eps_hat(eps_in_, eps_out_);
}

SphereModel::SphereModel(double radius_, DielectricPair dielectrics_, int n_max_)
  : radius(radius_), dielectrics(dielectrics_), n_max(n_max_)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw DomainError("sphere radius must be positive");
  }
  if (n_max < 0 || n_max > kMaxSeriesOrder)
  {
    throw DomainError("series order must lie in [0, " + std::to_string(kMaxSeriesOrder) + "]");
  }
}

namespace
{

constexpr std::array<std::pair<Method, std::string_view>, 12> kMethodNames{{
    {Method::Kirkwood, "kirkwood"},
    {Method::CFA, "cfa"},
    {Method::P, "p"},
    {Method::Lambda, "lambda"},
    {Method::M, "m"},
    {Method::GB, "gb"},
    {Method::GBeps, "gbeps"},
    {Method::BemExact, "bem-exact"},
    {Method::BemCFA, "bem-cfa"},
    {Method::BemP, "bem-p"},
    {Method::BemM, "bem-m"},
    {Method::BemLambda, "bem-lambda"},
}};

}  // namespace

std::string_view method_name(Method m)
{
  for (const auto &[tag, name] : kMethodNames)
  {
    if (tag == m)
    {
      return name;
    }
  }
  return "unknown";
}

Method parse_method(std::string_view name)
{
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto &[tag, n] : kMethodNames)
  {
    if (n == lower)
    {
      return tag;
    }
  }
  throw ParseError("unknown method '" + std::string(name) + "'");
}

std::string format_number(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

MethodSpec parse_method_spec(std::string_view text)
{
  MethodSpec spec;
  const auto colon = text.find(':');
  spec.method = parse_method(text.substr(0, colon));
  if (colon != std::string_view::npos)
  {
    const std::string arg(text.substr(colon + 1));
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(arg, &used);
    }
    catch (const std::exception &)
    {
      used = 0;
    }
    if (used == 0 || used != arg.size())
    {
      throw ParseError("bad method parameter in '" + std::string(text) + "'");
    }
    if (spec.method == Method::GBeps)
    {
      spec.alpha = v;
    }
    else if (method_uses_lambda(spec.method))
    {
      spec.lambda = v;
    }
    else
    {
      throw ParseError("method '" + std::string(method_name(spec.method)) +
                       "' takes no parameter");
    }
  }
  return spec;
}

std::string format_method_spec(const MethodSpec &spec)
{
  std::string out(method_name(spec.method));
  if (method_uses_lambda(spec.method))
  {
    out += ":" + format_number(spec.lambda);
  }
  else if (spec.method == Method::GBeps)
  {
    out += ":" + format_number(spec.alpha);
  }
  return out;
}

bool method_uses_lambda(Method m)
{
  return m == Method::Lambda || m == Method::M || m == Method::BemM || m == Method::BemLambda;
}

}  // namespace bibee
