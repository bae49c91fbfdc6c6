// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bibee/core.hpp"
#include "bibee/errors.hpp"
#include "bibee/pqr.hpp"
#include "oracles.hpp"

using namespace bibee;

static const std::string kData = BIBEE_TEST_DATA;

TEST_CASE("pqr: single record maps fields directly")
{
  const auto d = load_pqr(kData + "/one_charge.pqr");
  REQUIRE(d.size() == 1);
  CHECK(d[0].position == Vec3::Zero());
  CHECK(d[0].magnitude == -0.30);
  REQUIRE(d.radii().size() == 1);
  CHECK(d.radii()[0] == 1.85);
}

TEST_CASE("pqr: empty file is an empty-input error")
{
  CHECK_THROWS_AS(load_pqr(kData + "/empty.pqr"), EmptyInputError);
}

TEST_CASE("pqr: non-numeric charge names the line and the field")
{
  try
  {
    load_pqr(kData + "/bad_charge.pqr");
    FAIL("expected a parse error");
  }
  catch (const ParseError &e)
  {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("charge") != std::string::npos);
  }
}

TEST_CASE("pqr: chain identifier column is skipped")
{
  const auto d = load_pqr(kData + "/chain.pqr");
  REQUIRE(d.size() == 2);
  CHECK(d[0].position == Vec3(1, 2, 3));
  CHECK(d[1].magnitude == -0.25);
  CHECK(d.radii()[1] == 1.40);
}

TEST_CASE("pqr: missing file is a parse error")
{
  CHECK_THROWS_AS(load_pqr(kData + "/does_not_exist.pqr"), ParseError);
}

TEST_CASE("pqr: write/read round trip preserves values")
{
  oracle::Lcg g(11);
  for (int trial = 0; trial < 20; trial++)
  {
    const auto d = oracle::random_ball(g, 1 + trial, 7.0, 1.0);
    std::stringstream ss;
    write_pqr(ss, d);
    const auto back = read_pqr(ss);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); i++)
    {
      CHECK((back[i].position - d[i].position).norm() <= 1e-12 * (1 + d[i].position.norm()));
      CHECK(std::abs(back[i].magnitude - d[i].magnitude) <= 1e-12);
    }
  }
}

TEST_CASE("net_charge examples")
{
  CHECK(net_charge(ChargeDistribution({{Vec3::Zero(), 0.5}, {Vec3(1, 0, 0), -0.5}})) == 0.0);
  CHECK(net_charge(ChargeDistribution({{Vec3::Zero(), 1.0}})) == 1.0);

  oracle::Lcg g(3);
  const auto d = oracle::random_ball(g, 25, 5.0, 0.5);
  long double sum = 0;
  for (const auto &c : d.charges())
  {
    sum += c.magnitude;
  }
  CHECK(net_charge(d) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-14));
}

TEST_CASE("net_charge is additive and sign-odd")
{
  oracle::Lcg g(5);
  for (int trial = 0; trial < 50; trial++)
  {
    const auto a = oracle::random_ball(g, 1 + trial % 9, 4.0, 1.0);
    const auto b = oracle::random_ball(g, 1 + trial % 5, 4.0, 1.0);
    std::vector<Charge> both(a.charges().begin(), a.charges().end());
    both.insert(both.end(), b.charges().begin(), b.charges().end());
    std::vector<Charge> neg(a.charges().begin(), a.charges().end());
    for (auto &c : neg)
    {
      c.magnitude = -c.magnitude;
    }
    CHECK(net_charge(ChargeDistribution(both)) ==
          doctest::Approx(net_charge(a) + net_charge(b)).epsilon(1e-12));
    CHECK(net_charge(ChargeDistribution(neg)) == -net_charge(a));
  }
}

TEST_CASE("charge distribution validation")
{
  CHECK_THROWS_AS(ChargeDistribution({}), EmptyInputError);
  CHECK_THROWS_AS(ChargeDistribution({{Vec3(std::nan(""), 0, 0), 1.0}}), DomainError);
  CHECK_THROWS_AS(ChargeDistribution({{Vec3::Zero(), INFINITY}}), DomainError);
}

TEST_CASE("dielectric pair and eps_hat")
{
  CHECK_THROWS_AS(DielectricPair(0.0, 80.0), DomainError);
  CHECK_THROWS_AS(DielectricPair(4.0, -1.0), DomainError);
  CHECK(eps_hat(4, 4) == 0.0);
  CHECK(eps_hat(4, 80) == doctest::Approx(-76.0 / 42.0));
  oracle::Lcg g(9);
  for (int i = 0; i < 200; i++)
  {
    const double a = g.uniform(0.5, 100), b = g.uniform(0.5, 100);
    CHECK(eps_hat(a, b) == -eps_hat(b, a));
    CHECK(eps_hat(a, b) > -2.0);
    CHECK(eps_hat(a, b) < 2.0);
  }
}

TEST_CASE("sphere model validation")
{
  const DielectricPair eps(4, 80);
  CHECK_THROWS_AS(SphereModel(0.0, eps), DomainError);
  CHECK_THROWS_AS(SphereModel(5.0, eps, -1), DomainError);
  CHECK_THROWS_AS(SphereModel(5.0, eps, kMaxSeriesOrder + 1), DomainError);
  CHECK_NOTHROW(SphereModel(5.0, eps, kMaxSeriesOrder));
}

TEST_CASE("method spec parsing")
{
  CHECK(parse_method_spec("kirkwood").method == Method::Kirkwood);
  const auto m = parse_method_spec("m:-0.2");
  CHECK(m.method == Method::M);
  CHECK(m.lambda == -0.2);
  CHECK(parse_method_spec("gbeps:0.3").alpha == 0.3);
  CHECK(format_method_spec(m) == "m:-0.2");
  CHECK(parse_method_spec(format_method_spec(m)) == m);
  CHECK_THROWS_AS(parse_method_spec("nonsense"), ParseError);
  CHECK_THROWS_AS(parse_method_spec("m:abc"), ParseError);
  CHECK_THROWS_AS(parse_method_spec("kirkwood:1"), ParseError);
  for (auto meth : {Method::Kirkwood, Method::CFA, Method::P, Method::Lambda, Method::M,
                    Method::GB, Method::GBeps, Method::BemExact, Method::BemCFA, Method::BemP,
                    Method::BemM, Method::BemLambda})
  {
    CHECK(parse_method(method_name(meth)) == meth);
  }
}

TEST_CASE("format_number round-trips doubles")
{
  oracle::Lcg g(1);
  for (int i = 0; i < 1000; i++)
  {
    const double v = (g.uniform() - 0.5) * std::pow(10.0, g.uniform(-20, 20));
    CHECK(std::stod(format_number(v)) == v);
  }
}
