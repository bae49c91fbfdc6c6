// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/pqr.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "bibee/errors.hpp"

namespace bibee
{

namespace
{

bool parse_double(std::string_view tok, double &value)
{
  if (!tok.empty() && tok.front() == '+')
  {
    tok.remove_prefix(1);
  }
  const auto *end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool is_integer_token(std::string_view tok)
{
  if (!tok.empty() && (tok.front() == '-' || tok.front() == '+'))
  {
    tok.remove_prefix(1);
  }
  if (tok.empty())
  {
    return false;
  }
  for (char c : tok)
  {
    if (c < '0' || c > '9')
    {
      return false;
    }
  }
  return true;
}

}  // namespace

ChargeDistribution read_pqr(std::istream &in, std::string label)
{
  std::vector<Charge> charges;
  std::vector<double> radii;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line))
  {
    lineno++;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;)
    {
      tok.push_back(std::move(t));
    }
    if (tok.empty() || (tok[0] != "ATOM" && tok[0] != "HETATM"))
    {
      continue;
    }
    // ATOM serial name resName [chain] resSeq x y z q r [trailing...]
    if (tok.size() < 10)
    {
      throw ParseError("PQR record has too few fields", lineno);
    }
    std::size_t first = 5;
    if (!is_integer_token(tok[4]) ||
        (tok.size() >= 11 && is_integer_token(tok[5]) && is_integer_token(tok[4])))
    {
      first = 6;
    }
    if (tok.size() < first + 5)
    {
      throw ParseError("PQR record has too few fields", lineno);
    }
    static constexpr const char *kFieldNames[] = {"x", "y", "z", "charge", "radius"};
    double v[5];
    for (int k = 0; k < 5; k++)
    {
      if (!parse_double(tok[first + k], v[k]))
      {
        throw ParseError("PQR record has non-numeric " + std::string(kFieldNames[k]) + " field '" +
                             tok[first + k] + "'",
                         lineno);
      }
    }
    charges.push_back(Charge{Vec3(v[0], v[1], v[2]), v[3]});
    radii.push_back(v[4]);
  }
  if (charges.empty())
  {
    throw EmptyInputError("PQR input contains no ATOM/HETATM records");
  }
  return ChargeDistribution(std::move(charges), std::move(label)).with_radii(std::move(radii));
}

ChargeDistribution load_pqr(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open PQR file '" + path.string() + "'");
  }
  return read_pqr(in, path.filename().string());
}

void write_pqr(std::ostream &out, const ChargeDistribution &dist)
{
  const auto radii = dist.radii();
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < dist.size(); i++)
  {
    const auto &c = dist[i];
    os << "ATOM " << (i + 1) << " Q CHG " << (i + 1) << ' ' << c.position.x() << ' '
       << c.position.y() << ' ' << c.position.z() << ' ' << c.magnitude << ' '
       << (radii.empty() ? 0.0 : radii[i]) << '\n';
  }
  os << "END\n";
  out << os.str();
}

}  // namespace bibee
