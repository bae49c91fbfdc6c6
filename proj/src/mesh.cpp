// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bibee/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include <Eigen/Geometry>

#include "bibee/errors.hpp"

namespace bibee
{

namespace
{

std::uint64_t edge_key(int a, int b)
{
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void check_topology(const std::vector<Triangle> &tris)
{
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(tris.size() * 3);
  for (std::size_t t = 0; t < tris.size(); t++)
  {
    for (int e = 0; e < 3; e++)
    {
      const int a = tris[t][e];
      const int b = tris[t][(e + 1) % 3];
      if (++directed[edge_key(a, b)] > 1)
      {
        throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") is used twice in the same direction (triangle " +
                            std::to_string(t) + "): non-manifold or inconsistently oriented");
      }
    }
  }
  for (const auto &[key, count] : directed)
  {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (directed.find(edge_key(b, a)) == directed.end())
    {
      throw TopologyError("surface is open: edge (" + std::to_string(a) + ", " +
                          std::to_string(b) + ") has no opposite neighbour");
    }
  }
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0)
  {
    return a;
  }
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3)
  {
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
  {
    return a + d1 / (d1 - d3) * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6)
  {
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
  {
    return a + d2 / (d2 - d6) * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
  {
    return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

PanelSurface::PanelSurface(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                           bool fix_orientation)
  : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
  if (triangles_.empty())
  {
    throw EmptyInputError("surface has no triangles");
  }
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); t++)
  {
    for (int v : triangles_[t])
    {
      if (v < 0 || v >= nv)
      {
        throw ParseError("triangle " + std::to_string(t) + " references vertex " +
                         std::to_string(v) + " out of range");
      }
    }
  }
  for (const auto &v : vertices_)
  {
    if (!v.allFinite())
    {
      throw GeometryError("surface has a non-finite vertex");
    }
  }
  check_topology(triangles_);
  derive();
  if (fix_orientation && gauss_sum(area_centroid()) > 0.5)
  {
    for (auto &t : triangles_)
    {
      std::swap(t[1], t[2]);
    }
    derive();
  }
}

void PanelSurface::derive()
{
  const std::size_t n = triangles_.size();
  centroids_.resize(n);
  normals_.resize(n);
  areas_.resize(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < n; t++)
  {
    const Vec3 &a = vertices_[triangles_[t][0]];
    const Vec3 &b = vertices_[triangles_[t][1]];
    const Vec3 &c = vertices_[triangles_[t][2]];
    const Vec3 cross = (b - a).cross(c - a);
    const double twice_area = cross.norm();
    if (!(0.5 * twice_area >= kMinPanelArea))
    {
      throw GeometryError("triangle " + std::to_string(t) + " is degenerate (area " +
                          format_number(0.5 * twice_area) + ")");
    }
    centroids_[t] = (a + b + c) / 3.0;
    normals_[t] = cross / twice_area;
    areas_[static_cast<Eigen::Index>(t)] = 0.5 * twice_area;
  }
}

Vec3 PanelSurface::area_centroid() const
{
  Vec3 s = Vec3::Zero();
  for (std::size_t j = 0; j < size(); j++)
  {
    s += areas_[static_cast<Eigen::Index>(j)] * centroids_[j];
  }
  return s / areas_.sum();
}

double PanelSurface::gauss_sum(const Vec3 &p) const
{
  double s = 0.0;
  for (std::size_t j = 0; j < size(); j++)
  {
    const Vec3 d = p - centroids_[j];
    const double r = d.norm();
    s += areas_[static_cast<Eigen::Index>(j)] * normals_[j].dot(d) / (r * r * r);
  }
  return s / (4.0 * std::numbers::pi);
}

bool PanelSurface::contains(const Vec3 &p) const
{
  return gauss_sum(p) < -0.5;
}

double PanelSurface::distance_to_surface(const Vec3 &p) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto &t : triangles_)
  {
    const Vec3 q = closest_point_on_triangle(p, vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    best = std::min(best, (p - q).norm());
  }
  return best;
}

PanelSurface PanelSurface::scaled(double s) const
{
  std::vector<Vec3> v = vertices_;
  for (auto &x : v)
  {
    x *= s;
  }
  return PanelSurface(std::move(v), triangles_, false);
}

namespace
{

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream &in, std::string &line, long &lineno)
{
  while (std::getline(in, line))
  {
    lineno++;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
    {
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

PanelSurface read_off(std::istream &in)
{
  std::string line;
  long lineno = 0;
  if (!next_content_line(in, line, lineno))
  {
    throw EmptyInputError("OFF input is empty");
  }
  std::istringstream hs(line);
  std::string magic;
  hs >> magic;
  if (magic != "OFF")
  {
    throw ParseError("missing OFF header", lineno);
  }
  long nv = -1, nf = -1, ne = 0;
  if (!(hs >> nv >> nf))
  {
    if (!next_content_line(in, line, lineno))
    {
      throw ParseError("missing OFF counts line", lineno);
    }
    std::istringstream cs(line);
    if (!(cs >> nv >> nf))
    {
      throw ParseError("bad OFF counts line", lineno);
    }
    cs >> ne;
  }
  if (nv <= 0 || nf <= 0)
  {
    throw EmptyInputError("OFF mesh has no vertices or faces");
  }
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; i++)
  {
    if (!next_content_line(in, line, lineno))
    {
      throw ParseError("OFF file ends before all vertices are read", lineno);
    }
    std::istringstream vs(line);
    double x, y, z;
    if (!(vs >> x >> y >> z))
    {
      throw ParseError("bad OFF vertex", lineno);
    }
    verts.emplace_back(x, y, z);
  }
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; i++)
  {
    if (!next_content_line(in, line, lineno))
    {
      throw ParseError("OFF file ends before all faces are read", lineno);
    }
    std::istringstream fs(line);
    int k = 0;
    if (!(fs >> k) || k < 3)
    {
      throw ParseError("bad OFF face", lineno);
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (auto &v : idx)
    {
      if (!(fs >> v))
      {
        throw ParseError("bad OFF face", lineno);
      }
    }
    for (int j = 1; j + 1 < k; j++)
    {
      tris.push_back({idx[0], idx[j], idx[j + 1]});
    }
  }
  return PanelSurface(std::move(verts), std::move(tris));
}

namespace
{

bool looks_like_header(const std::string &line, bool face_file)
{
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos || line[first] == '#')
  {
    return true;
  }
  std::istringstream ls(line);
  std::vector<std::string> tok;
  for (std::string t; ls >> t;)
  {
    tok.push_back(t);
  }
  // The MSMS counts line has four fields, two of them real (density, probe).
  if (tok.size() == 4)
  {
    return true;
  }
  if (face_file)
  {
    for (const auto &t : tok)
    {
      if (t.find('.') != std::string::npos)
      {
        return true;
      }
    }
  }
  return false;
}

template <class RecordFn>
void read_msms_records(std::istream &in, bool face_file, RecordFn record)
{
  std::string line;
  long lineno = 0;
  while (std::getline(in, line))
  {
    lineno++;
    if (lineno <= 3 && looks_like_header(line, face_file))
    {
      continue;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    record(line, lineno);
  }
}

}  // namespace

PanelSurface read_msms(std::istream &vert, std::istream &face)
{
  std::vector<Vec3> verts;
  read_msms_records(vert, false, [&](const std::string &line, long lineno) {
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z))
    {
      throw ParseError("bad MSMS vertex record", lineno);
    }
    verts.emplace_back(x, y, z);
  });
  std::vector<Triangle> tris;
  read_msms_records(face, true, [&](const std::string &line, long lineno) {
    std::istringstream ls(line);
    int a, b, c;
    if (!(ls >> a >> b >> c))
    {
      throw ParseError("bad MSMS face record", lineno);
    }
    tris.push_back({a - 1, b - 1, c - 1});
  });
  if (verts.empty() || tris.empty())
  {
    throw EmptyInputError("MSMS mesh has no vertices or faces");
  }
  return PanelSurface(std::move(verts), std::move(tris));
}

PanelSurface load_mesh(const std::filesystem::path &path, MeshFormat format)
{
  if (format == MeshFormat::OFF)
  {
    std::ifstream in(path);
    if (!in)
    {
      throw ParseError("cannot open mesh file '" + path.string() + "'");
    }
    return read_off(in);
  }
  auto stem = path;
  if (stem.extension() == ".vert" || stem.extension() == ".face")
  {
    stem.replace_extension();
  }
  auto vpath = stem;
  vpath += ".vert";
  auto fpath = stem;
  fpath += ".face";
  std::ifstream vin(vpath);
  std::ifstream fin(fpath);
  if (!vin || !fin)
  {
    throw ParseError("cannot open MSMS pair '" + vpath.string() + "' / '" + fpath.string() + "'");
  }
  return read_msms(vin, fin);
}

void write_off(std::ostream &out, const PanelSurface &surface)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "OFF\n" << surface.vertices().size() << ' ' << surface.size() << " 0\n";
  for (const auto &v : surface.vertices())
  {
    os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto &t : surface.triangles())
  {
    os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << os.str();
}

PanelSurface make_icosphere(double radius, int subdivisions, const Vec3 &center)
{
  if (!(radius > 0.0) || subdivisions < 0 || subdivisions > 7)
  {
    throw DomainError("icosphere needs radius > 0 and 0 <= subdivisions <= 7");
  }
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto &x : v)
  {
    x.normalize();
  }
  std::vector<Triangle> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
  };
  for (int s = 0; s < subdivisions; s++)
  {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end())
      {
        return it->second;
      }
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto &t : f)
    {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (auto &x : v)
  {
    x = center + radius * x;
  }
  return PanelSurface(std::move(v), std::move(f));
}

}  // namespace bibee
