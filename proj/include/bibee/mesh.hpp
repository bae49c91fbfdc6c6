// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_MESH_HPP
#define BIBEE_MESH_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bibee/core.hpp"

namespace bibee
{

using Triangle = std::array<int, 3>;

// Closed, consistently oriented triangulated surface with outward normals
// (pointing from the solute into the solvent). Panels are flat triangles
// represented by centroid, unit normal and area.
class PanelSurface
{
public:
  // Validates topology (every edge shared by exactly two triangles with opposite
  // orientation) and geometry (no panel with area below kMinPanelArea). When
  // fix_orientation is set, all triangles are flipped if the discrete Gauss sum at
  // the surface centroid indicates inward-facing normals.
  PanelSurface(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
               bool fix_orientation = true);

  static constexpr double kMinPanelArea = 1e-12;

  std::size_t size() const noexcept { return triangles_.size(); }
  const std::vector<Vec3> &vertices() const noexcept { return vertices_; }
  const std::vector<Triangle> &triangles() const noexcept { return triangles_; }
  const std::vector<Vec3> &centroids() const noexcept { return centroids_; }
  const std::vector<Vec3> &normals() const noexcept { return normals_; }
  const Eigen::VectorXd &areas() const noexcept { return areas_; }
  double total_area() const { return areas_.sum(); }

  // Area-weighted mean of the panel centroids.
  Vec3 area_centroid() const;

  // Discrete Gauss sum  sum_j A_j n_j . (p - c_j) / (4 pi |p - c_j|^3):
  // about -1 for interior points, 0 outside.
  double gauss_sum(const Vec3 &p) const;
  // Interior test: gauss_sum(p) < -0.5.
  bool contains(const Vec3 &p) const;
  // Euclidean distance from p to the nearest panel (triangle, not centroid).
  double distance_to_surface(const Vec3 &p) const;

  // Uniform scaling about the origin.
  PanelSurface scaled(double s) const;

private:
  void derive();

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> centroids_;
  std::vector<Vec3> normals_;
  Eigen::VectorXd areas_;
};

enum class MeshFormat
{
  OFF,
  MSMS,
};

// ASCII OFF: header, counts line, vertices, faces (polygons are fan-triangulated).
PanelSurface read_off(std::istream &in);
// MSMS .vert/.face pair, 1-indexed faces; up to three header lines are skipped.
PanelSurface read_msms(std::istream &vert, std::istream &face);

// For OFF, path is the .off file. For MSMS, path may name either the .vert or the
// .face file or the common stem; the sibling is located by extension.
PanelSurface load_mesh(const std::filesystem::path &path, MeshFormat format);

void write_off(std::ostream &out, const PanelSurface &surface);

// Subdivided icosahedron projected onto a sphere: 20 * 4^subdivisions panels.
PanelSurface make_icosphere(double radius, int subdivisions, const Vec3 &center = Vec3::Zero());

}  // namespace bibee

#endif  // BIBEE_MESH_HPP
