#include "corrtrack/primitives.h"

#include <map>
#include <random>

namespace corrtrack {

TriangleMesh make_cuboid(double size_x, double size_y, double size_z) {
  const double hx = 0.5 * size_x, hy = 0.5 * size_y, hz = 0.5 * size_z;
  TriangleMesh mesh;
  mesh.vertices = {{-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, hy, -hz},
                   {-hx, hy, -hz},  {-hx, -hy, hz}, {hx, -hy, hz},
                   {hx, hy, hz},    {-hx, hy, hz}};
  mesh.triangles = {{0, 2, 1}, {0, 3, 2},   // z-
                    {4, 5, 6}, {4, 6, 7},   // z+
                    {0, 1, 5}, {0, 5, 4},   // y-
                    {3, 6, 2}, {3, 7, 6},   // y+
                    {0, 7, 3}, {0, 4, 7},   // x-
                    {1, 2, 6}, {1, 6, 5}};  // x+
  mesh.diameter = mesh_diameter(mesh.vertices);
  return mesh;
}

TriangleMesh make_tetrahedron(double edge) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  TriangleMesh mesh;
  mesh.vertices = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  mesh.triangles = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  mesh.diameter = mesh_diameter(mesh.vertices);
  return mesh;
}

TriangleMesh make_icosphere(int subdivisions, double radius) {
  const double x = 0.525731112119133606;
  const double z = 0.850650808352039932;
  std::vector<Vector3d> vertices = {
      {-x, 0.0, z}, {x, 0.0, z},  {-x, 0.0, -z}, {x, 0.0, -z},
      {0.0, z, x},  {0.0, z, -x}, {0.0, -z, x},  {0.0, -z, -x},
      {z, x, 0.0},  {-z, x, 0.0}, {z, -x, 0.0},  {-z, -x, 0.0}};
  std::vector<std::array<int, 3>> triangles = {
      {0, 4, 1},  {0, 9, 4},  {9, 5, 4},  {4, 5, 8},  {4, 8, 1},
      {8, 10, 1}, {8, 3, 10}, {5, 3, 8},  {5, 2, 3},  {2, 7, 3},
      {7, 10, 3}, {7, 6, 10}, {7, 11, 6}, {11, 0, 6}, {0, 1, 6},
      {6, 1, 10}, {9, 0, 11}, {9, 11, 2}, {9, 2, 5},  {7, 2, 11}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint_cache;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (const auto it = midpoint_cache.find(key); it != midpoint_cache.end())
        return it->second;
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      const int index = static_cast<int>(vertices.size()) - 1;
      midpoint_cache.emplace(key, index);
      return index;
    };
    std::vector<std::array<int, 3>> subdivided;
    subdivided.reserve(triangles.size() * 4);
    for (const auto &t : triangles) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      subdivided.push_back({t[0], ab, ca});
      subdivided.push_back({t[1], bc, ab});
      subdivided.push_back({t[2], ca, bc});
      subdivided.push_back({ab, bc, ca});
    }
    triangles = std::move(subdivided);
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(vertices.size());
  for (const auto &v : vertices) mesh.vertices.push_back(v * radius);
  mesh.triangles = std::move(triangles);
  mesh.diameter = 2.0 * radius;
  return mesh;
}

void append_mesh(TriangleMesh &target, const TriangleMesh &other,
                 const Vector3d &offset) {
  const int base = static_cast<int>(target.vertices.size());
  for (const auto &v : other.vertices) target.vertices.push_back(v + offset);
  for (const auto &t : other.triangles)
    target.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  target.diameter = mesh_diameter(target.vertices);
}

TriangleMesh make_l_block(double arm_x, double arm_y, double width,
                          double thickness) {
  TriangleMesh block = make_cuboid(arm_x, width, thickness);
  // The second arm is keyed 40% of the width into the first one.
  append_mesh(block, make_cuboid(width, arm_y, thickness),
              {-0.5 * (arm_x - width),
               0.5 * (width + arm_y) - 0.4 * width, 0.0});
  return block;
}

TriangleMesh make_bumpy_spheroid(int subdivisions, const Vector3d &radii,
                                 double bump_fraction, std::uint32_t seed) {
  TriangleMesh mesh = make_icosphere(subdivisions, 1.0);
  std::mt19937 rng{seed};
  std::uniform_real_distribution<double> bump{1.0 - bump_fraction,
                                              1.0 + bump_fraction};
  for (auto &v : mesh.vertices) {
    const double scale = bump(rng);
    v = Vector3d{v.x() * radii.x(), v.y() * radii.y(), v.z() * radii.z()} *
        scale;
  }
  mesh.diameter = mesh_diameter(mesh.vertices);
  return mesh;
}

}  // namespace corrtrack
