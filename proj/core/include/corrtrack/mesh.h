#pragma once

#include <array>
#include <string>
#include <vector>

#include "corrtrack/common.h"

namespace corrtrack {

/// Triangle surface mesh in the model frame. Vertices are in meters;
/// diameter is the maximum pairwise vertex distance.
struct TriangleMesh {
  std::vector<Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  double diameter = 0.0;
};

/// Maximum pairwise vertex distance.
double mesh_diameter(const std::vector<Vector3d> &vertices);

/// Loads a Wavefront OBJ file (ASCII, `v`/`f` records, 1-based indices).
/// Faces with more than three vertices are fan-triangulated. Throws Error
/// on missing files, parse failures, and empty meshes.
TriangleMesh load_mesh(const std::string &path);

/// Writes a mesh as Wavefront OBJ.
void save_mesh(const std::string &path, const TriangleMesh &mesh);

}  // namespace corrtrack
