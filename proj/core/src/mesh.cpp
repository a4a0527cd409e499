#include "corrtrack/mesh.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace corrtrack {

double mesh_diameter(const std::vector<Vector3d> &vertices) {
  double max_squared = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      max_squared =
          std::max(max_squared, (vertices[i] - vertices[j]).squaredNorm());
  return std::sqrt(max_squared);
}

namespace {

// Parses the vertex index of an OBJ face corner ("7", "7/2", "7//3", "7/2/3").
int parse_corner_index(const std::string &token, int vertex_count,
                       const std::string &path) {
  int index = 0;
  const auto end = token.find('/');
  const auto result = std::from_chars(
      token.data(), token.data() + (end == std::string::npos ? token.size() : end),
      index);
  if (result.ec != std::errc{} || index == 0)
    throw Error{"load_mesh: bad face index '" + token + "' in " + path};
  if (index < 0) index = vertex_count + index + 1;  // relative indexing
  if (index < 1 || index > vertex_count)
    throw Error{"load_mesh: face index out of range in " + path};
  return index - 1;
}

}  // namespace

TriangleMesh load_mesh(const std::string &path) {
  std::ifstream file{path};
  if (!file) throw Error{"load_mesh: cannot open " + path};

  TriangleMesh mesh;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream stream{line};
    std::string tag;
    stream >> tag;
    if (tag == "v") {
      Vector3d v;
      if (!(stream >> v.x() >> v.y() >> v.z()))
        throw Error{"load_mesh: malformed vertex in " + path};
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string token;
      while (stream >> token)
        corners.push_back(parse_corner_index(
            token, static_cast<int>(mesh.vertices.size()), path));
      if (corners.size() < 3)
        throw Error{"load_mesh: face with fewer than 3 vertices in " + path};
      for (std::size_t i = 1; i + 1 < corners.size(); ++i)
        mesh.triangles.push_back({corners[0], corners[i], corners[i + 1]});
    }
    // All other records (vn, vt, usemtl, ...) are ignored.
  }
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw Error{"load_mesh: empty mesh in " + path};
  mesh.diameter = mesh_diameter(mesh.vertices);
  return mesh;
}

void save_mesh(const std::string &path, const TriangleMesh &mesh) {
  std::ofstream file{path};
  if (!file) throw Error{"save_mesh: cannot open " + path};
  for (const auto &v : mesh.vertices)
    file << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto &t : mesh.triangles)
    file << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!file) throw Error{"save_mesh: write failed for " + path};
}

}  // namespace corrtrack
