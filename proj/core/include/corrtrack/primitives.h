#pragma once

#include "corrtrack/mesh.h"

namespace corrtrack {

/// Axis-aligned cuboid centered at the origin with the given side lengths.
TriangleMesh make_cuboid(double size_x, double size_y, double size_z);

/// Regular tetrahedron with the given edge length, centered at the origin.
TriangleMesh make_tetrahedron(double edge);

/// Icosphere of the given radius; subdivisions=n yields 20*4^n triangles.
TriangleMesh make_icosphere(int subdivisions, double radius);

/// Asymmetric rounded test shape: an icosphere stretched to the given radii
/// with deterministic radial bumps. Rotationally unambiguous from every
/// direction, which makes it a good tracking target.
TriangleMesh make_bumpy_spheroid(int subdivisions, const Vector3d &radii,
                                 double bump_fraction, std::uint32_t seed);

/// Appends another mesh, translated by offset, to the target surface.
/// Overlapping solids are fine for silhouette rendering.
void append_mesh(TriangleMesh &target, const TriangleMesh &other,
                 const Vector3d &offset);

/// L-shaped block assembled from two cuboids: an asymmetric tracking target
/// with straight silhouette edges in many orientations.
TriangleMesh make_l_block(double arm_x, double arm_y, double width,
                          double thickness);

}  // namespace corrtrack
