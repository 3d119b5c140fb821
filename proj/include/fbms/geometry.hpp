#pragma once

#include <vector>

#include "fbms/kernels.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

kernels::FaceCorners gather_corners(const TriMesh& mesh);

/// Areas, unit normals and corner cotangents of every face.
kernels::FaceGeometry compute_face_geometry(const TriMesh& mesh);

/// Area-weighted average of incident face normals. At boundary vertices
/// only the (one-sided) incident faces contribute.
std::vector<Vec3> vertex_normals(const TriMesh& mesh, const kernels::FaceGeometry& geom);
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

/// Mixed Voronoi vertex areas: Voronoi cells for non-obtuse triangles,
/// barycentric-style split for obtuse ones. Sums to the mesh area.
std::vector<double> mixed_vertex_areas(const TriMesh& mesh, const kernels::FaceGeometry& geom);

/// Sum of interior angles of the faces incident to each vertex.
std::vector<double> vertex_angle_sums(const TriMesh& mesh, const kernels::FaceGeometry& geom);

}  // namespace fbms
