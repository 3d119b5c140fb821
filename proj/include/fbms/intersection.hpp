#pragma once

#include <optional>

#include "fbms/mesh.hpp"

namespace fbms {

struct IntersectionResult {
    bool intersects = false;
    /// A point common to both meshes when they intersect.
    std::optional<Vec3> witness;
    /// Lower bound on the distance between the meshes when disjoint; zero
    /// when they intersect.
    double distance_lower_bound = 0.0;
    std::size_t candidate_pairs = 0;
};

/// Triangle-triangle intersection over candidate pairs found with a uniform
/// grid. Candidate pairs are those whose bounding boxes, grown by `margin`,
/// overlap; for these the exact distance is computed, and `margin` bounds the
/// distance of every other pair.
IntersectionResult verify_intersection(const TriMesh& a, const TriMesh& b);

/// Intersection test for two triangles, including the coplanar case.
/// Returns a common point if they intersect.
std::optional<Vec3> triangle_intersection(const std::array<Vec3, 3>& t, const std::array<Vec3, 3>& u);

/// Euclidean distance between two triangles (zero if they intersect).
double triangle_distance(const std::array<Vec3, 3>& t, const std::array<Vec3, 3>& u);

}  // namespace fbms
