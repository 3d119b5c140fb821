#pragma once

#include <cstdint>

#include "fbms/ambient.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Parameters of the critical catenoid x(s, t) = c (cosh s cos t, cosh s sin t, s),
/// |s| <= s0, which meets the unit sphere orthogonally.
struct CatenoidParameters {
    double s0 = 0.0;               ///< positive root of t tanh t = 1
    double scale = 0.0;            ///< c = (cosh^2 s0 + s0^2)^{-1/2}
    double boundary_radius = 0.0;  ///< c cosh s0
    double boundary_height = 0.0;  ///< c s0
    double waist_radius = 0.0;     ///< c
};

/// Bisection on [1, 1.5] down to a bracket width of 1e-14.
CatenoidParameters critical_catenoid_parameters();

/// Flat unit disk in the plane z = 0: a centre vertex plus `n_radial`
/// rings of `n_angular` vertices at radii i / n_radial.
TriMesh equatorial_disk(int n_radial, int n_angular);

/// Flat disk in the plane z = height, clipped by the unit sphere. Not free
/// boundary for height != 0; used as a test input.
TriMesh horizontal_disk(int n_radial, int n_angular, double height);

/// Tensor-grid triangulation of the critical catenoid with `n_s` intervals
/// along the axis and `n_theta` around it.
TriMesh critical_catenoid(int n_s, int n_theta);

/// Smooth random normal displacement of sup-norm `amplitude`. Boundary
/// vertices move tangentially to the ambient boundary and are re-projected.
TriMesh perturb(const TriMesh& mesh, const ConvexAmbient& ambient, double amplitude, std::uint64_t seed);

}  // namespace fbms
