#pragma once

#include <cstdint>
#include <random>

#include "fbms/mesh.hpp"

namespace fbms::test {

/// Spherical cap of radius r around the north pole, polar angle <= theta_max.
TriMesh sphere_cap(double r, double theta_max, int n_rings, int n_angular);

/// Torus grid with one quad removed: genus 1, one boundary loop.
TriMesh punctured_torus(int n_u, int n_v);

/// Closed octahedron.
TriMesh octahedron();

/// Random rotation matrix drawn from `rng`.
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

/// Small curved disk-type mesh: jittered planar disk lifted onto a random
/// smooth height field, randomly rotated and translated.
TriMesh random_surface(std::mt19937_64& rng);

/// Central finite-difference gradient of total area with step h.
std::vector<Vec3> finite_difference_area_gradient(const TriMesh& mesh, double h);

}  // namespace fbms::test
