#pragma once

// Per-face geometry kernels over structure-of-arrays batches.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// Both evaluate the same expression tree with the same IEEE operations
// (no FMA contraction), so their outputs are bitwise identical; the
// equivalence tests rely on that. The active variant is picked once at
// startup from CPUID and can be overridden for testing.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fbms::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);
/// Best variant supported by the running CPU.
Isa detect_isa();
Isa active_isa();
/// Forces a variant; throws std::invalid_argument if the CPU lacks it.
void set_active_isa(Isa isa);

/// Corner coordinates of a batch of triangles (a, b, c), one array per
/// coordinate.
struct FaceCorners {
    std::vector<double> ax, ay, az, bx, by, bz, cx, cy, cz;

    void resize(std::size_t n);
    std::size_t size() const { return ax.size(); }
};

/// Area, unit normal and the cotangent of the interior angle at each corner.
struct FaceGeometry {
    std::vector<double> area;
    std::vector<double> nx, ny, nz;
    std::vector<double> cot_a, cot_b, cot_c;

    void resize(std::size_t n);
    std::size_t size() const { return area.size(); }
};

/// Gradient of the face area with respect to each corner position.
struct FaceAreaGradient {
    std::vector<double> gax, gay, gaz, gbx, gby, gbz, gcx, gcy, gcz;

    void resize(std::size_t n);
    std::size_t size() const { return gax.size(); }
};

// Kernels process faces [begin, end); outputs must already be sized.
void face_geometry(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end, Isa isa);
void face_area_gradient(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin, std::size_t end, Isa isa);

/// Whole-batch convenience wrappers using the active variant.
void face_geometry(const FaceCorners& in, FaceGeometry& out);
void face_area_gradient(const FaceCorners& in, FaceAreaGradient& out);

namespace detail {
void face_geometry_scalar(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end);
void face_area_gradient_scalar(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin, std::size_t end);
void face_geometry_avx2(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end);
void face_area_gradient_avx2(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin, std::size_t end);
}  // namespace detail

}  // namespace fbms::kernels
