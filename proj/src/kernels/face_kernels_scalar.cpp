#include <cmath>

#include "fbms/kernels.hpp"

namespace fbms::kernels::detail {

// Reference versions. The AVX2 file mirrors these expression trees exactly.

void face_geometry_scalar(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
        const double ux = in.bx[i] - in.ax[i], uy = in.by[i] - in.ay[i], uz = in.bz[i] - in.az[i];
        const double vx = in.cx[i] - in.ax[i], vy = in.cy[i] - in.ay[i], vz = in.cz[i] - in.az[i];
        const double wx = in.cx[i] - in.bx[i], wy = in.cy[i] - in.by[i], wz = in.cz[i] - in.bz[i];

        const double nx = uy * vz - uz * vy;
        const double ny = uz * vx - ux * vz;
        const double nz = ux * vy - uy * vx;
        const double len = std::sqrt((nx * nx + ny * ny) + nz * nz);
        const double inv = 1.0 / len;

        const double da = (ux * vx + uy * vy) + uz * vz;
        const double db = (wx * ux + wy * uy) + wz * uz;
        const double dc = (vx * wx + vy * wy) + vz * wz;

        out.area[i] = 0.5 * len;
        out.nx[i] = nx * inv;
        out.ny[i] = ny * inv;
        out.nz[i] = nz * inv;
        out.cot_a[i] = da / len;
        out.cot_b[i] = -db / len;
        out.cot_c[i] = dc / len;
    }
}

void face_area_gradient_scalar(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
        const double ux = in.bx[i] - in.ax[i], uy = in.by[i] - in.ay[i], uz = in.bz[i] - in.az[i];
        const double vx = in.cx[i] - in.ax[i], vy = in.cy[i] - in.ay[i], vz = in.cz[i] - in.az[i];
        const double wx = in.cx[i] - in.bx[i], wy = in.cy[i] - in.by[i], wz = in.cz[i] - in.bz[i];

        const double nx = uy * vz - uz * vy;
        const double ny = uz * vx - ux * vz;
        const double nz = ux * vy - uy * vx;
        const double len = std::sqrt((nx * nx + ny * ny) + nz * nz);
        const double inv = 1.0 / len;
        const double hx = nx * inv, hy = ny * inv, hz = nz * inv;

        // dA/da = n x (c - b) / 2, dA/db = -n x (c - a) / 2, dA/dc = n x (b - a) / 2
        out.gax[i] = 0.5 * (hy * wz - hz * wy);
        out.gay[i] = 0.5 * (hz * wx - hx * wz);
        out.gaz[i] = 0.5 * (hx * wy - hy * wx);
        out.gbx[i] = -0.5 * (hy * vz - hz * vy);
        out.gby[i] = -0.5 * (hz * vx - hx * vz);
        out.gbz[i] = -0.5 * (hx * vy - hy * vx);
        out.gcx[i] = 0.5 * (hy * uz - hz * uy);
        out.gcy[i] = 0.5 * (hz * ux - hx * uz);
        out.gcz[i] = 0.5 * (hx * uy - hy * ux);
    }
}

}  // namespace fbms::kernels::detail
