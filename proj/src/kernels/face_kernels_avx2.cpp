#include "fbms/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define FBMS_HAVE_X86 1
#include <immintrin.h>
#else
#define FBMS_HAVE_X86 0
#endif

#include <stdexcept>

namespace fbms::kernels::detail {

#if FBMS_HAVE_X86

// Only "avx2" is enabled, not "fma": the compiler cannot contract a*b+c,
// which keeps the lanes bitwise equal to the scalar reference.
#define FBMS_AVX2 __attribute__((target("avx2")))

namespace {

struct V3 {
    __m256d x, y, z;
};

FBMS_AVX2 inline V3 load3(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z,
                          std::size_t i) {
    return {_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), _mm256_loadu_pd(z.data() + i)};
}

FBMS_AVX2 inline V3 sub(const V3& a, const V3& b) {
    return {_mm256_sub_pd(a.x, b.x), _mm256_sub_pd(a.y, b.y), _mm256_sub_pd(a.z, b.z)};
}

// (p.y*q.z - p.z*q.y, p.z*q.x - p.x*q.z, p.x*q.y - p.y*q.x)
FBMS_AVX2 inline V3 cross(const V3& p, const V3& q) {
    return {_mm256_sub_pd(_mm256_mul_pd(p.y, q.z), _mm256_mul_pd(p.z, q.y)),
            _mm256_sub_pd(_mm256_mul_pd(p.z, q.x), _mm256_mul_pd(p.x, q.z)),
            _mm256_sub_pd(_mm256_mul_pd(p.x, q.y), _mm256_mul_pd(p.y, q.x))};
}

// (p.x*q.x + p.y*q.y) + p.z*q.z
FBMS_AVX2 inline __m256d dot(const V3& p, const V3& q) {
    return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(p.x, q.x), _mm256_mul_pd(p.y, q.y)), _mm256_mul_pd(p.z, q.z));
}

FBMS_AVX2 inline void store3(std::vector<double>& x, std::vector<double>& y, std::vector<double>& z, std::size_t i,
                             const V3& v) {
    _mm256_storeu_pd(x.data() + i, v.x);
    _mm256_storeu_pd(y.data() + i, v.y);
    _mm256_storeu_pd(z.data() + i, v.z);
}

FBMS_AVX2 inline V3 scale(__m256d s, const V3& v) {
    return {_mm256_mul_pd(s, v.x), _mm256_mul_pd(s, v.y), _mm256_mul_pd(s, v.z)};
}

}  // namespace

FBMS_AVX2 void face_geometry_avx2(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const V3 a = load3(in.ax, in.ay, in.az, i);
        const V3 b = load3(in.bx, in.by, in.bz, i);
        const V3 c = load3(in.cx, in.cy, in.cz, i);
        const V3 u = sub(b, a), v = sub(c, a), w = sub(c, b);
        const V3 n = cross(u, v);
        const __m256d len = _mm256_sqrt_pd(dot(n, n));
        const __m256d inv = _mm256_div_pd(one, len);

        _mm256_storeu_pd(out.area.data() + i, _mm256_mul_pd(half, len));
        store3(out.nx, out.ny, out.nz, i, {_mm256_mul_pd(n.x, inv), _mm256_mul_pd(n.y, inv), _mm256_mul_pd(n.z, inv)});
        _mm256_storeu_pd(out.cot_a.data() + i, _mm256_div_pd(dot(u, v), len));
        _mm256_storeu_pd(out.cot_b.data() + i, _mm256_div_pd(_mm256_xor_pd(dot(w, u), sign), len));
        _mm256_storeu_pd(out.cot_c.data() + i, _mm256_div_pd(dot(v, w), len));
    }
    face_geometry_scalar(in, out, i, end);
}

FBMS_AVX2 void face_area_gradient_avx2(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin,
                                       std::size_t end) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d neg_half = _mm256_set1_pd(-0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const V3 a = load3(in.ax, in.ay, in.az, i);
        const V3 b = load3(in.bx, in.by, in.bz, i);
        const V3 c = load3(in.cx, in.cy, in.cz, i);
        const V3 u = sub(b, a), v = sub(c, a), w = sub(c, b);
        const V3 n = cross(u, v);
        const __m256d len = _mm256_sqrt_pd(dot(n, n));
        const __m256d inv = _mm256_div_pd(one, len);
        const V3 h = scale(inv, n);

        store3(out.gax, out.gay, out.gaz, i, scale(half, cross(h, w)));
        store3(out.gbx, out.gby, out.gbz, i, scale(neg_half, cross(h, v)));
        store3(out.gcx, out.gcy, out.gcz, i, scale(half, cross(h, u)));
    }
    face_area_gradient_scalar(in, out, i, end);
}

#else

void face_geometry_avx2(const FaceCorners&, FaceGeometry&, std::size_t, std::size_t) {
    throw std::logic_error("AVX2 kernels are not built for this architecture");
}

void face_area_gradient_avx2(const FaceCorners&, FaceAreaGradient&, std::size_t, std::size_t) {
    throw std::logic_error("AVX2 kernels are not built for this architecture");
}

#endif

}  // namespace fbms::kernels::detail
