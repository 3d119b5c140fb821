#include <atomic>
#include <stdexcept>

#include "fbms/kernels.hpp"

namespace fbms::kernels {

namespace {

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> slot{detect_isa()};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("instruction set not available: " + std::string(to_string(isa)));
    active_slot().store(isa, std::memory_order_relaxed);
}

void FaceCorners::resize(std::size_t n) {
    for (auto* v : {&ax, &ay, &az, &bx, &by, &bz, &cx, &cy, &cz}) v->resize(n);
}

void FaceGeometry::resize(std::size_t n) {
    for (auto* v : {&area, &nx, &ny, &nz, &cot_a, &cot_b, &cot_c}) v->resize(n);
}

void FaceAreaGradient::resize(std::size_t n) {
    for (auto* v : {&gax, &gay, &gaz, &gbx, &gby, &gbz, &gcx, &gcy, &gcz}) v->resize(n);
}

void face_geometry(const FaceCorners& in, FaceGeometry& out, std::size_t begin, std::size_t end, Isa isa) {
    if (isa == Isa::avx2) {
        detail::face_geometry_avx2(in, out, begin, end);
    } else {
        detail::face_geometry_scalar(in, out, begin, end);
    }
}

void face_area_gradient(const FaceCorners& in, FaceAreaGradient& out, std::size_t begin, std::size_t end, Isa isa) {
    if (isa == Isa::avx2) {
        detail::face_area_gradient_avx2(in, out, begin, end);
    } else {
        detail::face_area_gradient_scalar(in, out, begin, end);
    }
}

void face_geometry(const FaceCorners& in, FaceGeometry& out) {
    out.resize(in.size());
    face_geometry(in, out, 0, in.size(), active_isa());
}

void face_area_gradient(const FaceCorners& in, FaceAreaGradient& out) {
    out.resize(in.size());
    face_area_gradient(in, out, 0, in.size(), active_isa());
}

}  // namespace fbms::kernels
