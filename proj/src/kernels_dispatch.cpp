#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "porolab/kernels.hpp"

namespace porolab::kern {

const Kernels* avx2_kernels_impl();  // defined in kernels_avx2.cpp

const Kernels* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2")) return avx2_kernels_impl();
#endif
    return nullptr;
}

namespace {

struct Dispatch {
    const Kernels* set;
    const char* name;
};

Dispatch resolve() {
    const char* env = std::getenv("POROSITY_LAB_SIMD");
    const Kernels* avx2 = avx2_kernels();
    if (env != nullptr && std::strcmp(env, "scalar") == 0)
        return {&scalar_kernels(), "scalar"};
    if (env != nullptr && std::strcmp(env, "avx2") == 0) {
        if (avx2 == nullptr)
            throw std::runtime_error("POROSITY_LAB_SIMD=avx2 but CPU lacks AVX2");
        return {avx2, "avx2"};
    }
    if (avx2 != nullptr) return {avx2, "avx2"};
    return {&scalar_kernels(), "scalar"};
}

const Dispatch& dispatched() {
    static const Dispatch d = resolve();
    return d;
}

}  // namespace

const Kernels& active_kernels() { return *dispatched().set; }

const char* active_kernel_name() { return dispatched().name; }

}  // namespace porolab::kern
