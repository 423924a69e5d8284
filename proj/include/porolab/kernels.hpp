#pragma once

#include <cstddef>
#include <cstdint>

namespace porolab::kern {

inline constexpr int kMaxDim = 8;

// Structure-of-arrays view over point coordinates: axes[a][i] is coordinate
// a of point i. Backing storage is owned by the caller.
struct CoordView {
    const double* axes[kMaxDim] = {};
    std::size_t n = 0;
    int dim = 0;
};

// The data-parallel inner loops everything else is built on. "eu2" kernels
// work in squared euclidean distance, "ch" in chebyshev distance; callers
// square thresholds / take square roots at the boundary.
//
// Contract shared by all variants of one entry point: identical results for
// metric_*_batch and min_* (bit-for-bit; the per-point operation order is
// fixed and FP contraction is disabled project-wide).
struct Kernels {
    // out[i] = sum over axes of (q[a] - p_i[a])^2
    void (*metric_eu2_batch)(const CoordView& v, const double* q, double* out);
    // out[i] = max over axes of |q[a] - p_i[a]|
    void (*metric_ch_batch)(const CoordView& v, const double* q, double* out);
    // min over i of the squared euclidean distance; v.n must be > 0
    double (*min_eu2)(const CoordView& v, const double* q);
    // min over i of the chebyshev distance; v.n must be > 0
    double (*min_ch)(const CoordView& v, const double* q);
};

const Kernels& scalar_kernels();

// nullptr when the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Dispatched set: AVX2 when available, unless POROSITY_LAB_SIMD=scalar
// forces the reference path ("avx2" errors out if unsupported).
const Kernels& active_kernels();

// Name of the dispatched variant ("scalar" or "avx2").
const char* active_kernel_name();

}  // namespace porolab::kern
