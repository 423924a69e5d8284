// AVX2 variants of the distance kernels. Compiled with -mavx2 (no FMA: the
// scalar reference adds the product separately, and a fused op would round
// differently). Tails of < 4 points fall through to the same per-point
// scalar sequence.

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "porolab/kernels.hpp"

namespace porolab::kern {

namespace {

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline double scalar_eu2_one(const CoordView& v, const double* q, std::size_t i) {
    double acc = 0.0;
    for (int a = 0; a < v.dim; ++a) {
        const double d = v.axes[a][i] - q[a];
        acc += d * d;
    }
    return acc;
}

inline double scalar_ch_one(const CoordView& v, const double* q, std::size_t i) {
    double acc = 0.0;
    for (int a = 0; a < v.dim; ++a) {
        const double d = std::fabs(v.axes[a][i] - q[a]);
        if (d > acc) acc = d;
    }
    return acc;
}

void metric_eu2_batch_avx2(const CoordView& v, const double* q, double* out) {
    const std::size_t n4 = v.n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int a = 0; a < v.dim; ++a) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.axes[a] + i),
                                            _mm256_set1_pd(q[a]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (std::size_t i = n4; i < v.n; ++i) out[i] = scalar_eu2_one(v, q, i);
}

void metric_ch_batch_avx2(const CoordView& v, const double* q, double* out) {
    const std::size_t n4 = v.n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int a = 0; a < v.dim; ++a) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.axes[a] + i),
                                            _mm256_set1_pd(q[a]));
            acc = _mm256_max_pd(acc, _mm256_and_pd(d, kAbsMask));
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (std::size_t i = n4; i < v.n; ++i) out[i] = scalar_ch_one(v, q, i);
}

double min_eu2_avx2(const CoordView& v, const double* q) {
    const std::size_t n4 = v.n & ~std::size_t{3};
    double best = std::numeric_limits<double>::infinity();
    if (n4 > 0) {
        __m256d vbest = _mm256_set1_pd(best);
        for (std::size_t i = 0; i < n4; i += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int a = 0; a < v.dim; ++a) {
                const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.axes[a] + i),
                                                _mm256_set1_pd(q[a]));
                acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
            }
            vbest = _mm256_min_pd(vbest, acc);
        }
        double lanes[4];
        _mm256_storeu_pd(lanes, vbest);
        for (double lane : lanes)
            if (lane < best) best = lane;
    }
    for (std::size_t i = n4; i < v.n; ++i) {
        const double m = scalar_eu2_one(v, q, i);
        if (m < best) best = m;
    }
    return best;
}

double min_ch_avx2(const CoordView& v, const double* q) {
    const std::size_t n4 = v.n & ~std::size_t{3};
    double best = std::numeric_limits<double>::infinity();
    if (n4 > 0) {
        __m256d vbest = _mm256_set1_pd(best);
        for (std::size_t i = 0; i < n4; i += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int a = 0; a < v.dim; ++a) {
                const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.axes[a] + i),
                                                _mm256_set1_pd(q[a]));
                acc = _mm256_max_pd(acc, _mm256_and_pd(d, kAbsMask));
            }
            vbest = _mm256_min_pd(vbest, acc);
        }
        double lanes[4];
        _mm256_storeu_pd(lanes, vbest);
        for (double lane : lanes)
            if (lane < best) best = lane;
    }
    for (std::size_t i = n4; i < v.n; ++i) {
        const double m = scalar_ch_one(v, q, i);
        if (m < best) best = m;
    }
    return best;
}

}  // namespace

const Kernels* avx2_kernels_impl() {
    static const Kernels k = {
        &metric_eu2_batch_avx2,
        &metric_ch_batch_avx2,
        &min_eu2_avx2,
        &min_ch_avx2,
    };
    return &k;
}

}  // namespace porolab::kern

#else

namespace porolab::kern {
struct Kernels;
const Kernels* avx2_kernels_impl() { return nullptr; }
}  // namespace porolab::kern

#endif
