#include <cmath>
#include <limits>

#include "porolab/kernels.hpp"

namespace porolab::kern {

// Reference kernels. The SIMD variants must reproduce these bit-for-bit:
// per point, squared differences are accumulated in ascending axis order
// (chebyshev: max of absolute differences in ascending axis order).

namespace {

void metric_eu2_batch_scalar(const CoordView& v, const double* q, double* out) {
    for (std::size_t i = 0; i < v.n; ++i) {
        double acc = 0.0;
        for (int a = 0; a < v.dim; ++a) {
            const double d = v.axes[a][i] - q[a];
            acc += d * d;
        }
        out[i] = acc;
    }
}

void metric_ch_batch_scalar(const CoordView& v, const double* q, double* out) {
    for (std::size_t i = 0; i < v.n; ++i) {
        double acc = 0.0;
        for (int a = 0; a < v.dim; ++a) {
            const double d = std::fabs(v.axes[a][i] - q[a]);
            if (d > acc) acc = d;
        }
        out[i] = acc;
    }
}

double min_eu2_scalar(const CoordView& v, const double* q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.n; ++i) {
        double acc = 0.0;
        for (int a = 0; a < v.dim; ++a) {
            const double d = v.axes[a][i] - q[a];
            acc += d * d;
        }
        if (acc < best) best = acc;
    }
    return best;
}

double min_ch_scalar(const CoordView& v, const double* q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.n; ++i) {
        double acc = 0.0;
        for (int a = 0; a < v.dim; ++a) {
            const double d = std::fabs(v.axes[a][i] - q[a]);
            if (d > acc) acc = d;
        }
        if (acc < best) best = acc;
    }
    return best;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        &metric_eu2_batch_scalar,
        &metric_ch_batch_scalar,
        &min_eu2_scalar,
        &min_ch_scalar,
    };
    return k;
}

}  // namespace porolab::kern
