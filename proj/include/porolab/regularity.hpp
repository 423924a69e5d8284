#pragma once

#include <cstdint>
#include <vector>

#include "porolab/space.hpp"

namespace porolab {

// Radii below kappa * epsilon are discretization noise; a closed ball of
// radius 4*epsilon holds at least 4^d interior grid cells.
inline constexpr double kResolvabilityKappa = 4.0;

// Geometric grid of query radii, clamped to [kappa*eps, 1].
struct ScaleGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int count = 0;

    static ScaleGrid geometric(double r_min, double r_max, int count, double epsilon);
    std::vector<double> radii() const;
};

struct RegularityFit {
    double s_hat = 0.0;
    double a_hat = 0.0;   // exact lower envelope constant on the fitted data
    double b_hat = 0.0;   // exact upper envelope constant
    double rms_residual = 0.0;
    ScaleGrid grid;
    std::size_t sample_size = 0;
};

struct DoublingEstimate {
    double c_hat = 1.0;
    ScaleGrid grid;
    PointId witness_x = 0;
    double witness_r = 0.0;
};

struct DoublingViolation {
    PointId x = 0;
    double r = 0.0;
    double alpha = 0.0;
    double lhs = 0.0;  // mu(B(x, alpha r))
    double rhs = 0.0;  // c^floor(log2 alpha) * mu(B(x, r))
};

// c_hat = max over sample x grid of mu(B(x,2r)) / mu(B(x,r)).
DoublingEstimate estimate_doubling(const MetricSpace& space, const BallIndex& index,
                                   const WeightedMeasure& mu, const SubsetRef& sample,
                                   const ScaleGrid& grid);

// Pooled log-log regression of ball mass against radius over a stride
// sample of A; a_hat/b_hat are the exact envelope of the fitted data.
RegularityFit fit_regularity(const MetricSpace& space, const BallIndex& index,
                             const WeightedMeasure& mu, const SubsetRef& a,
                             const ScaleGrid& grid, std::size_t sample_size,
                             std::uint64_t seed = 0);

// All (x, r, alpha) with mu(B(x, alpha r)) < c^floor(log2 alpha) * mu(B(x,r)) - tau.
std::vector<DoublingViolation> check_doubling_power(
    const MetricSpace& space, const BallIndex& index, const WeightedMeasure& mu,
    double c, const SubsetRef& sample, const ScaleGrid& grid,
    const std::vector<double>& alphas);

// project-wide absolute comparison tolerance, applied only where stated
inline constexpr double kTau = 1e-12;

// Least-squares slope of y against x; throws DegenerateFit when x has no
// spread. Shared by the fitting ops.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace porolab
