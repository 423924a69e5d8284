#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "porolab/kernels.hpp"

namespace porolab {

enum class Metric { euclidean, chebyshev };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

using PointId = std::uint32_t;

// Finite sample of the ambient unit cube [0,1]^d together with a metric and
// a resolution epsilon (guaranteed covering radius of the sample). Immutable
// after construction; all queries are pure.
class MetricSpace {
public:
    // coords is point-major: coords[p*dim + a]. Rejects coordinates outside
    // [0,1], duplicate points, and non-positive epsilon.
    MetricSpace(int dim, Metric metric, std::vector<double> coords, double epsilon);

    int dim() const noexcept { return dim_; }
    Metric metric() const noexcept { return metric_; }
    double epsilon() const noexcept { return epsilon_; }
    std::size_t size() const noexcept { return n_; }

    double coord(PointId p, int axis) const { return axes_[static_cast<std::size_t>(axis) * n_ + p]; }
    // Copies point p into a query buffer of dim() entries.
    void point(PointId p, double* out) const;
    std::array<double, kern::kMaxDim> point(PointId p) const;

    // Axis-major view over all points.
    kern::CoordView view() const noexcept;

    void check_id(PointId p) const;

    // diameter of the unit cube under this metric (sqrt(d) or 1)
    double ambient_diameter() const;

private:
    int dim_;
    Metric metric_;
    std::size_t n_;
    double epsilon_;
    std::vector<double> axes_;  // axis-major: axes_[a*n + i]
};

// Nonnegative weights aligned to point ids of an owning space.
class WeightedMeasure {
public:
    explicit WeightedMeasure(std::vector<double> weights);

    // the identically-zero measure is allowed only where a construction can
    // legitimately produce it (an envelope with no patches)
    static WeightedMeasure allow_zero(std::vector<double> weights);

    double total() const noexcept { return total_; }
    double weight(PointId p) const { return weights_[p]; }
    std::size_t size() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }

    // ids with weight > 0, ascending
    std::vector<PointId> support() const;

private:
    std::vector<double> weights_;
    double total_;
};

// Sorted, deduplicated point ids.
struct SubsetRef {
    std::vector<PointId> ids;

    static SubsetRef of(std::vector<PointId> raw);  // sorts + dedups
    bool empty() const noexcept { return ids.empty(); }
    std::size_t size() const noexcept { return ids.size(); }
    bool contains(PointId p) const;
    void check_against(const MetricSpace& space) const;
};

// Bucket-grid acceleration structure. Query results are id-set equal to a
// full linear scan (the per-point predicate is the same kernel arithmetic).
// Data-only: queries take the space it was built from as an argument.
class BallIndex {
public:
    static BallIndex build(const MetricSpace& space);

    // All ids p with d(x,p) <= r (closed ball), ascending. r >= 0.
    void ball_into(const MetricSpace& space, const double* center, double r,
                   std::vector<PointId>& out) const;

    // Sum of weights[p] over the closed ball, accumulated in (cell, slot)
    // order. Deterministic for a fixed space.
    double mass(const MetricSpace& space, const WeightedMeasure& mu,
                const double* center, double r) const;

    std::size_t point_count() const noexcept { return n_; }
    int cells_per_axis() const noexcept { return cells_; }

private:
    int dim_ = 0;
    int cells_ = 1;
    std::size_t n_ = 0;
    std::vector<std::uint32_t> cell_start_;  // prefix offsets, size cells^dim + 1
    std::vector<PointId> order_;             // ids grouped by cell, ascending inside
    std::vector<double> packed_;             // coords in order_ layout, axis-major

    kern::CoordView packed_view(std::size_t begin, std::size_t end) const;
    template <typename Fn>
    void for_slices(const double* center, double r, Fn&& fn) const;
};

// Gathered coordinates of a subset, for repeated distance-to-set queries.
class SubsetSnapshot {
public:
    SubsetSnapshot(const MetricSpace& space, const SubsetRef& subset);

    std::size_t size() const noexcept { return n_; }
    kern::CoordView view() const noexcept;

    // min over the subset of d(q, .); subset must be nonempty
    double dist_from(Metric metric, const double* q) const;

private:
    int dim_;
    std::size_t n_;
    std::vector<double> axes_;
};

// --- operations ---------------------------------------------------------

double distance(const MetricSpace& space, PointId p, PointId q);

std::vector<PointId> ball_points(const MetricSpace& space, const BallIndex& index,
                                 PointId x, double r);

double ball_mass(const WeightedMeasure& mu, const MetricSpace& space,
                 const BallIndex& index, PointId x, double r);

double dist_to_set(const MetricSpace& space, const BallIndex& index, PointId x,
                   const SubsetRef& a);

// Distance from every point of the space to the subset, batched and
// parallel; out[p] = dist(p, A). Exact same values as dist_to_set.
std::vector<double> dists_to_set(const MetricSpace& space, const SubsetRef& a);

}  // namespace porolab
