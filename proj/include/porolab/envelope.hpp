#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "porolab/regularity.hpp"
#include "porolab/space.hpp"

namespace porolab {

struct EnvelopeParams {
    double rho = 0.25;   // porosity constant, in (0, 1/3]
    double t = 0.5;      // target exponent, in (0, dim]
    int max_scale = 1;   // J: ladder runs j = 1..J at radii (rho/2)^j
    int plant_depth = 4;
    std::uint64_t seed = 0;

    double base() const { return 0.5 * rho; }  // per-scale radius factor
};

// Product Cantor dust with per-axis contraction 2^(-d/t), carrying uniform
// weights that sum to radius^t.
struct PlantedSet {
    std::vector<double> coords;  // point-major
    double point_weight = 0.0;
    double total_mass = 0.0;
    double cell_size = 0.0;
    double cube_side = 0.0;
    int dim = 0;
    int depth = 0;
};

PlantedSet plant_regular_set(const double* center, double radius, double t,
                             int depth, int dim, Metric metric);

struct PlantedPatch {
    int scale_j = 0;
    int index_i = 0;
    PointId hole_center = 0;  // ambient id of z_ji in the base space
    std::array<double, kern::kMaxDim> center_coords{};
    double radius = 0.0;          // (rho/2)^(j+1)
    double hole_clearance = 0.0;  // measured dist(z_ji, A)
    double cell_size = 0.0;
    double total_mass = 0.0;
    std::vector<PointId> point_ids;  // ids in the envelope space
};

struct Envelope {
    EnvelopeParams params;
    std::vector<PlantedPatch> patches;
    MetricSpace space;    // A's points followed by all planted points
    BallIndex index;      // over `space`
    SubsetRef a_in_f;     // ids of the original A inside `space` (0..|A|-1)
    WeightedMeasure nu;   // zero on A, patch weights on planted points
    SubsetRef base_a;     // original-space ids of A

    // audit trail
    std::vector<std::size_t> net_sizes;          // per scale j=1..J
    std::vector<int> skipped_centers;            // per scale
    std::vector<double> ladder_rho_min;          // per resolvable ladder scale
    std::vector<int> deficit_scales;             // ladder scales with min < rho
    std::size_t merged_duplicates = 0;
    std::size_t dropped_on_a = 0;
};

// Builds F = A union planted dust: greedy nets over A at radii (rho/2)^j,
// hole center z_ji = deepest ambient point of each net ball, one t-regular
// patch of radius (rho/2)^(j+1) per surviving hole. Throws PorosityDeficit
// when every net center of some scale fails the clearance test.
Envelope construct_envelope(const MetricSpace& space, const BallIndex& index,
                            const SubsetRef& a, const EnvelopeParams& params);

struct IntersectionCounts {
    int k = 0;
    std::vector<std::size_t> n;             // raw ball-ball counts, entry j-1
    std::vector<std::size_t> n_discounted;  // overlaps deeper than eps + tau
    bool front_disjoint_ok = false;         // discounted N_j = 0 for all j <= k-1
};

// N_j = #{ i : d(x, z_ji) <= (rho/2)^k + (rho/2)^(j+1) }. The discounted
// counts ignore overlaps within the base-space resolution slack, mirroring
// the clearance test used when holes were chosen.
IntersectionCounts count_intersections(const MetricSpace& base_space,
                                       const Envelope& envelope, PointId x, int k);

struct NuBoundRow {
    PointId x_base = 0;
    double r = 0.0;
    double nu_mass = 0.0;
    double ratio = 0.0;  // nu(B(x,r)) / r^t
};

struct NuBoundStats {
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    std::vector<NuBoundRow> rows;
};

// ratio table of nu(B(x,r)) / r^t over sample x grid; sample is given in
// base-space ids and must be a subset of A.
NuBoundStats verify_nu_bound(const Envelope& envelope, const SubsetRef& sample,
                             const ScaleGrid& grid);

struct CountingFit {
    double c_star = 0.0;
    std::vector<double> q;  // N_j * rho^((j-k)(s-delta)), entry j-k
    double log_slope = 0.0;
};

CountingFit check_counting_bound(const MetricSpace& base_space, const Envelope& envelope,
                                 PointId x, int k, double s, double delta);

// Scale index where the packing lower count (aX/bX) 10^-s 2^{ks} first beats
// the A-intersecting upper count (bA/aA) 10^s 2^{kt}; returns 2^-(k*+1).
double porosity_bound_from_regularity(double s, double t, double a_x, double b_x,
                                      double a_a, double b_a);

}  // namespace porolab
