#pragma once

#include <vector>

#include "porolab/space.hpp"

namespace porolab {

struct NetResult {
    double radius = 0.0;
    std::vector<PointId> centers;
    bool separation_ok = false;
    bool coverage_ok = false;
    double max_coverage_gap = 0.0;
};

struct PackingCoverReport {
    bool separation_ok = false;
    bool coverage_ok = false;
    bool half_radius_disjoint_ok = false;
    double min_center_separation = 0.0;
    double max_coverage_gap = 0.0;
};

// Greedy maximal r-separated subset in ascending-id order: centers are
// pairwise > r apart and every input id lies within r of a center.
NetResult greedy_net(const MetricSpace& space, const BallIndex& index,
                     const SubsetRef& ids, double r);

// Recomputes separation, coverage and disjointness of the radius-r/2 balls
// from scratch.
PackingCoverReport verify_packing_cover(const MetricSpace& space,
                                        const NetResult& net, const SubsetRef& ids);

}  // namespace porolab
