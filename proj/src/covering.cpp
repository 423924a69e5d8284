#include "porolab/covering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "porolab/errors.hpp"

namespace porolab {

namespace {

// cell key for the incremental center grid (cell side = r)
using CellKey = std::array<int, kern::kMaxDim>;

CellKey cell_key(const MetricSpace& space, PointId p, double inv_r) {
    CellKey key{};
    for (int a = 0; a < space.dim(); ++a)
        key[static_cast<std::size_t>(a)] = static_cast<int>(std::floor(space.coord(p, a) * inv_r));
    return key;
}

}  // namespace

NetResult greedy_net(const MetricSpace& space, const BallIndex& index,
                     const SubsetRef& ids, double r) {
    (void)index;
    if (!(r > 0.0)) throw BadRadius("net radius must be positive");
    if (ids.empty()) throw EmptySubset("greedy_net on empty subset");
    ids.check_against(space);

    NetResult net;
    net.radius = r;

    // Points within r of each other always share or neighbor a cell of side
    // r, so only 3^d cells need scanning per candidate. Tiny radii would
    // overflow the integer cell keys; those fall back to the linear scan.
    const bool use_grid = r < 0.25 && r > 1e-9 && space.dim() <= 3;
    const double inv_r = 1.0 / r;
    std::map<CellKey, std::vector<PointId>> buckets;

    for (PointId cand : ids.ids) {
        bool separated = true;
        if (use_grid) {
            const CellKey base = cell_key(space, cand, inv_r);
            CellKey probe = base;
            const int d = space.dim();
            int off[kern::kMaxDim] = {};
            for (int a = 0; a < d; ++a) off[a] = -1;
            for (;;) {
                for (int a = 0; a < d; ++a) probe[static_cast<std::size_t>(a)] = base[static_cast<std::size_t>(a)] + off[a];
                if (auto it = buckets.find(probe); it != buckets.end()) {
                    for (PointId c : it->second)
                        if (distance(space, cand, c) <= r) { separated = false; break; }
                }
                if (!separated) break;
                int a = d - 1;
                while (a >= 0 && off[a] == 1) off[a--] = -1;
                if (a < 0) break;
                ++off[a];
            }
        } else {
            for (PointId c : net.centers)
                if (distance(space, cand, c) <= r) { separated = false; break; }
        }
        if (separated) {
            net.centers.push_back(cand);
            if (use_grid) buckets[cell_key(space, cand, inv_r)].push_back(cand);
        }
    }

    // coverage gap from construction (every rejected id was within r of a center)
    double gap = 0.0;
    {
        const SubsetRef centers_ref{net.centers};
        const SubsetSnapshot snap(space, centers_ref);
        double q[kern::kMaxDim];
        for (PointId p : ids.ids) {
            space.point(p, q);
            gap = std::max(gap, snap.dist_from(space.metric(), q));
        }
    }
    net.max_coverage_gap = gap;
    net.separation_ok = true;
    net.coverage_ok = gap <= r;
    return net;
}

PackingCoverReport verify_packing_cover(const MetricSpace& space,
                                        const NetResult& net, const SubsetRef& ids) {
    PackingCoverReport rep;
    if (net.centers.empty()) throw EmptySubset("net has no centers");

    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.centers.size(); ++i)
        for (std::size_t j = i + 1; j < net.centers.size(); ++j)
            min_sep = std::min(min_sep, distance(space, net.centers[i], net.centers[j]));
    rep.min_center_separation = min_sep;
    rep.separation_ok = net.centers.size() < 2 || min_sep > net.radius;
    // closed balls of radius r/2 around two centers are disjoint iff the
    // centers are strictly more than r apart
    rep.half_radius_disjoint_ok = rep.separation_ok;

    const SubsetRef centers_ref{net.centers};
    const SubsetSnapshot snap(space, centers_ref);
    double gap = 0.0;
    double q[kern::kMaxDim];
    for (PointId p : ids.ids) {
        space.point(p, q);
        gap = std::max(gap, snap.dist_from(space.metric(), q));
    }
    rep.max_coverage_gap = gap;
    rep.coverage_ok = gap <= net.radius;
    return rep;
}

}  // namespace porolab
