#include "porolab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "porolab/covering.hpp"
#include "porolab/errors.hpp"
#include "porolab/porosity.hpp"
#include "porolab/sampling.hpp"

namespace porolab {

PlantedSet plant_regular_set(const double* center, double radius, double t,
                             int depth, int dim, Metric metric) {
    if (dim < 1 || dim > kern::kMaxDim) throw InvalidArgument("bad dim");
    if (!(radius > 0.0)) throw BadRadius("patch radius must be positive");
    if (depth < 0) throw InvalidArgument("depth must be >= 0");
    if (!(t > 0.0)) throw InvalidArgument("t must be positive");
    if (t > static_cast<double>(dim))
        throw UnreachableExponent(
            "t > d needs contraction 2^(-d/t) > 1/2, which breaks cell disjointness");

    const double contraction = std::pow(2.0, -static_cast<double>(dim) / t);
    const double side = metric == Metric::euclidean
                            ? 2.0 * radius / std::sqrt(static_cast<double>(dim))
                            : 2.0 * radius;

    // per-axis 1-D cell origins relative to the cube's low corner
    std::vector<double> origins{0.0};
    double size = side;
    for (int level = 0; level < depth; ++level) {
        std::vector<double> next;
        next.reserve(origins.size() * 2);
        for (double o : origins) {
            next.push_back(o);
            next.push_back(o + size - contraction * size);
        }
        origins.swap(next);
        size *= contraction;
    }
    std::vector<double> axis_centers(origins.size());
    for (std::size_t i = 0; i < origins.size(); ++i)
        axis_centers[i] = origins[i] + 0.5 * size;

    PlantedSet set;
    set.dim = dim;
    set.depth = depth;
    set.cube_side = side;
    set.cell_size = size;
    const std::size_t per_axis = axis_centers.size();
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= per_axis;
    set.total_mass = std::pow(radius, t);
    set.point_weight = set.total_mass / static_cast<double>(total);

    set.coords.reserve(total * static_cast<std::size_t>(dim));
    std::size_t digit[kern::kMaxDim] = {};
    for (std::size_t i = 0; i < total; ++i) {
        for (int a = 0; a < dim; ++a)
            set.coords.push_back(center[a] - 0.5 * side + axis_centers[digit[a]]);
        int a = dim - 1;
        while (a >= 0 && ++digit[a] == per_axis) digit[a--] = 0;
    }
    return set;
}

Envelope construct_envelope(const MetricSpace& space, const BallIndex& index,
                            const SubsetRef& a, const EnvelopeParams& params) {
    if (a.empty()) throw EmptySubset("envelope base set is empty");
    a.check_against(space);
    if (!(params.rho > 0.0 && params.rho <= 1.0 / 3.0))
        throw BadPorosityParam("envelope rho must lie in (0, 1/3]");
    if (!(params.t > 0.0)) throw InvalidArgument("t must be positive");
    if (params.t > static_cast<double>(space.dim()))
        throw UnreachableExponent("t exceeds the ambient dimension");
    if (params.max_scale < 0) throw InvalidArgument("J must be >= 0");
    if (params.plant_depth < 0) throw InvalidArgument("plant_depth must be >= 0");

    const int dim = space.dim();
    const double base = params.base();
    const double contraction = std::pow(2.0, -static_cast<double>(dim) / params.t);
    if (params.max_scale >= 1 &&
        std::pow(contraction, params.plant_depth) >
            std::sqrt(static_cast<double>(dim)) / 8.0)
        throw ResolutionError(
            "plant_depth too shallow: patches would not resolve their own scale");

    const double eps = space.epsilon();
    const PorosityContext ctx(space, index, a);

    // audit: porosity minima over the resolvable part of the scale ladder
    std::vector<double> ladder_rho_min;
    std::vector<int> deficit_scales;
    {
        std::vector<double> ladder;
        for (int j = 1; j <= params.max_scale; ++j) {
            const double r = std::pow(base, j);
            if (r >= kResolvabilityKappa * eps) ladder.push_back(r);
        }
        const auto positions = stride_sample(a.size(), 256, params.seed);
        for (std::size_t j = 0; j < ladder.size(); ++j) {
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t pos : positions) {
                const auto [rho, witness] = porosity_at(ctx, a.ids[pos], ladder[j]);
                (void)witness;
                lo = std::min(lo, rho);
            }
            ladder_rho_min.push_back(lo);
            if (lo < params.rho) deficit_scales.push_back(static_cast<int>(j) + 1);
        }
    }

    struct PendingPatch {
        int scale_j;
        int index_i;
        PointId hole_center;
        double radius;
        double clearance;
        PlantedSet set;
    };
    std::vector<PendingPatch> pending;
    std::vector<std::size_t> net_sizes;
    std::vector<int> skipped_centers;

    std::vector<PointId> candidates;
    for (int j = 1; j <= params.max_scale; ++j) {
        const double net_r = std::pow(base, j);
        const double patch_r = std::pow(base, j + 1);
        const double clearance_floor = params.rho * net_r - eps;
        const double half_side = space.metric() == Metric::euclidean
                                     ? patch_r / std::sqrt(static_cast<double>(dim))
                                     : patch_r;

        const NetResult net = greedy_net(space, index, a, net_r);
        net_sizes.push_back(net.centers.size());
        int skipped = 0;
        int planted = 0;
        std::vector<PointId> accepted_holes;  // same-scale patch balls stay disjoint
        for (std::size_t i = 0; i < net.centers.size(); ++i) {
            const PointId x_ji = net.centers[i];
            const auto q = space.point(x_ji);
            index.ball_into(space, q.data(), net_r, candidates);

            // deepest hole whose patch cube stays inside the unit cube and
            // whose patch ball misses every patch already planted at this
            // scale (neighboring net balls can stare into the same gap);
            // candidates ascend, so ties keep the lowest id
            PointId z = x_ji;
            double best = -1.0;
            for (PointId y : candidates) {
                bool fits = true;
                for (int axis = 0; axis < dim && fits; ++axis) {
                    const double c = space.coord(y, axis);
                    fits = c - half_side >= 0.0 && c + half_side <= 1.0;
                }
                for (std::size_t h = 0; h < accepted_holes.size() && fits; ++h)
                    fits = distance(space, y, accepted_holes[h]) > 2.0 * patch_r;
                if (!fits) continue;
                const double d = ctx.dist_to_a(y);
                if (d > best) {
                    best = d;
                    z = y;
                }
            }
            if (best < clearance_floor) {
                ++skipped;
                continue;
            }
            accepted_holes.push_back(z);
            const auto zq = space.point(z);
            pending.push_back(PendingPatch{
                j, static_cast<int>(i), z, patch_r, best,
                plant_regular_set(zq.data(), patch_r, params.t, params.plant_depth,
                                  dim, space.metric())});
            ++planted;
        }
        skipped_centers.push_back(skipped);
        if (!net.centers.empty() && planted == 0)
            throw PorosityDeficit("no net center at scale " + std::to_string(j) +
                                  " admits a hole of radius rho*(rho/2)^j");
    }

    // assemble F: A's points first, planted points after
    const std::size_t a_count = a.size();
    std::vector<double> coords;
    std::vector<double> weights(a_count, 0.0);
    coords.reserve(a_count * static_cast<std::size_t>(dim));
    for (PointId p : a.ids)
        for (int axis = 0; axis < dim; ++axis) coords.push_back(space.coord(p, axis));

    std::vector<PlantedPatch> patches;
    double min_cell = std::numeric_limits<double>::infinity();
    for (auto& pp : pending) {
        PlantedPatch patch;
        patch.scale_j = pp.scale_j;
        patch.index_i = pp.index_i;
        patch.hole_center = pp.hole_center;
        space.point(pp.hole_center, patch.center_coords.data());
        patch.radius = pp.radius;
        patch.hole_clearance = pp.clearance;
        patch.cell_size = pp.set.cell_size;
        patch.total_mass = pp.set.total_mass;
        min_cell = std::min(min_cell, pp.set.cell_size);

        const std::size_t pts = pp.set.coords.size() / static_cast<std::size_t>(dim);
        for (std::size_t p = 0; p < pts; ++p) {
            patch.point_ids.push_back(static_cast<PointId>(coords.size() / dim));
            for (int axis = 0; axis < dim; ++axis)
                coords.push_back(pp.set.coords[p * dim + axis]);
            weights.push_back(pp.set.point_weight);
        }
        patches.push_back(std::move(patch));
    }

    // exact duplicates are essentially impossible but would fail MetricSpace
    // construction; merge weights into the lowest id and remap
    std::size_t merged = 0, dropped_on_a = 0;
    const std::size_t total = coords.size() / dim;
    {
        std::vector<std::size_t> order(total);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto less = [&](std::size_t l, std::size_t r) {
            for (int axis = 0; axis < dim; ++axis) {
                const double cl = coords[l * dim + axis], cr = coords[r * dim + axis];
                if (cl != cr) return cl < cr;
            }
            return l < r;
        };
        std::sort(order.begin(), order.end(), less);
        std::vector<std::size_t> remap(total);
        std::iota(remap.begin(), remap.end(), std::size_t{0});
        bool any = false;
        auto same = [&](std::size_t l, std::size_t r) {
            for (int axis = 0; axis < dim; ++axis)
                if (coords[l * dim + axis] != coords[r * dim + axis]) return false;
            return true;
        };
        for (std::size_t i = 1; i < total; ++i) {
            if (same(order[i - 1], order[i])) {
                const std::size_t keep = std::min(remap[order[i - 1]], order[i - 1]);
                const std::size_t dup = order[i];
                remap[dup] = keep;
                any = true;
                if (keep < a_count) {
                    ++dropped_on_a;  // nu stays zero on A points
                } else {
                    weights[keep] += weights[dup];
                    ++merged;
                }
            } else {
                remap[order[i]] = order[i];
            }
        }
        if (any) {
            std::vector<std::size_t> new_id(total);
            std::vector<double> packed_coords;
            std::vector<double> packed_weights;
            std::size_t next = 0;
            for (std::size_t i = 0; i < total; ++i) {
                if (remap[i] == i) {
                    new_id[i] = next++;
                    for (int axis = 0; axis < dim; ++axis)
                        packed_coords.push_back(coords[i * dim + axis]);
                    packed_weights.push_back(weights[i]);
                }
            }
            for (std::size_t i = 0; i < total; ++i)
                if (remap[i] != i) new_id[i] = new_id[remap[i]];
            coords.swap(packed_coords);
            weights.swap(packed_weights);
            for (auto& patch : patches)
                for (auto& id : patch.point_ids)
                    id = static_cast<PointId>(new_id[id]);
        }
    }

    const double f_eps = patches.empty() ? space.epsilon() : min_cell;
    MetricSpace f_space(dim, space.metric(), std::move(coords), f_eps);
    BallIndex f_index = BallIndex::build(f_space);

    std::vector<PointId> a_in_f(a_count);
    std::iota(a_in_f.begin(), a_in_f.end(), PointId{0});

    WeightedMeasure nu = patches.empty()
                             ? WeightedMeasure::allow_zero(std::move(weights))
                             : WeightedMeasure(std::move(weights));

    Envelope out{params,
                 std::move(patches),
                 std::move(f_space),
                 std::move(f_index),
                 SubsetRef{std::move(a_in_f)},
                 std::move(nu),
                 a,
                 std::move(net_sizes),
                 std::move(skipped_centers),
                 std::move(ladder_rho_min),
                 std::move(deficit_scales),
                 merged,
                 dropped_on_a};
    return out;
}

IntersectionCounts count_intersections(const MetricSpace& base_space,
                                       const Envelope& envelope, PointId x, int k) {
    if (k < 1 || k > envelope.params.max_scale)
        throw InvalidArgument("k must lie in 1..J");
    if (!envelope.base_a.contains(x))
        throw NotInBaseSet("x is not a point of A");

    const double base = envelope.params.base();
    const double ball_r = std::pow(base, k);
    const double slack = base_space.epsilon() + kTau;

    double q[kern::kMaxDim];
    base_space.point(x, q);

    IntersectionCounts out;
    out.k = k;
    out.n.assign(static_cast<std::size_t>(envelope.params.max_scale), 0);
    out.n_discounted.assign(static_cast<std::size_t>(envelope.params.max_scale), 0);
    for (const auto& patch : envelope.patches) {
        double d;
        if (base_space.metric() == Metric::euclidean) {
            double acc = 0.0;
            for (int a = 0; a < base_space.dim(); ++a) {
                const double dd = q[a] - patch.center_coords[static_cast<std::size_t>(a)];
                acc += dd * dd;
            }
            d = std::sqrt(acc);
        } else {
            double acc = 0.0;
            for (int a = 0; a < base_space.dim(); ++a)
                acc = std::max(acc, std::fabs(q[a] - patch.center_coords[static_cast<std::size_t>(a)]));
            d = acc;
        }
        const double reach = ball_r + patch.radius;
        const auto j = static_cast<std::size_t>(patch.scale_j - 1);
        if (d <= reach) out.n[j]++;
        if (d <= reach - slack) out.n_discounted[j]++;
    }
    out.front_disjoint_ok = true;
    for (int j = 1; j <= k - 1; ++j)
        if (out.n_discounted[static_cast<std::size_t>(j - 1)] != 0)
            out.front_disjoint_ok = false;
    return out;
}

NuBoundStats verify_nu_bound(const Envelope& envelope, const SubsetRef& sample,
                             const ScaleGrid& grid) {
    if (sample.empty()) throw EmptySubset("nu bound sample is empty");
    NuBoundStats stats;
    const auto radii = grid.radii();
    for (PointId xb : sample.ids) {
        const auto pos = std::lower_bound(envelope.base_a.ids.begin(),
                                          envelope.base_a.ids.end(), xb);
        if (pos == envelope.base_a.ids.end() || *pos != xb)
            throw NotInBaseSet("sample id not in A");
        const auto x_f = static_cast<PointId>(pos - envelope.base_a.ids.begin());
        for (double r : radii) {
            const double m = ball_mass(envelope.nu, envelope.space, envelope.index, x_f, r);
            const double ratio = m / std::pow(r, envelope.params.t);
            stats.rows.push_back(NuBoundRow{xb, r, m, ratio});
        }
    }
    std::vector<double> ratios;
    ratios.reserve(stats.rows.size());
    for (const auto& row : stats.rows) ratios.push_back(row.ratio);
    std::sort(ratios.begin(), ratios.end());
    stats.max_ratio = ratios.back();
    const std::size_t n = ratios.size();
    stats.median_ratio = n % 2 == 1 ? ratios[n / 2]
                                    : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    return stats;
}

CountingFit check_counting_bound(const MetricSpace& base_space, const Envelope& envelope,
                                 PointId x, int k, double s, double delta) {
    const auto counts = count_intersections(base_space, envelope, x, k);
    const double rho = envelope.params.rho;
    const double exponent = s - delta;

    CountingFit fit;
    std::vector<double> xs, ys;
    for (int j = k; j <= envelope.params.max_scale; ++j) {
        const auto nj = counts.n[static_cast<std::size_t>(j - 1)];
        const double q = static_cast<double>(nj) *
                         std::pow(rho, static_cast<double>(j - k) * exponent);
        fit.q.push_back(q);
        fit.c_star = std::max(fit.c_star, q);
        if (nj > 0) {
            xs.push_back(static_cast<double>(j));
            ys.push_back(std::log(q));
        }
    }
    if (xs.empty()) {
        fit.log_slope = 0.0;  // no intersections anywhere: trivially bounded
        return fit;
    }
    if (xs.size() < 2)
        throw InsufficientScales("need at least 2 scales with N_j > 0");
    fit.log_slope = lsq_slope(xs, ys);
    return fit;
}

double porosity_bound_from_regularity(double s, double t, double a_x, double b_x,
                                      double a_a, double b_a) {
    if (!(t > 0.0 && s > 0.0)) throw InvalidArgument("exponents must be positive");
    if (!(t < s)) throw NoGap("need t < s");
    if (!(a_x > 0.0 && a_x <= b_x)) throw InvalidArgument("need 0 < aX <= bX");
    if (!(a_a > 0.0 && a_a <= b_a)) throw InvalidArgument("need 0 < aA <= bA");

    // compare in log2 to avoid overflow at large k
    const double lhs0 = std::log2(a_x / b_x) - s * std::log2(10.0);
    const double rhs0 = std::log2(b_a / a_a) + s * std::log2(10.0);
    for (int k = 1; k <= 1000000; ++k) {
        const double lhs = lhs0 + static_cast<double>(k) * s;
        const double rhs = rhs0 + static_cast<double>(k) * t;
        if (lhs > rhs) return std::exp2(-static_cast<double>(k + 1));
    }
    throw InvalidArgument("no crossing scale below 2^-1000001");
}

}  // namespace porolab
