#include "porolab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "porolab/errors.hpp"
#include "porolab/parallel.hpp"

namespace porolab {

const char* metric_name(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "chebyshev";
}

Metric metric_from_name(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "chebyshev") return Metric::chebyshev;
    throw InvalidArgument("unknown metric '" + name + "'");
}

namespace {

// closed-ball predicate threshold in kernel metric units
inline double kernel_threshold(Metric m, double r) {
    return m == Metric::euclidean ? r * r : r;
}

inline double kernel_to_distance(Metric m, double v) {
    return m == Metric::euclidean ? std::sqrt(v) : v;
}

}  // namespace

// --- MetricSpace ---------------------------------------------------------

MetricSpace::MetricSpace(int dim, Metric metric, std::vector<double> coords,
                         double epsilon)
    : dim_(dim), metric_(metric), epsilon_(epsilon) {
    if (dim < 1 || dim > kern::kMaxDim)
        throw InvalidArgument("dim must be in 1.." + std::to_string(kern::kMaxDim));
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (coords.size() % static_cast<std::size_t>(dim) != 0)
        throw InvalidArgument("coordinate array length not a multiple of dim");
    n_ = coords.size() / static_cast<std::size_t>(dim);
    if (n_ == 0) throw InvalidArgument("a MetricSpace needs at least one point");
    if (n_ > std::numeric_limits<PointId>::max())
        throw InvalidArgument("too many points for 32-bit ids");

    for (double c : coords)
        if (!(c >= 0.0 && c <= 1.0))
            throw InvalidArgument("coordinate outside the unit cube");

    // transpose to axis-major
    axes_.resize(coords.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (int a = 0; a < dim_; ++a)
            axes_[static_cast<std::size_t>(a) * n_ + i] =
                coords[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(a)];

    // duplicate rejection via lexicographic sort of ids
    std::vector<PointId> idx(n_);
    std::iota(idx.begin(), idx.end(), PointId{0});
    std::sort(idx.begin(), idx.end(), [&](PointId l, PointId r) {
        for (int a = 0; a < dim_; ++a) {
            const double cl = coord(l, a), cr = coord(r, a);
            if (cl != cr) return cl < cr;
        }
        return false;
    });
    for (std::size_t i = 1; i < n_; ++i) {
        bool same = true;
        for (int a = 0; a < dim_ && same; ++a)
            same = coord(idx[i - 1], a) == coord(idx[i], a);
        if (same)
            throw DuplicatePoint("points " + std::to_string(idx[i - 1]) + " and " +
                                 std::to_string(idx[i]) + " share coordinates");
    }
}

void MetricSpace::point(PointId p, double* out) const {
    for (int a = 0; a < dim_; ++a) out[a] = coord(p, a);
}

std::array<double, kern::kMaxDim> MetricSpace::point(PointId p) const {
    std::array<double, kern::kMaxDim> out{};
    point(p, out.data());
    return out;
}

kern::CoordView MetricSpace::view() const noexcept {
    kern::CoordView v;
    v.n = n_;
    v.dim = dim_;
    for (int a = 0; a < dim_; ++a) v.axes[a] = axes_.data() + static_cast<std::size_t>(a) * n_;
    return v;
}

void MetricSpace::check_id(PointId p) const {
    if (p >= n_)
        throw IdOutOfRange("point id " + std::to_string(p) + " >= " + std::to_string(n_));
}

double MetricSpace::ambient_diameter() const {
    return metric_ == Metric::euclidean ? std::sqrt(static_cast<double>(dim_)) : 1.0;
}

// --- WeightedMeasure -----------------------------------------------------

WeightedMeasure::WeightedMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
        sum += w;
    }
    if (!(sum > 0.0)) throw InvalidArgument("total mass must be positive");
    total_ = sum;
}

WeightedMeasure WeightedMeasure::allow_zero(std::vector<double> weights) {
    WeightedMeasure m(std::vector<double>{1.0});
    for (double w : weights)
        if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
    m.weights_ = std::move(weights);
    m.total_ = 0.0;
    for (double w : m.weights_) m.total_ += w;
    return m;
}

std::vector<PointId> WeightedMeasure::support() const {
    std::vector<PointId> out;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] > 0.0) out.push_back(static_cast<PointId>(i));
    return out;
}

// --- SubsetRef -----------------------------------------------------------

SubsetRef SubsetRef::of(std::vector<PointId> raw) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    return SubsetRef{std::move(raw)};
}

bool SubsetRef::contains(PointId p) const {
    return std::binary_search(ids.begin(), ids.end(), p);
}

void SubsetRef::check_against(const MetricSpace& space) const {
    for (PointId p : ids) space.check_id(p);
}

// --- BallIndex -----------------------------------------------------------

BallIndex BallIndex::build(const MetricSpace& space) {
    BallIndex ix;
    ix.dim_ = space.dim();
    ix.n_ = space.size();

    // aim for a handful of points per cell
    const double per_axis = std::pow(static_cast<double>(ix.n_), 1.0 / ix.dim_);
    ix.cells_ = static_cast<int>(std::clamp(per_axis / 2.0, 1.0, 2048.0));

    const int c = ix.cells_;
    std::size_t cell_count = 1;
    for (int a = 0; a < ix.dim_; ++a) cell_count *= static_cast<std::size_t>(c);

    auto cell_of = [&](PointId p) {
        std::size_t id = 0;
        for (int a = 0; a < ix.dim_; ++a) {
            int k = static_cast<int>(space.coord(p, a) * c);
            if (k >= c) k = c - 1;
            id = id * static_cast<std::size_t>(c) + static_cast<std::size_t>(k);
        }
        return id;
    };

    std::vector<std::uint32_t> counts(cell_count + 1, 0);
    for (std::size_t p = 0; p < ix.n_; ++p) counts[cell_of(static_cast<PointId>(p)) + 1]++;
    for (std::size_t i = 1; i <= cell_count; ++i) counts[i] += counts[i - 1];
    ix.cell_start_ = counts;

    ix.order_.resize(ix.n_);
    std::vector<std::uint32_t> cursor(ix.cell_start_.begin(), ix.cell_start_.end() - 1);
    // ascending p keeps ids ascending within each cell
    for (std::size_t p = 0; p < ix.n_; ++p)
        ix.order_[cursor[cell_of(static_cast<PointId>(p))]++] = static_cast<PointId>(p);

    ix.packed_.resize(ix.n_ * static_cast<std::size_t>(ix.dim_));
    for (std::size_t k = 0; k < ix.n_; ++k)
        for (int a = 0; a < ix.dim_; ++a)
            ix.packed_[static_cast<std::size_t>(a) * ix.n_ + k] = space.coord(ix.order_[k], a);
    return ix;
}

kern::CoordView BallIndex::packed_view(std::size_t begin, std::size_t end) const {
    kern::CoordView v;
    v.n = end - begin;
    v.dim = dim_;
    for (int a = 0; a < dim_; ++a)
        v.axes[a] = packed_.data() + static_cast<std::size_t>(a) * n_ + begin;
    return v;
}

// Visits contiguous [begin, end) runs of order_/packed_ covering every cell
// that can meet the ball. Runs are merged along the last axis, so slices are
// as long as possible.
template <typename Fn>
void BallIndex::for_slices(const double* center, double r, Fn&& fn) const {
    const int c = cells_;
    int lo[kern::kMaxDim];
    int hi[kern::kMaxDim];
    for (int a = 0; a < dim_; ++a) {
        // clamp in the double domain; the products can overflow int range
        lo[a] = static_cast<int>(std::clamp(std::floor((center[a] - r) * c), 0.0,
                                            static_cast<double>(c - 1)));
        hi[a] = static_cast<int>(std::clamp(std::floor((center[a] + r) * c), 0.0,
                                            static_cast<double>(c - 1)));
    }
    // odometer over the leading dim-1 axes
    int digit[kern::kMaxDim];
    for (int a = 0; a < dim_; ++a) digit[a] = lo[a];
    const int last = dim_ - 1;
    for (;;) {
        std::size_t row = 0;
        for (int a = 0; a < last; ++a)
            row = row * static_cast<std::size_t>(c) + static_cast<std::size_t>(digit[a]);
        const std::size_t first_cell = row * static_cast<std::size_t>(c) + static_cast<std::size_t>(lo[last]);
        const std::size_t last_cell = row * static_cast<std::size_t>(c) + static_cast<std::size_t>(hi[last]);
        const std::size_t begin = cell_start_[first_cell];
        const std::size_t end = cell_start_[last_cell + 1];
        if (begin < end) fn(begin, end);

        int a = last - 1;
        while (a >= 0 && digit[a] == hi[a]) --a;
        if (a < 0) break;
        ++digit[a];
        for (int b = a + 1; b < last; ++b) digit[b] = lo[b];
    }
}

namespace {
thread_local std::vector<double> t_metric_scratch;
}

void BallIndex::ball_into(const MetricSpace& space, const double* center, double r,
                          std::vector<PointId>& out) const {
    out.clear();
    if (!(r >= 0.0)) throw BadRadius("ball radius must be nonnegative");
    const auto& k = kern::active_kernels();
    const double thr = kernel_threshold(space.metric(), r);
    auto& scratch = t_metric_scratch;
    for_slices(center, r, [&](std::size_t begin, std::size_t end) {
        const std::size_t m = end - begin;
        scratch.resize(m);
        const kern::CoordView v = packed_view(begin, end);
        if (space.metric() == Metric::euclidean)
            k.metric_eu2_batch(v, center, scratch.data());
        else
            k.metric_ch_batch(v, center, scratch.data());
        for (std::size_t i = 0; i < m; ++i)
            if (scratch[i] <= thr) out.push_back(order_[begin + i]);
    });
    std::sort(out.begin(), out.end());
}

double BallIndex::mass(const MetricSpace& space, const WeightedMeasure& mu,
                       const double* center, double r) const {
    if (!(r >= 0.0)) throw BadRadius("ball radius must be nonnegative");
    const auto& k = kern::active_kernels();
    const double thr = kernel_threshold(space.metric(), r);
    auto& scratch = t_metric_scratch;
    double sum = 0.0;
    for_slices(center, r, [&](std::size_t begin, std::size_t end) {
        const std::size_t m = end - begin;
        scratch.resize(m);
        const kern::CoordView v = packed_view(begin, end);
        if (space.metric() == Metric::euclidean)
            k.metric_eu2_batch(v, center, scratch.data());
        else
            k.metric_ch_batch(v, center, scratch.data());
        for (std::size_t i = 0; i < m; ++i)
            if (scratch[i] <= thr) sum += mu.weight(order_[begin + i]);
    });
    return sum;
}

// --- SubsetSnapshot ------------------------------------------------------

SubsetSnapshot::SubsetSnapshot(const MetricSpace& space, const SubsetRef& subset)
    : dim_(space.dim()), n_(subset.size()) {
    if (subset.empty()) throw EmptySubset("snapshot of an empty subset");
    subset.check_against(space);
    axes_.resize(n_ * static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < n_; ++i)
        for (int a = 0; a < dim_; ++a)
            axes_[static_cast<std::size_t>(a) * n_ + i] = space.coord(subset.ids[i], a);
}

kern::CoordView SubsetSnapshot::view() const noexcept {
    kern::CoordView v;
    v.n = n_;
    v.dim = dim_;
    for (int a = 0; a < dim_; ++a) v.axes[a] = axes_.data() + static_cast<std::size_t>(a) * n_;
    return v;
}

double SubsetSnapshot::dist_from(Metric metric, const double* q) const {
    const auto& k = kern::active_kernels();
    const double m = metric == Metric::euclidean ? k.min_eu2(view(), q) : k.min_ch(view(), q);
    return kernel_to_distance(metric, m);
}

// --- operations ----------------------------------------------------------

double distance(const MetricSpace& space, PointId p, PointId q) {
    space.check_id(p);
    space.check_id(q);
    double acc = 0.0;
    if (space.metric() == Metric::euclidean) {
        for (int a = 0; a < space.dim(); ++a) {
            const double d = space.coord(p, a) - space.coord(q, a);
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (int a = 0; a < space.dim(); ++a) {
        const double d = std::fabs(space.coord(p, a) - space.coord(q, a));
        if (d > acc) acc = d;
    }
    return acc;
}

std::vector<PointId> ball_points(const MetricSpace& space, const BallIndex& index,
                                 PointId x, double r) {
    space.check_id(x);
    const auto q = space.point(x);
    std::vector<PointId> out;
    index.ball_into(space, q.data(), r, out);
    return out;
}

double ball_mass(const WeightedMeasure& mu, const MetricSpace& space,
                 const BallIndex& index, PointId x, double r) {
    space.check_id(x);
    if (mu.size() != space.size())
        throw InvalidArgument("measure not aligned to space ids");
    const auto q = space.point(x);
    return index.mass(space, mu, q.data(), r);
}

double dist_to_set(const MetricSpace& space, const BallIndex& index, PointId x,
                   const SubsetRef& a) {
    (void)index;
    space.check_id(x);
    if (a.empty()) throw EmptySubset("dist_to_set on empty subset");
    const SubsetSnapshot snap(space, a);
    const auto q = space.point(x);
    return snap.dist_from(space.metric(), q.data());
}

std::vector<double> dists_to_set(const MetricSpace& space, const SubsetRef& a) {
    if (a.empty()) throw EmptySubset("dists_to_set on empty subset");
    const SubsetSnapshot snap(space, a);
    std::vector<double> out(space.size());
    parallel_chunks(space.size(), 4096, [&](std::size_t begin, std::size_t end) {
        double q[kern::kMaxDim];
        for (std::size_t p = begin; p < end; ++p) {
            space.point(static_cast<PointId>(p), q);
            out[p] = snap.dist_from(space.metric(), q);
        }
    });
    return out;
}

}  // namespace porolab
