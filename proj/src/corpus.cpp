#include "porolab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "porolab/errors.hpp"

namespace porolab {

const char* fractal_kind_name(FractalKind k) {
    switch (k) {
        case FractalKind::middle_lambda_cantor_1d: return "cantor1d";
        case FractalKind::product_cantor: return "product_cantor";
        case FractalKind::four_corner: return "four_corner";
        case FractalKind::sierpinski_carpet: return "sierpinski_carpet";
        case FractalKind::full_grid: return "full_grid";
    }
    return "?";
}

FractalKind fractal_kind_from_name(const std::string& name) {
    if (name == "cantor1d") return FractalKind::middle_lambda_cantor_1d;
    if (name == "product_cantor") return FractalKind::product_cantor;
    if (name == "four_corner") return FractalKind::four_corner;
    if (name == "sierpinski_carpet") return FractalKind::sierpinski_carpet;
    if (name == "full_grid") return FractalKind::full_grid;
    throw InvalidArgument("unknown fractal kind '" + name + "'");
}

FractalSpec FractalSpec::make(FractalKind kind, int depth, int dim,
                              double contraction, std::uint64_t seed) {
    FractalSpec s;
    s.kind = kind;
    s.depth = depth;
    s.seed = seed;
    if (depth < 0) throw InvalidArgument("depth must be >= 0");
    switch (kind) {
        case FractalKind::middle_lambda_cantor_1d:
            s.dim = 1;
            s.contraction = contraction > 0.0 ? contraction : 1.0 / 3.0;
            s.pieces = 2;
            break;
        case FractalKind::product_cantor:
            s.dim = dim > 0 ? dim : 2;
            s.contraction = contraction > 0.0 ? contraction : 1.0 / 3.0;
            s.pieces = 1 << s.dim;
            break;
        case FractalKind::four_corner:
            s.dim = 2;
            s.contraction = contraction > 0.0 ? contraction : 0.25;
            s.pieces = 4;
            break;
        case FractalKind::sierpinski_carpet:
            s.dim = 2;
            s.contraction = contraction > 0.0 ? contraction : 1.0 / 3.0;
            if (std::fabs(s.contraction - 1.0 / 3.0) > 1e-15)
                throw InvalidArgument("sierpinski_carpet requires contraction 1/3");
            s.pieces = 8;
            break;
        case FractalKind::full_grid:
            s.dim = dim > 0 ? dim : 1;
            s.contraction = contraction > 0.0 ? contraction : 0.5;
            s.pieces = 1 << s.dim;
            break;
    }
    if (s.dim < 1 || s.dim > kern::kMaxDim) throw InvalidArgument("bad dim");
    if (!(s.contraction > 0.0 && s.contraction <= 0.5))
        throw InvalidArgument("contraction must be in (0, 1/2]");
    return s;
}

double similarity_dimension(const FractalSpec& spec) {
    if (spec.pieces < 1) throw InvalidArgument("pieces must be >= 1");
    if (!(spec.contraction > 0.0 && spec.contraction < 1.0)) {
        if (spec.contraction == 1.0 && spec.pieces > 1)
            throw DegenerateSpec("contraction 1 with more than one piece");
        throw InvalidArgument("contraction must be in (0, 1)");
    }
    return std::log(static_cast<double>(spec.pieces)) / std::log(1.0 / spec.contraction);
}

namespace {

// Per-level per-axis cell offsets (in units of the parent cell) of the IFS.
std::vector<std::vector<double>> level_offsets(const FractalSpec& s) {
    const double far = 1.0 - s.contraction;
    std::vector<std::vector<double>> out;
    switch (s.kind) {
        case FractalKind::middle_lambda_cantor_1d:
            out = {{0.0}, {far}};
            break;
        case FractalKind::product_cantor:
        case FractalKind::four_corner: {
            const int combos = 1 << s.dim;
            for (int c = 0; c < combos; ++c) {
                std::vector<double> off(s.dim);
                for (int a = 0; a < s.dim; ++a) off[a] = (c >> a) & 1 ? far : 0.0;
                out.push_back(std::move(off));
            }
            break;
        }
        case FractalKind::sierpinski_carpet:
            for (int ky = 0; ky < 3; ++ky)
                for (int kx = 0; kx < 3; ++kx) {
                    if (kx == 1 && ky == 1) continue;
                    out.push_back({kx / 3.0, ky / 3.0});
                }
            break;
        case FractalKind::full_grid:
            break;  // handled separately
    }
    return out;
}

// Depth-level cell centers, point-major.
std::vector<double> ifs_centers(const FractalSpec& s) {
    const auto offsets = level_offsets(s);
    std::vector<double> origins(static_cast<std::size_t>(s.dim), 0.0);  // one cell, origin 0
    std::vector<double> next;
    double scale = 1.0;
    for (int level = 0; level < s.depth; ++level) {
        next.clear();
        next.reserve(origins.size() * offsets.size());
        const std::size_t cells = origins.size() / static_cast<std::size_t>(s.dim);
        for (std::size_t c = 0; c < cells; ++c)
            for (const auto& off : offsets)
                for (int a = 0; a < s.dim; ++a)
                    next.push_back(origins[c * s.dim + a] + scale * off[static_cast<std::size_t>(a)]);
        origins.swap(next);
        scale *= s.contraction;
    }
    // centers = origin + half cell per axis; scale is now contraction^depth
    for (double& v : origins) v += 0.5 * scale;
    return origins;
}

}  // namespace

GeneratedCorpus generate(const FractalSpec& spec, double ambient_spacing) {
    const double cell = std::pow(spec.contraction, spec.depth);
    if (!(ambient_spacing > 0.0)) throw InvalidArgument("spacing must be positive");
    if (ambient_spacing > cell * (1.0 + 1e-12))
        throw ResolutionError("ambient spacing coarser than fractal cell size");

    const std::size_t grid_n = static_cast<std::size_t>(std::ceil(1.0 / ambient_spacing - 1e-9));
    const double h = 1.0 / static_cast<double>(grid_n);
    const std::size_t per_axis = grid_n + 1;

    std::size_t total_grid = 1;
    for (int a = 0; a < spec.dim; ++a) total_grid *= per_axis;

    std::vector<double> coords;
    coords.reserve(total_grid * static_cast<std::size_t>(spec.dim));
    {
        std::size_t digit[kern::kMaxDim] = {};
        for (std::size_t i = 0; i < total_grid; ++i) {
            for (int a = 0; a < spec.dim; ++a)
                coords.push_back(static_cast<double>(digit[a]) / static_cast<double>(grid_n));
            int a = spec.dim - 1;
            while (a >= 0 && ++digit[a] == per_axis) digit[a--] = 0;
        }
    }

    std::vector<PointId> a_ids;
    if (spec.kind == FractalKind::full_grid) {
        a_ids.resize(total_grid);
        for (std::size_t i = 0; i < total_grid; ++i) a_ids[i] = static_cast<PointId>(i);
    } else {
        const std::vector<double> centers = ifs_centers(spec);
        const std::size_t m = centers.size() / static_cast<std::size_t>(spec.dim);
        a_ids.reserve(m);
        for (std::size_t c = 0; c < m; ++c) {
            // merge with an existing grid point on exact coordinate match
            bool on_grid = true;
            std::size_t flat = 0;
            for (int a = 0; a < spec.dim && on_grid; ++a) {
                const double v = centers[c * spec.dim + a];
                const auto k = static_cast<std::size_t>(std::llround(v * static_cast<double>(grid_n)));
                on_grid = k <= grid_n && static_cast<double>(k) / static_cast<double>(grid_n) == v;
                flat = flat * per_axis + k;
            }
            if (on_grid) {
                a_ids.push_back(static_cast<PointId>(flat));
            } else {
                a_ids.push_back(static_cast<PointId>(coords.size() / spec.dim));
                for (int a = 0; a < spec.dim; ++a) coords.push_back(centers[c * spec.dim + a]);
            }
        }
    }

    MetricSpace space(spec.dim, Metric::euclidean, std::move(coords), h);
    SubsetRef a_set = SubsetRef::of(a_ids);

    std::vector<double> weights(space.size(), 0.0);
    const double w = 1.0 / static_cast<double>(a_set.size());
    for (PointId p : a_set.ids) weights[p] = w;
    WeightedMeasure natural(std::move(weights));

    GroundTruth truth;
    truth.similarity_dimension = similarity_dimension(spec);
    truth.cell_size = cell;
    if (spec.kind == FractalKind::middle_lambda_cantor_1d &&
        std::fabs(spec.contraction - 1.0 / 3.0) < 1e-12)
        truth.expected_porosity_range = {0.10, 0.5};

    return GeneratedCorpus{std::move(space), std::move(a_set), std::move(natural),
                           truth};
}

WeightedMeasure ambient_measure(const MetricSpace& space, const SubsetRef& a_set) {
    a_set.check_against(space);
    const double cell_mass = std::pow(space.epsilon(), space.dim());
    const auto grid_n = static_cast<double>(std::llround(1.0 / space.epsilon()));
    std::vector<double> w(space.size(), cell_mass);
    // off-grid A centers carry no ambient mass; A points that sit on the
    // lattice (full_grid style) keep theirs
    for (PointId p : a_set.ids) {
        bool on_grid = true;
        for (int a = 0; a < space.dim() && on_grid; ++a) {
            const double v = space.coord(p, a);
            const double k = std::round(v * grid_n);
            on_grid = k >= 0.0 && k <= grid_n && k / grid_n == v;
        }
        if (!on_grid) w[p] = 0.0;
    }
    return WeightedMeasure(std::move(w));
}

}  // namespace porolab
