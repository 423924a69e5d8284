#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "porolab/space.hpp"

namespace porolab {

enum class FractalKind {
    middle_lambda_cantor_1d,
    product_cantor,
    four_corner,
    sierpinski_carpet,
    full_grid,
};

const char* fractal_kind_name(FractalKind k);
FractalKind fractal_kind_from_name(const std::string& name);

struct FractalSpec {
    FractalKind kind = FractalKind::middle_lambda_cantor_1d;
    int dim = 1;               // derived for 1-d / planar kinds, free for product/full_grid
    double contraction = 1.0 / 3.0;  // per-axis ratio in (0, 1/2]
    int pieces = 2;            // surviving cells per level, derived from kind/dim
    int depth = 1;
    std::uint64_t seed = 0;    // reserved for randomized kinds

    // Fills dim/pieces/contraction defaults for the kind and validates.
    static FractalSpec make(FractalKind kind, int depth, int dim = 0,
                            double contraction = 0.0, std::uint64_t seed = 0);
};

struct GroundTruth {
    double similarity_dimension = 0.0;
    double cell_size = 1.0;
    std::optional<std::pair<double, double>> expected_porosity_range;
};

struct GeneratedCorpus {
    MetricSpace space;
    SubsetRef a_set;
    WeightedMeasure natural;  // uniform self-similar measure on A, total 1
    GroundTruth truth;
};

// ln(m) / ln(1/contraction)
double similarity_dimension(const FractalSpec& spec);

// Uniform ambient grid of the unit cube at the given spacing with the
// fractal's depth-level cell centers merged in. spacing "auto" in the CLI
// maps to the cell size contraction^depth.
GeneratedCorpus generate(const FractalSpec& spec, double ambient_spacing);

// Lebesgue-like ambient measure: spacing^d on every ambient grid point,
// zero on the extra A centers (so mu(A) = 0 where A is off-grid).
WeightedMeasure ambient_measure(const MetricSpace& space, const SubsetRef& a_set);

}  // namespace porolab
