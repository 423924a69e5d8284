#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "porolab/regularity.hpp"
#include "porolab/space.hpp"

namespace porolab {

struct PorosityEntry {
    PointId x = 0;
    double r = 0.0;
    double rho_hat = 0.0;
    PointId witness = 0;
};

struct PorosityProfile {
    std::vector<PorosityEntry> entries;
    double rho_star = 0.0;  // min over entries
    ScaleGrid grid;
};

// Shared state for repeated porosity queries against one base set: subset
// snapshot plus the distance of every sample point to A.
class PorosityContext {
public:
    PorosityContext(const MetricSpace& space, const BallIndex& index,
                    const SubsetRef& a);

    const MetricSpace& space() const noexcept { return space_; }
    const BallIndex& index() const noexcept { return index_; }
    const SubsetRef& base_set() const noexcept { return a_; }
    double dist_to_a(PointId p) const { return dists_[p]; }

private:
    const MetricSpace& space_;
    const BallIndex& index_;
    const SubsetRef& a_;
    std::vector<double> dists_;
};

struct AnnulusSeries {
    PointId x0 = 0;
    double r0 = 0.0;
    double rho = 0.0;
    std::vector<double> alpha;  // alpha[k-1] = mass of annulus k, k = 1..k_max
    int k_max = 0;
    SubsetRef restricted;  // A intersected with B(x0, r0)
};

struct RecursionReport {
    bool recursion_pass = false;
    bool growth_pass = false;
    double worst_recursion_margin = 0.0;  // min over k of alpha_k - gamma*tail
    double worst_growth_margin = 0.0;     // min over k of bound - alpha_k
};

struct DecayReport {
    double gamma = 0.0;
    double delta_theory = 0.0;
    double delta_empirical = 0.0;
    double C_empirical = 0.0;
    bool recursion_pass = false;
    bool growth_pass = false;
    // context the report was produced under
    double rho_star = 0.0;
    double rho_used = 0.0;
    int k_max = 0;
    double s_hat = 0.0;
    double a_hat = 0.0;
    double b_hat = 0.0;
    double base_mass = 0.0;  // mu(B(x0, r0))
    std::vector<std::pair<double, double>> mass_curve;  // (r, m(r))
};

// Largest relative hole: max over sample points y in B(x,r) of
// min((r - d(x,y))/r, (dist(y,A) - eps)/r), clamped at 0. The -eps slack
// keeps the empty-ball condition conservative at finite resolution.
// Witness is the argmax candidate, lowest id on ties.
std::pair<double, PointId> porosity_at(const PorosityContext& ctx, PointId x, double r);
std::pair<double, PointId> porosity_at(const MetricSpace& space, const BallIndex& index,
                                       const SubsetRef& a, PointId x, double r);

PorosityProfile uniform_porosity(const MetricSpace& space, const BallIndex& index,
                                 const SubsetRef& a, const ScaleGrid& grid,
                                 std::size_t sample_size, std::uint64_t seed = 0);

// mass of { p : dist(p, A) < r }, strict per the neighborhood definition
// (tau-guarded against decimal-boundary float artifacts).
double neighborhood_mass(const MetricSpace& space, const BallIndex& index,
                         const WeightedMeasure& mu, const SubsetRef& a, double r);

AnnulusSeries annulus_series(const MetricSpace& space, const BallIndex& index,
                             const WeightedMeasure& mu, const SubsetRef& a,
                             PointId x0, double r0, double rho);

// gamma = c^floor(log2(rho/6))
double gamma_doubling(double c, double rho);
// gamma = (a/b) * (rho/6)^s
double gamma_regular(double a, double b, double s, double rho);

// gamma / (6 ln(1/rho))
double delta_theory(double gamma, double rho);

// Truncated-tail recursion alpha_k >= gamma * sum_{i>k} alpha_i and growth
// alpha_k <= gamma^-1 (gamma+1)^(2-k) alpha_1, both tau-tolerant. The
// truncation only understates the tail, so a pass does not certify the
// infinite-sum inequality; k_max bounds the verified range.
RecursionReport verify_recursion(const AnnulusSeries& series, double gamma);

DecayReport decay_profile(const MetricSpace& space, const BallIndex& index,
                          const WeightedMeasure& mu, const SubsetRef& a,
                          PointId x0, double r0, const ScaleGrid& grid,
                          std::size_t porosity_sample = 32, std::uint64_t seed = 0);

}  // namespace porolab
