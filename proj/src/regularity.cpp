#include "porolab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "porolab/errors.hpp"
#include "porolab/sampling.hpp"

namespace porolab {

ScaleGrid ScaleGrid::geometric(double r_min, double r_max, int count, double epsilon) {
    if (count < 2) throw BadGrid("a scale grid needs at least 2 radii");
    const double floor_r = kResolvabilityKappa * epsilon;
    if (!(r_min >= floor_r - kTau))
        throw BadGrid("r_min below the resolvability floor kappa*epsilon");
    if (!(r_min < r_max)) throw BadGrid("need r_min < r_max");
    if (!(r_max <= 1.0 + kTau)) throw BadGrid("r_max must be <= 1");
    return ScaleGrid{r_min, r_max, count};
}

std::vector<double> ScaleGrid::radii() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    const double ratio = r_max / r_min;
    for (int j = 0; j < count; ++j)
        out[static_cast<std::size_t>(j)] =
            r_min * std::pow(ratio, static_cast<double>(j) / (count - 1));
    return out;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("all abscissae coincide");
    return sxy / sxx;
}

DoublingEstimate estimate_doubling(const MetricSpace& space, const BallIndex& index,
                                   const WeightedMeasure& mu, const SubsetRef& sample,
                                   const ScaleGrid& grid) {
    if (sample.empty()) throw EmptySubset("doubling sample is empty");
    sample.check_against(space);
    DoublingEstimate est;
    est.grid = grid;
    est.c_hat = 1.0;
    est.witness_x = sample.ids.front();
    est.witness_r = grid.r_min;
    const auto radii = grid.radii();
    for (PointId x : sample.ids) {
        for (double r : radii) {
            const double small = ball_mass(mu, space, index, x, r);
            if (!(small > 0.0))
                throw EmptyBall("mu(B(x,r)) = 0 at x=" + std::to_string(x) +
                                ", r=" + std::to_string(r));
            const double big = ball_mass(mu, space, index, x, 2.0 * r);
            const double ratio = big / small;
            if (ratio > est.c_hat) {
                est.c_hat = ratio;
                est.witness_x = x;
                est.witness_r = r;
            }
        }
    }
    return est;
}

RegularityFit fit_regularity(const MetricSpace& space, const BallIndex& index,
                             const WeightedMeasure& mu, const SubsetRef& a,
                             const ScaleGrid& grid, std::size_t sample_size,
                             std::uint64_t seed) {
    if (a.empty()) throw EmptySubset("regularity sample set is empty");
    if (sample_size == 0) throw InvalidArgument("sample_size must be positive");
    a.check_against(space);
    const auto positions = stride_sample(a.size(), sample_size, seed);
    const auto radii = grid.radii();

    std::vector<double> log_r, log_m;
    log_r.reserve(positions.size() * radii.size());
    log_m.reserve(positions.size() * radii.size());
    for (std::size_t pos : positions) {
        const PointId x = a.ids[pos];
        for (double r : radii) {
            const double m = ball_mass(mu, space, index, x, r);
            if (!(m > 0.0))
                throw EmptyBall("mu(B(x,r)) = 0 at x=" + std::to_string(x) +
                                ", r=" + std::to_string(r));
            log_r.push_back(std::log(r));
            log_m.push_back(std::log(m));
        }
    }

    RegularityFit fit;
    fit.grid = grid;
    fit.sample_size = positions.size();
    fit.s_hat = lsq_slope(log_r, log_m);

    // implied per-point intercepts; their envelope makes
    //   a_hat * r^s_hat <= mu(B(x,r)) <= b_hat * r^s_hat
    // exact on all fitted pairs
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        const double c = log_m[i] - fit.s_hat * log_r[i];
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    fit.a_hat = std::exp(lo);
    fit.b_hat = std::exp(hi);

    const double mid = 0.5 * (lo + hi);
    double sq = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        const double e = log_m[i] - fit.s_hat * log_r[i] - mid;
        sq += e * e;
    }
    fit.rms_residual = std::sqrt(sq / static_cast<double>(log_r.size()));
    return fit;
}

std::vector<DoublingViolation> check_doubling_power(
    const MetricSpace& space, const BallIndex& index, const WeightedMeasure& mu,
    double c, const SubsetRef& sample, const ScaleGrid& grid,
    const std::vector<double>& alphas) {
    if (!(c >= 1.0)) throw InvalidArgument("doubling constant must be >= 1");
    for (double alpha : alphas)
        if (!(alpha > 0.0 && alpha < 1.0))
            throw BadAlpha("alpha must lie in (0,1), got " + std::to_string(alpha));
    sample.check_against(space);

    std::vector<DoublingViolation> out;
    const auto radii = grid.radii();
    for (PointId x : sample.ids) {
        for (double r : radii) {
            const double whole = ball_mass(mu, space, index, x, r);
            for (double alpha : alphas) {
                const double shrunk = ball_mass(mu, space, index, x, alpha * r);
                const double power = std::floor(std::log2(alpha));
                const double bound = std::pow(c, power) * whole;
                if (shrunk < bound - kTau)
                    out.push_back(DoublingViolation{x, r, alpha, shrunk, bound});
            }
        }
    }
    return out;
}

}  // namespace porolab
