#include "porolab/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "porolab/errors.hpp"
#include "porolab/parallel.hpp"
#include "porolab/sampling.hpp"

namespace porolab {

PorosityContext::PorosityContext(const MetricSpace& space, const BallIndex& index,
                                 const SubsetRef& a)
    : space_(space), index_(index), a_(a) {
    if (a.empty()) throw EmptySubset("porosity base set is empty");
    a.check_against(space);
    dists_ = dists_to_set(space, a);
}

std::pair<double, PointId> porosity_at(const PorosityContext& ctx, PointId x, double r) {
    const MetricSpace& space = ctx.space();
    space.check_id(x);
    if (!(r >= kResolvabilityKappa * space.epsilon()))
        throw ResolutionError("porosity radius below kappa*epsilon");

    const auto q = space.point(x);
    std::vector<PointId> candidates;
    ctx.index().ball_into(space, q.data(), r, candidates);

    // candidates ascend, so strict improvement keeps the lowest id on ties
    double best = -std::numeric_limits<double>::infinity();
    PointId witness = x;
    const double eps = space.epsilon();
    for (PointId y : candidates) {
        const double d = distance(space, x, y);
        const double v = std::min((r - d) / r, (ctx.dist_to_a(y) - eps) / r);
        if (v > best) {
            best = v;
            witness = y;
        }
    }
    return {std::max(0.0, best), witness};
}

std::pair<double, PointId> porosity_at(const MetricSpace& space, const BallIndex& index,
                                       const SubsetRef& a, PointId x, double r) {
    const PorosityContext ctx(space, index, a);
    return porosity_at(ctx, x, r);
}

PorosityProfile uniform_porosity(const MetricSpace& space, const BallIndex& index,
                                 const SubsetRef& a, const ScaleGrid& grid,
                                 std::size_t sample_size, std::uint64_t seed) {
    if (sample_size == 0) throw InvalidArgument("sample_size must be positive");
    const PorosityContext ctx(space, index, a);
    const auto positions = stride_sample(a.size(), sample_size, seed);
    const auto radii = grid.radii();

    PorosityProfile profile;
    profile.grid = grid;
    profile.entries.resize(positions.size() * radii.size());
    parallel_chunks(positions.size(), 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const PointId x = a.ids[positions[i]];
            for (std::size_t j = 0; j < radii.size(); ++j) {
                const auto [rho, witness] = porosity_at(ctx, x, radii[j]);
                profile.entries[i * radii.size() + j] =
                    PorosityEntry{x, radii[j], rho, witness};
            }
        }
    });

    profile.rho_star = std::numeric_limits<double>::infinity();
    for (const auto& e : profile.entries) profile.rho_star = std::min(profile.rho_star, e.rho_hat);
    return profile;
}

namespace {

double masked_mass(const WeightedMeasure& mu, const std::vector<double>& dists,
                   double below_r) {
    // strict dist < r, tau-guarded
    double sum = 0.0;
    for (std::size_t p = 0; p < dists.size(); ++p)
        if (dists[p] < below_r - kTau) sum += mu.weight(p);
    return sum;
}

}  // namespace

double neighborhood_mass(const MetricSpace& space, const BallIndex& index,
                         const WeightedMeasure& mu, const SubsetRef& a, double r) {
    (void)index;
    if (!(r > 0.0)) throw BadRadius("neighborhood radius must be positive");
    if (mu.size() != space.size()) throw InvalidArgument("measure not aligned to space");
    const auto dists = dists_to_set(space, a);
    return masked_mass(mu, dists, r);
}

AnnulusSeries annulus_series(const MetricSpace& space, const BallIndex& index,
                             const WeightedMeasure& mu, const SubsetRef& a,
                             PointId x0, double r0, double rho) {
    if (!(rho > 0.0 && rho <= 1.0 / 3.0))
        throw BadPorosityParam("annulus rho must lie in (0, 1/3]");
    if (!(r0 > 0.0)) throw BadRadius("r0 must be positive");
    space.check_id(x0);
    if (mu.size() != space.size()) throw InvalidArgument("measure not aligned to space");

    // restrict A to the closed ball B(x0, r0)
    std::vector<PointId> in_ball = ball_points(space, index, x0, r0);
    std::vector<PointId> restricted;
    std::set_intersection(in_ball.begin(), in_ball.end(), a.ids.begin(), a.ids.end(),
                          std::back_inserter(restricted));
    if (restricted.empty())
        throw EmptySubset("A does not meet B(x0, r0)");

    AnnulusSeries series;
    series.x0 = x0;
    series.r0 = r0;
    series.rho = rho;
    series.restricted = SubsetRef{std::move(restricted)};

    const double floor_r = kResolvabilityKappa * space.epsilon();
    const double rho3 = rho * rho * rho;
    int k_max = 0;
    double scale = r0;
    while (scale * rho3 >= floor_r) {
        scale *= rho3;
        ++k_max;
    }
    series.k_max = k_max;
    if (k_max == 0) return series;

    const auto dists = dists_to_set(space, series.restricted);
    series.alpha.assign(static_cast<std::size_t>(k_max), 0.0);
    // annulus k = { t1 < dist <= t2 }, t1 = r0 rho^{3k}, t2 = r0 rho^{3(k-1)};
    // both boundaries shifted by +tau so adjacent annuli partition exactly
    for (std::size_t p = 0; p < dists.size(); ++p) {
        const double d = dists[p];
        double t2 = r0;
        for (int k = 1; k <= k_max; ++k) {
            const double t1 = r0 * std::pow(rho3, k);
            if (d > t1 + kTau && d <= t2 + kTau) {
                series.alpha[static_cast<std::size_t>(k - 1)] += mu.weight(static_cast<PointId>(p));
                break;
            }
            t2 = t1;
        }
    }
    return series;
}

double gamma_doubling(double c, double rho) {
    if (!(rho > 0.0 && rho <= 1.0 / 3.0))
        throw BadPorosityParam("rho must lie in (0, 1/3]");
    if (!(c >= 1.0)) throw InvalidArgument("doubling constant must be >= 1");
    return std::pow(c, std::floor(std::log2(rho / 6.0)));
}

double gamma_regular(double a, double b, double s, double rho) {
    if (!(rho > 0.0 && rho <= 1.0 / 3.0))
        throw BadPorosityParam("rho must lie in (0, 1/3]");
    if (!(a > 0.0 && a <= b)) throw InvalidArgument("need 0 < a <= b");
    if (!(s > 0.0)) throw InvalidArgument("need s > 0");
    return (a / b) * std::pow(rho / 6.0, s);
}

double delta_theory(double gamma, double rho) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw InvalidArgument("gamma must lie in (0, 1]");
    if (!(rho > 0.0 && rho <= 1.0 / 3.0))
        throw BadPorosityParam("rho must lie in (0, 1/3]");
    return gamma / (6.0 * std::log(1.0 / rho));
}

RecursionReport verify_recursion(const AnnulusSeries& series, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw InvalidArgument("gamma must lie in (0, 1]");
    RecursionReport rep;
    rep.recursion_pass = true;
    rep.growth_pass = true;
    rep.worst_recursion_margin = std::numeric_limits<double>::infinity();
    rep.worst_growth_margin = std::numeric_limits<double>::infinity();
    const int k_max = series.k_max;
    if (k_max == 0) return rep;

    for (int k = 1; k <= k_max; ++k) {
        double tail = 0.0;
        for (int i = k + 1; i <= k_max; ++i) tail += series.alpha[static_cast<std::size_t>(i - 1)];
        const double margin = series.alpha[static_cast<std::size_t>(k - 1)] - gamma * tail;
        rep.worst_recursion_margin = std::min(rep.worst_recursion_margin, margin);
        if (margin < -kTau) rep.recursion_pass = false;
    }
    const double alpha1 = series.alpha.front();
    for (int k = 1; k <= k_max; ++k) {
        const double bound = std::pow(gamma + 1.0, 2.0 - k) / gamma * alpha1;
        const double margin = bound - series.alpha[static_cast<std::size_t>(k - 1)];
        rep.worst_growth_margin = std::min(rep.worst_growth_margin, margin);
        if (margin < -kTau) rep.growth_pass = false;
    }
    return rep;
}

DecayReport decay_profile(const MetricSpace& space, const BallIndex& index,
                          const WeightedMeasure& mu, const SubsetRef& a,
                          PointId x0, double r0, const ScaleGrid& grid,
                          std::size_t porosity_sample, std::uint64_t seed) {
    space.check_id(x0);
    if (!(r0 > 0.0)) throw BadRadius("r0 must be positive");
    if (grid.r_max > r0 + kTau) throw BadGrid("decay grid must stay within [kappa*eps, r0]");
    if (mu.size() != space.size()) throw InvalidArgument("measure not aligned to space");

    const auto profile = uniform_porosity(space, index, a, grid, porosity_sample, seed);
    if (!(profile.rho_star > 0.0))
        throw NotPorous("porosity profile hit rho = 0; decay exponent undefined");

    // the decay bound needs mu(A) = 0; ambient measures vanish on A by construction
    double on_a = 0.0;
    for (PointId p : a.ids) on_a += mu.weight(p);
    if (on_a > kTau)
        throw InvalidArgument("mu does not vanish on A (mu(A) = " + std::to_string(on_a) + ")");

    DecayReport rep;
    rep.rho_star = profile.rho_star;
    rep.rho_used = std::min(profile.rho_star, 1.0 / 3.0);

    // restricted neighborhood masses m(r)
    std::vector<PointId> in_ball = ball_points(space, index, x0, r0);
    std::vector<PointId> restricted;
    std::set_intersection(in_ball.begin(), in_ball.end(), a.ids.begin(), a.ids.end(),
                          std::back_inserter(restricted));
    if (restricted.empty()) throw EmptySubset("A does not meet B(x0, r0)");
    const SubsetRef a_restricted{std::move(restricted)};
    const auto dists = dists_to_set(space, a_restricted);

    const auto radii = grid.radii();
    std::vector<double> log_r, log_m;
    rep.mass_curve.reserve(radii.size());
    for (double r : radii) {
        const double m = masked_mass(mu, dists, r);
        rep.mass_curve.emplace_back(r, m);
        if (m > 0.0) {
            log_r.push_back(std::log(r));
            log_m.push_back(std::log(m));
        }
    }
    if (log_r.size() < 2) throw DegenerateFit("fewer than 2 positive neighborhood masses");
    rep.delta_empirical = lsq_slope(log_r, log_m);

    // ambient regularity fit feeds the theoretical exponent
    const SubsetRef support = SubsetRef::of(mu.support());
    const RegularityFit fit = fit_regularity(space, index, mu, support, grid, 48, seed);
    rep.s_hat = fit.s_hat;
    rep.a_hat = fit.a_hat;
    rep.b_hat = fit.b_hat;
    rep.gamma = gamma_regular(fit.a_hat, fit.b_hat, fit.s_hat, rep.rho_used);
    rep.delta_theory = delta_theory(rep.gamma, rep.rho_used);

    const AnnulusSeries series = annulus_series(space, index, mu, a, x0, r0, rep.rho_used);
    const RecursionReport rec = verify_recursion(series, rep.gamma);
    rep.recursion_pass = rec.recursion_pass;
    rep.growth_pass = rec.growth_pass;
    rep.k_max = series.k_max;

    rep.base_mass = ball_mass(mu, space, index, x0, r0);
    double c_emp = 0.0;
    for (const auto& [r, m] : rep.mass_curve)
        if (rep.base_mass > 0.0)
            c_emp = std::max(c_emp, m / (rep.base_mass * std::pow(r / r0, rep.delta_theory)));
    rep.C_empirical = c_emp;
    return rep;
}

}  // namespace porolab
