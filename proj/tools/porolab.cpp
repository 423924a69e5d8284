// porosity-lab command-line front end: corpus generation, analysis
// pipelines, verification reports. File-based, deterministic outputs.

#include <clocale>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "porolab/corpus.hpp"
#include "porolab/covering.hpp"
#include "porolab/envelope.hpp"
#include "porolab/errors.hpp"
#include "porolab/manifest.hpp"
#include "porolab/porosity.hpp"
#include "porolab/regularity.hpp"
#include "porolab/sampling.hpp"
#include "porolab/space.hpp"

namespace {

using namespace porolab;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

double parse_radius_flag(const std::string& text, double auto_value, const char* what) {
    if (text == "auto") return auto_value;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("bad value for ") + what + ": '" + text + "'");
    }
}

struct GenerateArgs {
    std::string kind;
    int depth = 0;
    int dim = 0;
    double contraction = 0.0;
    double lambda = -1.0;
    std::string spacing = "auto";
    std::uint64_t seed = 0;
    std::string out;
};

void run_generate(const GenerateArgs& args) {
    FractalKind kind = fractal_kind_from_name(args.kind);
    double contraction = args.contraction;
    if (args.lambda >= 0.0) {
        if (kind != FractalKind::middle_lambda_cantor_1d)
            throw InvalidArgument("--lambda applies to cantor1d only");
        if (!(args.lambda > 0.0 && args.lambda < 1.0))
            throw InvalidArgument("--lambda must lie in (0,1)");
        contraction = (1.0 - args.lambda) / 2.0;
    }
    const FractalSpec spec = FractalSpec::make(kind, args.depth, args.dim, contraction, args.seed);
    const double cell = std::pow(spec.contraction, spec.depth);
    const double spacing = parse_radius_flag(args.spacing, cell, "--spacing");

    GeneratedCorpus corpus = generate(spec, spacing);

    Manifest m = Manifest::from_space(corpus.space);
    m.subsets["A"] = corpus.a_set.ids;
    m.measures["mu"] = corpus.natural.weights();
    m.measures["lebesgue"] = ambient_measure(corpus.space, corpus.a_set).weights();
    m.meta["generator"] = {
        {"kind", fractal_kind_name(spec.kind)},
        {"depth", spec.depth},
        {"dim", spec.dim},
        {"contraction", format_g17(spec.contraction)},
        {"pieces", spec.pieces},
        {"seed", spec.seed},
        {"spacing", format_g17(corpus.space.epsilon())},
        {"similarity_dimension", format_g17(corpus.truth.similarity_dimension)},
        {"cell_size", format_g17(corpus.truth.cell_size)},
    };
    write_manifest(args.out, m);
    std::cout << "points=" << corpus.space.size() << " A=" << corpus.a_set.size()
              << " epsilon=" << format_g17(corpus.space.epsilon()) << "\n";
}

struct NetArgs {
    std::string in;
    std::string subset = "A";
    double radius = 0.0;
    std::string out;
};

void run_net(const NetArgs& args) {
    const Manifest m = read_manifest(args.in);
    const MetricSpace space = m.to_space();
    const BallIndex index = BallIndex::build(space);
    const SubsetRef ids = m.subset(args.subset);
    const NetResult net = greedy_net(space, index, ids, args.radius);
    const PackingCoverReport rep = verify_packing_cover(space, net, ids);

    auto out = open_out(args.out);
    CsvWriter csv(out);
    csv.row({"center_id"});
    for (PointId c : net.centers) csv.row({std::to_string(c)});
    std::cout << "centers=" << net.centers.size()
              << " separation_ok=" << rep.separation_ok
              << " coverage_ok=" << rep.coverage_ok
              << " half_radius_disjoint_ok=" << rep.half_radius_disjoint_ok
              << " max_gap=" << format_g17(rep.max_coverage_gap) << "\n";
}

struct RegularityArgs {
    std::string in;
    std::string subset = "A";
    std::string measure = "mu";
    std::string rmin = "auto";
    double rmax = 0.25;
    int scales = 12;
    std::size_t sample = 50;
    std::uint64_t seed = 0;
    std::string out;
};

void run_regularity(const RegularityArgs& args) {
    const Manifest m = read_manifest(args.in);
    const MetricSpace space = m.to_space();
    const BallIndex index = BallIndex::build(space);
    const SubsetRef a = m.subset(args.subset);
    const WeightedMeasure mu = m.measure(args.measure);

    const double rmin = parse_radius_flag(args.rmin, 8.0 * space.epsilon(), "--rmin");
    const ScaleGrid grid = ScaleGrid::geometric(rmin, args.rmax, args.scales, space.epsilon());

    const RegularityFit fit = fit_regularity(space, index, mu, a, grid, args.sample, args.seed);

    std::vector<PointId> sample_ids;
    for (std::size_t pos : stride_sample(a.size(), args.sample, args.seed))
        sample_ids.push_back(a.ids[pos]);
    const DoublingEstimate doubling =
        estimate_doubling(space, index, mu, SubsetRef{std::move(sample_ids)}, grid);

    auto out = open_out(args.out);
    CsvWriter csv(out);
    csv.row({"s_hat", "a_hat", "b_hat", "rms_residual", "c_hat", "witness_x",
             "witness_r", "r_min", "r_max", "scales", "sample_size"});
    csv.row({CsvWriter::num(fit.s_hat), CsvWriter::num(fit.a_hat),
             CsvWriter::num(fit.b_hat), CsvWriter::num(fit.rms_residual),
             CsvWriter::num(doubling.c_hat), std::to_string(doubling.witness_x),
             CsvWriter::num(doubling.witness_r), CsvWriter::num(grid.r_min),
             CsvWriter::num(grid.r_max), std::to_string(grid.count),
             std::to_string(fit.sample_size)});
    std::cout << "s_hat=" << format_g17(fit.s_hat) << " c_hat=" << format_g17(doubling.c_hat)
              << "\n";
}

struct PorosityArgs {
    std::string in;
    std::string subset = "A";
    std::string rmin = "auto";
    double rmax = 0.3;
    int scales = 12;
    std::size_t sample = 64;
    std::uint64_t seed = 0;
    std::string out;
};

void run_porosity(const PorosityArgs& args) {
    const Manifest m = read_manifest(args.in);
    const MetricSpace space = m.to_space();
    const BallIndex index = BallIndex::build(space);
    const SubsetRef a = m.subset(args.subset);

    const double rmin = parse_radius_flag(args.rmin, 8.0 * space.epsilon(), "--rmin");
    const ScaleGrid grid = ScaleGrid::geometric(rmin, args.rmax, args.scales, space.epsilon());
    const PorosityProfile profile = uniform_porosity(space, index, a, grid, args.sample, args.seed);

    auto out = open_out(args.out);
    CsvWriter csv(out);
    csv.row({"record", "x_id", "r", "rho_hat", "witness_id"});
    for (const auto& e : profile.entries)
        csv.row({"entry", std::to_string(e.x), CsvWriter::num(e.r),
                 CsvWriter::num(e.rho_hat), std::to_string(e.witness)});
    csv.row({"rho_star", "", "", CsvWriter::num(profile.rho_star), ""});
    std::cout << "rho_star=" << format_g17(profile.rho_star) << "\n";
}

struct DecayArgs {
    std::string in;
    std::string subset = "A";
    std::string measure = "lebesgue";
    std::string x0 = "auto";
    double r0 = 0.3;
    std::string rmin = "auto";
    std::string rmax = "auto";
    int scales = 12;
    std::size_t sample = 32;
    std::uint64_t seed = 0;
    std::string out;
};

void run_decay(const DecayArgs& args) {
    const Manifest m = read_manifest(args.in);
    const MetricSpace space = m.to_space();
    const BallIndex index = BallIndex::build(space);
    const SubsetRef a = m.subset(args.subset);
    const WeightedMeasure mu = m.measure(args.measure);

    PointId x0;
    if (args.x0 == "auto") {
        x0 = a.ids.front();
    } else {
        x0 = static_cast<PointId>(std::stoul(args.x0));
    }
    const double rmin =
        parse_radius_flag(args.rmin, kResolvabilityKappa * space.epsilon(), "--rmin");
    const double rmax = parse_radius_flag(args.rmax, args.r0 / 8.0, "--rmax");
    const ScaleGrid grid = ScaleGrid::geometric(rmin, rmax, args.scales, space.epsilon());

    const DecayReport rep =
        decay_profile(space, index, mu, a, x0, args.r0, grid, args.sample, args.seed);

    nlohmann::json j;
    j["x0"] = x0;
    j["r0"] = format_g17(args.r0);
    j["gamma"] = format_g17(rep.gamma);
    j["delta_theory"] = format_g17(rep.delta_theory);
    j["delta_empirical"] = format_g17(rep.delta_empirical);
    j["C_empirical"] = format_g17(rep.C_empirical);
    j["recursion_pass"] = rep.recursion_pass;
    j["growth_pass"] = rep.growth_pass;
    j["rho_star"] = format_g17(rep.rho_star);
    j["rho_used"] = format_g17(rep.rho_used);
    j["k_max"] = rep.k_max;
    j["s_hat"] = format_g17(rep.s_hat);
    j["a_hat"] = format_g17(rep.a_hat);
    j["b_hat"] = format_g17(rep.b_hat);
    j["base_mass"] = format_g17(rep.base_mass);
    {
        nlohmann::json curve = nlohmann::json::array();
        for (const auto& [r, mass] : rep.mass_curve)
            curve.push_back({format_g17(r), format_g17(mass)});
        j["mass_curve"] = std::move(curve);
    }
    auto out = open_out(args.out);
    out << j.dump(2) << "\n";
    std::cout << "delta_empirical=" << format_g17(rep.delta_empirical)
              << " delta_theory=" << format_g17(rep.delta_theory) << "\n";
}

struct EnvelopeArgs {
    std::string in;
    std::string subset = "A";
    double rho = 0.0;
    double t = 0.0;
    int max_scale = 0;
    int plant_depth = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string nu_stats;
    std::string counts;
    std::string nu_rmin = "auto";
    std::string nu_rmax = "auto";
    int nu_scales = 12;
    std::size_t nu_sample = 32;
    std::size_t count_samples = 10;
    std::string decay_report;
};

void run_envelope(const EnvelopeArgs& args) {
    const Manifest m = read_manifest(args.in);
    const MetricSpace space = m.to_space();
    const BallIndex index = BallIndex::build(space);
    const SubsetRef a = m.subset(args.subset);

    EnvelopeParams params;
    params.rho = args.rho;
    params.t = args.t;
    params.max_scale = args.max_scale;
    params.plant_depth = args.plant_depth;
    params.seed = args.seed;

    // exponent-window check, when a decay report is supplied
    if (!args.decay_report.empty()) {
        std::ifstream in(args.decay_report, std::ios::binary);
        if (!in) throw IoError("cannot read '" + args.decay_report + "'");
        nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
        const double s_hat = std::stod(j.at("s_hat").get<std::string>());
        const double delta = std::stod(j.at("delta_theory").get<std::string>());
        if (!(params.t < s_hat && params.t > s_hat - delta))
            std::cerr << "warning: t=" << format_g17(params.t)
                      << " outside the window (s-delta, s) = ("
                      << format_g17(s_hat - delta) << ", " << format_g17(s_hat) << ")\n";
    }

    const Envelope env = construct_envelope(space, index, a, params);

    Manifest fm = Manifest::from_space(env.space);
    fm.subsets["A"] = env.a_in_f.ids;
    {
        std::vector<PointId> all(env.space.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<PointId>(i);
        fm.subsets["F"] = std::move(all);
    }
    fm.measures["nu"] = env.nu.weights();
    fm.meta["envelope"] = {
        {"rho", format_g17(params.rho)},
        {"t", format_g17(params.t)},
        {"J", params.max_scale},
        {"plant_depth", params.plant_depth},
        {"seed", params.seed},
        {"patches", env.patches.size()},
        {"net_sizes", env.net_sizes},
        {"skipped_centers", env.skipped_centers},
        {"deficit_scales", env.deficit_scales},
        {"merged_duplicates", env.merged_duplicates},
        {"dropped_on_a", env.dropped_on_a},
        {"source", args.in},
    };
    {
        nlohmann::json mins = nlohmann::json::array();
        for (double v : env.ladder_rho_min) mins.push_back(format_g17(v));
        fm.meta["envelope"]["ladder_rho_min"] = std::move(mins);
    }
    write_manifest(args.out, fm);

    if (!args.nu_stats.empty()) {
        const double rmin = parse_radius_flag(
            args.nu_rmin, 3.0 * std::pow(params.base(), params.max_scale), "--nu-rmin");
        const double rmax = parse_radius_flag(args.nu_rmax, 0.3, "--nu-rmax");
        const ScaleGrid grid =
            ScaleGrid::geometric(rmin, rmax, args.nu_scales, env.space.epsilon());
        std::vector<PointId> sample_ids;
        for (std::size_t pos : stride_sample(a.size(), args.nu_sample, args.seed))
            sample_ids.push_back(a.ids[pos]);
        const NuBoundStats stats =
            verify_nu_bound(env, SubsetRef{std::move(sample_ids)}, grid);
        auto out = open_out(args.nu_stats);
        CsvWriter csv(out);
        csv.row({"record", "x_id", "r", "nu_mass", "ratio"});
        for (const auto& row : stats.rows)
            csv.row({"entry", std::to_string(row.x_base), CsvWriter::num(row.r),
                     CsvWriter::num(row.nu_mass), CsvWriter::num(row.ratio)});
        csv.row({"max_ratio", "", "", "", CsvWriter::num(stats.max_ratio)});
        csv.row({"median_ratio", "", "", "", CsvWriter::num(stats.median_ratio)});
    }

    if (!args.counts.empty()) {
        auto out = open_out(args.counts);
        CsvWriter csv(out);
        csv.row({"record", "x_id", "k", "j", "n", "n_discounted"});
        const auto positions = stride_sample(a.size(), args.count_samples, args.seed);
        for (std::size_t pos : positions) {
            const PointId x = a.ids[pos];
            for (int k = 1; k <= params.max_scale; ++k) {
                const IntersectionCounts counts = count_intersections(space, env, x, k);
                for (int j = 1; j <= params.max_scale; ++j)
                    csv.row({"entry", std::to_string(x), std::to_string(k),
                             std::to_string(j),
                             CsvWriter::num(counts.n[static_cast<std::size_t>(j - 1)]),
                             CsvWriter::num(counts.n_discounted[static_cast<std::size_t>(j - 1)])});
                csv.row({"front_disjoint_ok", std::to_string(x), std::to_string(k), "",
                         counts.front_disjoint_ok ? "1" : "0", ""});
            }
        }
    }

    std::cout << "patches=" << env.patches.size() << " F=" << env.space.size()
              << " nu_total=" << format_g17(env.nu.total()) << "\n";
}

struct VerifyArgs {
    std::string in;
};

int run_verify(const VerifyArgs& args) {
    const Manifest m = read_manifest(args.in);
    int failures = 0;
    auto check = [&](bool ok, const std::string& name) {
        std::cout << (ok ? "ok " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    const MetricSpace space = m.to_space();  // bounds/duplicate validation
    check(true, "space: coordinates valid, points distinct");

    const BallIndex index = BallIndex::build(space);
    {
        bool ok = true;
        std::uint64_t state = 0;
        std::vector<PointId> via_index, via_scan;
        const auto view = space.view();
        std::vector<double> metric(space.size());
        for (int trial = 0; trial < 128 && ok; ++trial) {
            const auto x = static_cast<PointId>(splitmix64(state) % space.size());
            const double r = splitmix64_unit(state) * space.ambient_diameter();
            via_index = ball_points(space, index, x, r);
            via_scan.clear();
            const auto q = space.point(x);
            if (space.metric() == Metric::euclidean)
                kern::scalar_kernels().metric_eu2_batch(view, q.data(), metric.data());
            else
                kern::scalar_kernels().metric_ch_batch(view, q.data(), metric.data());
            const double thr = space.metric() == Metric::euclidean ? r * r : r;
            for (std::size_t p = 0; p < space.size(); ++p)
                if (metric[p] <= thr) via_scan.push_back(static_cast<PointId>(p));
            ok = via_index == via_scan;
        }
        check(ok, "index: 128 ball queries equal linear scan");
    }

    for (const auto& [name, ids] : m.subsets) {
        bool ok = !ids.empty();
        for (PointId p : ids)
            if (p >= space.size()) ok = false;
        auto sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        ok = ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        check(ok, "subset '" + name + "': valid ids, no duplicates");
    }
    for (const auto& [name, w] : m.measures) {
        bool ok = w.size() == space.size();
        for (double v : w)
            if (!(v >= 0.0)) ok = false;
        check(ok, "measure '" + name + "': aligned, nonnegative");
    }
    if (m.meta.contains("generator") && m.subsets.count("A") && m.measures.count("mu")) {
        const auto& gen = m.meta.at("generator");
        double total = 0.0;
        for (double v : m.measures.at("mu")) total += v;
        check(std::fabs(total - 1.0) <= 1e-12, "mu: total mass = 1");
        const std::string kind = gen.at("kind").get<std::string>();
        if (kind != "full_grid") {
            const auto pieces = gen.at("pieces").get<long long>();
            const auto depth = gen.at("depth").get<int>();
            long long expect = 1;
            for (int i = 0; i < depth; ++i) expect *= pieces;
            check(static_cast<long long>(m.subsets.at("A").size()) == expect,
                  "A: cell count equals pieces^depth");
        }
    }
    check(manifest_to_string(manifest_from_string(manifest_to_string(m))) ==
              manifest_to_string(m),
          "manifest: serialization round-trips");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"porosity-lab: porosity / regularity analysis toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "generate a fractal corpus manifest");
    cmd_gen->add_option("--kind", gen.kind,
                        "cantor1d|product_cantor|four_corner|sierpinski_carpet|full_grid")
        ->required();
    cmd_gen->add_option("--depth", gen.depth, "generation count")->required();
    cmd_gen->add_option("--dim", gen.dim, "ambient dimension (product/full_grid)");
    cmd_gen->add_option("--contraction", gen.contraction, "per-axis ratio in (0,1/2]");
    cmd_gen->add_option("--lambda", gen.lambda, "middle-lambda gap fraction (cantor1d)");
    cmd_gen->add_option("--spacing", gen.spacing, "ambient grid spacing or 'auto'");
    cmd_gen->add_option("--seed", gen.seed, "PRNG seed");
    cmd_gen->add_option("--out", gen.out, "output manifest path")->required();

    NetArgs net;
    auto* cmd_net = app.add_subcommand("net", "greedy r-net over a subset");
    cmd_net->add_option("--in", net.in)->required();
    cmd_net->add_option("--subset", net.subset);
    cmd_net->add_option("--radius", net.radius)->required();
    cmd_net->add_option("--out", net.out, "centers CSV")->required();

    RegularityArgs reg;
    auto* cmd_reg = app.add_subcommand("regularity", "regularity + doubling fit");
    cmd_reg->add_option("--in", reg.in)->required();
    cmd_reg->add_option("--subset", reg.subset);
    cmd_reg->add_option("--measure", reg.measure);
    cmd_reg->add_option("--rmin", reg.rmin, "'auto' = 8*epsilon");
    cmd_reg->add_option("--rmax", reg.rmax);
    cmd_reg->add_option("--scales", reg.scales);
    cmd_reg->add_option("--sample", reg.sample);
    cmd_reg->add_option("--seed", reg.seed);
    cmd_reg->add_option("--out", reg.out, "fit CSV")->required();

    PorosityArgs por;
    auto* cmd_por = app.add_subcommand("porosity", "uniform porosity profile");
    cmd_por->add_option("--in", por.in)->required();
    cmd_por->add_option("--subset", por.subset);
    cmd_por->add_option("--rmin", por.rmin, "'auto' = 8*epsilon");
    cmd_por->add_option("--rmax", por.rmax);
    cmd_por->add_option("--scales", por.scales);
    cmd_por->add_option("--sample", por.sample);
    cmd_por->add_option("--seed", por.seed);
    cmd_por->add_option("--out", por.out, "profile CSV")->required();

    DecayArgs dec;
    auto* cmd_dec = app.add_subcommand("decay", "neighborhood decay report");
    cmd_dec->add_option("--in", dec.in)->required();
    cmd_dec->add_option("--subset", dec.subset);
    cmd_dec->add_option("--measure", dec.measure);
    cmd_dec->add_option("--x0", dec.x0, "point id or 'auto' (first id of A)");
    cmd_dec->add_option("--r0", dec.r0);
    cmd_dec->add_option("--rmin", dec.rmin, "'auto' = kappa*epsilon");
    cmd_dec->add_option("--rmax", dec.rmax, "'auto' = r0/8");
    cmd_dec->add_option("--scales", dec.scales);
    cmd_dec->add_option("--sample", dec.sample, "porosity precheck sample");
    cmd_dec->add_option("--seed", dec.seed);
    cmd_dec->add_option("--out", dec.out, "decay report JSON")->required();

    EnvelopeArgs env;
    auto* cmd_env = app.add_subcommand("envelope", "construct F and nu");
    cmd_env->add_option("--in", env.in)->required();
    cmd_env->add_option("--subset", env.subset);
    cmd_env->add_option("--rho", env.rho, "porosity constant in (0,1/3]")->required();
    cmd_env->add_option("--t", env.t, "target exponent")->required();
    cmd_env->add_option("--J", env.max_scale, "max scale index")->required();
    cmd_env->add_option("--plant-depth", env.plant_depth)->required();
    cmd_env->add_option("--seed", env.seed);
    cmd_env->add_option("--out", env.out, "envelope manifest")->required();
    cmd_env->add_option("--nu-stats", env.nu_stats, "nu bound verification CSV");
    cmd_env->add_option("--counts", env.counts, "intersection counts CSV");
    cmd_env->add_option("--nu-rmin", env.nu_rmin, "'auto' = 3*(rho/2)^J");
    cmd_env->add_option("--nu-rmax", env.nu_rmax, "'auto' = 0.3");
    cmd_env->add_option("--nu-scales", env.nu_scales);
    cmd_env->add_option("--nu-sample", env.nu_sample);
    cmd_env->add_option("--count-samples", env.count_samples);
    cmd_env->add_option("--decay-report", env.decay_report,
                        "decay JSON for the t-window warning");

    VerifyArgs ver;
    auto* cmd_ver = app.add_subcommand("verify", "re-run invariant checks on a manifest");
    cmd_ver->add_option("--in", ver.in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_gen)) run_generate(gen);
        else if (app.got_subcommand(cmd_net)) run_net(net);
        else if (app.got_subcommand(cmd_reg)) run_regularity(reg);
        else if (app.got_subcommand(cmd_por)) run_porosity(por);
        else if (app.got_subcommand(cmd_dec)) run_decay(dec);
        else if (app.got_subcommand(cmd_env)) run_envelope(env);
        else if (app.got_subcommand(cmd_ver)) return run_verify(ver);
    } catch (const porolab::Error& e) {
        nlohmann::json diag = {{"error", e.type()}, {"detail", e.what()}};
        std::cerr << diag.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json diag = {{"error", "Internal"}, {"detail", e.what()}};
        std::cerr << diag.dump() << "\n";
        return 1;
    }
    return 0;
}
