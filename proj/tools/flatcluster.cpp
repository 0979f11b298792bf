// Command-line front end: generate, cluster, verify, experiment.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flatcluster/clustering.hpp"
#include "flatcluster/errors.hpp"
#include "flatcluster/experiment.hpp"
#include "flatcluster/generator.hpp"
#include "flatcluster/io.hpp"
#include "flatcluster/mc_lab.hpp"

namespace fc = flatcluster;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerifyFail = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t workers_from_env() {
    const char* raw = std::getenv("FLATCLUSTER_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(raw, &pos);
        if (pos != std::string(raw).size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw fc::InvalidInput(std::string("FLATCLUSTER_THREADS must be a non-negative integer, got '") +
                               raw + "'");
    }
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

fc::DatasetFile load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    return fc::read_dataset(in);
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
    long d = 0;
    long k = 0;
    std::string centers;
    std::size_t per_cluster = 0;
    double sigma = 1.0;
    double mu = 0.0;
    double radius = 1.0;
    std::optional<double> delta;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    fc::GenConfig cfg;
    cfg.d = a.d;
    cfg.k = a.k;
    if (cfg.d < 2) throw fc::ConfigError("--d must be at least 2");
    cfg.centers = fc::parse_centers(a.centers, cfg.d);
    cfg.per_cluster = a.per_cluster;
    cfg.sigma = a.sigma;
    cfg.mu = a.mu;
    cfg.radius = a.radius;
    if (a.delta) {
        cfg.delta = *a.delta;
    } else if (a.centers.starts_with("two-ball:")) {
        cfg.delta = (cfg.centers[0] - cfg.centers[1]).norm();
    } else {
        cfg.delta = 2.0 * a.radius;
    }
    cfg.seed = a.seed;
    const auto data = fc::generate_dataset(cfg, workers_from_env());
    std::ostringstream buf;
    fc::write_dataset(buf, fc::to_dataset_file(data));
    write_text(a.out, buf.str());
    std::cerr << "generated " << data.flats.size() << " flats in R^" << cfg.d << '\n';
    return kExitOk;
}

// cluster -------------------------------------------------------------------

struct ClusterArgs {
    std::string in;
    std::optional<double> threshold;
    std::optional<double> link_threshold;
    double radius = 1.0;
    std::size_t min_size = 0;
    std::string mode = "plain";
    std::optional<std::size_t> clusters;
    std::optional<std::size_t> sample_size;
    std::uint64_t seed = 0;
    std::string out;
    std::string midpoints;
    bool drop_trivial = false;
};

int run_cluster(const ClusterArgs& a) {
    fc::DatasetFile file = load_dataset(a.in);
    std::vector<fc::Flat> flats = std::move(file.flats);
    if (flats.size() < 2) throw fc::InvalidInput("need at least 2 flats to cluster");
    if (a.drop_trivial) {
        auto reduced = fc::remove_trivial_coordinates(flats);
        if (reduced.kept.size() != static_cast<std::size_t>(file.d)) {
            std::cerr << "dropped " << (file.d - static_cast<long>(reduced.kept.size()))
                      << " trivial coordinate(s)\n";
        }
        flats = std::move(reduced.flats);
    }

    fc::ClusterParams params = fc::ClusterParams::for_radius(a.radius, a.min_size);
    if (a.threshold) params.accept_threshold = *a.threshold;
    params.link_threshold = a.link_threshold ? *a.link_threshold : params.accept_threshold;
    params.workers = workers_from_env();
    params.validate();

    fc::ResultParameters rp;
    rp.mode = a.mode;
    rp.params = params;
    rp.drop_trivial = a.drop_trivial;

    std::vector<fc::PairProjection> pairs;
    fc::Clustering result;
    if (a.mode == "plain") {
        pairs = fc::all_pairs(flats, params.rank_tol, params.workers);
        result = fc::cluster_pairs(pairs, flats.size(), params);
    } else if (a.mode == "recursive") {
        rp.expected_clusters = a.clusters;
        pairs = fc::all_pairs(flats, params.rank_tol, params.workers);
        result = fc::cluster_recursive(flats, params, a.clusters);
    } else if (a.mode == "sampled") {
        if (!a.sample_size) throw fc::InvalidInput("--mode sampled requires --sample-size");
        rp.sample_size = a.sample_size;
        rp.seed = a.seed;
        const auto chosen = fc::sample_indices(flats.size(), *a.sample_size, a.seed);
        std::vector<fc::Flat> subset;
        for (auto idx : chosen) subset.push_back(flats[idx]);
        pairs = fc::all_pairs(subset, params.rank_tol, params.workers);
        for (auto& p : pairs) {
            p.i = chosen[p.i];
            p.j = chosen[p.j];
        }
        result = fc::cluster_sampled(flats, params, *a.sample_size, a.seed);
    } else {
        throw fc::InvalidInput("unknown --mode '" + a.mode + "'");
    }

    if (!a.midpoints.empty()) {
        std::ostringstream csv;
        fc::write_midpoints_csv(csv, pairs, params.accept_threshold);
        write_text(a.midpoints, csv.str());
    }
    std::ostringstream buf;
    fc::write_result(buf, result, flats.size(), rp, a.midpoints);
    write_text(a.out, buf.str());
    std::cerr << result.clusters.size() << " cluster(s), " << result.accepted_pairs
              << " accepted / " << result.rejected_pairs << " rejected pairs\n";
    return kExitOk;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
    std::string check = "all";
    long d = 30;
    std::optional<long> k;
    double delta = 10.0;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    std::size_t reps = 20;
    std::string records;
};

class Reporter {
public:
    void add(const fc::McEstimate& est, const std::string& gate, bool pass) {
        const auto [lo, hi] = est.ci99();
        add({est.label, est.value, est.std_error, lo, hi, gate, pass});
    }

    void add(fc::VerificationRecord r) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.label << " = " << fc::format_double(r.value)
                  << "  (99% CI [" << fc::format_double(r.ci_lo) << ", "
                  << fc::format_double(r.ci_hi) << "])  gate: " << r.gate << '\n';
        all_pass_ = all_pass_ && r.pass;
        lines_ += fc::to_json_line(r) + '\n';
    }

    bool all_pass() const { return all_pass_; }
    const std::string& lines() const { return lines_; }

private:
    bool all_pass_ = true;
    std::string lines_;
};

fc::VerificationRecord plain_record(std::string label, double value, std::string gate, bool pass) {
    return {std::move(label), value, 0.0, value, value, std::move(gate), pass};
}

int run_verify(const VerifyArgs& a) {
    const std::vector<std::string> known = {"S0",            "S1",   "Sdelta",  "reject", "concentration",
                                            "disk",          "tangent", "reach", "ratio",  "all"};
    if (std::find(known.begin(), known.end(), a.check) == known.end()) {
        throw fc::InvalidInput("unknown check '" + a.check + "'");
    }
    const fc::Index d = a.d;
    const fc::Index k = a.k ? *a.k : d / 3;
    fc::McOptions opt;
    opt.samples = a.samples;
    opt.seed = a.seed;
    opt.sigma = a.sigma;
    opt.workers = workers_from_env();
    const bool all = a.check == "all";
    Reporter rep;

    if (all || a.check == "S0") {
        const auto s0 = fc::estimate_S0(d, k, opt);
        const auto s1 = fc::estimate_S1(d, k, opt);
        const bool pass = s0.ci99().first > 0.0 && s0.ci99().second < s1.ci99().first;
        rep.add(s0, "0 < S0 and S0 CI below S1 CI (S1 = " + fc::format_double(s1.value) + ")",
                pass);
    }
    if (all || a.check == "S1") {
        const auto s1 = fc::estimate_S1(d, k, opt);
        rep.add(s1, "S1 > 0 and CI upper < 2", s1.value > 0.0 && s1.ci99().second < 2.0);
    }
    if (all || a.check == "Sdelta") {
        const std::vector<double> deltas = {1, 2, 4, 8, 16};
        std::vector<fc::McEstimate> ests;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            fc::McOptions own = opt;
            own.seed = opt.seed + i;
            ests.push_back(fc::estimate_S_delta(deltas[i], d, k, own));
        }
        const auto fit = fc::fit_line(deltas, ests);
        const bool pass = fit.r_squared >= 0.999 &&
                          std::abs(fit.intercept) <= 3.0 * fit.intercept_stderr;
        rep.add({"Sdelta-slope(d=" + std::to_string(d) + ",k=" + std::to_string(k) + ")", fit.slope,
                 fit.slope_stderr, fit.slope - fc::kZ99 * fit.slope_stderr,
                 fit.slope + fc::kZ99 * fit.slope_stderr,
                 "R2 = " + fc::format_double(fit.r_squared) + " >= 0.999 and |intercept " +
                     fc::format_double(fit.intercept) + "| <= 3 stderr",
                 pass});
        fc::McOptions paired = opt;
        paired.samples = std::min<std::size_t>(opt.samples, 1000);
        const auto check = fc::scaling_identity_check(a.delta, d, k, paired);
        rep.add(plain_record("Sdelta-pointwise[delta=" + fc::format_double(a.delta) + "]",
                             check.max_relative_error,
                             "dist_delta = delta * dist_1 within 1e-10 relative, failures = " +
                                 std::to_string(check.failures),
                             check.failures == 0));
    }
    if (all || a.check == "reject") {
        const auto s1 = fc::estimate_S1(d, k, opt);
        const auto drop = fc::estimate_rejection_fraction(a.delta, d, k, opt);
        const double bound = fc::rejection_lower_bound(s1.value, a.delta);
        rep.add(drop, ">= 1 - q = " + fc::format_double(bound) + " minus 3 stderr, and > 0",
                drop.value >= bound - 3.0 * drop.std_error && drop.value > 0.0);
    }
    if (all || a.check == "concentration") {
        fc::McOptions c = opt;
        c.samples = a.reps;
        const auto report = fc::midpoint_concentration(d, k, 30, c);
        std::size_t close = 0;
        for (double off : report.offsets) close += off <= 0.3 ? 1 : 0;
        const double frac = static_cast<double>(close) / static_cast<double>(report.offsets.size());
        rep.add(plain_record("concentration(d=" + std::to_string(d) + ",k=" + std::to_string(k) +
                                 ",n=30)",
                             frac,
                             "fraction of repetitions with ||mean midpoint|| <= 0.3 is >= 0.9 "
                             "(mean offset " + fc::format_double(report.mean_offset) +
                                 ", variance " + fc::format_double(report.variance) + ")",
                             frac >= 0.9));
    }
    if (all || a.check == "disk") {
        const auto est = fc::disk_intersection_probability(opt);
        rep.add(est, "value in [0.49, 0.51]", est.value >= 0.49 && est.value <= 0.51);
    }
    if (all || a.check == "tangent") {
        const auto est = fc::tangent_pair_reach(2.0, opt);
        const double err = fc::tangent_identity_max_error(opt);
        rep.add(est,
                "Pr(r <= 2) in [0.656, 0.677] and r = 1/sin(phi/2) within 1e-9 (max rel err " +
                    fc::format_double(err) + ")",
                est.value >= 0.656 && est.value <= 0.677 && err <= 1e-9);
    }
    if (all || a.check == "reach") {
        double prev = -1.0;
        bool monotone = true;
        for (fc::Index dd : {4, 10, 30, 90}) {
            const auto est = fc::midpoint_reach_bound(dd, dd / 3, 2.0, opt);
            monotone = monotone && est.value >= prev;
            prev = est.value;
            rep.add(est, "nondecreasing in d so far", monotone);
        }
    }
    if (all || a.check == "ratio") {
        double prev = -1.0;
        bool ok = true;
        for (fc::Index dd : {9, 30, 90}) {
            const auto sep = fc::separation_ratio(a.delta, 1.0, dd, dd / 3, opt);
            ok = ok && !sep.vacuous && sep.fraction.value >= prev && sep.max_within <= 2.0 + 1e-9;
            prev = sep.fraction.value;
            rep.add(sep.fraction,
                    std::string(sep.vacuous ? "VACUOUS (delta <= 1); " : "") +
                        "nondecreasing in d, max within distance " +
                        fc::format_double(sep.max_within) + " <= 2",
                    ok);
        }
    }
    if (!a.records.empty()) write_text(a.records, rep.lines());
    return rep.all_pass() ? kExitOk : kExitVerifyFail;
}

// experiment ----------------------------------------------------------------

struct ExperimentArgs {
    std::vector<long> dims = {9, 30, 60, 90};
    std::uint64_t seed = 0;
    std::size_t per_cluster = 10;
    double sigma = 1.0;
    std::string out_dir = ".";
};

int run_experiment_cmd(const ExperimentArgs& a) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw IoError("cannot create '" + a.out_dir + "': " + ec.message());

    std::ostringstream summary;
    summary << "d,k,pairs,accepted,rejected,within_accepted,cross_rejected,clusters,"
               "center_error_1,center_error_2,midpoint_variance,coordinate_variance\r\n";
    for (long d : a.dims) {
        if (d % 3 != 0) {
            std::cerr << "warning: d=" << d << " is not divisible by 3, using k=" << d / 3 << '\n';
        }
        const long k = d / 3;
        if (k < 1) throw fc::ConfigError("d=" + std::to_string(d) + " gives k = 0");
        fc::ExperimentConfig cfg;
        cfg.per_cluster = a.per_cluster;
        cfg.sigma = a.sigma;
        cfg.seed = fc::experiment_seed(a.seed, d);
        cfg.workers = workers_from_env();
        const auto run = fc::run_experiment(d, k, cfg);
        const auto& row = run.row;

        std::ostringstream csv;
        fc::write_midpoints_csv(csv, run.pairs, 2.0);
        write_text((fs::path(a.out_dir) / ("midpoints_d" + std::to_string(d) + ".csv")).string(),
                   csv.str());

        std::ostringstream line;
        line << row.d << ',' << row.k << ',' << row.pairs << ',' << row.accepted << ','
             << row.rejected << ',' << row.within_accepted << ',' << row.cross_rejected << ','
             << row.clusters << ',' << fc::format_double(row.center_errors[0]) << ','
             << fc::format_double(row.center_errors[1]) << ','
             << fc::format_double(row.midpoint_variance) << ','
             << fc::format_double(row.coordinate_variance);
        summary << line.str() << "\r\n";
        std::cout << "d=" << row.d << " k=" << row.k << " clusters=" << row.clusters
                  << " accepted=" << row.accepted << " (within " << row.within_accepted << "/"
                  << row.within_total << ") rejected=" << row.rejected << " (cross "
                  << row.cross_rejected << "/" << row.cross_total << ") center_errors="
                  << fc::format_double(row.center_errors[0]) << ","
                  << fc::format_double(row.center_errors[1])
                  << " midpoint_variance=" << fc::format_double(row.midpoint_variance)
                  << " coordinate_variance=" << fc::format_double(row.coordinate_variance) << '\n';
    }
    write_text((fs::path(a.out_dir) / "experiment_summary.csv").string(), summary.str());
    return kExitOk;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cluster incomplete data modeled as affine flats"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a synthetic labeled dataset");
    g->add_option("--d", gen.d, "Ambient dimension")->required();
    g->add_option("--k", gen.k, "Flat dimension, 1 <= k <= d/2")->required();
    g->add_option("--centers", gen.centers, "'two-ball:<delta>' or 'x,y,..;x,y,..'")->required();
    g->add_option("--per-cluster", gen.per_cluster, "Flats per cluster")->required();
    g->add_option("--sigma", gen.sigma, "Coefficient spread")->capture_default_str();
    g->add_option("--mu", gen.mu, "Direction coefficient mean")->capture_default_str();
    g->add_option("--radius", gen.radius, "Ball radius")->capture_default_str();
    g->add_option("--delta", gen.delta, "Minimum center separation (default 2*radius)");
    g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output path (default stdout)");

    ClusterArgs cl;
    auto* c = app.add_subcommand("cluster", "Cluster a dataset by pairwise flat projection");
    c->add_option("--in", cl.in, "Dataset JSON")->required();
    c->add_option("--threshold", cl.threshold, "Accept threshold (default 2*radius)");
    c->add_option("--link-threshold", cl.link_threshold, "Link threshold (default = threshold)");
    c->add_option("--radius", cl.radius, "Ball radius")->capture_default_str();
    c->add_option("--min-size", cl.min_size, "M: clusters need more than M midpoints")->required();
    c->add_option("--mode", cl.mode, "plain | recursive | sampled")
        ->check(CLI::IsMember({"plain", "recursive", "sampled"}))
        ->capture_default_str();
    c->add_option("--clusters", cl.clusters, "Expected cluster count (recursive mode)");
    c->add_option("--sample-size", cl.sample_size, "Flats to sample (sampled mode)");
    c->add_option("--seed", cl.seed, "Sampling seed")->capture_default_str();
    c->add_option("--out", cl.out, "Result JSON path (default stdout)");
    c->add_option("--midpoints", cl.midpoints, "Midpoint CSV path");
    c->add_flag("--drop-trivial", cl.drop_trivial, "Remove coordinates missing in every flat");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Monte Carlo checks of the pair-distance statistics");
    v->add_option("--check", ver.check,
                  "S0|S1|Sdelta|reject|concentration|disk|tangent|reach|ratio|all")
        ->capture_default_str();
    v->add_option("--d", ver.d, "Ambient dimension")->capture_default_str();
    v->add_option("--k", ver.k, "Flat dimension (default d/3)");
    v->add_option("--delta", ver.delta, "Offset for reject/ratio/pointwise checks")
        ->capture_default_str();
    v->add_option("--samples", ver.samples, "Monte Carlo samples")->capture_default_str();
    v->add_option("--seed", ver.seed, "Seed")->capture_default_str();
    v->add_option("--sigma", ver.sigma, "Coefficient spread")->capture_default_str();
    v->add_option("--reps", ver.reps, "Repetitions for the concentration check")
        ->capture_default_str();
    v->add_option("--records", ver.records, "JSON-lines output path");

    ExperimentArgs ex;
    auto* e = app.add_subcommand("experiment", "Two-ball runs across dimensions");
    e->add_option("--dims", ex.dims, "Dimensions")->delimiter(',')->capture_default_str();
    e->add_option("--seed", ex.seed, "Seed family")->capture_default_str();
    e->add_option("--per-cluster", ex.per_cluster, "Flats per cluster")->capture_default_str();
    e->add_option("--sigma", ex.sigma, "Coefficient spread")->capture_default_str();
    e->add_option("--out-dir", ex.out_dir, "Directory for CSV output")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (g->parsed()) return guarded([&] { return run_generate(gen); });
    if (c->parsed()) return guarded([&] { return run_cluster(cl); });
    if (v->parsed()) return guarded([&] { return run_verify(ver); });
    return guarded([&] { return run_experiment_cmd(ex); });
}
