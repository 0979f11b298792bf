#include "flatcluster/experiment.hpp"

#include <cmath>
#include <limits>

#include "flatcluster/errors.hpp"
#include "flatcluster/rng.hpp"

namespace flatcluster {

std::uint64_t experiment_seed(std::uint64_t family, Index d) {
    RngStream rng(family, StreamTag::family, static_cast<std::uint64_t>(d));
    return rng();
}

ExperimentRun run_experiment(Index d, Index k, const ExperimentConfig& cfg) {
    GenConfig gen;
    gen.d = d;
    gen.k = k;
    gen.centers = two_ball_centers(d, 2.0 * cfg.half_separation);
    gen.per_cluster = cfg.per_cluster;
    gen.sigma = cfg.sigma;
    gen.delta = 2.0 * cfg.half_separation;
    gen.seed = cfg.seed;

    ExperimentRun run;
    run.data = generate_dataset(gen, cfg.workers);
    const std::size_t n = run.data.flats.size();
    ClusterParams params = ClusterParams::for_radius(1.0, cfg.per_cluster);
    params.workers = cfg.workers;
    run.pairs = all_pairs(run.data.flats, params.rank_tol, cfg.workers);
    run.clustering = cluster_pairs(run.pairs, n, params);

    ExperimentRow& row = run.row;
    row.d = d;
    row.k = k;
    row.pairs = run.pairs.size();
    row.accepted = run.clustering.accepted_pairs;
    row.rejected = run.clustering.rejected_pairs;
    row.clusters = run.clustering.clusters.size();
    const auto& labels = run.data.labels;
    std::vector<std::vector<Vector>> within(gen.centers.size());
    for (const auto& p : run.pairs) {
        const bool accepted = p.distance <= params.accept_threshold;
        if (labels[p.i] == labels[p.j]) {
            ++row.within_total;
            if (accepted) ++row.within_accepted;
            within[labels[p.i]].push_back(p.midpoint);
        } else {
            ++row.cross_total;
            if (!accepted) ++row.cross_rejected;
        }
    }
    for (const auto& cl : run.clustering.clusters) row.centers.push_back(cl.center);
    for (const auto& truth : gen.centers) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& est : row.centers) best = std::min(best, (est - truth).norm());
        row.center_errors.push_back(best);
    }
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& mids : within) {
        if (mids.size() < 2) continue;
        Vector mean = Vector::Zero(d);
        for (const auto& m : mids) mean += m;
        mean /= static_cast<double>(mids.size());
        double acc = 0.0;
        for (const auto& m : mids) acc += (m - mean).squaredNorm();
        total += acc / static_cast<double>(mids.size() - 1);
        ++used;
    }
    row.midpoint_variance = used == 0 ? 0.0 : total / static_cast<double>(used);
    row.coordinate_variance = row.midpoint_variance / static_cast<double>(d);
    return run;
}

}  // namespace flatcluster
