#pragma once

#include <cstddef>
#include <vector>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/applications/ssl.hpp"
#include "qdsfm/applications/sweep_cut.hpp"
#include "qdsfm/solvers.hpp"

namespace qdsfm {

struct SslRun
{
    /// Fraction of misclassified vertices (only when ground truth is given).
    double error = 0.0;
    /// c(S_{j*}) of the sweep cut (binary runs).
    double conductance = 0.0;
    double gap = 0.0;
    std::size_t iterations = 0;
    double seconds = 0.0;
    bool converged = false;
    std::vector<std::size_t> predicted;
    /// Normalized scores, one vector per solved class.
    std::vector<std::vector<double>> scores;
    std::vector<SolveResult> solves;
};

/// Two-class pipeline: solve the class-0 scores and round them with the
/// Cheeger sweep; the top prefix is predicted as class 0.
inline SslRun run_binary_ssl(const Hypergraph& hg, const LabeledDataset& ds, const std::vector<std::size_t>& truth,
                             double beta, Normalization normalization, Algorithm algorithm, const SolverConfig& cfg,
                             VolumeRule rule = VolumeRule::Min)
{
    const auto ssl = build_ssl_instance(hg, ds, 0, beta, normalization);
    SslRun run;
    auto res = solve(ssl.instance, algorithm, cfg);
    std::vector<double> wnorm(hg.n);
    for (std::size_t i = 0; i < hg.n; ++i) wnorm[i] = ssl.sqrt_w[i] * ssl.sqrt_w[i];
    const auto x = ssl.original(res.x);
    const auto cut = cheeger_sweep(hg, wnorm, x, rule);
    run.conductance = cut.conductance;
    run.predicted.resize(hg.n);
    for (std::size_t i = 0; i < hg.n; ++i) run.predicted[i] = cut.in_prefix[i] ? 0 : 1;
    if (!truth.empty()) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < hg.n; ++i) wrong += run.predicted[i] != truth[i];
        run.error = static_cast<double>(wrong) / static_cast<double>(hg.n);
    }
    run.gap = res.gap;
    run.iterations = res.iterations;
    run.seconds = res.seconds;
    run.converged = res.converged;
    run.scores.push_back(ssl.scores(res.x));
    run.solves.push_back(std::move(res));
    return run;
}

/// One-vs-rest scores for every class and argmax labels.
inline SslRun run_multiclass_ssl(const Hypergraph& hg, const LabeledDataset& ds, const std::vector<std::size_t>& truth,
                                 double beta, Normalization normalization, Algorithm algorithm, const SolverConfig& cfg)
{
    SslRun run;
    run.converged = true;
    for (std::size_t k = 0; k < ds.num_classes; ++k) {
        const auto ssl = build_ssl_instance(hg, ds, k, beta, normalization);
        auto res = solve(ssl.instance, algorithm, cfg);
        run.gap = std::max(run.gap, res.gap);
        run.iterations += res.iterations;
        run.seconds += res.seconds;
        run.converged = run.converged && res.converged;
        run.scores.push_back(ssl.scores(res.x));
        run.solves.push_back(std::move(res));
    }
    run.predicted = argmax_labels(run.scores);
    if (!truth.empty()) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < hg.n; ++i) wrong += run.predicted[i] != truth[i];
        run.error = static_cast<double>(wrong) / static_cast<double>(hg.n);
    }
    return run;
}

}  // namespace qdsfm
