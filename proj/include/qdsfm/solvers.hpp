#pragma once

// Outer solvers over the dual of QDSFM.
//
// rcd_solve: randomized coordinate descent; each iteration picks one atom
//   uniformly and re-projects its cone point onto C_r at 2Wa - sum_{r' != r} y_r'
//   in the W^-1 metric.
// ap_solve: alternating projections between the product cone and the
//   hyperplane sum_r lambda_r = 2Wa (lambda_r supported on S_r), with all cone
//   projections in the Psi W^-1 metric, Psi_ii = #{r : i in S_r}.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "qdsfm/error.hpp"
#include "qdsfm/problem.hpp"
#include "qdsfm/projection.hpp"
#include "qdsfm/random.hpp"
#include "qdsfm/trace.hpp"

namespace qdsfm {

inline constexpr std::uint64_t kDefaultSeed = 0x9d5f3c1a2b7e4d61ULL;

struct SolverConfig
{
    std::uint64_t seed = kDefaultSeed;
    std::size_t max_iters = 1000000;
    double max_seconds = std::numeric_limits<double>::infinity();
    /// Stop at the first checkpoint whose duality gap is at most this value.
    double target_gap = 1e-10;
    /// Iterations between gap checkpoints; 0 selects R for RCD and 1 for AP.
    std::size_t stride = 0;
    /// Cone projection oracle; empty selects the exact routine for cut atoms
    /// and MNP for the rest.  Exact requested on a non-cut atom falls back to MNP.
    std::optional<ProjectionMethod> method;
    double projection_delta = 1e-12;
    /// 0 keeps the default MAJOR-loop / iteration caps.
    std::size_t projection_max_major = 0;
    /// Worker threads for the per-iteration AP projections.
    std::size_t threads = 1;
};

struct SolveResult
{
    std::vector<double> x;
    DualState dual;
    ConvergenceTrace trace;
    std::size_t iterations = 0;
    double gap = 0.0;
    bool converged = false;
    double seconds = 0.0;
};

namespace detail {

inline ProjectionMethod method_for(const SubmodularAtom& atom, const std::optional<ProjectionMethod>& requested)
{
    if (!requested) return atom.is_cut() ? ProjectionMethod::Exact : ProjectionMethod::MNP;
    if (*requested == ProjectionMethod::Exact && !atom.is_cut()) return ProjectionMethod::MNP;
    return *requested;
}

// Cone projection without the optimality certificate bookkeeping.
inline ConePoint project_point(const SubmodularAtom& atom, ProjectionMethod method, std::span<const double> wtilde,
                               std::span<const double> a, const ProjectionParams& params)
{
    if (method == ProjectionMethod::Exact) {
        const std::size_t m = atom.size();
        std::vector<std::uint8_t> head(m);
        std::vector<std::uint8_t> tail(m);
        for (std::size_t i = 0; i < m; ++i) {
            head[i] = atom.in_head(i);
            tail[i] = atom.in_tail(i);
        }
        return project_hyperedge_exact(head, tail, atom.weight(), wtilde, a);
    }
    ProjectionParams p = params;
    p.method = method;
    return project(atom, wtilde, a, p).point;
}

class Checkpointer
{
public:
    Checkpointer(const ProblemInstance& inst, const SolverConfig& cfg, SolveResult& res)
        : inst_(inst), cfg_(cfg), res_(res), start_(std::chrono::steady_clock::now())
    {
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    /// Records a trace row; true when the target gap has been reached.
    bool record(std::size_t k)
    {
        auto e = evaluate(inst_, res_.dual);
        res_.trace.points.push_back(TracePoint{k, e.primal, e.dual, e.gap, elapsed()});
        res_.x = std::move(e.x);
        res_.gap = e.gap;
        res_.iterations = k;
        res_.converged = e.gap <= cfg_.target_gap;
        return res_.converged;
    }

    bool out_of_time() const { return elapsed() >= cfg_.max_seconds; }

    void finish() { res_.seconds = elapsed(); }

private:
    const ProblemInstance& inst_;
    const SolverConfig& cfg_;
    SolveResult& res_;
    std::chrono::steady_clock::time_point start_;
};

inline void validate_config(const SolverConfig& cfg)
{
    if (!(cfg.target_gap >= 0.0)) throw InvalidArgument("target gap must be nonnegative");
    if (!(cfg.projection_delta > 0.0)) throw InvalidArgument("projection delta must be positive");
    if (!(cfg.max_seconds > 0.0)) throw InvalidArgument("time budget must be positive");
}

}  // namespace detail

/// Randomized coordinate descent on the dual; single-threaded and fully
/// determined by the seed.
inline SolveResult rcd_solve(const ProblemInstance& inst, const SolverConfig& cfg = {})
{
    inst.validate();
    detail::validate_config(cfg);
    const std::size_t n = inst.n;
    const std::size_t R = inst.num_atoms();

    SolveResult res;
    res.dual = DualState::zero(inst);
    res.trace.stride = cfg.stride ? cfg.stride : std::max<std::size_t>(R, 1);
    detail::Checkpointer ckpt(inst, cfg, res);

    if (ckpt.record(0) || R == 0 || cfg.max_iters == 0) {
        ckpt.finish();
        return res;
    }

    std::vector<double> two_wa(n);
    for (std::size_t i = 0; i < n; ++i) two_wa[i] = 2.0 * inst.w[i] * inst.a[i];
    const WeightMatrix winv = inst.w.inverse();
    std::vector<std::vector<double>> wtilde(R);
    std::vector<ProjectionMethod> methods(R);
    for (std::size_t r = 0; r < R; ++r) {
        wtilde[r] = winv.gather(inst.atoms[r].members());
        methods[r] = detail::method_for(inst.atoms[r], cfg.method);
    }
    ProjectionParams pp;
    pp.delta = cfg.projection_delta;
    pp.max_major = cfg.projection_max_major;

    const std::size_t resync_every = std::max<std::size_t>(1, n * R / 10);
    Rng rng(cfg.seed);
    std::vector<double> target;

    std::size_t k = 0;
    while (k < cfg.max_iters) {
        const std::size_t r = uniform_index(rng, R);
        const auto& atom = inst.atoms[r];
        const auto mem = atom.members();
        auto& cone = res.dual.cones[r];
        target.resize(mem.size());
        for (std::size_t j = 0; j < mem.size(); ++j)
            target[j] = two_wa[mem[j]] - (res.dual.sum_y[mem[j]] - cone.y[j]);
        ConePoint next = detail::project_point(atom, methods[r], wtilde[r], target, pp);
        for (std::size_t j = 0; j < mem.size(); ++j) res.dual.sum_y[mem[j]] += next.y[j] - cone.y[j];
        cone = std::move(next);
        ++k;
        if (k % resync_every == 0) res.dual.resync(inst);
        if (k % res.trace.stride == 0 || k == cfg.max_iters) {
            if (ckpt.record(k)) break;
            if (ckpt.out_of_time()) break;
        }
    }
    if (res.iterations != k) ckpt.record(k);
    ckpt.finish();
    return res;
}

/// Hyperplane step of AP: lambda_r = y_r - A_r Psi^-1 W alpha / 2 with
/// alpha = 2 W^-1 sum_r y_r - 4a.  Returned vectors are local to each atom.
inline std::vector<std::vector<double>> ap_hyperplane_step(const ProblemInstance& inst, const DualState& dual,
                                                           std::span<const std::size_t> psi)
{
    std::vector<double> shift(inst.n, 0.0);
    for (std::size_t i = 0; i < inst.n; ++i) {
        if (psi[i] == 0) continue;
        const double alpha = 2.0 * dual.sum_y[i] / inst.w[i] - 4.0 * inst.a[i];
        shift[i] = 0.5 * inst.w[i] * alpha / static_cast<double>(psi[i]);
    }
    std::vector<std::vector<double>> lambda(inst.atoms.size());
    for (std::size_t r = 0; r < inst.atoms.size(); ++r) {
        const auto mem = inst.atoms[r].members();
        lambda[r].resize(mem.size());
        for (std::size_t j = 0; j < mem.size(); ++j) lambda[r][j] = dual.cones[r].y[j] - shift[mem[j]];
    }
    return lambda;
}

/// Alternating projections.  The R cone projections of an iteration are
/// independent and run on `cfg.threads` workers; results do not depend on the
/// thread count.
inline SolveResult ap_solve(const ProblemInstance& inst, const SolverConfig& cfg = {})
{
    inst.validate();
    detail::validate_config(cfg);
    const std::size_t R = inst.num_atoms();

    SolveResult res;
    res.dual = DualState::zero(inst);
    res.trace.stride = cfg.stride ? cfg.stride : 1;
    detail::Checkpointer ckpt(inst, cfg, res);

    if (ckpt.record(0) || R == 0 || cfg.max_iters == 0) {
        ckpt.finish();
        return res;
    }

    const auto psi = inst.incidence_counts();
    std::vector<std::vector<double>> wtilde(R);
    std::vector<ProjectionMethod> methods(R);
    for (std::size_t r = 0; r < R; ++r) {
        const auto mem = inst.atoms[r].members();
        wtilde[r].resize(mem.size());
        for (std::size_t j = 0; j < mem.size(); ++j)
            wtilde[r][j] = static_cast<double>(psi[mem[j]]) / inst.w[mem[j]];
        methods[r] = detail::method_for(inst.atoms[r], cfg.method);
    }
    ProjectionParams pp;
    pp.delta = cfg.projection_delta;
    pp.max_major = cfg.projection_max_major;

    const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(R, 1));
    auto project_range = [&](const std::vector<std::vector<double>>& lambda, std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r)
            res.dual.cones[r] = detail::project_point(inst.atoms[r], methods[r], wtilde[r], lambda[r], pp);
    };

    std::size_t k = 0;
    while (k < cfg.max_iters) {
        const auto lambda = ap_hyperplane_step(inst, res.dual, psi);
        if (threads == 1) {
            project_range(lambda, 0, R);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (std::size_t t = 0; t < threads; ++t) {
                const std::size_t lo = R * t / threads;
                const std::size_t hi = R * (t + 1) / threads;
                pool.emplace_back([&, lo, hi] { project_range(lambda, lo, hi); });
            }
        }
        res.dual.resync(inst);
        ++k;
        if (k % res.trace.stride == 0 || k == cfg.max_iters) {
            if (ckpt.record(k)) break;
            if (ckpt.out_of_time()) break;
        }
    }
    if (res.iterations != k) ckpt.record(k);
    ckpt.finish();
    return res;
}

enum class Algorithm { RCD, AP };

inline SolveResult solve(const ProblemInstance& inst, Algorithm algorithm, const SolverConfig& cfg = {})
{
    return algorithm == Algorithm::RCD ? rcd_solve(inst, cfg) : ap_solve(inst, cfg);
}

}  // namespace qdsfm
