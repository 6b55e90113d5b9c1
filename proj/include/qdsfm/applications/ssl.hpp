#pragma once

// Semi-supervised learning on hypergraphs as QDSFM.
//
// For class k the scores minimize
//     beta ||x - a||^2 + sum_r max_{i,j in S_r} (x_i / sqrt(W_ii) - x_j / sqrt(W_jj))^2
// with a_i = +1 (labelled k), -1 (labelled otherwise), 0 (unlabelled).  The
// substitution x' = W^{-1/2} x gives the standard form
//     beta ||x' - a'||^2_W + sum_r f_r(x')^2,   a' = W^{-1/2} a,
// with unit hyperedge cuts; x'_i is directly the normalized score.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/problem.hpp"

namespace qdsfm {

struct LabeledDataset
{
    std::size_t n = 0;
    std::size_t num_classes = 2;
    /// vertex -> class in [0, num_classes)
    std::map<std::size_t, std::size_t> labels;

    void validate() const
    {
        if (num_classes < 2) throw InvalidArgument("labelled dataset needs at least two classes");
        for (const auto& [v, k] : labels) {
            if (v >= n) throw InvalidArgument("label references vertex " + std::to_string(v) + " >= n");
            if (k >= num_classes) throw InvalidArgument("label class " + std::to_string(k) + " out of range");
        }
    }

    std::vector<std::size_t> observed_per_class() const
    {
        std::vector<std::size_t> c(num_classes, 0);
        for (const auto& [v, k] : labels) ++c[k];
        return c;
    }
};

enum class Normalization { Degree, Identity };

struct SslInstance
{
    ProblemInstance instance;
    /// sqrt(W_ii) of the normalization (not scaled by beta).
    std::vector<double> sqrt_w;
    double beta = 1.0;

    /// The solved x' are the normalized scores x_i / sqrt(W_ii).
    std::vector<double> scores(std::span<const double> x_transformed) const
    {
        return {x_transformed.begin(), x_transformed.end()};
    }

    /// Original-variable solution x = W^{1/2} x'.
    std::vector<double> original(std::span<const double> x_transformed) const
    {
        std::vector<double> x(x_transformed.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = sqrt_w[i] * x_transformed[i];
        return x;
    }

    /// beta ||x - a||^2 + sum_r max_{i,j} (x_i/sqrt(W_ii) - x_j/sqrt(W_jj))^2 in
    /// the original variables.
    double original_objective(std::span<const double> x, std::span<const double> a, const Hypergraph& hg) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += beta * (x[i] - a[i]) * (x[i] - a[i]);
        for (const auto& e : hg.edges) {
            double hi = -HUGE_VAL;
            double lo = HUGE_VAL;
            for (std::size_t v : e.members) {
                const double t = x[v] / sqrt_w[v];
                hi = std::max(hi, t);
                lo = std::min(lo, t);
            }
            s += e.weight * (hi - lo) * (hi - lo);
        }
        return s;
    }
};

/// a_i in {-1, 0, +1} for one-vs-rest class k.
inline std::vector<double> class_indicator(const LabeledDataset& ds, std::size_t k)
{
    std::vector<double> a(ds.n, 0.0);
    for (const auto& [v, c] : ds.labels) a[v] = (c == k) ? 1.0 : -1.0;
    return a;
}

inline SslInstance build_ssl_instance(const Hypergraph& hg, const LabeledDataset& ds, std::size_t k, double beta,
                                      Normalization normalization = Normalization::Degree)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
    hg.validate();
    ds.validate();
    if (ds.n != hg.n) throw InvalidArgument("dataset and hypergraph sizes differ");
    if (k >= ds.num_classes) throw InvalidArgument("class index out of range");
    if (std::any_of(hg.edges.begin(), hg.edges.end(), [](const Hyperedge& e) { return e.directed(); }))
        throw InvalidArgument("semi-supervised builder expects undirected hyperedges");

    std::vector<double> wdiag(hg.n, 1.0);
    if (normalization == Normalization::Degree) {
        const auto d = hg.degrees();
        for (std::size_t i = 0; i < hg.n; ++i) {
            if (d[i] == 0) throw InvalidArgument("vertex " + std::to_string(i) + " has zero degree");
            wdiag[i] = static_cast<double>(d[i]);
        }
    }
    SslInstance out;
    out.beta = beta;
    out.sqrt_w.resize(hg.n);
    const auto a = class_indicator(ds, k);
    out.instance.n = hg.n;
    out.instance.a.resize(hg.n);
    for (std::size_t i = 0; i < hg.n; ++i) {
        out.sqrt_w[i] = std::sqrt(wdiag[i]);
        out.instance.a[i] = a[i] / out.sqrt_w[i];
    }
    out.instance.w = WeightMatrix(std::move(wdiag)).scaled(beta);
    out.instance.atoms = hg.atoms();
    return out;
}

/// y_i = argmax_k score_k[i]; ties go to the lower class.
inline std::vector<std::size_t> argmax_labels(const std::vector<std::vector<double>>& class_scores)
{
    if (class_scores.empty()) return {};
    const std::size_t n = class_scores.front().size();
    std::vector<std::size_t> y(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 1; k < class_scores.size(); ++k)
            if (class_scores[k][i] > class_scores[y[i]][i]) y[i] = k;
    return y;
}

}  // namespace qdsfm
