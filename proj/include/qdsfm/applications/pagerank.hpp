#pragma once

// Personalized PageRank p = (1 - alpha) s + alpha A D^-1 p as QDSFM:
//     x = D^-1 p,  a = D^-1 s,  W = (1 - alpha)/alpha D,  one unit edge cut per edge.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qdsfm/error.hpp"
#include "qdsfm/problem.hpp"

namespace qdsfm {

struct Graph
{
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::vector<double> degrees() const
    {
        std::vector<double> d(n, 0.0);
        for (auto [i, j] : edges) {
            d[i] += 1.0;
            d[j] += 1.0;
        }
        return d;
    }

    void validate() const
    {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto [i, j] = edges[e];
            if (i >= n || j >= n) throw InvalidArgument("edge " + std::to_string(e) + " references a vertex >= n");
            if (i == j) throw InvalidArgument("edge " + std::to_string(e) + " is a self loop");
        }
    }
};

struct PageRankInstance
{
    ProblemInstance instance;
    std::vector<double> degree;
    double alpha = 0.5;

    /// p = D x.
    std::vector<double> to_pagerank(std::span<const double> x) const
    {
        std::vector<double> p(x.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = degree[i] * x[i];
        return p;
    }
};

inline PageRankInstance build_pagerank_instance(const Graph& graph, double alpha, std::span<const double> s)
{
    graph.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("alpha must lie in (0, 1); alpha = 1 leaves W without a positive diagonal");
    if (s.size() != graph.n) throw InvalidArgument("seed vector must have length n");
    PageRankInstance out;
    out.alpha = alpha;
    out.degree = graph.degrees();
    out.instance.n = graph.n;
    out.instance.a.resize(graph.n);
    std::vector<double> wdiag(graph.n);
    const double ratio = (1.0 - alpha) / alpha;
    for (std::size_t i = 0; i < graph.n; ++i) {
        if (out.degree[i] <= 0.0) throw InvalidArgument("vertex " + std::to_string(i) + " has zero degree");
        out.instance.a[i] = s[i] / out.degree[i];
        wdiag[i] = ratio * out.degree[i];
    }
    out.instance.w = WeightMatrix(std::move(wdiag));
    out.instance.atoms.reserve(graph.edges.size());
    for (auto [i, j] : graph.edges) out.instance.atoms.push_back(SubmodularAtom::graph_edge(i, j, 1.0));
    return out;
}

/// || (1 - alpha) s + alpha A D^-1 p - p ||_inf.
inline double pagerank_residual(const Graph& graph, double alpha, std::span<const double> s, std::span<const double> p)
{
    const auto d = graph.degrees();
    std::vector<double> r(graph.n);
    for (std::size_t i = 0; i < graph.n; ++i) r[i] = (1.0 - alpha) * s[i] - p[i];
    for (auto [i, j] : graph.edges) {
        r[i] += alpha * p[j] / d[j];
        r[j] += alpha * p[i] / d[i];
    }
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace qdsfm
