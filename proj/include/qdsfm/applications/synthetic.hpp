#pragma once

// Two-cluster random hypergraph used for the semi-supervised benchmark.
// Vertices [0, n/2) form cluster 0 and [n/2, n) cluster 1.  Within-cluster
// hyperedges draw their members uniformly from one cluster, across hyperedges
// from all vertices (no rejection, so an across edge may land in one cluster).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/applications/ssl.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/random.hpp"

namespace qdsfm {

struct SyntheticParams
{
    std::size_t n = 1000;
    std::size_t within_per_cluster = 500;
    std::size_t across = 1000;
    std::size_t edge_size = 20;
    std::size_t labeled_per_cluster = 3;
    std::uint64_t seed = 1;
};

struct SyntheticData
{
    Hypergraph hypergraph;
    LabeledDataset labels;
    /// Cluster of each vertex.
    std::vector<std::size_t> truth;
};

inline SyntheticData generate_synthetic_hypergraph(const SyntheticParams& p)
{
    if (p.n < 2 || p.n % 2 != 0) throw InvalidArgument("synthetic hypergraph needs an even number of vertices");
    const std::size_t half = p.n / 2;
    if (p.edge_size < 1 || p.edge_size > half)
        throw InvalidArgument("hyperedge size must be between 1 and the cluster size");
    if (p.labeled_per_cluster > half) throw InvalidArgument("more labels requested than vertices in a cluster");

    Rng rng(p.seed);
    SyntheticData out;
    out.hypergraph.n = p.n;
    const auto cluster0 = index_range(0, half);
    const auto cluster1 = index_range(half, p.n);
    const auto everyone = index_range(0, p.n);

    out.hypergraph.edges.reserve(2 * p.within_per_cluster + p.across);
    for (const auto* pool : {&cluster0, &cluster1}) {
        for (std::size_t e = 0; e < p.within_per_cluster; ++e) {
            Hyperedge h;
            h.members = sample_without_replacement(rng, *pool, p.edge_size);
            std::sort(h.members.begin(), h.members.end());
            out.hypergraph.edges.push_back(std::move(h));
        }
    }
    for (std::size_t e = 0; e < p.across; ++e) {
        Hyperedge h;
        h.members = sample_without_replacement(rng, everyone, p.edge_size);
        std::sort(h.members.begin(), h.members.end());
        out.hypergraph.edges.push_back(std::move(h));
    }

    out.labels.n = p.n;
    out.labels.num_classes = 2;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t v : sample_without_replacement(rng, c == 0 ? cluster0 : cluster1, p.labeled_per_cluster))
            out.labels.labels[v] = c;
    }
    out.truth.resize(p.n);
    for (std::size_t i = 0; i < p.n; ++i) out.truth[i] = i < half ? 0 : 1;
    return out;
}

}  // namespace qdsfm
