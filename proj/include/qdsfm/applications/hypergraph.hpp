#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "qdsfm/error.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm {

struct Hyperedge
{
    std::vector<std::size_t> members;
    /// Empty head and tail mean an undirected hyperedge.
    std::vector<std::size_t> head;
    std::vector<std::size_t> tail;
    double weight = 1.0;

    bool directed() const { return !head.empty() || !tail.empty(); }
};

struct Hypergraph
{
    std::size_t n = 0;
    std::vector<Hyperedge> edges;

    void validate() const
    {
        for (std::size_t r = 0; r < edges.size(); ++r) {
            const auto& e = edges[r];
            const std::string where = "hyperedge " + std::to_string(r);
            if (e.members.empty()) throw InvalidArgument(where + " has no members");
            for (std::size_t v : e.members)
                if (v >= n) throw InvalidArgument(where + " references vertex " + std::to_string(v) + " >= n");
            auto sorted = e.members;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidArgument(where + " repeats a member");
            auto subset = [&](const std::vector<std::size_t>& part) {
                return std::all_of(part.begin(), part.end(),
                                   [&](std::size_t v) { return std::binary_search(sorted.begin(), sorted.end(), v); });
            };
            if (!subset(e.head) || !subset(e.tail)) throw InvalidArgument(where + " head/tail must be within members");
            if (e.directed() && (e.head.empty() || e.tail.empty()))
                throw InvalidArgument(where + " directed hyperedges need both head and tail");
        }
    }

    /// d_i = number of hyperedges containing i.
    std::vector<std::size_t> degrees() const
    {
        std::vector<std::size_t> d(n, 0);
        for (const auto& e : edges)
            for (std::size_t v : e.members) ++d[v];
        return d;
    }

    std::size_t total_incidence() const
    {
        std::size_t s = 0;
        for (const auto& e : edges) s += e.members.size();
        return s;
    }

    /// One cut atom per hyperedge; two-member undirected hyperedges become
    /// graph edges.
    std::vector<SubmodularAtom> atoms() const
    {
        std::vector<SubmodularAtom> out;
        out.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.directed())
                out.push_back(SubmodularAtom::directed_hyperedge(e.members, e.head, e.tail, e.weight));
            else if (e.members.size() == 2)
                out.push_back(SubmodularAtom::graph_edge(e.members[0], e.members[1], e.weight));
            else
                out.push_back(SubmodularAtom::hyperedge(e.members, e.weight));
        }
        return out;
    }
};

}  // namespace qdsfm
