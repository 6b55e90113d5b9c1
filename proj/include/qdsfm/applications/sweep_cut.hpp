#pragma once

// Cheeger sweep rounding of a score vector on a hypergraph.  Vertices are
// ordered by x_i / sqrt(W_ii) (descending, ties by index) and every prefix S_j,
// j = 1..N-1, is scored by
//
//     c(S_j) = #{r : S_r meets both S_j and its complement}
//              / min{ sum_r |S_r ∩ S_j|, sum_r |S_r ∩ comp(S_j)| }.
//
// VolumeRule::Max puts the larger side volume in the denominator instead.
// Prefixes whose denominator vanishes are scored +inf.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/error.hpp"

namespace qdsfm {

enum class VolumeRule { Min, Max };

namespace detail {

inline double sweep_ratio(std::size_t crossing, double vol_in, double vol_out, VolumeRule rule)
{
    const double denom = rule == VolumeRule::Min ? std::min(vol_in, vol_out) : std::max(vol_in, vol_out);
    return denom > 0.0 ? static_cast<double>(crossing) / denom : std::numeric_limits<double>::infinity();
}

}  // namespace detail

struct SweepCut
{
    std::vector<std::size_t> order;
    /// Size of the selected prefix, in [1, N-1].
    std::size_t cut_index = 0;
    double conductance = std::numeric_limits<double>::infinity();
    /// in_prefix[i] is true for vertices of S_{j*}.
    std::vector<bool> in_prefix;
};

/// c(S) recomputed from scratch for a given side assignment.
inline double cut_ratio(const Hypergraph& hg, const std::vector<bool>& in_set, VolumeRule rule = VolumeRule::Min)
{
    std::size_t crossing = 0;
    double vol_in = 0.0;
    double vol_out = 0.0;
    for (const auto& e : hg.edges) {
        std::size_t inside = 0;
        for (std::size_t v : e.members) inside += in_set[v] ? 1 : 0;
        if (inside > 0 && inside < e.members.size()) ++crossing;
        vol_in += static_cast<double>(inside);
        vol_out += static_cast<double>(e.members.size() - inside);
    }
    return detail::sweep_ratio(crossing, vol_in, vol_out, rule);
}

inline SweepCut cheeger_sweep(const Hypergraph& hg, std::span<const double> wdiag, std::span<const double> x,
                              VolumeRule rule = VolumeRule::Min)
{
    const std::size_t n = hg.n;
    if (x.size() != n || wdiag.size() != n) throw InvalidArgument("sweep inputs must have length n");
    if (n < 2) throw InvalidArgument("sweep cut needs at least two vertices");

    SweepCut out;
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = x[i] / std::sqrt(wdiag[i]);
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t i, std::size_t j) { return key[i] > key[j]; });

    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t r = 0; r < hg.edges.size(); ++r)
        for (std::size_t v : hg.edges[r].members) incident[v].push_back(r);

    std::vector<std::size_t> inside(hg.edges.size(), 0);
    const double total = static_cast<double>(hg.total_incidence());
    double vol_in = 0.0;
    std::size_t crossing = 0;
    for (std::size_t j = 1; j < n; ++j) {
        const std::size_t v = out.order[j - 1];
        for (std::size_t r : incident[v]) {
            const std::size_t size = hg.edges[r].members.size();
            const bool was_crossing = inside[r] > 0 && inside[r] < size;
            ++inside[r];
            const bool is_crossing = inside[r] < size;
            if (!was_crossing && is_crossing) ++crossing;
            if (was_crossing && !is_crossing) --crossing;
        }
        vol_in += static_cast<double>(incident[v].size());
        const double c = detail::sweep_ratio(crossing, vol_in, total - vol_in, rule);
        if (c < out.conductance || out.cut_index == 0) {
            out.conductance = c;
            out.cut_index = j;
        }
    }
    out.in_prefix.assign(n, false);
    for (std::size_t j = 0; j < out.cut_index; ++j) out.in_prefix[out.order[j]] = true;
    return out;
}

}  // namespace qdsfm
