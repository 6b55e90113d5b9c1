#pragma once

// Decomposable components F_r of a QDSFM objective.
//
// Every atom is a normalized, nonnegative submodular set function over a
// sorted incidence list S_r.  Vectors that live on an atom (base-polytope
// points, cone points, projection inputs) are stored densely over S_r in the
// order of members(); the *_local routines take such vectors.  Routines
// without the suffix take full-length vectors over the ground set.
//
// Cut-type atoms follow the Laplacian-regularizer table:
//   edge {i,j}:          F(S) = sqrt(w)  if |S ∩ {i,j}| = 1
//   hyperedge S_r:       F(S) = sqrt(w)  if 1 <= |S ∩ S_r| <= |S_r| - 1
//   directed (H, T):     F(S) = sqrt(w)  if S ∩ H != {} and T \ S != {}
// and F(S) = 0 otherwise.  Table/oracle atoms return sqrt(w) * g(S ∩ S_r).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdsfm/error.hpp"

namespace qdsfm {

enum class AtomKind { GraphEdge, Hyperedge, DirectedHyperedge, General };

inline const char* to_string(AtomKind kind)
{
    switch (kind) {
    case AtomKind::GraphEdge: return "edge";
    case AtomKind::Hyperedge: return "hyperedge";
    case AtomKind::DirectedHyperedge: return "directed_hyperedge";
    case AtomKind::General: return "table";
    }
    return "unknown";
}

/// Set-function callback over local membership flags (one byte per member).
using SetFunction = std::function<double(std::span<const std::uint8_t>)>;

inline constexpr std::size_t kMaxExhaustiveSize = 20;

class SubmodularAtom
{
public:
    static SubmodularAtom graph_edge(std::size_t i, std::size_t j, double weight = 1.0)
    {
        if (i == j) throw InvalidArgument("graph edge needs two distinct endpoints");
        SubmodularAtom atom(AtomKind::GraphEdge, {i, j}, weight);
        return atom;
    }

    static SubmodularAtom hyperedge(std::vector<std::size_t> members, double weight = 1.0)
    {
        SubmodularAtom atom(AtomKind::Hyperedge, std::move(members), weight);
        atom.head_.assign(atom.size(), 1);
        atom.tail_.assign(atom.size(), 1);
        atom.head_count_ = atom.tail_count_ = atom.size();
        return atom;
    }

    static SubmodularAtom directed_hyperedge(std::vector<std::size_t> members,
                                             std::span<const std::size_t> head,
                                             std::span<const std::size_t> tail,
                                             double weight = 1.0)
    {
        if (head.empty() || tail.empty())
            throw InvalidArgument("directed hyperedge needs nonempty head and tail");
        SubmodularAtom atom(AtomKind::DirectedHyperedge, std::move(members), weight);
        atom.head_.assign(atom.size(), 0);
        atom.tail_.assign(atom.size(), 0);
        for (std::size_t v : head) atom.head_[atom.local_index_or_throw(v, "head")] = 1;
        for (std::size_t v : tail) atom.tail_[atom.local_index_or_throw(v, "tail")] = 1;
        atom.head_count_ = static_cast<std::size_t>(std::count(atom.head_.begin(), atom.head_.end(), 1));
        atom.tail_count_ = static_cast<std::size_t>(std::count(atom.tail_.begin(), atom.tail_.end(), 1));
        return atom;
    }

    /// `values[mask]` is g(S) for the local subset encoded by `mask` (bit k is
    /// members()[k] after sorting).  Requires the full 2^m table.
    static SubmodularAtom from_table(std::vector<std::size_t> members, std::vector<double> values,
                                     double weight = 1.0)
    {
        SubmodularAtom atom(AtomKind::General, std::move(members), weight);
        const std::size_t m = atom.size();
        if (m > kMaxExhaustiveSize)
            throw CapacityError("value table atoms support at most 20 members");
        if (values.size() != (std::size_t{1} << m))
            throw InvalidArgument("value table must have 2^|members| entries");
        if (std::abs(values[0]) > 0.0) throw InvalidArgument("value table must satisfy F(empty) = 0");
        for (double v : values) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InvalidArgument("value table entries must be finite and nonnegative");
        }
        auto table = std::make_shared<const std::vector<double>>(std::move(values));
        atom.table_ = table;
        atom.oracle_ = [table](std::span<const std::uint8_t> in) {
            std::size_t mask = 0;
            for (std::size_t k = 0; k < in.size(); ++k)
                if (in[k]) mask |= std::size_t{1} << k;
            return (*table)[mask];
        };
        return atom;
    }

    /// Submodularity and normalization of `fn` are trusted.
    static SubmodularAtom from_oracle(std::vector<std::size_t> members, SetFunction fn,
                                      double weight = 1.0)
    {
        if (!fn) throw InvalidArgument("oracle atom needs a callable");
        SubmodularAtom atom(AtomKind::General, std::move(members), weight);
        atom.oracle_ = std::move(fn);
        return atom;
    }

    AtomKind kind() const { return kind_; }
    bool is_cut() const { return kind_ != AtomKind::General; }
    std::span<const std::size_t> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    double weight() const { return weight_; }
    /// sqrt(w): the value F takes on a cut.
    double scale() const { return scale_; }
    bool in_head(std::size_t k) const { return head_[k] != 0; }
    bool in_tail(std::size_t k) const { return tail_[k] != 0; }
    std::size_t head_size() const { return head_count_; }
    std::size_t tail_size() const { return tail_count_; }
    const std::vector<double>* table() const { return table_.get(); }

    std::optional<std::size_t> local_index(std::size_t v) const
    {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        if (it == members_.end() || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - members_.begin());
    }

    /// F on a local subset given by membership flags.
    double evaluate_local(std::span<const std::uint8_t> in) const
    {
        const std::size_t m = size();
        switch (kind_) {
        case AtomKind::GraphEdge:
        case AtomKind::Hyperedge: {
            const auto c = static_cast<std::size_t>(std::count_if(in.begin(), in.end(), [](auto b) { return b != 0; }));
            return (c >= 1 && c + 1 <= m) ? scale_ : 0.0;
        }
        case AtomKind::DirectedHyperedge: {
            bool hit_head = false;
            bool tail_outside = false;
            for (std::size_t k = 0; k < m; ++k) {
                if (in[k] && head_[k]) hit_head = true;
                if (!in[k] && tail_[k]) tail_outside = true;
            }
            return (hit_head && tail_outside) ? scale_ : 0.0;
        }
        case AtomKind::General: {
            bool any = std::any_of(in.begin(), in.end(), [](auto b) { return b != 0; });
            return any ? scale_ * oracle_(in) : 0.0;
        }
        }
        return 0.0;
    }

    /// Values F({order[0..k)}) for k = 0..m along a permutation of local indices.
    std::vector<double> prefix_values(std::span<const std::size_t> order) const
    {
        const std::size_t m = size();
        std::vector<double> f(m + 1, 0.0);
        switch (kind_) {
        case AtomKind::GraphEdge:
        case AtomKind::Hyperedge:
            for (std::size_t k = 1; k < m; ++k) f[k] = scale_;
            break;
        case AtomKind::DirectedHyperedge: {
            std::size_t heads_in = 0;
            std::size_t tails_in = 0;
            for (std::size_t k = 0; k < m; ++k) {
                heads_in += head_[order[k]];
                tails_in += tail_[order[k]];
                f[k + 1] = (heads_in > 0 && tails_in < tail_count_) ? scale_ : 0.0;
            }
            break;
        }
        case AtomKind::General: {
            std::vector<std::uint8_t> in(m, 0);
            for (std::size_t k = 0; k < m; ++k) {
                in[order[k]] = 1;
                f[k + 1] = scale_ * oracle_(in);
            }
            break;
        }
        }
        return f;
    }

    /// max_S F(S); empty when it would need more than 2^20 evaluations.
    std::optional<double> max_value() const
    {
        const std::size_t m = size();
        switch (kind_) {
        case AtomKind::GraphEdge:
        case AtomKind::Hyperedge:
            return m >= 2 ? scale_ : 0.0;
        case AtomKind::DirectedHyperedge: {
            // S = {h} is a cut unless T = {h}; any cut needs such an h.
            for (std::size_t k = 0; k < m; ++k) {
                if (!head_[k]) continue;
                if (tail_count_ > 1 || !tail_[k]) return scale_;
            }
            return 0.0;
        }
        case AtomKind::General: {
            if (m > kMaxExhaustiveSize) return std::nullopt;
            double best = 0.0;
            std::vector<std::uint8_t> in(m);
            for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
                for (std::size_t k = 0; k < m; ++k) in[k] = (mask >> k) & 1U;
                best = std::max(best, evaluate_local(in));
            }
            return best;
        }
        }
        return std::nullopt;
    }

private:
    SubmodularAtom(AtomKind kind, std::vector<std::size_t> members, double weight)
        : kind_(kind), members_(std::move(members)), weight_(weight)
    {
        if (!(weight_ >= 0.0) || !std::isfinite(weight_))
            throw InvalidArgument("atom weight must be finite and nonnegative");
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
            throw InvalidArgument("atom members must be distinct");
        if (members_.empty()) throw InvalidArgument("atom needs at least one member");
        scale_ = std::sqrt(weight_);
        head_.assign(members_.size(), 1);
        tail_.assign(members_.size(), 1);
        head_count_ = tail_count_ = members_.size();
    }

    std::size_t local_index_or_throw(std::size_t v, const char* what) const
    {
        auto k = local_index(v);
        if (!k) throw InvalidArgument(std::string(what) + " vertex " + std::to_string(v) + " is not a member");
        return *k;
    }

    AtomKind kind_;
    std::vector<std::size_t> members_;
    double weight_ = 1.0;
    double scale_ = 1.0;
    std::vector<std::uint8_t> head_;
    std::vector<std::uint8_t> tail_;
    std::size_t head_count_ = 0;
    std::size_t tail_count_ = 0;
    SetFunction oracle_;
    std::shared_ptr<const std::vector<double>> table_;
};

// ---------------------------------------------------------------------------
// restriction helpers

inline std::vector<double> restrict_to(const SubmodularAtom& atom, std::span<const double> full)
{
    const auto mem = atom.members();
    std::vector<double> local(mem.size());
    for (std::size_t k = 0; k < mem.size(); ++k) local[k] = full[mem[k]];
    return local;
}

inline std::vector<double> expand(const SubmodularAtom& atom, std::span<const double> local, std::size_t n)
{
    std::vector<double> full(n, 0.0);
    const auto mem = atom.members();
    for (std::size_t k = 0; k < mem.size(); ++k) full[mem[k]] = local[k];
    return full;
}

// ---------------------------------------------------------------------------
// evaluation

/// F(S ∩ S_r) for a subset S of the ground set given as a list of vertices.
inline double evaluate(const SubmodularAtom& atom, std::span<const std::size_t> subset)
{
    std::vector<std::uint8_t> in(atom.size(), 0);
    for (std::size_t v : subset) {
        if (auto k = atom.local_index(v)) in[*k] = 1;
    }
    return atom.evaluate_local(in);
}

// Stable sort of local indices by key; ties keep index order.
inline std::vector<std::size_t> sorted_order(std::span<const double> key, bool descending)
{
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (descending)
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return key[i] > key[j]; });
    else
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return key[i] < key[j]; });
    return order;
}

/// Base-polytope vertex produced by the greedy algorithm along `order`.
inline std::vector<double> greedy_vertex(const SubmodularAtom& atom, std::span<const std::size_t> order)
{
    const auto f = atom.prefix_values(order);
    std::vector<double> q(atom.size(), 0.0);
    for (std::size_t k = 0; k < order.size(); ++k) q[order[k]] = f[k + 1] - f[k];
    return q;
}

/// argmin_{q in B} <c, q> over local coordinates (Edmonds' greedy, ascending c).
inline std::vector<double> greedy_linear_minimizer(const SubmodularAtom& atom, std::span<const double> c)
{
    if (c.size() != atom.size()) throw InvalidArgument("cost vector must have one entry per member");
    return greedy_vertex(atom, sorted_order(c, false));
}

/// argmax_{q in B} <c, q> over local coordinates.
inline std::vector<double> greedy_linear_maximizer(const SubmodularAtom& atom, std::span<const double> c)
{
    if (c.size() != atom.size()) throw InvalidArgument("cost vector must have one entry per member");
    return greedy_vertex(atom, sorted_order(c, true));
}

/// Lovász extension by the sorted telescoping sum
///   sum_k F({i_1..i_k}) (x_{i_k} - x_{i_{k+1}}) + F(S_r) x_{i_m}.
inline double lovasz_extension_sorted(const SubmodularAtom& atom, std::span<const double> x_local)
{
    const auto order = sorted_order(x_local, true);
    const auto f = atom.prefix_values(order);
    const std::size_t m = order.size();
    double value = f[m] * x_local[order[m - 1]];
    for (std::size_t k = 0; k + 1 < m; ++k)
        value += f[k + 1] * (x_local[order[k]] - x_local[order[k + 1]]);
    return value;
}

inline double lovasz_extension_local(const SubmodularAtom& atom, std::span<const double> x_local)
{
    const std::size_t m = atom.size();
    switch (atom.kind()) {
    case AtomKind::GraphEdge:
    case AtomKind::Hyperedge: {
        auto [lo, hi] = std::minmax_element(x_local.begin(), x_local.end());
        return atom.scale() * (*hi - *lo);
    }
    case AtomKind::DirectedHyperedge: {
        double top = -HUGE_VAL;
        double bottom = HUGE_VAL;
        for (std::size_t k = 0; k < m; ++k) {
            if (atom.in_head(k)) top = std::max(top, x_local[k]);
            if (atom.in_tail(k)) bottom = std::min(bottom, x_local[k]);
        }
        return atom.scale() * std::max(top - bottom, 0.0);
    }
    case AtomKind::General:
        return lovasz_extension_sorted(atom, x_local);
    }
    return 0.0;
}

/// Lovász extension f_r(x) for a full-length vector x.
inline double lovasz_extension(const SubmodularAtom& atom, std::span<const double> x)
{
    const auto local = restrict_to(atom, x);
    return lovasz_extension_local(atom, local);
}

// ---------------------------------------------------------------------------
// exhaustive checks (small atoms only)

/// y(S) <= F(S) + tol for all S ⊆ S_r and |y(S_r) - F(S_r)| <= tol.
inline bool base_polytope_contains_local(const SubmodularAtom& atom, std::span<const double> y, double tol)
{
    const std::size_t m = atom.size();
    if (m > kMaxExhaustiveSize) throw CapacityError("membership check limited to atoms with at most 20 members");
    if (y.size() != m) throw InvalidArgument("vector must have one entry per member");
    std::vector<std::uint8_t> in(m);
    const std::size_t full = (std::size_t{1} << m) - 1;
    for (std::size_t mask = 1; mask <= full; ++mask) {
        double ys = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            in[k] = (mask >> k) & 1U;
            if (in[k]) ys += y[k];
        }
        const double f = atom.evaluate_local(in);
        if (mask == full) {
            if (std::abs(ys - f) > tol) return false;
        } else if (ys > f + tol) {
            return false;
        }
    }
    return true;
}

/// Full-length variant; also requires y to vanish off S_r.
inline bool base_polytope_contains(const SubmodularAtom& atom, std::span<const double> y, double tol)
{
    std::vector<std::uint8_t> member(y.size(), 0);
    for (std::size_t v : atom.members()) {
        if (v >= y.size()) return false;
        member[v] = 1;
    }
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!member[i] && std::abs(y[i]) > tol) return false;
    return base_polytope_contains_local(atom, restrict_to(atom, y), tol);
}

}  // namespace qdsfm
