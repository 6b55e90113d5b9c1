#pragma once

// QDSFM instance, dual state and the objective/gap evaluations shared by the
// outer solvers.
//
//   primal   P(x)     = ||x - a||^2_W + sum_r f_r(x)^2
//   dual     g(y,phi) = ||sum_r y_r - 2 W a||^2_{W^-1} + sum_r phi_r^2
//   value    D        = ||a||^2_W - g / 4
//   recovery x        = a - W^-1 sum_r y_r / 2

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qdsfm/diagnostics.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/projection.hpp"
#include "qdsfm/submodular.hpp"
#include "qdsfm/weight_matrix.hpp"

namespace qdsfm {

struct ProblemInstance
{
    std::size_t n = 0;
    std::vector<double> a;
    WeightMatrix w;
    std::vector<SubmodularAtom> atoms;

    std::size_t num_atoms() const { return atoms.size(); }

    void validate() const
    {
        if (a.size() != n) throw InvalidArgument("vector a must have length n");
        if (w.size() != n) throw InvalidArgument("weight matrix must have length n");
        for (double v : a)
            if (!std::isfinite(v)) throw InvalidArgument("vector a must be finite");
        for (std::size_t r = 0; r < atoms.size(); ++r) {
            for (std::size_t v : atoms[r].members()) {
                if (v >= n)
                    throw InvalidArgument("atom " + std::to_string(r) + " references vertex " + std::to_string(v) +
                                          " outside the ground set");
            }
        }
    }

    /// Psi_ii = number of atoms incident to i.
    std::vector<std::size_t> incidence_counts() const
    {
        std::vector<std::size_t> psi(n, 0);
        for (const auto& atom : atoms)
            for (std::size_t v : atom.members()) ++psi[v];
        return psi;
    }

    std::size_t total_incidence() const
    {
        std::size_t s = 0;
        for (const auto& atom : atoms) s += atom.size();
        return s;
    }
};

inline DiagnosticBounds diagnostics(const ProblemInstance& inst, const WeightMatrix& w1, const WeightMatrix& w2)
{
    return diagnostics(std::span<const SubmodularAtom>(inst.atoms), w1, w2);
}

/// Dual iterate: one cone point per atom (local to its members) plus the cached
/// dense sum of all y_r.
struct DualState
{
    std::vector<ConePoint> cones;
    std::vector<double> sum_y;

    static DualState zero(const ProblemInstance& inst)
    {
        DualState d;
        d.cones.reserve(inst.atoms.size());
        for (const auto& atom : inst.atoms) d.cones.push_back(ConePoint{std::vector<double>(atom.size(), 0.0), 0.0});
        d.sum_y.assign(inst.n, 0.0);
        return d;
    }

    void resync(const ProblemInstance& inst)
    {
        sum_y.assign(inst.n, 0.0);
        for (std::size_t r = 0; r < cones.size(); ++r) {
            const auto mem = inst.atoms[r].members();
            for (std::size_t k = 0; k < mem.size(); ++k) sum_y[mem[k]] += cones[r].y[k];
        }
    }
};

inline double primal_objective(const ProblemInstance& inst, std::span<const double> x)
{
    if (x.size() != inst.n) throw InvalidArgument("primal point must have length n");
    double s = 0.0;
    for (std::size_t i = 0; i < inst.n; ++i) {
        const double d = x[i] - inst.a[i];
        s += inst.w[i] * d * d;
    }
    for (const auto& atom : inst.atoms) {
        const double f = lovasz_extension(atom, x);
        s += f * f;
    }
    return s;
}

struct DualValue
{
    double g = 0.0;
    double value = 0.0;
};

inline DualValue dual_objective(const ProblemInstance& inst, const DualState& dual)
{
    DualValue out;
    double a_norm = 0.0;
    for (std::size_t i = 0; i < inst.n; ++i) {
        const double d = dual.sum_y[i] - 2.0 * inst.w[i] * inst.a[i];
        out.g += d * d / inst.w[i];
        a_norm += inst.w[i] * inst.a[i] * inst.a[i];
    }
    for (const auto& c : dual.cones) out.g += c.phi * c.phi;
    out.value = a_norm - 0.25 * out.g;
    return out;
}

inline std::vector<double> primal_from_dual(const ProblemInstance& inst, const DualState& dual)
{
    std::vector<double> x(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) x[i] = inst.a[i] - 0.5 * dual.sum_y[i] / inst.w[i];
    return x;
}

/// P(x) - D at x recovered from the dual, accumulated as
///   sum_r [ f_r(x)^2 - <y_r, x> + phi_r^2 / 4 ],
/// an algebraically equal form whose terms are each nonnegative on feasible
/// duals.  Avoids cancelling the two O(||a||^2) objectives near optimality.
inline double duality_gap(const ProblemInstance& inst, const DualState& dual, std::span<const double> x)
{
    double gap = 0.0;
    for (std::size_t r = 0; r < inst.atoms.size(); ++r) {
        const auto& atom = inst.atoms[r];
        const auto xl = restrict_to(atom, x);
        const double f = lovasz_extension_local(atom, xl);
        double yx = 0.0;
        for (std::size_t k = 0; k < xl.size(); ++k) yx += dual.cones[r].y[k] * xl[k];
        gap += f * f - yx + 0.25 * dual.cones[r].phi * dual.cones[r].phi;
    }
    return gap;
}

inline double duality_gap(const ProblemInstance& inst, const DualState& dual)
{
    const auto x = primal_from_dual(inst, dual);
    return duality_gap(inst, dual, x);
}

struct Evaluation
{
    std::vector<double> x;
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
};

inline Evaluation evaluate(const ProblemInstance& inst, const DualState& dual)
{
    Evaluation e;
    e.x = primal_from_dual(inst, dual);
    e.primal = primal_objective(inst, e.x);
    e.dual = dual_objective(inst, dual).value;
    e.gap = duality_gap(inst, dual, e.x);
    return e;
}

}  // namespace qdsfm
