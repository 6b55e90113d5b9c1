#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "qdsfm/submodular.hpp"
#include "qdsfm/weight_matrix.hpp"

namespace qdsfm {

/// Condition quantities that govern the linear rates of the outer solvers.
/// Fields are empty when some atom is too large to bound exactly.
struct DiagnosticBounds
{
    /// Upper bound on rho^2 = max sum_r ||y_r||_1^2 over the base polytopes,
    /// using ||y_r||_1 <= 2 max_S F_r(S).
    std::optional<double> rho_sq_upper;
    /// mu(W1, W2) evaluated with rho_sq_upper in place of rho^2.
    std::optional<double> mu;
    std::vector<std::optional<double>> atom_max;

    bool available() const { return rho_sq_upper.has_value(); }
};

/// mu(W1, W2) = max{ sum_i W1_ii * sum_j 1/W2_jj , 9/4 rho^2 sum_i W1_ii + 1 }.
inline double mu_bound(const WeightMatrix& w1, const WeightMatrix& w2, double rho_sq)
{
    double trace1 = 0.0;
    for (double v : w1.diagonal()) trace1 += v;
    double inv_trace2 = 0.0;
    for (double v : w2.diagonal()) inv_trace2 += 1.0 / v;
    return std::max(trace1 * inv_trace2, 2.25 * rho_sq * trace1 + 1.0);
}

inline DiagnosticBounds diagnostics(std::span<const SubmodularAtom> atoms, const WeightMatrix& w1,
                                    const WeightMatrix& w2)
{
    if (w1.size() != w2.size()) throw InvalidArgument("weight matrices must have equal size");
    DiagnosticBounds out;
    out.atom_max.reserve(atoms.size());
    double rho_sq = 0.0;
    bool complete = true;
    for (const auto& atom : atoms) {
        auto fmax = atom.max_value();
        out.atom_max.push_back(fmax);
        if (!fmax) {
            complete = false;
            continue;
        }
        rho_sq += 4.0 * (*fmax) * (*fmax);
    }
    if (complete) {
        out.rho_sq_upper = rho_sq;
        out.mu = mu_bound(w1, w2, rho_sq);
    }
    return out;
}

}  // namespace qdsfm
