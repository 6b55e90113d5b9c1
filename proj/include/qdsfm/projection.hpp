#pragma once

// Projections onto the cone C = {(y, phi) : phi >= 0, y in phi * B} induced by
// the base polytope B of one atom:
//
//     Pi_C(a) = argmin_{(y, phi) in C}  h(y, phi) = ||y - a||^2_Wt + phi^2
//
// where Wt is a positive diagonal over the atom's members.  Three oracles are
// provided: the conic minimum-norm-point active-set method, the conic
// Frank-Wolfe method, and an exact O(m log m) routine for (directed)
// hyperedge cuts that works on the primal form
//
//     min_z ||z - b||^2_{Wt^-1} + f(z)^2,   b = Wt a / 2,
//
// with y = a - 2 Wt^-1 z and phi = 2 f(z).
//
// All vectors here are local (one entry per atom member).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qdsfm/error.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm {

struct ConePoint
{
    std::vector<double> y;
    double phi = 0.0;
};

enum class ProjectionMethod { MNP, FW, Exact };

inline const char* to_string(ProjectionMethod m)
{
    switch (m) {
    case ProjectionMethod::MNP: return "mnp";
    case ProjectionMethod::FW: return "fw";
    case ProjectionMethod::Exact: return "exact";
    }
    return "unknown";
}

struct ProjectionParams
{
    ProjectionMethod method = ProjectionMethod::MNP;
    /// Termination tolerance on the optimality certificate.
    double delta = 1e-12;
    /// MAJOR-loop (MNP) or iteration (FW) cap; 0 selects 100|S_r| for MNP and
    /// 100|S_r|^2 for FW.
    std::size_t max_major = 0;
    /// Keep h after every MAJOR loop / FW iteration in the result.
    bool record_history = false;

    void validate() const
    {
        if (!(delta > 0.0)) throw InvalidArgument("projection tolerance delta must be positive");
    }
};

struct ProjectionResult
{
    ConePoint point;
    double objective = 0.0;
    /// min_{q in B} <y - a, q>_Wt + phi at the returned point.
    double certificate = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

// ---------------------------------------------------------------------------

namespace detail {

inline double wdot(std::span<const double> w, std::span<const double> x, std::span<const double> y)
{
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * y[i];
    return s;
}

inline void check_inputs(const SubmodularAtom& atom, std::span<const double> wtilde, std::span<const double> a)
{
    if (wtilde.size() != atom.size() || a.size() != atom.size())
        throw InvalidArgument("projection inputs must have one entry per atom member");
    for (double v : wtilde)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("projection metric must be positive");
    for (double v : a)
        if (!std::isfinite(v)) throw InvalidArgument("projection target must be finite");
}

}  // namespace detail

/// h(y, phi) = ||y - a||^2_Wt + phi^2.
inline double projection_objective(std::span<const double> wtilde, std::span<const double> a, const ConePoint& p)
{
    double s = p.phi * p.phi;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = p.y[i] - a[i];
        s += wtilde[i] * d * d;
    }
    return s;
}

/// min_{q in B} <y - a, q>_Wt + phi; nonnegative exactly at the projection.
inline double projection_certificate(const SubmodularAtom& atom, std::span<const double> wtilde,
                                     std::span<const double> a, const ConePoint& p)
{
    std::vector<double> g(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) g[i] = wtilde[i] * (p.y[i] - a[i]);
    const auto q = greedy_linear_minimizer(atom, g);
    double s = p.phi;
    for (std::size_t i = 0; i < a.size(); ++i) s += g[i] * q[i];
    return s;
}

// ---------------------------------------------------------------------------
// conic MNP

/// Active set of the conic MNP method: y = sum lambda_i q_i, phi = sum lambda_i.
struct ActiveSetState
{
    std::vector<std::vector<double>> points;
    std::vector<double> lambda;
    std::vector<double> y;
    double phi = 0.0;

    void resync(std::size_t m)
    {
        y.assign(m, 0.0);
        phi = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t k = 0; k < m; ++k) y[k] += lambda[i] * points[i][k];
            phi += lambda[i];
        }
    }

    void drop_zero_coefficients()
    {
        std::size_t out = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (lambda[i] > 0.0) {
                if (out != i) {
                    points[out] = std::move(points[i]);
                    lambda[out] = lambda[i];
                }
                ++out;
            }
        }
        points.resize(out);
        lambda.resize(out);
    }
};

struct AffineSolution
{
    std::vector<double> alpha;
    double residual = 0.0;
    /// False when the system residual exceeds 1e-8 (1 + ||v||).
    bool accurate = true;
};

/// alpha = argmin ||sum alpha_i q_i - a||^2_Wt + (sum alpha_i)^2, i.e. the
/// (least-norm) solution of (G + 11^T) alpha = v with G_ij = <q_i, q_j>_Wt and
/// v_i = <q_i, a>_Wt.
inline AffineSolution affine_minimizer(std::span<const std::vector<double>> points, std::span<const double> wtilde,
                                       std::span<const double> a)
{
    const auto p = static_cast<Eigen::Index>(points.size());
    if (p == 0) throw InvalidArgument("affine minimizer needs at least one active point");
    Eigen::MatrixXd m(p, p);
    Eigen::VectorXd v(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        v(i) = detail::wdot(wtilde, points[i], a);
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double g = detail::wdot(wtilde, points[i], points[j]) + 1.0;
            m(i, j) = g;
            m(j, i) = g;
        }
    }
    Eigen::VectorXd alpha;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const double scale = m.diagonal().maxCoeff();
    const bool well_posed = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                            ldlt.vectorD().minCoeff() > 1e-12 * scale;
    if (well_posed) {
        alpha = ldlt.solve(v);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
        cod.setThreshold(1e-12);
        alpha = cod.solve(v);
    }
    AffineSolution out;
    out.residual = (m * alpha - v).norm();
    out.accurate = out.residual <= 1e-8 * (1.0 + v.norm());
    out.alpha.assign(alpha.data(), alpha.data() + p);
    return out;
}

inline AffineSolution affine_minimizer(const ActiveSetState& active, std::span<const double> wtilde,
                                       std::span<const double> a)
{
    return affine_minimizer(std::span<const std::vector<double>>(active.points), wtilde, a);
}

inline ProjectionResult project_mnp(const SubmodularAtom& atom, std::span<const double> wtilde,
                                    std::span<const double> a, const ProjectionParams& params = {})
{
    params.validate();
    detail::check_inputs(atom, wtilde, a);
    const std::size_t m = atom.size();
    const std::size_t max_major = params.max_major ? params.max_major : 100 * m;

    ProjectionResult out;
    ActiveSetState st;

    // Start from the vertex best aligned with a and the optimal multiple of it.
    {
        std::vector<double> c(m);
        for (std::size_t i = 0; i < m; ++i) c[i] = -wtilde[i] * a[i];
        auto q1 = greedy_linear_minimizer(atom, c);
        const double lam = detail::wdot(wtilde, a, q1) / (1.0 + detail::wdot(wtilde, q1, q1));
        st.points.push_back(std::move(q1));
        st.lambda.push_back(std::max(lam, 0.0));
        st.resync(m);
    }

    auto current_h = [&] { return projection_objective(wtilde, a, ConePoint{st.y, st.phi}); };
    double h = current_h();
    if (params.record_history) out.history.push_back(h);

    std::vector<double> grad(m);
    for (std::size_t major = 0; major < max_major; ++major) {
        for (std::size_t i = 0; i < m; ++i) grad[i] = wtilde[i] * (st.y[i] - a[i]);
        auto q = greedy_linear_minimizer(atom, grad);
        double cert = st.phi;
        for (std::size_t i = 0; i < m; ++i) cert += grad[i] * q[i];
        out.certificate = cert;
        if (cert >= -params.delta) {
            out.converged = true;
            break;
        }
        // A repeated vertex means the current cone(S) optimum cannot improve.
        const bool duplicate = std::any_of(st.points.begin(), st.points.end(), [&](const auto& p) {
            for (std::size_t i = 0; i < m; ++i)
                if (std::abs(p[i] - q[i]) > 1e-12 * (1.0 + std::abs(q[i]))) return false;
            return true;
        });
        if (duplicate) break;

        st.drop_zero_coefficients();
        st.points.push_back(std::move(q));
        st.lambda.push_back(0.0);
        ++out.iterations;

        // MINOR loop
        for (std::size_t minor = 0; minor <= m + 2 && !st.points.empty(); ++minor) {
            auto sol = affine_minimizer(st, wtilde, a);
            auto& alpha = sol.alpha;
            const double amax = std::max(1.0, *std::max_element(alpha.begin(), alpha.end()));
            for (double& v : alpha)
                if (std::abs(v) <= 1e-12 * amax) v = 0.0;
            if (std::all_of(alpha.begin(), alpha.end(), [](double v) { return v >= 0.0; })) {
                st.lambda = std::move(alpha);
                break;
            }
            double theta = 1.0;
            std::size_t hit = 0;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                if (alpha[i] < 0.0) {
                    const double t = st.lambda[i] / (st.lambda[i] - alpha[i]);
                    if (t < theta) {
                        theta = t;
                        hit = i;
                    }
                }
            }
            const double lmax = std::max(1.0, *std::max_element(st.lambda.begin(), st.lambda.end()));
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                double v = theta * alpha[i] + (1.0 - theta) * st.lambda[i];
                if (v <= 1e-12 * lmax) v = 0.0;
                st.lambda[i] = v;
            }
            st.lambda[hit] = 0.0;
            st.drop_zero_coefficients();
        }
        st.drop_zero_coefficients();
        st.resync(m);
        h = current_h();
        if (params.record_history) out.history.push_back(h);
    }

    out.point = ConePoint{st.y, st.phi};
    out.objective = projection_objective(wtilde, a, out.point);
    out.certificate = projection_certificate(atom, wtilde, a, out.point);
    if (!out.converged && out.certificate >= -params.delta) out.converged = true;
    return out;
}

// ---------------------------------------------------------------------------
// conic Frank-Wolfe

namespace detail {

// argmin_{g1, g2 >= 0} ||g1 u + g2 v - t||^2 given the Gram entries.
inline std::pair<double, double> nonneg_two_variable_ls(double uu, double uv, double vv, double ut, double vt)
{
    auto value = [&](double g1, double g2) {
        return g1 * g1 * uu + 2.0 * g1 * g2 * uv + g2 * g2 * vv - 2.0 * (g1 * ut + g2 * vt);
    };
    std::pair<double, double> best{0.0, 0.0};
    double best_val = 0.0;
    auto consider = [&](double g1, double g2) {
        if (g1 < 0.0 || g2 < 0.0) return;
        const double v = value(g1, g2);
        if (v < best_val) {
            best_val = v;
            best = {g1, g2};
        }
    };
    const double det = uu * vv - uv * uv;
    if (det > 1e-14 * std::max(1.0, uu * vv)) consider((vv * ut - uv * vt) / det, (uu * vt - uv * ut) / det);
    if (uu > 0.0) consider(std::max(0.0, ut / uu), 0.0);
    if (vv > 0.0) consider(0.0, std::max(0.0, vt / vv));
    return best;
}

}  // namespace detail

inline ProjectionResult project_fw(const SubmodularAtom& atom, std::span<const double> wtilde,
                                   std::span<const double> a, const ProjectionParams& params = {})
{
    params.validate();
    detail::check_inputs(atom, wtilde, a);
    const std::size_t m = atom.size();
    const std::size_t max_iter = params.max_major ? params.max_major : 100 * m * m;

    ProjectionResult out;
    std::vector<double> y(m, 0.0);
    double phi = 0.0;
    std::vector<double> grad(m);
    auto h_of = [&] { return projection_objective(wtilde, a, ConePoint{y, phi}); };
    if (params.record_history) out.history.push_back(h_of());

    for (std::size_t k = 0; k < max_iter; ++k) {
        for (std::size_t i = 0; i < m; ++i) grad[i] = wtilde[i] * (y[i] - a[i]);
        const auto q = greedy_linear_minimizer(atom, grad);
        double cert = phi;
        for (std::size_t i = 0; i < m; ++i) cert += grad[i] * q[i];
        if (cert >= -params.delta) {
            out.converged = true;
            break;
        }
        // Augmented vectors u = (y, phi), v = (q, 1), target (a, 0).
        const double uu = detail::wdot(wtilde, y, y) + phi * phi;
        const double uv = detail::wdot(wtilde, y, q) + phi;
        const double vv = detail::wdot(wtilde, q, q) + 1.0;
        const double ut = detail::wdot(wtilde, y, a);
        const double vt = detail::wdot(wtilde, q, a);
        const auto [g1, g2] = detail::nonneg_two_variable_ls(uu, uv, vv, ut, vt);
        for (std::size_t i = 0; i < m; ++i) y[i] = g1 * y[i] + g2 * q[i];
        phi = g1 * phi + g2;
        ++out.iterations;
        if (params.record_history) out.history.push_back(h_of());
    }

    out.point = ConePoint{std::move(y), phi};
    out.objective = projection_objective(wtilde, a, out.point);
    out.certificate = projection_certificate(atom, wtilde, a, out.point);
    if (!out.converged && out.certificate >= -params.delta) out.converged = true;
    return out;
}

// ---------------------------------------------------------------------------
// exact projection for (directed) hyperedge cuts

/// Exact projection for a cut F(S) = sqrt(w) [S ∩ H != {}, T \ S != {}] given
/// local head/tail flags.  The undirected hyperedge is H = T = S_r.
inline ConePoint project_hyperedge_exact(std::span<const std::uint8_t> head, std::span<const std::uint8_t> tail,
                                         double weight, std::span<const double> wtilde, std::span<const double> a)
{
    const std::size_t m = a.size();
    if (head.size() != m || tail.size() != m || wtilde.size() != m)
        throw InvalidArgument("exact projection inputs must have equal length");
    std::vector<std::size_t> hs;
    std::vector<std::size_t> ts;
    for (std::size_t i = 0; i < m; ++i) {
        if (head[i]) hs.push_back(i);
        if (tail[i]) ts.push_back(i);
    }
    if (hs.empty() || ts.empty()) throw InvalidArgument("exact projection needs nonempty head and tail sets");

    ConePoint out{std::vector<double>(m, 0.0), 0.0};
    if (weight <= 0.0) return out;

    // Primal metric W = Wt^-1 and center b = Wt a / 2.
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = 0.5 * wtilde[i] * a[i];

    std::stable_sort(hs.begin(), hs.end(), [&](std::size_t i, std::size_t j) { return b[i] > b[j]; });
    std::stable_sort(ts.begin(), ts.end(), [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });
    if (b[hs[0]] <= b[ts[0]]) return out;  // f(b) = 0: z = b, y = 0.

    // Top level gamma over the first k heads, bottom level delta over the first
    // l tails.  With u = w (gamma - delta) the optimality conditions are
    //   sum_{top} W_i (b_i - gamma) = u = sum_{bottom} W_j (delta - b_j),
    // so gamma(u) = (SH - u)/WH and delta(u) = (ST + u)/WT on each segment.
    std::size_t k = 1;
    std::size_t l = 1;
    double sh = b[hs[0]] / wtilde[hs[0]];
    double wh = 1.0 / wtilde[hs[0]];
    double st = b[ts[0]] / wtilde[ts[0]];
    double wt = 1.0 / wtilde[ts[0]];
    double u = 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (;;) {
        u = (sh / wh - st / wt) / (1.0 / wh + 1.0 / wt + 1.0 / weight);
        const double end_h = k < hs.size() ? sh - wh * b[hs[k]] : inf;
        const double end_t = l < ts.size() ? wt * b[ts[l]] - st : inf;
        if (u <= std::min(end_h, end_t)) break;
        if (end_h <= end_t) {
            const double wi = 1.0 / wtilde[hs[k]];
            sh += wi * b[hs[k]];
            wh += wi;
            ++k;
        } else {
            const double wj = 1.0 / wtilde[ts[l]];
            st += wj * b[ts[l]];
            wt += wj;
            ++l;
        }
    }
    const double gamma = (sh - u) / wh;
    const double delta = (st + u) / wt;

    std::vector<double> z(b);
    for (std::size_t i = 0; i < k; ++i) z[hs[i]] = gamma;
    for (std::size_t j = 0; j < l; ++j) z[ts[j]] = delta;
    for (std::size_t i = 0; i < m; ++i) out.y[i] = a[i] - 2.0 * z[i] / wtilde[i];
    out.phi = 2.0 * std::sqrt(weight) * std::max(gamma - delta, 0.0);
    return out;
}

inline ProjectionResult project_exact(const SubmodularAtom& atom, std::span<const double> wtilde,
                                      std::span<const double> a)
{
    if (!atom.is_cut()) throw InvalidArgument("exact projection applies to edge and hyperedge cuts only");
    detail::check_inputs(atom, wtilde, a);
    const std::size_t m = atom.size();
    std::vector<std::uint8_t> head(m);
    std::vector<std::uint8_t> tail(m);
    for (std::size_t i = 0; i < m; ++i) {
        head[i] = atom.in_head(i);
        tail[i] = atom.in_tail(i);
    }
    ProjectionResult out;
    out.point = project_hyperedge_exact(head, tail, atom.weight(), wtilde, a);
    out.objective = projection_objective(wtilde, a, out.point);
    out.certificate = projection_certificate(atom, wtilde, a, out.point);
    out.iterations = 1;
    out.converged = true;
    return out;
}

inline ProjectionResult project(const SubmodularAtom& atom, std::span<const double> wtilde,
                                std::span<const double> a, const ProjectionParams& params = {})
{
    switch (params.method) {
    case ProjectionMethod::MNP: return project_mnp(atom, wtilde, a, params);
    case ProjectionMethod::FW: return project_fw(atom, wtilde, a, params);
    case ProjectionMethod::Exact: return project_exact(atom, wtilde, a);
    }
    throw InvalidArgument("unknown projection method");
}

}  // namespace qdsfm
