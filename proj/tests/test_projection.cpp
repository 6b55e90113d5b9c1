#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/projection.hpp"
#include "test_common.hpp"

using namespace qdsfm;
using testing_util::Gen;

namespace {

const std::vector<double> kUnit2{1.0, 1.0};

ProjectionParams with(ProjectionMethod m, double delta = 1e-12, std::size_t cap = 0, bool history = false)
{
    ProjectionParams p;
    p.method = m;
    p.delta = delta;
    p.max_major = cap;
    p.record_history = history;
    return p;
}

/// Edge (1,-1) direction: y = (t, -t), phi = |t|; grid over t.
double edge_grid(const std::vector<double>& a, double& t_best)
{
    double best = std::numeric_limits<double>::infinity();
    for (long k = -1000000; k <= 1000000; ++k) {
        const double t = static_cast<double>(k) * 1e-6;
        const double h = (t - a[0]) * (t - a[0]) + (-t - a[1]) * (-t - a[1]) + t * t;
        if (h < best) {
            best = h;
            t_best = t;
        }
    }
    return best;
}

void expect_in_cone(const SubmodularAtom& atom, const ConePoint& p, double tol)
{
    ASSERT_GE(p.phi, 0.0);
    if (p.phi <= tol) {
        for (double v : p.y) EXPECT_NEAR(v, 0.0, 1e-8);
        return;
    }
    std::vector<double> scaled(p.y);
    for (auto& v : scaled) v /= p.phi;
    EXPECT_TRUE(oracle::in_base_polytope(atom, scaled, 1e-7));
}

struct Case
{
    SubmodularAtom atom;
    std::vector<double> wtilde;
    std::vector<double> a;
};

std::vector<Case> random_cases(Gen& g, std::size_t count, bool cuts_only)
{
    std::vector<Case> out;
    for (std::size_t c = 0; c < count; ++c) {
        const int kind = cuts_only ? static_cast<int>(c % 3) : static_cast<int>(c % 4);
        const std::size_t m = testing_util::pick(g, 2, 6);
        auto atom = kind == 3 ? testing_util::random_table_atom(g, testing_util::random_subset(g, 10, m))
                              : testing_util::random_cut_atom(g, 10, m, kind);
        auto wt = testing_util::random_vector(g, atom.size(), 0.2, 3.0);
        auto a = testing_util::random_vector(g, atom.size(), -2.0, 2.0);
        out.push_back({std::move(atom), std::move(wt), std::move(a)});
    }
    return out;
}

}  // namespace

TEST(AffineMinimizer, SinglePoint)
{
    const std::vector<std::vector<double>> pts{{1.0, -1.0}};
    const auto sol = affine_minimizer(pts, kUnit2, std::vector<double>{1.0, 0.0});
    ASSERT_EQ(sol.alpha.size(), 1u);
    EXPECT_NEAR(sol.alpha[0], 1.0 / 3.0, 1e-15);
    EXPECT_TRUE(sol.accurate);
}

TEST(AffineMinimizer, TwoOpposedPoints)
{
    const std::vector<std::vector<double>> pts{{1.0, -1.0}, {-1.0, 1.0}};
    const std::vector<double> a{1.0, 0.0};
    const auto sol = affine_minimizer(pts, kUnit2, a);
    EXPECT_NEAR(sol.alpha[0], 0.25, 1e-14);
    EXPECT_NEAR(sol.alpha[1], -0.25, 1e-14);
    // residual substitution into (G + 11^T) alpha = v
    EXPECT_NEAR(3 * sol.alpha[0] - sol.alpha[1], 1.0, 1e-14);
    EXPECT_NEAR(-sol.alpha[0] + 3 * sol.alpha[1], -1.0, 1e-14);
}

TEST(AffineMinimizer, ZeroTargetAndDependentPoints)
{
    const std::vector<std::vector<double>> pts{{1.0, -1.0}, {1.0, -1.0}};
    const auto sol = affine_minimizer(pts, kUnit2, std::vector<double>{0.0, 0.0});
    for (double v : sol.alpha) EXPECT_NEAR(v, 0.0, 1e-15);
    const auto dep = affine_minimizer(pts, kUnit2, std::vector<double>{1.0, 0.0});
    // least-norm split of the single-point coefficient 1/3
    EXPECT_NEAR(dep.alpha[0], 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(dep.alpha[1], 1.0 / 6.0, 1e-12);
}

TEST(ProjectMnp, EdgeWorkedExamples)
{
    const auto edge = SubmodularAtom::graph_edge(0, 1);
    double t = 0.0;
    const std::vector<double> a1{1.0, 0.0};
    const double h1 = edge_grid(a1, t);
    auto r = project_mnp(edge, kUnit2, a1, with(ProjectionMethod::MNP, 1e-9));
    EXPECT_NEAR(r.point.y[0], 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.point.y[1], -1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.point.phi, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.objective, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.objective, h1, 1e-10);
    EXPECT_NEAR(r.point.y[0], t, 1e-6);
    EXPECT_TRUE(r.converged);

    const std::vector<double> a2{1.0, -1.0};
    edge_grid(a2, t);
    r = project_mnp(edge, kUnit2, a2);
    EXPECT_NEAR(r.point.y[0], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.point.y[1], -2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.point.phi, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.point.y[0], t, 1e-6);

    r = project_mnp(edge, kUnit2, std::vector<double>{0.0, 0.0});
    EXPECT_EQ(r.point.phi, 0.0);
    EXPECT_EQ(r.objective, 0.0);
}

TEST(ProjectFw, EdgeExampleIsExactInOneStep)
{
    const auto edge = SubmodularAtom::graph_edge(0, 1);
    const std::vector<double> a{1.0, 0.0};
    auto r = project_fw(edge, kUnit2, a, with(ProjectionMethod::FW, 1e-12, 1, true));
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_NEAR(r.point.y[0], 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.point.y[1], -1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.point.phi, 1.0 / 3.0, 1e-14);

    r = project_fw(edge, kUnit2, std::vector<double>{0.0, 0.0});
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.point.phi, 0.0);
}

TEST(ProjectFw, TwoVariableSubproblemMatchesGrid)
{
    Gen g(21);
    for (int rep = 0; rep < 30; ++rep) {
        // random PSD 2x2 Gram matrix
        const double u1 = testing_util::uniform(g, -1, 1), u2 = testing_util::uniform(g, -1, 1);
        const double v1 = testing_util::uniform(g, -1, 1), v2 = testing_util::uniform(g, -1, 1);
        const double t1 = testing_util::uniform(g, -1, 1), t2 = testing_util::uniform(g, -1, 1);
        const double uu = u1 * u1 + u2 * u2, uv = u1 * v1 + u2 * v2, vv = v1 * v1 + v2 * v2;
        const double ut = u1 * t1 + u2 * t2, vt = v1 * t1 + v2 * t2;
        const auto [g1, g2] = detail::nonneg_two_variable_ls(uu, uv, vv, ut, vt);
        EXPECT_GE(g1, 0.0);
        EXPECT_GE(g2, 0.0);
        auto f = [&](double a, double b) {
            const double r1 = a * u1 + b * v1 - t1, r2 = a * u2 + b * v2 - t2;
            return r1 * r1 + r2 * r2;
        };
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 400; ++i)
            for (int j = 0; j <= 400; ++j) best = std::min(best, f(i * 0.025, j * 0.025));
        EXPECT_LE(f(g1, g2), best + 1e-12);
    }
}

TEST(ProjectExact, HyperedgeWorkedExample)
{
    const auto edge = SubmodularAtom::hyperedge({0, 1});
    const auto r = project_exact(edge, kUnit2, std::vector<double>{1.0, 0.0});
    EXPECT_NEAR(r.point.y[0], 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.point.y[1], -1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.point.phi, 1.0 / 3.0, 1e-14);
}

TEST(ProjectExact, ThreeMemberHyperedgeMatchesMnp)
{
    const auto atom = SubmodularAtom::hyperedge({0, 1, 2});
    const std::vector<double> w(3, 1.0);
    const std::vector<double> a{2.0, 0.0, 1.0};
    const auto ex = project_exact(atom, w, a);
    const auto mnp = project_mnp(atom, w, a);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(ex.point.y[i], mnp.point.y[i], 1e-6);
    EXPECT_NEAR(ex.point.phi, mnp.point.phi, 1e-6);
    EXPECT_NEAR(ex.objective, oracle::projection_value(atom, w, a), 1e-10);
}

TEST(ProjectExact, NonSeparatedInputReturnsApex)
{
    const std::vector<std::size_t> h{0};
    const std::vector<std::size_t> t{1};
    const auto atom = SubmodularAtom::directed_hyperedge({0, 1}, h, t);
    // head value below tail value: nothing to cut
    const auto r = project_exact(atom, kUnit2, std::vector<double>{-1.0, 1.0});
    EXPECT_EQ(r.point.phi, 0.0);
    EXPECT_EQ(r.point.y[0], 0.0);
    EXPECT_EQ(r.point.y[1], 0.0);
}

TEST(ProjectExact, RejectsGeneralAtomsAndEmptySides)
{
    Gen g(3);
    const auto table = testing_util::random_table_atom(g, {0, 1});
    EXPECT_THROW(project_exact(table, kUnit2, std::vector<double>{1.0, 0.0}), InvalidArgument);
    const std::vector<std::uint8_t> none{0, 0};
    const std::vector<std::uint8_t> both{1, 1};
    EXPECT_THROW(project_hyperedge_exact(none, both, 1.0, kUnit2, std::vector<double>{1.0, 0.0}), InvalidArgument);
}

TEST(Projection, AllMethodsAgreeWithConicHullOracle)
{
    Gen g(31);
    for (const auto& c : random_cases(g, 60, false)) {
        const double h_star = oracle::projection_value(c.atom, c.wtilde, c.a);
        const auto mnp = project_mnp(c.atom, c.wtilde, c.a);
        EXPECT_NEAR(mnp.objective, h_star, 1e-9 * (1.0 + h_star)) << to_string(c.atom.kind());
        expect_in_cone(c.atom, mnp.point, 1e-12);
        const auto fw = project_fw(c.atom, c.wtilde, c.a, with(ProjectionMethod::FW, 1e-12, 10000));
        EXPECT_NEAR(fw.objective, h_star, 1e-4 * (1.0 + h_star));
        expect_in_cone(c.atom, fw.point, 1e-12);
        if (c.atom.is_cut()) {
            const auto ex = project_exact(c.atom, c.wtilde, c.a);
            EXPECT_NEAR(ex.objective, h_star, 1e-9 * (1.0 + h_star)) << to_string(c.atom.kind());
            expect_in_cone(c.atom, ex.point, 1e-12);
            EXPECT_GE(ex.certificate, -1e-9);
        }
    }
}

TEST(ProjectMnp, MonotoneHistoryAndCertificate)
{
    Gen g(41);
    for (const auto& c : random_cases(g, 80, false)) {
        const auto r = project_mnp(c.atom, c.wtilde, c.a, with(ProjectionMethod::MNP, 1e-12, 0, true));
        for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1] + 1e-14);
        EXPECT_TRUE(r.converged);
        EXPECT_GE(r.certificate, -1e-12);
    }
}

TEST(ProjectFw, RateEnvelope)
{
    Gen g(51);
    for (const auto& c : random_cases(g, 20, true)) {
        const auto ex = project_exact(c.atom, c.wtilde, c.a);
        double q2 = 0.0;
        for (const auto& q : oracle::all_vertices(c.atom)) q2 = std::max(q2, detail::wdot(c.wtilde, q, q));
        const double a2 = detail::wdot(c.wtilde, c.a, c.a);
        const auto fw = project_fw(c.atom, c.wtilde, c.a, with(ProjectionMethod::FW, 1e-15, 2000, true));
        for (std::size_t k = 0; k < fw.history.size(); ++k)
            EXPECT_LE(fw.history[k] - ex.objective, 2.0 * a2 * q2 / static_cast<double>(k + 2) + 1e-12);
    }
}

TEST(Projection, PositiveHomogeneity)
{
    Gen g(61);
    for (const auto& c : random_cases(g, 20, false)) {
        auto scaled = c.a;
        for (auto& v : scaled) v *= 2.5;
        const auto p1 = project_mnp(c.atom, c.wtilde, c.a);
        const auto p2 = project_mnp(c.atom, c.wtilde, scaled);
        EXPECT_NEAR(p2.point.phi, 2.5 * p1.point.phi, 1e-9);
        for (std::size_t i = 0; i < c.a.size(); ++i) EXPECT_NEAR(p2.point.y[i], 2.5 * p1.point.y[i], 1e-9);
    }
}

TEST(Projection, InputValidation)
{
    const auto edge = SubmodularAtom::graph_edge(0, 1);
    EXPECT_THROW(project_mnp(edge, std::vector<double>{1.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(project_mnp(edge, std::vector<double>{1.0, -1.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
    ProjectionParams p;
    p.delta = 0.0;
    EXPECT_THROW(project_mnp(edge, kUnit2, std::vector<double>{1.0, 0.0}, p), InvalidArgument);
}
