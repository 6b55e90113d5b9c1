#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qdsfm/diagnostics.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/submodular.hpp"
#include "qdsfm/weight_matrix.hpp"
#include "test_common.hpp"

using namespace qdsfm;
using testing_util::Gen;

namespace {

std::vector<SubmodularAtom> atom_zoo(Gen& g)
{
    std::vector<SubmodularAtom> atoms;
    for (int rep = 0; rep < 10; ++rep) {
        for (int kind = 0; kind < 3; ++kind) {
            const std::size_t m = testing_util::pick(g, 2, 6);
            atoms.push_back(testing_util::random_cut_atom(g, 8, m, kind));
        }
        const std::size_t m = testing_util::pick(g, 1, 5);
        atoms.push_back(testing_util::random_table_atom(g, testing_util::random_subset(g, 8, m)));
    }
    return atoms;
}

}  // namespace

TEST(WeightMatrix, RejectsNonPositiveEntries)
{
    EXPECT_THROW(WeightMatrix({1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(WeightMatrix({1.0, -2.0}), InvalidArgument);
    EXPECT_THROW(WeightMatrix({1.0, std::nan("")}), InvalidArgument);
    const WeightMatrix w({2.0, 0.5});
    const std::vector<double> x{1.0, 2.0};
    EXPECT_DOUBLE_EQ(w.squared_norm(x), 2.0 + 2.0);
    EXPECT_DOUBLE_EQ(w.inverse().diagonal()[1], 2.0);
}

TEST(Atom, CutValuesMatchDefinition)
{
    Gen g(11);
    for (int rep = 0; rep < 40; ++rep) {
        const auto atom = testing_util::random_cut_atom(g, 7, testing_util::pick(g, 2, 6), rep % 3);
        std::vector<std::size_t> head;
        std::vector<std::size_t> tail;
        for (std::size_t k = 0; k < atom.size(); ++k) {
            if (atom.in_head(k)) head.push_back(atom.members()[k]);
            if (atom.in_tail(k)) tail.push_back(atom.members()[k]);
        }
        for (std::uint64_t mask = 0; mask < 128; ++mask) {
            std::vector<bool> in_set(7);
            std::vector<std::size_t> subset;
            for (std::size_t v = 0; v < 7; ++v) {
                in_set[v] = (mask >> v) & 1u;
                if (in_set[v]) subset.push_back(v);
            }
            EXPECT_NEAR(evaluate(atom, subset), oracle::cut_value(head, tail, atom.weight(), in_set), 1e-15);
        }
    }
}

TEST(Atom, ConstructionErrors)
{
    EXPECT_THROW(SubmodularAtom::graph_edge(1, 1), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::hyperedge({}), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::hyperedge({1, 2, 2}), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::hyperedge({1, 2}, -1.0), InvalidArgument);
    const std::vector<std::size_t> empty;
    const std::vector<std::size_t> h{1};
    EXPECT_THROW(SubmodularAtom::directed_hyperedge({1, 2}, empty, h), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::directed_hyperedge({1, 2}, h, std::vector<std::size_t>{5}), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::from_table({0, 1}, {0.5, 1, 1, 1}), InvalidArgument);
    EXPECT_THROW(SubmodularAtom::from_table({0, 1}, {0, 1, 1}), InvalidArgument);
}

TEST(Lovasz, MatchesSupportFunctionOfBasePolytope)
{
    Gen g(5);
    for (const auto& atom : atom_zoo(g)) {
        for (int rep = 0; rep < 5; ++rep) {
            auto x = testing_util::random_vector(g, atom.size(), -2.0, 2.0);
            if (rep == 0) std::fill(x.begin(), x.end(), 0.7);
            if (rep == 1 && atom.size() > 1) x[1] = x[0];
            const double expected = oracle::lovasz(atom, x);
            EXPECT_NEAR(lovasz_extension_local(atom, x), expected, 1e-12) << to_string(atom.kind());
            EXPECT_NEAR(lovasz_extension_sorted(atom, x), expected, 1e-12) << to_string(atom.kind());
        }
    }
}

TEST(Lovasz, AgreesWithSetFunctionOnIndicators)
{
    Gen g(6);
    for (const auto& atom : atom_zoo(g)) {
        const std::size_t m = atom.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            std::vector<double> x(m);
            for (std::size_t k = 0; k < m; ++k) x[k] = (mask >> k) & 1u ? 1.0 : 0.0;
            EXPECT_NEAR(lovasz_extension_local(atom, x), oracle::set_value(atom, mask), 1e-12);
        }
    }
}

TEST(Lovasz, FullLengthVectorIgnoresNonMembers)
{
    const auto atom = SubmodularAtom::hyperedge({1, 3, 4}, 4.0);
    const std::vector<double> x{100.0, 0.5, -100.0, 2.0, 1.0};
    EXPECT_DOUBLE_EQ(lovasz_extension(atom, x), 2.0 * 1.5);
}

TEST(Greedy, VerticesLieInBasePolytope)
{
    Gen g(7);
    for (const auto& atom : atom_zoo(g)) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto c = testing_util::random_vector(g, atom.size());
            const auto q = greedy_linear_minimizer(atom, c);
            EXPECT_TRUE(oracle::in_base_polytope(atom, q, 1e-12));
            EXPECT_TRUE(base_polytope_contains_local(atom, q, 1e-12));
            double best = std::numeric_limits<double>::infinity();
            for (const auto& v : oracle::all_vertices(atom))
                best = std::min(best, std::inner_product(v.begin(), v.end(), c.begin(), 0.0));
            EXPECT_NEAR(std::inner_product(q.begin(), q.end(), c.begin(), 0.0), best, 1e-12);
        }
    }
}

TEST(BasePolytope, MembershipAgreesWithOracle)
{
    Gen g(8);
    for (const auto& atom : atom_zoo(g)) {
        for (int rep = 0; rep < 10; ++rep) {
            auto y = testing_util::random_vector(g, atom.size(), -1.0, 1.0);
            const double shift = (oracle::set_value(atom, (std::uint64_t{1} << atom.size()) - 1) -
                                  std::accumulate(y.begin(), y.end(), 0.0)) /
                                 static_cast<double>(atom.size());
            for (auto& v : y) v += shift;
            EXPECT_EQ(base_polytope_contains_local(atom, y, 1e-12), oracle::in_base_polytope(atom, y, 1e-12));
        }
    }
}

TEST(BasePolytope, FullLengthRejectsOffSupportMass)
{
    const auto atom = SubmodularAtom::graph_edge(0, 2);
    EXPECT_TRUE(base_polytope_contains(atom, std::vector<double>{0.5, 0.0, -0.5}, 1e-12));
    EXPECT_FALSE(base_polytope_contains(atom, std::vector<double>{0.5, 0.1, -0.5}, 1e-12));
    EXPECT_FALSE(base_polytope_contains(atom, std::vector<double>{1.5, 0.0, -1.5}, 1e-12));
}

TEST(BasePolytope, LargeAtomsAreRefused)
{
    std::vector<std::size_t> members(21);
    std::iota(members.begin(), members.end(), std::size_t{0});
    const auto atom = SubmodularAtom::hyperedge(members);
    EXPECT_THROW(base_polytope_contains_local(atom, std::vector<double>(21, 0.0), 1e-9), CapacityError);
}

TEST(Atom, MaxValue)
{
    EXPECT_DOUBLE_EQ(*SubmodularAtom::hyperedge({0, 1, 2}, 9.0).max_value(), 3.0);
    const std::vector<std::size_t> h{0};
    EXPECT_DOUBLE_EQ(*SubmodularAtom::directed_hyperedge({0}, h, h).max_value(), 0.0);
    Gen g(9);
    const auto atom = testing_util::random_table_atom(g, {0, 1, 2, 3});
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < 16; ++mask) best = std::max(best, oracle::set_value(atom, mask));
    EXPECT_DOUBLE_EQ(*atom.max_value(), best);
}

TEST(Diagnostics, MuBoundFormula)
{
    // two edges on three vertices, W1 = W2 = I: sum W1 * sum 1/W2 = 9,
    // rho^2 bound = 2 (2 max F)^2 = 8, (9/4) * 8 * 3 + 1 = 55.
    const std::vector<SubmodularAtom> atoms{SubmodularAtom::graph_edge(0, 1), SubmodularAtom::graph_edge(1, 2)};
    const auto d = diagnostics(atoms, WeightMatrix::identity(3), WeightMatrix::identity(3));
    ASSERT_TRUE(d.available());
    EXPECT_DOUBLE_EQ(*d.rho_sq_upper, 8.0);
    EXPECT_DOUBLE_EQ(*d.mu, 55.0);
}
