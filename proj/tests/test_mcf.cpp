#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace curvflow;
using namespace testing_support;

namespace {

// Rational data: weights k/4, q = 1, r in {0, 1}, so distances are integers
// and every capacity is rational.
RandomGraphOptions rational_options(std::size_t n_max) {
    return {.n_min = 3, .n_max = n_max, .edge_prob = 0.3, .weighted = true, .rational = true, .vary_qr = false,
            .q = 1.0, .r = 0.0};
}

Graph rational_graph(Pcg32& rng, std::size_t n_max) {
    RandomGraphOptions o = rational_options(n_max);
    o.r = rng.uniform() < 0.5 ? 0.0 : 1.0;
    return random_graph(rng, o);
}

std::vector<NodeSet> all_minimizers(const Graph& g, const NodeSet& s, double dt, double& best) {
    const std::size_t n = g.size();
    std::vector<double> vals(1u << n);
    best = std::numeric_limits<double>::infinity();
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
        vals[b] = mcf_functional_prime(g, set_from_bits(b, n), s, dt);
        best = std::min(best, vals[b]);
    }
    std::vector<NodeSet> out;
    const double tol = 1e-10 * (1.0 + std::abs(best));
    for (std::uint32_t b = 0; b < (1u << n); ++b)
        if (vals[b] <= best + tol) out.push_back(set_from_bits(b, n));
    return out;
}

bool subset(const NodeSet& a, const NodeSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NodeSet torus_strip(std::size_t n1, std::size_t n2, std::size_t c0, std::size_t width) {
    std::vector<std::size_t> m;
    for (std::size_t y = 0; y < n2; ++y)
        for (std::size_t x = c0; x < c0 + width; ++x) m.push_back(y * n1 + x);
    return NodeSet(m, n1 * n2);
}

}  // namespace

TEST(McfFunctional, Examples) {
    const Graph c4 = cycle(4);
    const NodeSet s({0}, 4);
    for (double dt : {0.1, 1.0, 10.0}) {
        EXPECT_DOUBLE_EQ(mcf_functional(c4, s, s, dt), 0.0);
        EXPECT_DOUBLE_EQ(mcf_functional(c4, NodeSet(), s, dt), -2.0);
    }
    EXPECT_THROW(mcf_functional(c4, s, NodeSet(), 1.0), TrivialSet);
    EXPECT_THROW(mcf_functional(c4, s, NodeSet::all(4), 1.0), TrivialSet);
}

TEST(McfFunctional, PrimeDiffersByConstant) {
    Pcg32 rng(61);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng, {.n_min = 3, .n_max = 15});
        const NodeSet s = random_proper_set(rng, g.size());
        const NodeSet a = random_set(rng, g.size()), b = random_set(rng, g.size());
        const double dt = rng.uniform(0.1, 10.0);
        const double da = mcf_functional(g, a, s, dt) - mcf_functional(g, b, s, dt);
        const double dp = mcf_functional_prime(g, a, s, dt) - mcf_functional_prime(g, b, s, dt);
        EXPECT_NEAR(da, dp, 1e-9 * (1 + std::abs(da)));
        EXPECT_NEAR(mcf_functional(g, a, s, dt) - mcf_functional_prime(g, a, s, dt), mcf_constant_shift(g, s, dt),
                    1e-9 * (1 + mcf_constant_shift(g, s, dt)));
    }
}

TEST(McfStep, SingleNodeVanishes) {
    const Graph c4 = cycle(4);
    for (double dt : {1e-3, 0.1, 1.0, 10.0}) {
        const auto st = mcf_step(c4, NodeSet({0}, 4), {dt, 10});
        EXPECT_TRUE(st.next_set.empty());
        EXPECT_DOUBLE_EQ(st.objective, -2.0);
        EXPECT_TRUE(st.minimizer_unique);
    }
    for (std::size_t n : {5u, 9u, 16u}) {
        const auto run = mcf_run(cycle(n), NodeSet({2}, n), {0.5, 10});
        ASSERT_EQ(run.size(), 2u);
        EXPECT_TRUE(run.back().empty());
    }
}

TEST(McfStep, Errors) {
    const Graph c4 = cycle(4);
    EXPECT_THROW(mcf_step(c4, NodeSet(), {1.0, 10}), TrivialSet);
    EXPECT_THROW(mcf_step(c4, NodeSet({0}, 4), {0.0, 10}), InvalidArgument);
    const Graph d(4, {{0, 1, 1}, {2, 3, 1}}, 1, 0);
    EXPECT_THROW(mcf_step(d, NodeSet({0}, 4), {1.0, 10}), DisconnectedGraph);
}

TEST(McfStep, TorusStripTies) {
    const std::size_t n1 = 12, n2 = 6;
    const Graph g = torus(n1, n2);
    const NodeSet s = torus_strip(n1, n2, 3, 5);
    const double dt = 1.0;
    const double f_s = mcf_functional_prime(g, s, s, dt);
    NodeSet grown = s, shrunk = s;
    for (auto i : boundary_complement(g, s)) grown = with_node(grown, i, g.size());
    for (auto i : boundary(g, s)) shrunk = without_node(shrunk, i, g.size());
    EXPECT_DOUBLE_EQ(mcf_functional_prime(g, grown, s, dt), f_s);
    EXPECT_DOUBLE_EQ(mcf_functional_prime(g, shrunk, s, dt), f_s);
    const auto st = mcf_step(g, s, {dt, 10, TieBreak::PreferPrevious});
    EXPECT_EQ(st.next_set, s);
    EXPECT_DOUBLE_EQ(st.objective, f_s);
    EXPECT_FALSE(st.minimizer_unique);
    const auto lex = mcf_step(g, s, {dt, 10, TieBreak::LexicographicMin});
    EXPECT_DOUBLE_EQ(lex.objective, f_s);
    EXPECT_TRUE(subset(lex.next_set, shrunk));
    EXPECT_EQ(mcf_run(g, s, {dt, 10}).size(), 1u);
}

TEST(McfStep, MatchesExhaustiveMinimum) {
    Pcg32 rng(62);
    const double dts[] = {0.1, 1.0, 10.0};
    for (int t = 0; t < 200; ++t) {
        const Graph g = rational_graph(rng, 12);
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = dts[t % 3];
        const auto st = mcf_step(g, s, {dt, 10, TieBreak::PreferPrevious});
        const auto [arg, best] = mcf_brute_force(g, s, dt);
        EXPECT_TRUE(st.exact_arithmetic);
        EXPECT_NEAR(st.objective, best, 1e-12 * (1 + std::abs(best)));
        EXPECT_NEAR(mcf_functional_prime(g, arg, s, dt), best, 1e-12 * (1 + std::abs(best)));
        EXPECT_NEAR(mcf_functional_prime(g, st.next_set, s, dt), st.objective, 1e-9);
    }
}

TEST(McfStep, FloatWeightsMatchExhaustiveMinimum) {
    Pcg32 rng(63);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng, {.n_min = 3, .n_max = 11});
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = rng.uniform(0.05, 20.0);
        const auto st = mcf_step(g, s, {dt, 10});
        const auto [arg, best] = mcf_brute_force(g, s, dt);
        EXPECT_NEAR(st.objective, best, 1e-9 * (1 + std::abs(best)));
    }
}

TEST(McfStep, TieBreakAndUniqueness) {
    Pcg32 rng(64);
    int nonunique = 0;
    for (int t = 0; t < 150; ++t) {
        const Graph g = random_graph(rng, {.n_min = 3, .n_max = 9, .edge_prob = 0.3, .weighted = false,
                                           .vary_qr = false});
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = (t % 2) ? 1.0 : 2.0;
        double best = 0.0;
        const auto mins = all_minimizers(g, s, dt, best);
        const auto prev = mcf_step(g, s, {dt, 10, TieBreak::PreferPrevious});
        const auto lex = mcf_step(g, s, {dt, 10, TieBreak::LexicographicMin});
        EXPECT_EQ(prev.minimizer_unique, mins.size() == 1);
        nonunique += mins.size() > 1;
        const bool s_minimal = std::find(mins.begin(), mins.end(), s) != mins.end();
        if (s_minimal) EXPECT_EQ(prev.next_set, s);
        EXPECT_NE(std::find(mins.begin(), mins.end(), lex.next_set), mins.end());
        for (const auto& m : mins) EXPECT_TRUE(subset(lex.next_set, m));
    }
    EXPECT_GT(nonunique, 5);
}

// Random graphs erode to the empty set almost surely: interface nodes move
// at no distance cost. Vertical strips of width >= 3 on small tori give
// nontrivial fixed points for moderate dt.
namespace {

struct StripInstance {
    Graph graph;
    NodeSet set;
};

StripInstance random_strip(Pcg32& rng, std::size_t n1_max, std::size_t n2_max, double noise) {
    const std::size_t n1 = 6 + rng.below(static_cast<std::uint32_t>(n1_max - 5));
    const std::size_t n2 = 3 + rng.below(static_cast<std::uint32_t>(n2_max - 2));
    const double w = (1.0 + rng.below(12)) / 4.0;
    Graph g = torus(n1, n2, w, 1.0, rng.uniform() < 0.5 ? 0.0 : 1.0);
    const std::size_t c0 = rng.below(static_cast<std::uint32_t>(n1));
    const std::size_t width = 3 + rng.below(static_cast<std::uint32_t>(n1 - 5));
    std::vector<bool> m(n1 * n2, false);
    for (std::size_t y = 0; y < n2; ++y)
        for (std::size_t k = 0; k < width; ++k) m[y * n1 + (c0 + k) % n1] = true;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (rng.uniform() < noise) m[i] = !m[i];
    return {std::move(g), NodeSet::from_mask(m)};
}

}  // namespace

TEST(McfRun, StationarySetsAreSingleFlipMinimal) {
    Pcg32 rng(65);
    int fixed = 0;
    for (int t = 0; t < 100; ++t) {
        const auto [g, s0] = random_strip(rng, 11, 7, t % 2 ? 0.03 : 0.0);
        const McfParams p{rng.uniform(0.1, 5.0), 50};
        const auto sets = mcf_run(g, s0, p);
        const NodeSet& last = sets.back();
        if (last.is_trivial(g.size())) continue;
        ASSERT_EQ(mcf_step(g, last, p).next_set, last);
        ++fixed;
        const double tv = tv_set(g, last);
        for (auto i : boundary_complement(g, last)) EXPECT_LE(tv, tv_set(g, with_node(last, i, g.size())) + 1e-9);
        for (auto i : boundary(g, last)) EXPECT_LE(tv, tv_set(g, without_node(last, i, g.size())) + 1e-9);
    }
    EXPECT_GT(fixed, 15);
}

TEST(McfRun, MinimalityIsMonotoneInDt) {
    Pcg32 rng(66);
    int catalog = 0;
    for (int t = 0; t < 100; ++t) {
        const auto [g, s0] = random_strip(rng, 6, 3, 0.0);
        const double dt1 = rng.uniform(0.2, 2.0);
        const auto sets = mcf_run(g, s0, {dt1, 50});
        const NodeSet& s = sets.back();
        if (s.is_trivial(g.size()) || mcf_step(g, s, {dt1, 50}).next_set != s) continue;
        ++catalog;
        for (double f : {0.5, 0.25, 0.1}) {
            const double dt2 = f * dt1;
            if (f == 0.25) {
                const auto [arg, best] = mcf_brute_force(g, s, dt2);
                EXPECT_NEAR(mcf_functional_prime(g, s, s, dt2), best, 1e-12) << "dt2=" << dt2;
            }
            EXPECT_EQ(mcf_step(g, s, {dt2, 50}).next_set, s);
        }
    }
    EXPECT_GT(catalog, 10);
}

TEST(ConvexRelaxation, Examples) {
    const auto sol = convex_relaxation_solve(cycle(4), NodeSet({0}, 4), 1.0);
    EXPECT_EQ(sol.u, NodeFunction(4, -1.0));
    EXPECT_TRUE(sol.level_set.empty());
    EXPECT_THROW(convex_relaxation_solve(cycle(4), NodeSet({0}, 4), 1.0, 0.0), InvalidArgument);
}

TEST(ConvexRelaxation, ThresholdAttainsMinimum) {
    Pcg32 rng(62);  // same instances as the exhaustive oracle
    const double dts[] = {0.1, 1.0, 10.0};
    for (int t = 0; t < 200; ++t) {
        const Graph g = rational_graph(rng, 12);
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = dts[t % 3];
        const auto [arg, best] = mcf_brute_force(g, s, dt);
        for (double m : {1.0, 2.5}) {
            const auto sol = convex_relaxation_solve(g, s, dt, m);
            EXPECT_NEAR(mcf_functional_prime(g, sol.level_set, s, dt), best, 1e-12 * (1 + std::abs(best)));
            for (double lvl : {-0.5 * m, 0.0, 0.9 * m})
                EXPECT_EQ(superlevel_set(sol.u, lvl), sol.level_set);
            // F(u*) + (m / dt) <1, sd> = 2m (TV(S*) + dt^{-1} <chi_S*, sd>)
            const double lhs = relaxation_functional(g, sol.u, sol.sd, dt) + m * mass(g, sol.sd) / dt;
            const double rhs = 2 * m * (tv_set(g, sol.level_set) + inner_v(g, sol.level_set.indicator(g.size()), sol.sd) / dt);
            EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(rhs)));
            EXPECT_LE(certificate_violation(g, sol.u, sol.sd, dt, sol.certificate), 1e-8);
        }
        EXPECT_EQ(convex_relaxation_solve(g, s, dt, 1.0).level_set, convex_relaxation_solve(g, s, dt, 3.0).level_set);
    }
}

TEST(ConvexRelaxation, CertificateOnFloatWeights) {
    Pcg32 rng(67);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng, {.n_min = 3, .n_max = 25});
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = rng.uniform(0.1, 10.0);
        const auto sol = convex_relaxation_solve(g, s, dt);
        EXPECT_LE(certificate_violation(g, sol.u, sol.sd, dt, sol.certificate), 1e-8);
        // the box minimum beats random points of the box
        const double f = relaxation_functional(g, sol.u, sol.sd, dt);
        for (int k = 0; k < 5; ++k)
            EXPECT_LE(f, relaxation_functional(g, random_function(rng, g.size(), -1, 1), sol.sd, dt) + 1e-9);
    }
}

TEST(McfOneSided, MatchesExhaustiveMinimum) {
    Pcg32 rng(68);
    for (int t = 0; t < 100; ++t) {
        const Graph g = rational_graph(rng, 10);
        const NodeSet s = random_proper_set(rng, g.size());
        const double dt = 1.0;
        McfParams p{dt, 10, TieBreak::PreferPrevious, DistanceMode::OneSided};
        const auto st = mcf_step(g, s, p);
        const auto [arg, best] = mcf_brute_force(g, s, dt, DistanceMode::OneSided);
        EXPECT_NEAR(st.objective, best, 1e-12 * (1 + std::abs(best)));
    }
    // the one-sided distance freezes small steps
    const Graph g = torus(10, 10);
    const NodeSet blob({11, 12, 13, 21, 22, 23, 31, 32, 33}, 100);
    const McfParams p{0.1, 10, TieBreak::PreferPrevious, DistanceMode::OneSided};
    EXPECT_EQ(mcf_step(g, blob, p).next_set, blob);
}

TEST(McfRational, Rationalize) {
    const auto a = detail::rationalize(0.75);
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->first, 3);
    EXPECT_EQ(a->second, 4);
    EXPECT_FALSE(detail::rationalize(std::sqrt(2.0)).has_value());
    const auto sc = detail::integer_scaling({0.5, 1.0 / 3.0, 2.0});
    ASSERT_TRUE(sc.has_value());
    EXPECT_EQ(*sc, (std::vector<std::int64_t>{3, 2, 12}));
}
