#include <gtest/gtest.h>

#include "support.hpp"

using namespace curvflow;
using namespace testing_support;

TEST(BuildGraph, CompleteFour) {
    std::vector<WeightedEdge> e;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) e.push_back({i, j, 1.0});
    const Graph g = build_graph(4, e, 1.0, 0.0);
    EXPECT_EQ(g.size(), 4u);
    EXPECT_EQ(g.num_edges(), 6u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g.degree(i), 3.0);
    EXPECT_TRUE(g.is_complete());
    EXPECT_TRUE(g.is_unweighted());
}

TEST(BuildGraph, SmallestGraph) {
    const Graph g(2, {{0, 1, 1.0}}, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(g.degree(0), 1.0);
    EXPECT_DOUBLE_EQ(g.degree(1), 1.0);
    EXPECT_DOUBLE_EQ(g.volume(), 2.0);
}

TEST(BuildGraph, Errors) {
    EXPECT_THROW(Graph(3, {{0, 1, 1.0}}, 1.0, 0.0), IsolatedNode);
    EXPECT_THROW(Graph(2, {{0, 0, 1.0}, {0, 1, 1.0}}, 1.0, 0.0), SelfLoop);
    EXPECT_THROW(Graph(2, {{0, 1, -1.0}}, 1.0, 0.0), NegativeWeight);
    EXPECT_THROW(Graph(2, {{0, 1, 0.0}}, 1.0, 0.0), NegativeWeight);
    EXPECT_THROW(Graph(2, {{0, 1, 1.0}, {0, 1, 1.0}}, 1.0, 0.0), ConflictingDuplicate);
    EXPECT_THROW(Graph(2, {{0, 1, 1.0}, {1, 0, 2.0}}, 1.0, 0.0), ConflictingDuplicate);
    EXPECT_THROW(Graph(2, {{0, 2, 1.0}}, 1.0, 0.0), InvalidArgument);
    EXPECT_THROW(Graph(2, {{0, 1, 1.0}}, 0.4, 0.0), InvalidArgument);
    EXPECT_THROW(Graph(2, {{0, 1, 1.0}}, 1.0, 1.5), InvalidArgument);
    EXPECT_THROW(Graph(0, {}, 1.0, 0.0), InvalidArgument);
}

TEST(BuildGraph, MirroredPairUnifies) {
    const Graph g(2, {{0, 1, 2.5}, {1, 0, 2.5}}, 1.0, 0.0);
    EXPECT_EQ(g.num_edges(), 1u);
    EXPECT_DOUBLE_EQ(g.weight(0, 1), 2.5);
    EXPECT_DOUBLE_EQ(g.weight(1, 0), 2.5);
}

TEST(BuildGraph, MeasureIsDegreePower) {
    const Graph g(3, {{0, 1, 4.0}, {1, 2, 5.0}}, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(g.measure(0), 2.0);
    EXPECT_DOUBLE_EQ(g.measure(1), 3.0);
    EXPECT_NEAR(g.volume(), 2.0 + 3.0 + std::sqrt(5.0), 1e-14);
}

TEST(Graph, RandomStructureInvariants) {
    Pcg32 rng(11);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng);
        EXPECT_TRUE(is_connected(g));
        EXPECT_EQ(g.num_slots(), 2 * g.num_edges());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double d = 0.0;
            for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) {
                const std::size_t j = g.neighbor(k);
                EXPECT_NE(i, j);
                EXPECT_GT(g.weight(k), 0.0);
                EXPECT_EQ(g.neighbor(g.mirror(k)), i);
                EXPECT_EQ(g.weight(g.mirror(k)), g.weight(k));
                EXPECT_EQ(g.slot(i, j), k);
                d += g.weight(k);
            }
            EXPECT_NEAR(d, g.degree(i), 1e-12);
        }
        // round trip through the edge list
        const auto el = g.edge_list();
        const Graph h = build_graph(g.size(), el, g.q(), g.r());
        EXPECT_EQ(h.edge_list().size(), el.size());
        EXPECT_DOUBLE_EQ(h.volume(), g.volume());
    }
}

TEST(Graph, Components) {
    const Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}}, 1.0, 0.0);
    EXPECT_EQ(num_components(g), 2u);
    EXPECT_FALSE(is_connected(g));
    const auto lab = component_labels(g);
    EXPECT_EQ(lab[0], lab[1]);
    EXPECT_NE(lab[0], lab[2]);
}

TEST(NodeSet, Basics) {
    const NodeSet s({3, 1}, 5);
    EXPECT_EQ(s.members(), (std::vector<std::size_t>{1, 3}));
    EXPECT_TRUE(s.contains(3));
    EXPECT_FALSE(s.contains(2));
    EXPECT_EQ(s.complement(5), NodeSet({0, 2, 4}, 5));
    EXPECT_EQ(s.indicator(5), (NodeFunction{0, 1, 0, 1, 0}));
    EXPECT_TRUE(NodeSet().is_trivial(5));
    EXPECT_TRUE(NodeSet::all(5).is_trivial(5));
    EXPECT_THROW(NodeSet({1, 1}, 5), InvalidArgument);
    EXPECT_THROW(NodeSet({5}, 5), InvalidArgument);
    EXPECT_EQ(with_node(s, 0, 5), NodeSet({0, 1, 3}, 5));
    EXPECT_EQ(without_node(s, 3, 5), NodeSet({1}, 5));
}

TEST(EdgeFunction, AtAndSkewDefect) {
    const Graph g(3, {{0, 1, 1.0}, {1, 2, 1.0}}, 1.0, 0.0);
    EdgeFunction phi(g);
    phi[g.slot(0, 1)] = 2.0;
    phi[g.slot(1, 0)] = -2.0;
    EXPECT_DOUBLE_EQ(phi.at(g, 0, 1), 2.0);
    EXPECT_DOUBLE_EQ(phi.at(g, 0, 2), 0.0);
    EXPECT_DOUBLE_EQ(phi.skew_defect(g), 0.0);
    phi[g.slot(1, 2)] = 1.0;
    EXPECT_DOUBLE_EQ(phi.skew_defect(g), 1.0);
}

TEST(Errors, KindNames) {
    try {
        throw HalfVolume("x");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "HalfVolume");
    }
}
