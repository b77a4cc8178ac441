#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace curvflow;
using namespace testing_support;

namespace {

void expect_spectrum(const Graph& g, std::vector<double> expect, double tol) {
    const auto sd = eigendecompose(g);
    std::sort(expect.begin(), expect.end());
    ASSERT_EQ(sd.eigenvalues.size(), expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k) EXPECT_NEAR(sd.eigenvalues[k], expect[k], tol) << "k=" << k;
}

void expect_decomposition_valid(const Graph& g, const SpectralDecomposition& sd) {
    const std::size_t n = g.size();
    EXPECT_NEAR(sd.eigenvalues[0], 0.0, 1e-10);
    double scale = std::max(1.0, sd.rho);
    for (std::size_t k = 0; k < n; ++k) {
        EXPECT_GE(sd.eigenvalues[k], -1e-10);
        if (k) EXPECT_LE(sd.eigenvalues[k - 1], sd.eigenvalues[k]);
        const NodeFunction lv = laplacian_apply(g, sd.eigenvectors[k]);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(lv[i], sd.eigenvalues[k] * sd.eigenvectors[k][i], 1e-8 * scale);
        for (std::size_t l = k; l < n; ++l)
            EXPECT_NEAR(inner_v(g, sd.eigenvectors[k], sd.eigenvectors[l]), k == l ? 1.0 : 0.0, 1e-8);
    }
    EXPECT_DOUBLE_EQ(sd.rho, sd.eigenvalues.back());
}

}  // namespace

TEST(Eigendecompose, ClosedForms) {
    expect_spectrum(complete(4), {0, 4, 4, 4}, 1e-8);
    expect_spectrum(star(5), {0, 1, 1, 1, 5}, 1e-8);
    expect_spectrum(cycle(4), {0, 2, 2, 4}, 1e-8);
    for (std::size_t n : {3u, 5u, 8u, 13u}) {
        const double w = 1.7;
        std::vector<double> e;
        for (std::size_t j = 0; j < n; ++j) e.push_back(2 * w - 2 * w * std::cos(2 * std::numbers::pi * j / n));
        expect_spectrum(cycle(n, w), e, 1e-8);
    }
    // r = 1 on K_n: 0 and n w / ((n-1) w)
    expect_spectrum(complete(5, 2.0, 1.0, 1.0), {0, 1.25, 1.25, 1.25, 1.25}, 1e-10);
}

TEST(Eigendecompose, ResidualsAndOrthonormality) {
    Pcg32 rng(21);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng, {.n_min = 2, .n_max = 25});
        const auto sd = eigendecompose(g);
        expect_decomposition_valid(g, sd);
        double tr = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) tr += std::pow(g.degree(i), 1.0 - g.r());
        for (double l : sd.eigenvalues) sum += l;
        EXPECT_NEAR(sum, tr, 1e-8 * (1.0 + tr));
    }
}

TEST(Eigendecompose, ZeroMultiplicityCountsComponents) {
    const Graph g(6, {{0, 1, 1.0}, {1, 2, 2.0}, {3, 4, 1.0}, {4, 5, 0.5}, {3, 5, 1.0}}, 1.0, 0.5);
    const auto sd = eigendecompose(g);
    EXPECT_NEAR(sd.eigenvalues[0], 0.0, 1e-10);
    EXPECT_NEAR(sd.eigenvalues[1], 0.0, 1e-10);
    EXPECT_GT(sd.eigenvalues[2], 1e-6);
    EXPECT_EQ(num_components(g), 2u);
}

TEST(Eigendecompose, TorusKroneckerSum) {
    const auto sd = eigendecompose(torus(6, 4));
    const auto a = eigendecompose(cycle(6)).eigenvalues;
    const auto b = eigendecompose(cycle(4)).eigenvalues;
    std::vector<double> sums;
    for (double x : a)
        for (double y : b) sums.push_back(x + y);
    std::sort(sums.begin(), sums.end());
    for (std::size_t k = 0; k < sums.size(); ++k) EXPECT_NEAR(sd.eigenvalues[k], sums[k], 1e-9);
}

TEST(Eigendecompose, Deterministic) {
    const Graph g = buckyball();
    const auto a = eigendecompose(g);
    const auto b = eigendecompose(g);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.eigenvectors, b.eigenvectors);
    for (const auto& v : a.eigenvectors) {
        const auto it = std::find_if(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-12; });
        ASSERT_NE(it, v.end());
        EXPECT_GT(*it, 0.0);
    }
}

TEST(SpectralBounds, CompleteFour) {
    const Graph g = complete(4);
    const auto b = spectral_bounds(g);
    EXPECT_DOUBLE_EQ(b.lambda2_upper_trace, 4.0);
    EXPECT_DOUBLE_EQ(b.rho_upper, 6.0);
    EXPECT_FALSE(b.lambda2_upper_noncomplete.has_value());
    EXPECT_FALSE(b.lambda2_upper_cheeger.has_value());
    EXPECT_LE(eigendecompose(g).rho, b.rho_upper);
}

TEST(SpectralBounds, TorusRadiusTight) {
    const Graph g = torus(32, 12);
    EXPECT_NEAR(eigendecompose(g).rho, 8.0, 1e-9);
    EXPECT_DOUBLE_EQ(spectral_bounds(g).rho_upper, 8.0);
}

TEST(SpectralBounds, ChainHoldsOnRandomGraphs) {
    Pcg32 rng(22);
    for (int t = 0; t < 100; ++t) {
        const Graph g = random_graph(rng, {.n_min = 3, .n_max = 20});
        std::vector<NodeSet> sets;
        for (int k = 0; k < 5; ++k) sets.push_back(random_proper_set(rng, g.size()));
        const auto sd = eigendecompose(g);
        const auto b = spectral_bounds(g, sets);
        const double eps = 1e-9 * (1.0 + sd.rho);
        const double l2 = sd.lambda2();
        EXPECT_LE(l2, b.lambda2_upper_trace + eps);
        EXPECT_LE(b.lambda2_upper_trace, b.lambda2_upper_trace_degree + eps);
        EXPECT_GE(sd.rho, b.lambdan_lower_trace - eps);
        EXPECT_LE(b.lambdan_lower_trace_degree, b.lambdan_lower_trace + eps);
        EXPECT_LE(sd.rho, b.rho_upper + eps);
        if (b.lambda2_upper_noncomplete) EXPECT_LE(l2, *b.lambda2_upper_noncomplete + eps);
        ASSERT_TRUE(b.lambda2_upper_cheeger.has_value());
        EXPECT_LE(l2, *b.lambda2_upper_cheeger + eps);
    }
}

TEST(HeatEvolve, Examples) {
    const Graph k = complete(6);
    const NodeSet s({0, 2}, 6);
    const NodeFunction chi = s.indicator(6);
    EXPECT_EQ(heat_evolve(k, chi, 0.0), chi);
    const double rho = 6.0, rs = 2.0 / 6.0, t = 0.3;
    const NodeFunction u = heat_evolve(k, chi, t);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(u[i], rs + std::exp(-rho * t) * (chi[i] - rs), 1e-12);

    const std::size_t n = 5;
    const Graph sg = star(n);
    const NodeFunction c = NodeSet({0}, n).indicator(n);
    const NodeFunction v = heat_evolve(sg, c, t);
    // chi_center = 1/n + ((n-1)/n) w with w the eigenvector of eigenvalue n
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = i == 0 ? 1.0 : -1.0 / (n - 1.0);
        EXPECT_NEAR(v[i], 1.0 / n + (n - 1.0) / n * std::exp(-double(n) * t) * wi, 1e-12);
    }
}

TEST(HeatEvolve, SpectralAndSeriesAgree) {
    Pcg32 rng(23);
    for (int k = 0; k < 100; ++k) {
        const Graph g = random_graph(rng);
        const auto sd = eigendecompose(g);
        const NodeFunction u = random_function(rng, g.size());
        const double t = rng.uniform(0.0, 5.0);
        EXPECT_LE(max_abs_diff(heat_evolve(g, u, t), heat_evolve(g, sd, u, t)), 1e-9);
    }
    EXPECT_THROW(heat_evolve(cycle(4), NodeFunction(4, 0.0), -1.0), InvalidArgument);
}

TEST(HeatProperties, MassNormComparisonSemigroup) {
    Pcg32 rng(24);
    for (int k = 0; k < 100; ++k) {
        const Graph g = random_graph(rng);
        const std::size_t n = g.size();
        const NodeFunction u = random_function(rng, n);
        NodeFunction v = u;
        for (auto& x : v) x += rng.uniform(0.0, 1.0);
        const double t1 = rng.uniform(0.0, 3.0), t2 = t1 + rng.uniform(0.0, 3.0);
        const NodeFunction a = heat_evolve(g, u, t1);
        const NodeFunction b = heat_evolve(g, u, t2);
        EXPECT_NEAR(mass(g, a), mass(g, u), 1e-9 * (1.0 + std::abs(mass(g, u))));
        EXPECT_NEAR(mass(g, b), mass(g, u), 1e-9 * (1.0 + std::abs(mass(g, u))));
        EXPECT_LE(norm_v(g, b), norm_v(g, a) + 1e-10);
        EXPECT_LE(norm_v(g, a), norm_v(g, u) + 1e-10);
        const NodeFunction bv = heat_evolve(g, v, t2);
        for (std::size_t i = 0; i < n; ++i) EXPECT_LE(b[i], bv[i] + 1e-10);
        EXPECT_LE(norm_v_inf(b), norm_v_inf(u) + 1e-10);
        const NodeFunction semi = heat_evolve(g, a, t2 - t1);
        EXPECT_LE(max_abs_diff(semi, b), 1e-8);
        // 0 <= u0 <= 1 stays in the unit box
        const NodeFunction c = heat_evolve(g, random_set(rng, n).indicator(n), t2);
        for (double x : c) {
            EXPECT_GE(x, -1e-12);
            EXPECT_LE(x, 1.0 + 1e-12);
        }
    }
}

TEST(MixingBound, Examples) {
    const Graph k = complete(4);
    EXPECT_EQ(mixing_bound(k, NodeFunction(4, 0.7), 0.1), 0.0);
    const NodeFunction u0 = NodeSet({0}, 4).indicator(4);
    const double tau = mixing_bound(k, u0, 0.1);
    EXPECT_GT(tau, 0.0);
    EXPECT_TRUE(std::isfinite(tau));
    const NodeFunction u = heat_evolve(k, u0, 1.01 * tau);
    for (double x : u) EXPECT_LE(std::abs(x - 0.25), 0.1);
    EXPECT_THROW(mixing_bound(Graph(4, {{0, 1, 1}, {2, 3, 1}}, 1, 0), u0, 0.1), DisconnectedGraph);
}

TEST(MixingBound, GuaranteeOnRandomGraphs) {
    Pcg32 rng(25);
    for (int k = 0; k < 100; ++k) {
        const Graph g = random_graph(rng);
        const NodeFunction u0 = random_function(rng, g.size());
        const double eps = rng.uniform(0.01, 0.5);
        const double tau = mixing_bound(g, u0, eps);
        const double mean = mass(g, u0) / g.volume();
        const NodeFunction u = heat_evolve(g, u0, tau * 1.01 + 1e-9);
        for (double x : u) EXPECT_LE(std::abs(x - mean), eps + 1e-12);
    }
}
