#pragma once

// Random instances for the property tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "curvflow/curvflow.hpp"

namespace testing_support {

using namespace curvflow;

struct RandomGraphOptions {
    std::size_t n_min = 3;
    std::size_t n_max = 20;
    double edge_prob = 0.3;
    bool weighted = true;
    bool rational = false;   // weights k/4, k = 1..12
    bool vary_qr = true;     // random q in [1/2, 1], r in [0, 1]
    double q = 1.0;
    double r = 0.0;
};

/// Connected graph: random spanning tree plus independent extra edges.
inline Graph random_graph(Pcg32& rng, const RandomGraphOptions& o = {}) {
    const std::size_t n = o.n_min + rng.below(static_cast<std::uint32_t>(o.n_max - o.n_min + 1));
    auto weight = [&] {
        if (!o.weighted) return 1.0;
        if (o.rational) return (1.0 + rng.below(12)) / 4.0;
        return rng.uniform(0.2, 3.0);
    };
    std::vector<WeightedEdge> edges;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = rng.below(static_cast<std::uint32_t>(i));
        edges.push_back({i, j, weight()});
        used[i][j] = used[j][i] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!used[i][j] && rng.uniform() < o.edge_prob) edges.push_back({i, j, weight()});
    double q = o.q, r = o.r;
    if (o.vary_qr) {
        q = rng.uniform() < 0.5 ? 1.0 : rng.uniform(0.5, 1.0);
        const double pick = rng.uniform();
        r = pick < 0.35 ? 0.0 : (pick < 0.7 ? 1.0 : rng.uniform());
    }
    return build_graph(n, edges, q, r);
}

inline NodeFunction random_function(Pcg32& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    NodeFunction u(n);
    for (auto& x : u) x = rng.uniform(lo, hi);
    return u;
}

/// Values drawn from a few levels so that ties occur.
inline NodeFunction random_levels(Pcg32& rng, std::size_t n, int levels = 4) {
    NodeFunction u(n);
    for (auto& x : u) x = static_cast<double>(rng.below(static_cast<std::uint32_t>(levels))) - 1.0;
    return u;
}

inline EdgeFunction random_skew(Pcg32& rng, const Graph& g) {
    EdgeFunction phi(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (i < g.neighbor(k)) {
                phi[k] = rng.uniform(-1.0, 1.0);
                phi[g.mirror(k)] = -phi[k];
            }
    return phi;
}

inline NodeSet random_set(Pcg32& rng, std::size_t n, double p = 0.5) {
    std::vector<bool> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = rng.uniform() < p;
    return NodeSet::from_mask(m);
}

/// Nonempty proper subset.
inline NodeSet random_proper_set(Pcg32& rng, std::size_t n, double p = 0.5) {
    for (;;) {
        NodeSet s = random_set(rng, n, p);
        if (!s.is_trivial(n)) return s;
    }
}

inline NodeSet set_from_bits(std::uint32_t bits, std::size_t n) {
    std::vector<bool> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = (bits >> i) & 1u;
    return NodeSet::from_mask(m);
}

inline double max_abs_diff(const NodeFunction& a, const NodeFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testing_support
