#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "random.hpp"

namespace curvflow {

/// Planar node positions for plotting, one per node.
using Layout = std::vector<std::array<double, 2>>;

namespace detail {

inline void require_size(bool ok, const std::string& what) {
    if (!ok) throw InvalidSize(what);
}

}  // namespace detail

inline Graph complete(std::size_t n, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(n >= 2, "complete graph needs n >= 2");
    std::vector<WeightedEdge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.push_back({i, j, w});
    return Graph(n, e, q, r);
}

/// Node 0 is the center.
inline Graph star(std::size_t n, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(n >= 2, "star graph needs n >= 2");
    std::vector<WeightedEdge> e;
    for (std::size_t i = 1; i < n; ++i) e.push_back({0, i, w});
    return Graph(n, e, q, r);
}

inline Graph cycle(std::size_t n, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(n >= 3, "cycle needs n >= 3");
    std::vector<WeightedEdge> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, w});
    return Graph(n, e, q, r);
}

inline Graph path(std::size_t n, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(n >= 2, "path needs n >= 2");
    std::vector<WeightedEdge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, w});
    return Graph(n, e, q, r);
}

/// Periodic n1 x n2 lattice, n1 columns and n2 rows; node (x, y) has index
/// y * n1 + x.
inline Graph torus(std::size_t n1, std::size_t n2, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(n1 >= 3 && n2 >= 3, "torus needs both cycle lengths >= 3");
    std::vector<WeightedEdge> e;
    for (std::size_t y = 0; y < n2; ++y)
        for (std::size_t x = 0; x < n1; ++x) {
            const std::size_t i = y * n1 + x;
            e.push_back({i, y * n1 + (x + 1) % n1, w});
            e.push_back({i, ((y + 1) % n2) * n1 + x, w});
        }
    return Graph(n1 * n2, e, q, r);
}

inline Layout torus_layout(std::size_t n1, std::size_t n2) {
    Layout xy;
    for (std::size_t y = 0; y < n2; ++y)
        for (std::size_t x = 0; x < n1; ++x) xy.push_back({double(x), double(y)});
    return xy;
}

/// Non-periodic rows x cols lattice in row-major order.
inline Graph grid(std::size_t rows, std::size_t cols, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(rows >= 1 && cols >= 1 && rows * cols >= 2, "grid needs at least two nodes");
    std::vector<WeightedEdge> e;
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            const std::size_t i = a * cols + b;
            if (b + 1 < cols) e.push_back({i, i + 1, w});
            if (a + 1 < rows) e.push_back({i, i + cols, w});
        }
    return Graph(rows * cols, e, q, r);
}

inline Layout grid_layout(std::size_t rows, std::size_t cols) {
    Layout xy;
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) xy.push_back({double(b), -double(a)});
    return xy;
}

/// Complete tree numbered level by level from the leaves upward: leaves
/// first, root last.
inline Graph regular_tree(std::size_t depth, std::size_t children, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(depth >= 1 && children >= 1, "tree needs depth >= 1 and children >= 1");
    std::vector<std::size_t> level_size(depth + 1);
    level_size[0] = 1;
    for (std::size_t k = 0; k < depth; ++k) level_size[0] *= children;
    for (std::size_t k = 1; k <= depth; ++k) level_size[k] = level_size[k - 1] / children;
    std::vector<std::size_t> start(depth + 1, 0);
    for (std::size_t k = 1; k <= depth; ++k) start[k] = start[k - 1] + level_size[k - 1];
    std::vector<WeightedEdge> e;
    for (std::size_t k = 0; k < depth; ++k)
        for (std::size_t a = 0; a < level_size[k]; ++a) e.push_back({start[k] + a, start[k + 1] + a / children, w});
    return Graph(start[depth] + 1, e, q, r);
}

inline Layout regular_tree_layout(std::size_t depth, std::size_t children) {
    Layout xy;
    std::size_t sz = 1;
    for (std::size_t k = 0; k < depth; ++k) sz *= children;
    for (std::size_t k = 0; k <= depth; ++k) {
        const double span = static_cast<double>(sz);
        for (std::size_t a = 0; a < sz; ++a) {
            const double x = (a + 0.5) * (std::pow(double(children), double(depth)) / span);
            xy.push_back({x, double(k)});
        }
        sz /= children;
    }
    return xy;
}

namespace detail {

using Vec3 = std::array<double, 3>;

inline std::vector<Vec3> icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0}) {
            v.push_back({0.0, s1, s2 * phi});
            v.push_back({s1, s2 * phi, 0.0});
            v.push_back({s2 * phi, 0.0, s1});
        }
    return v;
}

inline double dist2(const Vec3& a, const Vec3& b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

struct Truncated {
    std::vector<std::pair<std::size_t, std::size_t>> nodes;  // directed icosahedron edges
    std::vector<Vec3> pos;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Truncated icosahedron: one node per directed icosahedron edge a -> b,
/// placed a third of the way from a to b.
inline Truncated truncated_icosahedron() {
    const auto v = icosahedron();
    const std::size_t m = v.size();
    std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (a != b && std::abs(dist2(v[a], v[b]) - 4.0) < 1e-9) adj[a][b] = true;
    Truncated t;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (adj[a][b]) {
                id[{a, b}] = t.nodes.size();
                t.nodes.emplace_back(a, b);
                Vec3 p;
                for (int k = 0; k < 3; ++k) p[k] = v[a][k] + (v[b][k] - v[a][k]) / 3.0;
                t.pos.push_back(p);
            }
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto [a, b] = t.nodes[i];
        const std::size_t j = id[{b, a}];
        if (i < j) t.edges.emplace_back(i, j);
        for (std::size_t c = 0; c < m; ++c)
            if (c != b && adj[a][c] && adj[b][c]) {
                const std::size_t k = id[{a, c}];
                if (i < k) t.edges.emplace_back(i, k);
            }
    }
    return t;
}

}  // namespace detail

inline Graph buckyball(double w = 1.0, double q = 1.0, double r = 0.0) {
    const auto t = detail::truncated_icosahedron();
    std::vector<WeightedEdge> e;
    for (const auto& [i, j] : t.edges) e.push_back({i, j, w});
    return Graph(t.nodes.size(), e, q, r);
}

inline std::vector<std::array<double, 3>> buckyball_positions() { return detail::truncated_icosahedron().pos; }

/// Longitude/latitude chart of the buckyball positions.
inline Layout buckyball_layout() {
    Layout xy;
    for (const auto& p : buckyball_positions()) {
        const double rad = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        xy.push_back({std::atan2(p[1], p[0]), std::asin(p[2] / rad)});
    }
    return xy;
}

/// Square-lattice patch (degree 4) beside a triangular-lattice patch
/// (degree 6), joined along one column, open borders.
struct LatticeSpec {
    std::size_t rows = 12;
    std::size_t square_cols = 12;
    std::size_t triangular_cols = 12;
};

/// Row-major over rows x (square_cols + triangular_cols); columns below
/// square_cols belong to the square patch.
inline Graph adjoined_lattices(const LatticeSpec& spec, double w = 1.0, double q = 1.0, double r = 0.0) {
    detail::require_size(spec.rows >= 2 && spec.square_cols >= 1 && spec.triangular_cols >= 1,
                         "lattice patches need rows >= 2 and at least one column each");
    const std::size_t cols = spec.square_cols + spec.triangular_cols;
    std::vector<WeightedEdge> e;
    for (std::size_t a = 0; a < spec.rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            const std::size_t i = a * cols + b;
            if (b + 1 < cols) e.push_back({i, i + 1, w});
            if (a + 1 < spec.rows) e.push_back({i, i + cols, w});
            if (b >= spec.square_cols && b + 1 < cols && a + 1 < spec.rows) e.push_back({i, i + cols + 1, w});
        }
    return Graph(spec.rows * cols, e, q, r);
}

inline Layout adjoined_lattices_layout(const LatticeSpec& spec) {
    const std::size_t cols = spec.square_cols + spec.triangular_cols;
    Layout xy;
    for (std::size_t a = 0; a < spec.rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) xy.push_back({double(b), -double(a)});
    return xy;
}

struct MoonsConfig {
    std::size_t n_points = 600;
    std::size_t ambient_dim = 100;
    double noise_sigma = 0.1;
    std::size_t k = 10;
    std::uint64_t seed = 1;
    double q = 1.0;
    double r = 0.0;
    bool resample_on_degenerate = false;
};

struct MoonsSample {
    Graph graph;
    NodeSet ground_truth;  // points of the first moon
    Layout clean;          // planar positions before noise
    std::vector<std::vector<double>> points;
};

namespace detail {

inline MoonsSample sample_moons(const MoonsConfig& c, std::uint64_t seed) {
    Pcg32 rng(seed);
    const std::size_t n = c.n_points;
    const std::size_t half = n / 2;
    const std::size_t dim = c.ambient_dim;
    std::vector<std::vector<double>> x(n, std::vector<double>(dim, 0.0));
    Layout clean(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::numbers::pi * rng.uniform();
        if (i < half) clean[i] = {std::cos(t), std::sin(t)};
        else clean[i] = {1.0 - std::cos(t), 0.5 - std::sin(t)};
    }
    for (std::size_t i = 0; i < n; ++i) {
        x[i][0] = clean[i][0];
        x[i][1] = clean[i][1];
        for (std::size_t d = 0; d < dim; ++d) x[i][d] += c.noise_sigma * rng.normal();
    }
    std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double z = x[i][d] - x[j][d];
                s += z * z;
            }
            d2[i][j] = d2[j][i] = s;
        }
    std::vector<std::vector<std::size_t>> knn(n);
    std::vector<double> kth(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) idx.push_back(j);
        std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(c.k), idx.end(),
                          [&](std::size_t a, std::size_t b) { return d2[i][a] < d2[i][b] || (d2[i][a] == d2[i][b] && a < b); });
        idx.resize(c.k);
        kth[i] = d2[i][idx.back()];
        knn[i] = std::move(idx);
    }
    std::map<std::pair<std::size_t, std::size_t>, double> wmap;
    auto sim = [&](std::size_t i, std::size_t j) { return std::exp(-4.0 * d2[i][j] / kth[i]); };
    for (std::size_t i = 0; i < n; ++i)
        for (auto j : knn[i]) {
            const auto key = std::make_pair(std::min(i, j), std::max(i, j));
            wmap[key] = std::max(sim(i, j), sim(j, i));
        }
    std::vector<WeightedEdge> e;
    for (const auto& [key, w] : wmap) e.push_back({key.first, key.second, w});
    std::vector<bool> truth(n, false);
    for (std::size_t i = 0; i < half; ++i) truth[i] = true;
    return {Graph(n, e, c.q, c.r), NodeSet::from_mask(truth), std::move(clean), std::move(x)};
}

}  // namespace detail

/// Two noisy half circles in R^ambient_dim with a symmetrized kNN graph and
/// weights max(s_i(j), s_j(i)), s_i(j) = exp(-4 |x_i - x_j|^2 / d_i^2).
inline MoonsSample two_moons(const MoonsConfig& c) {
    detail::require_size(c.n_points >= 4 && c.n_points % 2 == 0, "two moons needs an even number of points >= 4");
    detail::require_size(c.k >= 1 && c.k < c.n_points, "k must lie in [1, n_points)");
    detail::require_size(c.ambient_dim >= 2, "ambient dimension must be at least 2");
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        MoonsSample s = detail::sample_moons(c, c.seed + attempt);
        if (is_connected(s.graph)) return s;
        if (!c.resample_on_degenerate)
            throw DegenerateSample("kNN graph is disconnected for seed " + std::to_string(c.seed));
    }
    throw DegenerateSample("no connected kNN sample after 100 attempts");
}

}  // namespace curvflow
