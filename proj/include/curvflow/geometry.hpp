#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "graph.hpp"

namespace curvflow {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// nu_ij = +1 across the cut from S^c into S, -1 on the mirrored slot.
inline EdgeFunction normal(const Graph& g, const NodeSet& s) {
    EdgeFunction nu(g);
    const auto m = s.mask(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) {
            const std::size_t j = g.neighbor(k);
            if (!m[i] && m[j]) nu[k] = 1.0;
            else if (m[i] && !m[j]) nu[k] = -1.0;
        }
    return nu;
}

/// kappa_i = d_i^{-r} sum_{j in S^c} w_ij^q on S and -d_i^{-r} sum_{j in S} w_ij^q off S.
inline NodeFunction curvature(const Graph& g, const NodeSet& s) {
    NodeFunction kappa(g.size(), 0.0);
    const auto m = s.mask(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (m[g.neighbor(k)] != m[i]) acc += detail::wpow(g.weight(k), g.q());
        kappa[i] = (m[i] ? acc : -acc) / g.measure(i);
    }
    return kappa;
}

/// Nodes of S with a neighbor outside S.
inline NodeSet boundary(const Graph& g, const NodeSet& s) {
    const auto m = s.mask(g.size());
    std::vector<bool> out(g.size(), false);
    for (auto i : s)
        for (auto j : g.neighbors(i))
            if (!m[j]) {
                out[i] = true;
                break;
            }
    return NodeSet::from_mask(out);
}

inline NodeSet boundary_complement(const Graph& g, const NodeSet& s) {
    return boundary(g, s.complement(g.size()));
}

inline NodeSet sigma(const Graph& g, const NodeSet& s) {
    auto a = boundary(g, s).mask(g.size());
    const auto b = boundary_complement(g, s).mask(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
    return NodeSet::from_mask(a);
}

/// Nodes of S with exactly one neighbor outside S. Diagnostic only.
inline NodeSet reduced_boundary(const Graph& g, const NodeSet& s) {
    const auto m = s.mask(g.size());
    std::vector<bool> out(g.size(), false);
    for (auto i : s) {
        int c = 0;
        for (auto j : g.neighbors(i)) c += m[j] ? 0 : 1;
        out[i] = c == 1;
    }
    return NodeSet::from_mask(out);
}

/// Shortest-path distance to A with edge length w_ij^{q-1}; +infinity when
/// no path exists.
inline NodeFunction graph_distance(const Graph& g, const NodeSet& a) {
    if (a.empty()) throw EmptySet("distance to an empty set");
    NodeFunction d(g.size(), infinity);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (auto i : a) {
        d[i] = 0.0;
        pq.emplace(0.0, i);
    }
    const double p = g.q() - 1.0;
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > d[u]) continue;
        for (std::size_t k = g.offset(u); k < g.offset(u + 1); ++k) {
            const std::size_t v = g.neighbor(k);
            const double nd = du + detail::wpow(g.weight(k), p);
            if (nd < d[v]) {
                d[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return d;
}

/// (chi_{S^c} - chi_S) d^A.
inline NodeFunction signed_distance_to(const Graph& g, const NodeSet& s, const NodeSet& a) {
    NodeFunction d = graph_distance(g, a);
    for (auto i : s) d[i] = -d[i];
    for (double& x : d)
        if (x == 0.0) x = 0.0;  // drop the sign of -0
    return d;
}

/// Signed distance to Sigma = boundary(S) u boundary(S^c).
inline NodeFunction signed_distance(const Graph& g, const NodeSet& s) {
    if (s.is_trivial(g.size())) throw TrivialSet("signed distance needs S and S^c nonempty");
    return signed_distance_to(g, s, sigma(g, s));
}

/// Nodes i in S^c one edge away from boundary(S) along a shortest path.
inline NodeSet exterior_boundary(const Graph& g, const NodeSet& s) {
    const NodeSet bs = boundary(g, s);
    std::vector<bool> out(g.size(), false);
    if (bs.empty()) return NodeSet::from_mask(out);
    const NodeFunction d = graph_distance(g, bs);
    const auto m = s.mask(g.size());
    const auto mb = bs.mask(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (m[i]) continue;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (mb[g.neighbor(k)] && d[i] == detail::wpow(g.weight(k), g.q() - 1.0)) out[i] = true;
    }
    return NodeSet::from_mask(out);
}

/// TV(chi_Shat) - TV(chi_S) through the curvature pairing.
inline double tv_difference(const Graph& g, const NodeSet& s_hat, const NodeSet& s) {
    const NodeFunction k1 = curvature(g, s_hat);
    const NodeFunction k2 = curvature(g, s);
    const NodeFunction a = s_hat.indicator(g.size());
    const NodeFunction b = s.indicator(g.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i)
        acc += static_cast<long double>(k1[i] + k2[i]) * (a[i] - b[i]) * g.measure(i);
    return static_cast<double>(acc);
}

/// (sum_{j in S} - sum_{j in S^c}) w_nj^q: the TV change when n leaves S
/// (n in S), or minus the change when n joins S (n in S^c).
inline double flip_sum(const Graph& g, const NodeSet& s, std::size_t node) {
    double acc = 0.0;
    for (std::size_t k = g.offset(node); k < g.offset(node + 1); ++k) {
        const double w = detail::wpow(g.weight(k), g.q());
        acc += s.contains(g.neighbor(k)) ? w : -w;
    }
    return acc;
}

inline bool local_minimality_check(const Graph& g, const NodeSet& s, const NodeSet& omega) {
    for (auto n : omega) {
        const double f = flip_sum(g, s, n);
        if (s.contains(n) ? f < 0.0 : f > 0.0) return false;
    }
    return true;
}

/// Double well with minima at 0 and 1.
inline double well01(double u) { return u * u * (1.0 - u) * (1.0 - u); }

/// sum_i gfun((Delta u)_i) + eps^{-1} sum_i well01(u_i).
inline double gamma_functional(const Graph& g, const NodeFunction& u, double eps,
                               const std::function<double(double)>& gfun) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    const NodeFunction lu = laplacian_apply(g, u);
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        a += gfun(lu[i]);
        b += well01(u[i]);
    }
    return a + b / eps;
}

/// (f_eps(chi_S), f_0(chi_S)); f_0 evaluates gfun on the q = 1 curvature.
inline std::pair<double, double> gamma_limit_check(const Graph& g, const NodeSet& s, double eps,
                                                   const std::function<double(double)>& gfun) {
    const double fe = gamma_functional(g, s.indicator(g.size()), eps, gfun);
    const auto m = s.mask(g.size());
    double f0 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (m[g.neighbor(k)] != m[i]) acc += g.weight(k);
        f0 += gfun((m[i] ? acc : -acc) / g.measure(i));
    }
    return {fe, f0};
}

}  // namespace curvflow
