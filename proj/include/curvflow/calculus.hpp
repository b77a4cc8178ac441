#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "graph.hpp"

namespace curvflow {

namespace detail {

/// w^p restricted to the cases that show up repeatedly.
inline double wpow(double w, double p) {
    if (p == 1.0) return w;
    if (p == 0.0) return 1.0;
    if (p == 0.5) return std::sqrt(w);
    return std::pow(w, p);
}

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline void check_size(const Graph& g, const NodeFunction& u) {
    if (u.size() != g.size()) throw InvalidArgument("node function has wrong length");
}

}  // namespace detail

inline EdgeFunction gradient(const Graph& g, const NodeFunction& u) {
    detail::check_size(g, u);
    EdgeFunction phi(g);
    const double p = 1.0 - g.q();
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            phi[k] = detail::wpow(g.weight(k), p) * (u[g.neighbor(k)] - u[i]);
    return phi;
}

/// div(phi)_i = d_i^{-r} sum_j w_ij^q (phi_ji - phi_ij) / 2. For skew-symmetric
/// phi this is the adjoint of the gradient; the symmetrized form extends the
/// adjoint identity to edge functions without skew symmetry.
inline NodeFunction divergence(const Graph& g, const EdgeFunction& phi) {
    NodeFunction out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            s += detail::wpow(g.weight(k), g.q()) * (phi[g.mirror(k)] - phi[k]);
        out[i] = 0.5 * s / g.measure(i);
    }
    return out;
}

inline double inner_v(const Graph& g, const NodeFunction& u, const NodeFunction& v) {
    detail::check_size(g, u);
    detail::check_size(g, v);
    long double s = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += static_cast<long double>(u[i]) * v[i] * g.measure(i);
    return static_cast<double>(s);
}

inline double norm_v(const Graph& g, const NodeFunction& u) { return std::sqrt(inner_v(g, u, u)); }

inline double norm_v_inf(const NodeFunction& u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

inline double mass(const Graph& g, const NodeFunction& u) {
    return inner_v(g, u, NodeFunction(g.size(), 1.0));
}

inline double inner_e(const Graph& g, const EdgeFunction& phi, const EdgeFunction& psi) {
    long double s = 0.0L;
    const double p = 2.0 * g.q() - 1.0;
    for (std::size_t k = 0; k < g.num_slots(); ++k)
        s += static_cast<long double>(phi[k]) * psi[k] * detail::wpow(g.weight(k), p);
    return static_cast<double>(0.5L * s);
}

inline double norm_e(const Graph& g, const EdgeFunction& phi) { return std::sqrt(inner_e(g, phi, phi)); }

/// Pointwise edge norm |phi|_i = sqrt(sum_j w_ij^{2q-1} phi_ij^2 / 2).
inline NodeFunction local_norm(const Graph& g, const EdgeFunction& phi) {
    NodeFunction out(g.size(), 0.0);
    const double p = 2.0 * g.q() - 1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            s += detail::wpow(g.weight(k), p) * phi[k] * phi[k];
        out[i] = std::sqrt(0.5 * s);
    }
    return out;
}

inline double dirichlet_energy(const Graph& g, const NodeFunction& u) {
    detail::check_size(g, u);
    long double s = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) {
            const double d = u[i] - u[g.neighbor(k)];
            s += static_cast<long double>(g.weight(k)) * d * d;
        }
    return static_cast<double>(0.25L * s);
}

inline NodeFunction laplacian_apply(const Graph& g, const NodeFunction& u) {
    detail::check_size(g, u);
    NodeFunction out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            s += g.weight(k) * (u[i] - u[g.neighbor(k)]);
        out[i] = s / g.measure(i);
    }
    return out;
}

inline double tv_anisotropic(const Graph& g, const NodeFunction& u) {
    detail::check_size(g, u);
    long double s = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (i < g.neighbor(k))
                s += detail::wpow(g.weight(k), g.q()) * std::abs(u[i] - u[g.neighbor(k)]);
    return static_cast<double>(s);
}

/// Cut weight sum_{i in S, j notin S} w_ij^q.
inline double tv_set(const Graph& g, const NodeSet& s) {
    return tv_anisotropic(g, s.indicator(g.size()));
}

/// Cut value with the exponent fixed to q = 1, independent of g.q().
inline double cut_weight(const Graph& g, const NodeSet& s) {
    const auto m = s.mask(g.size());
    long double c = 0.0L;
    for (auto i : s)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (!m[g.neighbor(k)]) c += g.weight(k);
    return static_cast<double>(c);
}

inline double tv_isotropic(const Graph& g, const NodeFunction& u) {
    detail::check_size(g, u);
    long double s = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) {
            const double d = u[i] - u[g.neighbor(k)];
            a += g.weight(k) * d * d;
        }
        s += std::sqrt(a);
    }
    return static_cast<double>(s * std::sqrt(0.5L));
}

/// sgn(grad u) with sgn(0) = 0.
inline EdgeFunction sign_field(const Graph& g, const NodeFunction& u) {
    EdgeFunction phi = gradient(g, u);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = detail::sgn(phi[k]);
    return phi;
}

/// phi_ij = (grad u)_ij / |grad u|_i, zero where |grad u|_i = 0.
inline EdgeFunction isotropic_field(const Graph& g, const NodeFunction& u) {
    EdgeFunction phi = gradient(g, u);
    const NodeFunction nrm = local_norm(g, phi);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            phi[k] = nrm[i] > 0.0 ? phi[k] / nrm[i] : 0.0;
    return phi;
}

inline NodeFunction one_laplacian(const Graph& g, const NodeFunction& u) {
    return divergence(g, isotropic_field(g, u));
}

inline double clustering_coefficient(const Graph& g, std::size_t i) {
    if (i >= g.size()) throw InvalidArgument("node out of range");
    if (!g.is_unweighted()) throw WeightedGraph("clustering coefficient needs an unweighted graph");
    const auto nb = g.neighbors(i);
    if (nb.size() < 2) throw DegreeTooSmall("node " + std::to_string(i) + " has degree below 2");
    double links = 0.0;
    for (auto j : nb)
        for (auto h : nb)
            if (j != h && g.slot(j, h) != g.num_slots()) links += 1.0;
    const double d = static_cast<double>(nb.size());
    return links / (d * (d - 1.0));
}

inline double volume(const Graph& g, const NodeSet& s) {
    long double v = 0.0L;
    for (auto i : s) v += g.measure(i);
    return static_cast<double>(v);
}

inline double balanced_cut(const Graph& g, const std::vector<NodeSet>& partition) {
    std::vector<int> seen(g.size(), 0);
    for (const auto& part : partition) {
        if (part.empty()) throw InvalidPartition("empty part");
        for (auto i : part) {
            if (i >= g.size()) throw InvalidPartition("node out of range");
            if (seen[i]++) throw InvalidPartition("parts overlap at node " + std::to_string(i));
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidPartition("partition does not cover every node");
    double c = 0.0;
    for (const auto& part : partition) c += cut_weight(g, part) / volume(g, part);
    return c;
}

/// Super-level set {i : u_i > t}.
inline NodeSet superlevel_set(const NodeFunction& u, double t) {
    std::vector<bool> m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) m[i] = u[i] > t;
    return NodeSet::from_mask(m);
}

/// TV of u assembled from the cuts of its super-level sets.
inline double coarea_tv(const Graph& g, const NodeFunction& u) {
    std::vector<double> levels(u.begin(), u.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    long double s = 0.0L;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k)
        s += static_cast<long double>(levels[k + 1] - levels[k]) * tv_set(g, superlevel_set(u, levels[k]));
    return static_cast<double>(s);
}

}  // namespace curvflow
