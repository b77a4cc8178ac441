#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "calculus.hpp"
#include "detail/symmetric_eigen.hpp"
#include "graph.hpp"

namespace curvflow {

struct SpectralDecomposition {
    std::vector<double> eigenvalues;          // ascending
    std::vector<NodeFunction> eigenvectors;   // V-orthonormal
    double rho = 0.0;

    double lambda2() const { return eigenvalues.size() > 1 ? eigenvalues[1] : 0.0; }
};

/// Laplacian D^{-r}(D - A) as a dense matrix (row i acts on node i).
inline detail::DenseMatrix laplacian_matrix(const Graph& g) {
    detail::DenseMatrix L(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        L(i, i) = g.degree(i) / g.measure(i);
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            L(i, g.neighbor(k)) = -g.weight(k) / g.measure(i);
    }
    return L;
}

namespace detail {

inline void sign_normalize(NodeFunction& v) {
    for (double x : v) {
        if (std::abs(x) > 1e-12) {
            if (x < 0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

}  // namespace detail

inline SpectralDecomposition eigendecompose(const Graph& g) {
    const std::size_t n = g.size();
    detail::DenseMatrix M(n);
    std::vector<double> half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = std::sqrt(g.measure(i));
    for (std::size_t i = 0; i < n; ++i) {
        M(i, i) = g.degree(i) / g.measure(i);
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            M(i, g.neighbor(k)) = -g.weight(k) / (half[i] * half[g.neighbor(k)]);
    }
    auto eig = detail::symmetric_eigen(M);

    struct Pair {
        double value;
        NodeFunction vec;
    };
    std::vector<Pair> pairs(n);
    for (std::size_t k = 0; k < n; ++k) {
        pairs[k].value = eig.values[k];
        pairs[k].vec.resize(n);
        for (std::size_t i = 0; i < n; ++i) pairs[k].vec[i] = eig.vectors(i, k) / half[i];
        detail::sign_normalize(pairs[k].vec);
    }
    const double scale = std::max(1.0, *std::max_element(eig.values.begin(), eig.values.end()));
    const double tie = 1e-10 * scale;
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
    // within a cluster of numerically equal eigenvalues order by the vectors
    for (std::size_t a = 0; a < n;) {
        std::size_t b = a + 1;
        while (b < n && pairs[b].value - pairs[b - 1].value <= tie) ++b;
        std::sort(pairs.begin() + static_cast<std::ptrdiff_t>(a), pairs.begin() + static_cast<std::ptrdiff_t>(b),
                  [](const Pair& x, const Pair& y) { return x.vec < y.vec; });
        a = b;
    }

    SpectralDecomposition out;
    out.eigenvalues.reserve(n);
    out.eigenvectors.reserve(n);
    for (auto& p : pairs) {
        out.eigenvalues.push_back(p.value);
        out.eigenvectors.push_back(std::move(p.vec));
    }
    out.rho = out.eigenvalues.back();
    return out;
}

struct SpectralBounds {
    double lambda2_upper_trace = 0.0;   // also the lower bound for lambda_n
    double lambdan_lower_trace = 0.0;
    double lambda2_upper_trace_degree = 0.0;  // n d_+^{1-r} / (n-1)
    double lambdan_lower_trace_degree = 0.0;  // n d_-^{1-r} / (n-1)
    std::optional<double> lambda2_upper_noncomplete;
    std::optional<double> lambda2_upper_cheeger;
    double rho_upper = 0.0;
};

/// Cheeger-type quantity vol(V) TV(S) / (vol S vol S^c) for one nontrivial set.
inline double cheeger_ratio(const Graph& g, const NodeSet& s) {
    if (s.is_trivial(g.size())) throw TrivialSet("Cheeger ratio needs a nontrivial set");
    const double vs = volume(g, s);
    return g.volume() * cut_weight(g, s) / (vs * (g.volume() - vs));
}

/// Bounds on lambda_2, lambda_n and rho. The Cheeger-type bound is the minimum
/// over `sets` only; it is absent when no set is supplied.
inline SpectralBounds spectral_bounds(const Graph& g, const std::vector<NodeSet>& sets = {}) {
    SpectralBounds b;
    const std::size_t n = g.size();
    const double r = g.r();
    if (n >= 2) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += detail::wpow(g.degree(i), 1.0 - r);
        b.lambda2_upper_trace = tr / static_cast<double>(n - 1);
        b.lambdan_lower_trace = b.lambda2_upper_trace;
        b.lambda2_upper_trace_degree = n * detail::wpow(g.max_degree(), 1.0 - r) / static_cast<double>(n - 1);
        b.lambdan_lower_trace_degree = n * detail::wpow(g.min_degree(), 1.0 - r) / static_cast<double>(n - 1);
    }
    if (!g.is_complete()) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (g.slot(i, j) != g.num_slots()) continue;
                const double di = g.degree(i), dj = g.degree(j);
                const double num = di * std::pow(dj, 2 * r) + std::pow(di, 2 * r) * dj;
                const double den = std::pow(di, r) * std::pow(dj, 2 * r) + std::pow(di, 2 * r) * std::pow(dj, r);
                best = std::min(best, num / den);
            }
        b.lambda2_upper_noncomplete = best;
    }
    for (const auto& s : sets) {
        const double c = cheeger_ratio(g, s);
        if (!b.lambda2_upper_cheeger || c < *b.lambda2_upper_cheeger) b.lambda2_upper_cheeger = c;
    }
    b.rho_upper = 2.0 * detail::wpow(g.max_degree(), 1.0 - r);
    return b;
}

/// Heat semigroup e^{-t Delta} u0 by uniformization: with Lambda bounding the
/// diagonal of the Laplacian, P = I - Delta/Lambda is stochastic and
/// e^{-t Delta} = sum_k Poisson(k; Lambda t) P^k. Nonnegative and
/// mass-preserving term by term.
inline NodeFunction heat_evolve(const Graph& g, const NodeFunction& u0, double t) {
    detail::check_size(g, u0);
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_evolve needs a finite t >= 0");
    if (t == 0.0) return u0;
    double lam = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) lam = std::max(lam, g.degree(i) / g.measure(i));
    const double chunk_max = 30.0;
    const int chunks = std::max(1, static_cast<int>(std::ceil(lam * t / chunk_max)));
    const double a = lam * t / chunks;

    NodeFunction u = u0;
    NodeFunction term(g.size()), next(g.size()), acc(g.size());
    for (int c = 0; c < chunks; ++c) {
        term = u;
        double w = std::exp(-a);
        double cum = w;
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] = w * term[i];
        for (int k = 1;; ++k) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                double s = 0.0;
                for (std::size_t kk = g.offset(i); kk < g.offset(i + 1); ++kk)
                    s += g.weight(kk) * (term[i] - term[g.neighbor(kk)]);
                next[i] = term[i] - s / (g.measure(i) * lam);
            }
            std::swap(term, next);
            w *= a / k;
            cum += w;
            for (std::size_t i = 0; i < g.size(); ++i) acc[i] += w * term[i];
            if (k > a && (w < 1e-18 || 1.0 - cum < 1e-17)) break;
        }
        // renormalize the truncated Poisson mass so constants stay fixed
        for (std::size_t i = 0; i < g.size(); ++i) u[i] = acc[i] / cum;
    }
    return u;
}

/// Spectral path: sum_k e^{-lambda_k t} <u0, v_k> v_k.
inline NodeFunction heat_evolve(const Graph& g, const SpectralDecomposition& sd, const NodeFunction& u0,
                                double t) {
    detail::check_size(g, u0);
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("heat_evolve needs a finite t >= 0");
    if (t == 0.0) return u0;
    NodeFunction u(g.size(), 0.0);
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
        const double c = std::exp(-std::max(sd.eigenvalues[k], 0.0) * t) * inner_v(g, u0, sd.eigenvectors[k]);
        for (std::size_t i = 0; i < g.size(); ++i) u[i] += c * sd.eigenvectors[k][i];
    }
    return u;
}

/// Time after which the heat flow is within eps of its mean in the sup norm.
inline double mixing_bound(const Graph& g, const SpectralDecomposition& sd, const NodeFunction& u0, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    const double l2 = sd.lambda2();
    if (!(l2 > 1e-10 * std::max(1.0, sd.rho)) || !is_connected(g))
        throw DisconnectedGraph("mixing bound needs a connected graph");
    const double mean = mass(g, u0) / g.volume();
    NodeFunction dev(u0);
    for (double& x : dev) x -= mean;
    const double nrm = norm_v(g, dev);
    if (nrm == 0.0) return 0.0;
    const double tau = std::log(nrm / (eps * std::pow(g.min_degree(), g.r() / 2))) / l2;
    return std::max(tau, 0.0);
}

inline double mixing_bound(const Graph& g, const NodeFunction& u0, double eps) {
    if (!is_connected(g)) throw DisconnectedGraph("mixing bound needs a connected graph");
    return mixing_bound(g, eigendecompose(g), u0, eps);
}

}  // namespace curvflow
