#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "calculus.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "spectral.hpp"

namespace curvflow {

struct MboParams {
    double tau = 1.0;
    int max_iter = 1000;
};

struct MboTrace {
    std::vector<NodeSet> sets;        // sets[0] is the initial set
    std::vector<double> lyapunov;     // J(chi_{S_k}) per recorded set
    std::vector<double> tv;
    std::vector<double> mass;
    std::optional<int> converged_at;  // first k with sets[k] == sets[k+1]

    const NodeSet& final_set() const { return sets.back(); }
};

/// Heat flow through the eigenvectors when a decomposition is given, by
/// uniformization otherwise.
inline NodeFunction heat(const Graph& g, const NodeFunction& u, double t, const SpectralDecomposition* sd) {
    return sd ? heat_evolve(g, *sd, u, t) : heat_evolve(g, u, t);
}

/// {i : v_i >= 1/2}.
inline NodeSet threshold(const NodeFunction& v) {
    std::vector<bool> m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m[i] = v[i] >= 0.5;
    return NodeSet::from_mask(m);
}

inline NodeSet mbo_step(const Graph& g, const NodeSet& s, double tau, const SpectralDecomposition* sd = nullptr) {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    return threshold(heat(g, s.indicator(g.size()), tau, sd));
}

/// J(u) = <1 - u, e^{-tau Delta} u>_V.
inline double lyapunov(const Graph& g, const NodeFunction& u, double tau, const SpectralDecomposition* sd = nullptr) {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    const NodeFunction hu = heat(g, u, tau, sd);
    NodeFunction one_minus(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) one_minus[i] = 1.0 - u[i];
    return inner_v(g, one_minus, hu);
}

inline MboTrace mbo_run(const Graph& g, const NodeSet& s0, const MboParams& params,
                        const SpectralDecomposition* sd = nullptr) {
    if (!(params.tau > 0.0)) throw InvalidArgument("tau must be positive");
    MboTrace tr;
    auto record = [&](const NodeSet& s, const NodeFunction& hu) {
        const NodeFunction chi = s.indicator(g.size());
        NodeFunction one_minus(chi.size());
        for (std::size_t i = 0; i < chi.size(); ++i) one_minus[i] = 1.0 - chi[i];
        tr.sets.push_back(s);
        tr.lyapunov.push_back(inner_v(g, one_minus, hu));
        tr.tv.push_back(cut_weight(g, s));
        tr.mass.push_back(volume(g, s));
    };
    std::set<NodeSet> visited;
    NodeSet cur = s0;
    NodeFunction hu = heat(g, cur.indicator(g.size()), params.tau, sd);
    record(cur, hu);
    visited.insert(cur);
    for (int k = 0; k < params.max_iter; ++k) {
        NodeSet next = threshold(hu);
        if (next == cur) {
            tr.converged_at = k;
            break;
        }
        if (visited.count(next)) throw ConvergenceFailure("MBO iterates revisited an earlier set");
        visited.insert(next);
        cur = std::move(next);
        hu = heat(g, cur.indicator(g.size()), params.tau, sd);
        record(cur, hu);
    }
    return tr;
}

struct TauBounds {
    double tau_rho = 0.0;
    double tau_kappa = 0.0;
    double tau_t = 0.0;
    // log(d_-^{-r/2} vol S vol S^c / |vol S - vol V / 2|) / lambda_2, the
    // square-root-free variant that gives the expected buckyball value
    double tau_t_printed = 0.0;
    double tau_universal = 0.0;  // log(3/2) / rho, pins every set
    double lambda2 = 0.0;
    double rho = 0.0;
    bool gap_condition = false;  // lambda_2 / lambda_n < log sqrt 2 / log 3/2
};

inline double tau_rho(const Graph& g, const NodeSet& s, double rho) {
    const double vs = volume(g, s);
    if (vs == 0.0) return infinity;
    return std::log1p(0.5 * std::pow(g.min_degree(), g.r() / 2) / std::sqrt(vs)) / rho;
}

inline double tau_kappa(const Graph& g, const NodeSet& s) {
    const double m = norm_v_inf(laplacian_apply(g, s.indicator(g.size())));
    return m == 0.0 ? infinity : 1.0 / (2.0 * m);
}

inline TauBounds tau_bounds(const Graph& g, const NodeSet& s, const SpectralDecomposition& sd) {
    if (!is_connected(g)) throw DisconnectedGraph("tau bounds need a connected graph");
    TauBounds b;
    b.lambda2 = sd.lambda2();
    b.rho = sd.rho;
    b.tau_rho = tau_rho(g, s, sd.rho);
    b.tau_kappa = tau_kappa(g, s);
    b.tau_universal = std::log(1.5) / sd.rho;
    b.gap_condition = b.lambda2 / b.rho < std::log(std::sqrt(2.0)) / std::log(1.5);
    const double vv = g.volume();
    const double vs = volume(g, s);
    const double vc = vv - vs;
    const double rs = vs / vv;
    if (std::abs(rs - 0.5) < 1e-14) throw HalfVolume("tau_t undefined when vol S = vol V / 2");
    const double dm = std::pow(g.min_degree(), g.r() / 2);
    if (vs == 0.0 || vc == 0.0) {
        b.tau_t = 0.0;
        b.tau_t_printed = 0.0;
    } else {
        b.tau_t = std::log(std::sqrt(vs * vc) / (std::sqrt(vv) * std::abs(rs - 0.5) * dm)) / b.lambda2;
        b.tau_t_printed = std::log(vs * vc / (std::abs(vs - vv / 2) * dm)) / b.lambda2;
    }
    return b;
}

inline TauBounds tau_bounds(const Graph& g, const NodeSet& s) {
    if (!is_connected(g)) throw DisconnectedGraph("tau bounds need a connected graph");
    return tau_bounds(g, s, eigendecompose(g));
}

/// Local quantities around one node behind the flip interval.
struct FlipAnalysis {
    NodeSet s1;            // neighbors of node on the other side
    double kappa = 0.0;    // q = 1 curvature at node
    double n_norm = 0.0;   // sup norm of (Delta')^2 chi_{S1}
    std::optional<std::pair<double, double>> interval;
    // max_i |sum_k d_k^{-r} d'_k w_ik d_i^{-r}| over the closure, the last term
    // of the gap condition alone, and the interval it would give
    double n_reduced = 0.0;
    std::optional<std::pair<double, double>> interval_reduced;
};

namespace detail {

inline std::optional<std::pair<double, double>> flip_roots(double kappa, double n) {
    const double k2 = kappa * kappa;
    if (!(n > 0.0) || !(k2 > n)) return std::nullopt;
    const double a = std::abs(kappa);
    const double root = std::sqrt(k2 - n);
    return std::make_pair((a - root) / n, (a + root) / n);
}

}  // namespace detail

/// Dirichlet Laplacian on `closure` with full-graph degrees, applied to u.
inline NodeFunction dirichlet_laplacian_apply(const Graph& g, const std::vector<bool>& closure, const NodeFunction& u) {
    NodeFunction out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!closure[i]) continue;
        double s = g.degree(i) * u[i];
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (closure[g.neighbor(k)]) s -= g.weight(k) * u[g.neighbor(k)];
        out[i] = s / g.measure(i);
    }
    return out;
}

inline FlipAnalysis local_flip_analysis(const Graph& g, const NodeSet& s, std::size_t node) {
    if (node >= g.size()) throw InvalidArgument("node out of range");
    const auto m = s.mask(g.size());
    FlipAnalysis fa;
    std::vector<bool> s1(g.size(), false);
    std::vector<bool> closure(g.size(), false);
    closure[node] = true;
    for (auto j : g.neighbors(node))
        if (m[j] != m[node]) {
            s1[j] = true;
            closure[j] = true;
        }
    fa.s1 = NodeSet::from_mask(s1);
    double cross = 0.0;
    for (std::size_t k = g.offset(node); k < g.offset(node + 1); ++k)
        if (s1[g.neighbor(k)]) cross += g.weight(k);
    fa.kappa = (m[node] ? cross : -cross) / g.measure(node);
    const NodeFunction chi = fa.s1.indicator(g.size());
    const NodeFunction once = dirichlet_laplacian_apply(g, closure, chi);
    const NodeFunction twice = dirichlet_laplacian_apply(g, closure, once);
    fa.n_norm = norm_v_inf(twice);
    fa.interval = detail::flip_roots(fa.kappa, fa.n_norm);
    std::vector<double> dprime(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (s1[g.neighbor(k)]) dprime[i] += g.weight(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!closure[i]) continue;
        double acc = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (closure[g.neighbor(k)]) acc += dprime[g.neighbor(k)] / g.measure(g.neighbor(k)) * g.weight(k);
        fa.n_reduced = std::max(fa.n_reduced, std::abs(acc) / g.measure(i));
    }
    fa.interval_reduced = detail::flip_roots(fa.kappa, fa.n_reduced);
    return fa;
}

/// Open interval of tau on which one MBO step flips `node`, when the local
/// gap condition holds.
inline std::optional<std::pair<double, double>> local_flip_interval(const Graph& g, const NodeSet& s, std::size_t node) {
    return local_flip_analysis(g, s, node).interval;
}

/// Both sides of the explicit degree form of the local gap condition.
struct GapCondition {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs > rhs; }
};

inline GapCondition local_gap_condition(const Graph& g, const NodeSet& s, std::size_t node) {
    const FlipAnalysis fa = local_flip_analysis(g, s, node);
    const double r = g.r();
    std::vector<bool> s1 = fa.s1.mask(g.size());
    std::vector<bool> closure = s1;
    closure[node] = true;
    std::vector<double> dprime(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (s1[g.neighbor(k)]) dprime[i] += g.weight(k);
    GapCondition gc;
    gc.lhs = std::pow(g.degree(node), -2 * r) * dprime[node] * dprime[node];
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!closure[i]) continue;
        const double di = g.degree(i);
        double v = -std::pow(di, 1 - r) * dprime[i];
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) {
            const std::size_t j = g.neighbor(k);
            if (s1[j]) v -= std::pow(g.degree(j), 1 - r) * g.weight(k);
            if (closure[j]) v += std::pow(g.degree(j), -r) * dprime[j] * g.weight(k);
        }
        gc.rhs = std::max(gc.rhs, std::pow(di, -r) * std::abs(v));
    }
    return gc;
}

/// Sufficient degree-ratio condition for a flip interval when r = 1, with the
/// slack parameter e in [0, 1).
inline bool flip_condition_r1(const Graph& g, const NodeSet& s, std::size_t node, double e) {
    if (g.r() != 1.0) throw InvalidArgument("degree-ratio condition needs r = 1");
    const FlipAnalysis fa = local_flip_analysis(g, s, node);
    const auto s1 = fa.s1.mask(g.size());
    auto dprime = [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (s1[g.neighbor(k)]) acc += g.weight(k);
        return acc;
    };
    const double ratio1 = dprime(node) / g.degree(node);
    if (!(ratio1 > 0.0)) return false;
    for (auto i : fa.s1) {
        const double di = g.degree(i);
        if (!(dprime(i) / di <= e * ratio1)) return false;
        if (!(g.weight(i, node) / di < (1.0 - e * e) * ratio1)) return false;
    }
    return true;
}

/// Star criterion for r = 1: S1 has no internal edges, and either |S1| = 1
/// with a strictly smaller degree or |S1| >= 2 with degrees at most d_node.
inline bool star_flip_criterion(const Graph& g, const NodeSet& s, std::size_t node) {
    if (g.r() != 1.0) throw InvalidArgument("star criterion needs r = 1");
    const FlipAnalysis fa = local_flip_analysis(g, s, node);
    if (fa.s1.empty()) return false;
    for (auto i : fa.s1)
        for (auto j : g.neighbors(i))
            if (fa.s1.contains(j)) return false;
    const double d1 = g.degree(node);
    if (fa.s1.size() == 1) return g.degree(fa.s1.members()[0]) < d1;
    return std::all_of(fa.s1.begin(), fa.s1.end(), [&](std::size_t i) { return g.degree(i) <= d1; });
}

/// Critical step on the complete graph where e^{-t Delta} chi_S has the
/// closed form R chi_V + e^{-rho t}(chi_S - R chi_V).
inline double complete_graph_critical_tau(double rho, double rs) {
    if (std::abs(rs - 0.5) < 1e-15) throw HalfVolume("critical step undefined at R = 1/2");
    return std::log(std::max(rs, 1.0 - rs) / std::abs(0.5 - rs)) / rho;
}

}  // namespace curvflow
