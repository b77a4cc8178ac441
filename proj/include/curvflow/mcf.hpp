#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "calculus.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "maxflow.hpp"

namespace curvflow {

enum class TieBreak { PreferPrevious, LexicographicMin };

/// Interface: distance to boundary(S) u boundary(S^c), signed.
/// OneSided: chi_{S^c} d^S - chi_S d^{S^c}; experimental, freezes for small dt.
enum class DistanceMode { Interface, OneSided };

struct McfParams {
    double dt = 1.0;
    int max_steps = 100;
    TieBreak tie_break = TieBreak::PreferPrevious;
    DistanceMode distance = DistanceMode::Interface;
};

struct McfStepResult {
    NodeSet next_set;
    double objective = 0.0;  // F'(next_set, S)
    bool minimizer_unique = false;
    bool exact_arithmetic = false;
};

inline NodeFunction mcf_signed_distance(const Graph& g, const NodeSet& s, DistanceMode mode) {
    if (s.is_trivial(g.size())) throw TrivialSet("flow step needs S and S^c nonempty");
    if (mode == DistanceMode::Interface) return signed_distance(g, s);
    const NodeFunction to_s = graph_distance(g, s);
    const NodeFunction to_c = graph_distance(g, s.complement(g.size()));
    NodeFunction sd(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sd[i] = s.contains(i) ? -to_c[i] : to_s[i];
    return sd;
}

namespace detail {

inline void require_finite(const NodeFunction& sd) {
    for (double x : sd)
        if (!std::isfinite(x)) throw DisconnectedGraph("distance to the interface is infinite");
}

inline double linear_term(const Graph& g, const NodeSet& s_hat, const NodeFunction& sd) {
    long double acc = 0.0L;
    for (auto i : s_hat) acc += static_cast<long double>(sd[i]) * g.measure(i);
    return static_cast<double>(acc);
}

}  // namespace detail

/// F(Shat, S) = TV(Shat) - TV(S) + dt^{-1} <(chi_Shat - chi_S)^2, |sd|>_V.
inline double mcf_functional(const Graph& g, const NodeSet& s_hat, const NodeSet& s, double dt,
                             DistanceMode mode = DistanceMode::Interface) {
    const NodeFunction sd = mcf_signed_distance(g, s, mode);
    detail::require_finite(sd);
    long double pen = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (s_hat.contains(i) != s.contains(i)) pen += std::abs(sd[i]) * g.measure(i);
    return tv_set(g, s_hat) - tv_set(g, s) + static_cast<double>(pen) / dt;
}

/// F'(Shat, S) = TV(Shat) - TV(S) + dt^{-1} <chi_Shat, sd>_V; differs from F
/// by dt^{-1} <chi_S, |sd|>_V, which does not depend on Shat.
inline double mcf_functional_prime(const Graph& g, const NodeSet& s_hat, const NodeSet& s, double dt,
                                   DistanceMode mode = DistanceMode::Interface) {
    const NodeFunction sd = mcf_signed_distance(g, s, mode);
    detail::require_finite(sd);
    return tv_set(g, s_hat) - tv_set(g, s) + detail::linear_term(g, s_hat, sd) / dt;
}

inline double mcf_constant_shift(const Graph& g, const NodeSet& s, double dt,
                                 DistanceMode mode = DistanceMode::Interface) {
    const NodeFunction sd = mcf_signed_distance(g, s, mode);
    detail::require_finite(sd);
    long double acc = 0.0L;
    for (auto i : s) acc += std::abs(sd[i]) * g.measure(i);
    return static_cast<double>(acc) / dt;
}

namespace detail {

/// p/q with q <= max_den approximating x to relative 1e-12, by continued fractions.
inline std::optional<std::pair<std::int64_t, std::int64_t>> rationalize(double x, std::int64_t max_den = 1000000) {
    if (!std::isfinite(x) || std::abs(x) > 1e12) return std::nullopt;
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double y = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(y);
        if (std::abs(a) > 1e13) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t p2 = ai * p1 + p0;
        const std::int64_t q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) return std::make_pair(p2, q2);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = y - a;
        if (frac <= 0.0) break;
        y = 1.0 / frac;
    }
    return std::nullopt;
}

/// Common integer scaling of all values, when they are rational with small
/// denominators and the scaled sum fits comfortably into int64.
inline std::optional<std::vector<std::int64_t>> integer_scaling(const std::vector<double>& values) {
    std::vector<std::pair<std::int64_t, std::int64_t>> fr;
    fr.reserve(values.size());
    std::int64_t l = 1;
    for (double v : values) {
        auto f = rationalize(v);
        if (!f) return std::nullopt;
        fr.push_back(*f);
        l = std::lcm(l, f->second);
        if (l > 1000000000LL) return std::nullopt;
    }
    std::vector<std::int64_t> out;
    out.reserve(values.size());
    long double total = 0.0L;
    for (const auto& [p, q] : fr) {
        const long double scaled = static_cast<long double>(p) * static_cast<long double>(l / q);
        total += std::abs(scaled);
        if (total > 1e17L) return std::nullopt;
        out.push_back(p * (l / q));
    }
    return out;
}

/// Cut network over graph nodes plus source n and sink n + 1. Values are
/// listed as graph edges in slot order (i < j), then source arcs, then sink arcs.
struct CutNetwork {
    std::vector<double> values;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // graph edge endpoints
    std::vector<std::size_t> source_nodes;
    std::vector<std::size_t> sink_nodes;
};

inline CutNetwork build_cut_network(const Graph& g, const NodeFunction& sd, double dt) {
    CutNetwork net;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
            if (i < g.neighbor(k)) {
                net.edges.emplace_back(i, g.neighbor(k));
                net.values.push_back(wpow(g.weight(k), g.q()));
            }
    const double inv_dt = 1.0 / dt;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (sd[i] < 0.0) {
            net.source_nodes.push_back(i);
            net.values.push_back(-sd[i] * g.measure(i) * inv_dt);
        }
    for (std::size_t i = 0; i < g.size(); ++i)
        if (sd[i] > 0.0) {
            net.sink_nodes.push_back(i);
            net.values.push_back(sd[i] * g.measure(i) * inv_dt);
        }
    return net;
}

template <class Cap>
struct CutSolution {
    std::vector<bool> min_side;
    std::vector<bool> max_side;
    Cap cut_value{};
    Cap prev_value{};                      // cut value of the previous set
    std::vector<Cap> edge_flow;            // net flow i -> j per graph edge
    std::vector<Cap> source_flow;
    std::vector<Cap> sink_flow;
    std::vector<Cap> caps;
};

template <class Cap>
CutSolution<Cap> solve_cut(const Graph& g, const CutNetwork& net, const std::vector<Cap>& caps,
                           const NodeSet& prev, Cap tol) {
    const std::size_t n = g.size();
    const std::size_t s = n, t = n + 1;
    MaxFlow<Cap> mf(n + 2, tol);
    std::vector<std::pair<std::size_t, std::size_t>> epos, spos, tpos;
    std::size_t c = 0;
    for (const auto& [i, j] : net.edges) {
        epos.emplace_back(i, mf.add_edge(i, j, caps[c], caps[c]));
        ++c;
    }
    for (auto i : net.source_nodes) spos.emplace_back(s, mf.add_edge(s, i, caps[c++]));
    for (auto i : net.sink_nodes) tpos.emplace_back(i, mf.add_edge(i, t, caps[c++]));

    CutSolution<Cap> sol;
    sol.caps = caps;
    sol.cut_value = mf.solve(s, t);
    sol.min_side = mf.min_source_side();
    sol.max_side = mf.max_source_side();
    sol.min_side.resize(n);
    sol.max_side.resize(n);
    for (const auto& [u, p] : epos) sol.edge_flow.push_back(mf.flow(u, p));
    for (const auto& [u, p] : spos) sol.source_flow.push_back(mf.flow(u, p));
    for (const auto& [u, p] : tpos) sol.sink_flow.push_back(mf.flow(u, p));

    const auto pm = prev.mask(n);
    Cap pv{};
    c = 0;
    for (const auto& [i, j] : net.edges) {
        if (pm[i] != pm[j]) pv += caps[c];
        ++c;
    }
    for (auto i : net.source_nodes) {
        if (!pm[i]) pv += caps[c];
        ++c;
    }
    for (auto i : net.sink_nodes) {
        if (pm[i]) pv += caps[c];
        ++c;
    }
    sol.prev_value = pv;
    return sol;
}

}  // namespace detail

/// Flow certificate for the relaxed problem at u* = m (2 chi_{S*} - 1):
/// div phi + sd / dt + mu_upper - mu_lower = 0.
struct SubgradientCertificate {
    EdgeFunction phi;
    NodeFunction mu_upper;
    NodeFunction mu_lower;
};

struct McfSolveDetail {
    McfStepResult step;
    NodeFunction sd;
    SubgradientCertificate certificate;
};

inline McfSolveDetail mcf_solve(const Graph& g, const NodeSet& s, const McfParams& params) {
    if (!(params.dt > 0.0)) throw InvalidArgument("dt must be positive");
    McfSolveDetail out;
    out.sd = mcf_signed_distance(g, s, params.distance);
    detail::require_finite(out.sd);
    const detail::CutNetwork net = detail::build_cut_network(g, out.sd, params.dt);

    std::vector<bool> min_side, max_side;
    bool keep_prev = false;
    std::vector<double> eflow, sflow, tflow, caps;
    if (auto ints = detail::integer_scaling(net.values)) {
        auto sol = detail::solve_cut<std::int64_t>(g, net, *ints, s, 0);
        min_side = sol.min_side;
        max_side = sol.max_side;
        keep_prev = sol.prev_value <= sol.cut_value;
        std::int64_t scale_num = 0;
        double scale = 1.0;
        for (std::size_t k = 0; k < net.values.size(); ++k)
            if (net.values[k] != 0.0 && sol.caps[k] != 0) {
                scale_num = sol.caps[k];
                scale = net.values[k] / static_cast<double>(scale_num);
                break;
            }
        for (auto f : sol.edge_flow) eflow.push_back(f * scale);
        for (auto f : sol.source_flow) sflow.push_back(f * scale);
        for (auto f : sol.sink_flow) tflow.push_back(f * scale);
        out.step.exact_arithmetic = true;
    } else {
        const double tol = 1e-12 * std::max(1.0, *std::max_element(net.values.begin(), net.values.end()));
        auto sol = detail::solve_cut<double>(g, net, net.values, s, tol);
        min_side = sol.min_side;
        max_side = sol.max_side;
        keep_prev = sol.prev_value <= sol.cut_value + 1e-9 * std::max(1.0, std::abs(sol.cut_value));
        eflow = sol.edge_flow;
        sflow = sol.source_flow;
        tflow = sol.sink_flow;
    }
    out.step.minimizer_unique = min_side == max_side;
    const NodeSet minimal = NodeSet::from_mask(min_side);
    out.step.next_set = params.tie_break == TieBreak::PreferPrevious && keep_prev ? s : minimal;
    out.step.objective = mcf_functional_prime(g, out.step.next_set, s, params.dt, params.distance);

    // certificate for the inclusion-minimal minimizer
    SubgradientCertificate& cert = out.certificate;
    cert.phi = EdgeFunction(g);
    cert.mu_upper.assign(g.size(), 0.0);
    cert.mu_lower.assign(g.size(), 0.0);
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto [i, j] = net.edges[e];
        const std::size_t k = g.slot(i, j);
        const double wq = detail::wpow(g.weight(k), g.q());
        cert.phi[k] = -eflow[e] / wq;
        cert.phi[g.mirror(k)] = eflow[e] / wq;
    }
    const double inv_dt = 1.0 / params.dt;
    for (std::size_t a = 0; a < net.source_nodes.size(); ++a) {
        const std::size_t i = net.source_nodes[a];
        cert.mu_upper[i] = (-out.sd[i] * g.measure(i) * inv_dt - sflow[a]) / g.measure(i);
    }
    for (std::size_t a = 0; a < net.sink_nodes.size(); ++a) {
        const std::size_t i = net.sink_nodes[a];
        cert.mu_lower[i] = (out.sd[i] * g.measure(i) * inv_dt - tflow[a]) / g.measure(i);
    }
    return out;
}

inline McfStepResult mcf_step(const Graph& g, const NodeSet& s, const McfParams& params) {
    return mcf_solve(g, s, params).step;
}

/// Sets S_0, S_1, ... until a fixed point, an empty or full set, or max_steps.
inline std::vector<NodeSet> mcf_run(const Graph& g, const NodeSet& s0, const McfParams& params) {
    std::vector<NodeSet> sets{s0};
    for (int k = 0; k < params.max_steps; ++k) {
        const NodeSet& cur = sets.back();
        if (cur.is_trivial(g.size())) break;
        NodeSet next = mcf_step(g, cur, params).next_set;
        if (next == cur) break;
        sets.push_back(std::move(next));
    }
    return sets;
}

/// F(u) = TV(u) + dt^{-1} <u, sd>_V.
inline double relaxation_functional(const Graph& g, const NodeFunction& u, const NodeFunction& sd, double dt) {
    return tv_anisotropic(g, u) + inner_v(g, u, sd) / dt;
}

struct RelaxationSolution {
    NodeFunction u;     // minimizer over [-m, m]^V
    NodeSet level_set;  // {u > 0}
    NodeFunction sd;
    SubgradientCertificate certificate;
};

/// Minimizer of the relaxed functional over the box, read off the cut.
inline RelaxationSolution convex_relaxation_solve(const Graph& g, const NodeSet& s, double dt, double m = 1.0,
                                                  DistanceMode mode = DistanceMode::Interface) {
    if (!(m > 0.0)) throw InvalidArgument("m must be positive");
    McfParams p;
    p.dt = dt;
    p.tie_break = TieBreak::LexicographicMin;
    p.distance = mode;
    McfSolveDetail d = mcf_solve(g, s, p);
    RelaxationSolution out;
    out.u.assign(g.size(), -m);
    for (auto i : d.step.next_set) out.u[i] = m;
    out.level_set = superlevel_set(out.u, 0.0);
    out.sd = std::move(d.sd);
    out.certificate = std::move(d.certificate);
    return out;
}

/// Largest residual of the optimality system, including sign and support
/// violations, for u at the box bounds +-m.
inline double certificate_violation(const Graph& g, const NodeFunction& u, const NodeFunction& sd, double dt,
                                    const SubgradientCertificate& c) {
    double worst = 0.0;
    const NodeFunction dv = divergence(g, c.phi);
    const double m = norm_v_inf(u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(dv[i] + sd[i] / dt + c.mu_upper[i] - c.mu_lower[i]));
        worst = std::max(worst, std::max(-c.mu_upper[i], -c.mu_lower[i]));
        if (u[i] < m) worst = std::max(worst, std::abs(c.mu_upper[i]));
        if (u[i] > -m) worst = std::max(worst, std::abs(c.mu_lower[i]));
    }
    const EdgeFunction grad = gradient(g, u);
    for (std::size_t k = 0; k < grad.size(); ++k) {
        worst = std::max(worst, std::abs(c.phi[k]) - 1.0);
        if (grad[k] != 0.0) worst = std::max(worst, std::abs(c.phi[k] - detail::sgn(grad[k])));
    }
    worst = std::max(worst, c.phi.skew_defect(g));
    return std::max(worst, 0.0);
}

/// Exhaustive minimum of F'(., S) over all subsets; n <= 24.
inline std::pair<NodeSet, double> mcf_brute_force(const Graph& g, const NodeSet& s, double dt,
                                                  DistanceMode mode = DistanceMode::Interface) {
    const std::size_t n = g.size();
    if (n > 24) throw InvalidArgument("exhaustive search limited to 24 nodes");
    const NodeFunction sd = mcf_signed_distance(g, s, mode);
    detail::require_finite(sd);
    const double tv_s = tv_set(g, s);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double tv = 0.0;
        double lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            lin += sd[i] * g.measure(i);
            for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k)
                if (!(mask >> g.neighbor(k) & 1u)) tv += detail::wpow(g.weight(k), g.q());
        }
        const double f = tv - tv_s + lin / dt;
        if (f < best) {
            best = f;
            arg = mask;
        }
    }
    std::vector<bool> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = arg >> i & 1u;
    return {NodeSet::from_mask(m), best};
}

}  // namespace curvflow
