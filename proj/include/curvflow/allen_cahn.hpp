#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "detail/dopri5.hpp"
#include "graph.hpp"
#include "spectral.hpp"

namespace curvflow {

/// W(u) = (u^2 - 1)^2.
inline double double_well(double u) {
    const double a = u * u - 1.0;
    return a * a;
}

inline double double_well_derivative(double u) { return 4.0 * u * (u * u - 1.0); }

struct AcParams {
    double eps = 1.0;
    double t_end = 1.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    bool event_detection = true;
    double output_dt = 0.0;  // spacing of recorded states; 0 records every accepted step
    long max_steps = 10000000;
};

struct SignChange {
    double time;
    std::size_t node;
};

struct AcTrace {
    std::vector<double> times;
    std::vector<NodeFunction> states;
    std::vector<double> gl_energy;
    std::vector<SignChange> sign_changes;
    bool stationary = false;
    long steps = 0;
};

/// (1/2)|grad u|^2 + (1/eps) sum_i W(u_i).
inline double gl_energy(const Graph& g, const NodeFunction& u, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    long double w = 0.0L;
    for (double x : u) w += double_well(x);
    return dirichlet_energy(g, u) + static_cast<double>(w) / eps;
}

/// -Delta u - eps^{-1} d^{-r} W'(u).
inline void ac_rhs(const Graph& g, double eps, const NodeFunction& u, NodeFunction& out) {
    out.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = g.offset(i); k < g.offset(i + 1); ++k) s += g.weight(k) * (u[i] - u[g.neighbor(k)]);
        out[i] = -(s + double_well_derivative(u[i]) / eps) / g.measure(i);
    }
}

inline NodeFunction ac_rhs(const Graph& g, double eps, const NodeFunction& u) {
    NodeFunction out;
    ac_rhs(g, eps, u, out);
    return out;
}

namespace detail {

/// Cubic Hermite interpolant on [t0, t1].
inline double hermite(double t0, double t1, double y0, double y1, double f0, double f1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

inline int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace detail

inline AcTrace ace_evolve(const Graph& g, const NodeFunction& u0, const AcParams& p) {
    detail::check_size(g, u0);
    if (!(p.eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(p.t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    detail::Dopri5Options opt;
    opt.rel_tol = p.rel_tol;
    opt.abs_tol = p.abs_tol;
    opt.max_steps = p.max_steps;
    detail::Dopri5 solver([&](double, const detail::State& y, detail::State& dy) { ac_rhs(g, p.eps, y, dy); },
                          g.size(), opt);

    AcTrace tr;
    double t = 0.0;
    NodeFunction u = u0;
    auto record = [&](double time, const NodeFunction& v) {
        tr.times.push_back(time);
        tr.states.push_back(v);
        tr.gl_energy.push_back(gl_energy(g, v, p.eps));
    };
    record(t, u);
    double next_out = p.output_dt;

    double h = std::min(solver.initial_step(t, u), p.t_end);
    NodeFunction prev(u), fprev(solver.derivative());
    std::vector<int> sign(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sign[i] = detail::sign_of(u[i]);

    while (t < p.t_end) {
        if (norm_v_inf(solver.derivative()) < p.abs_tol) {
            tr.stationary = true;
            break;
        }
        if (tr.steps >= p.max_steps) throw IntegratorFailure("step budget exhausted");
        const double h_floor = opt.h_min * std::max(1.0, std::abs(t));
        if (h < h_floor) throw IntegratorFailure("step size underflow at t = " + std::to_string(t));
        h = std::min(h, p.t_end - t);
        const double t0 = t;
        const bool last = t + h >= p.t_end;
        if (!solver.step(t, u, h)) continue;
        if (last) t = p.t_end;
        ++tr.steps;

        if (p.event_detection) {
            const NodeFunction& fnew = solver.derivative();
            for (std::size_t i = 0; i < g.size(); ++i) {
                const int sn = detail::sign_of(u[i]);
                if (sn == sign[i] || sn == 0) continue;
                // bisection on the step interpolant
                double a = t0, b = t;
                const double ya = prev[i];
                while (b - a > 1e-9) {
                    const double mid = 0.5 * (a + b);
                    const double ym = detail::hermite(t0, t, prev[i], u[i], fprev[i], fnew[i], mid);
                    if (detail::sign_of(ym) == detail::sign_of(ya) && ym != 0.0) a = mid;
                    else b = mid;
                }
                tr.sign_changes.push_back({0.5 * (a + b), i});
                sign[i] = sn;
            }
        }
        if (p.output_dt <= 0.0 || t >= next_out || t >= p.t_end) {
            record(t, u);
            while (p.output_dt > 0.0 && next_out <= t) next_out += p.output_dt;
        }
        prev = u;
        fprev = solver.derivative();
    }
    if (tr.times.back() != t) record(t, u);
    return tr;
}

struct AcPinningBounds {
    double eps_rho = 0.0;
    double eps_kappa = 0.0;
    // variant with the factor 4 alpha (1 - alpha)^2 in place of 4 alpha (1 - alpha^2)
    double eps_kappa_alt = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    double laplacian_sup = 0.0;  // a-priori bound on sup_t |Delta u(t)|_inf
};

/// Bounds on eps below which no component of the solution changes sign.
/// C bounds |u(t)|_V through the invariant ball; the sup of |Delta u| over the
/// trajectory is bounded a priori by the smaller of rho C d_-^{-r/2} and
/// 2 max(1, |u0|_inf) max_i d_i^{1-r}, the latter from the invariant box
/// [-max(1, |u0|_inf), max(1, |u0|_inf)].
inline AcPinningBounds ac_pinning_bounds(const Graph& g, const NodeFunction& u0, double rho) {
    detail::check_size(g, u0);
    double amin = std::numeric_limits<double>::infinity();
    for (double x : u0) amin = std::min(amin, std::abs(x));
    if (!(amin > 0.0)) throw ZeroInitialComponent("initial state has a zero component");
    AcPinningBounds b;
    b.alpha = std::min(amin, 0.999);
    const double n = static_cast<double>(g.size());
    const double dplus_r = std::pow(g.max_degree(), g.r());
    b.c = std::max(norm_v(g, u0), std::sqrt(4.25 * n * dplus_r));
    const double a = b.alpha;
    const double force = 4.0 * a * (1.0 - a * a);
    b.eps_rho = force / (b.c * rho * std::sqrt(dplus_r));
    double dmax_1r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dmax_1r = std::max(dmax_1r, g.degree(i) / g.measure(i));
    const double box = std::max(1.0, norm_v_inf(u0));
    b.laplacian_sup = std::min(rho * b.c / std::pow(g.min_degree(), g.r() / 2), 2.0 * box * dmax_1r);
    b.eps_kappa = force / (b.laplacian_sup * dplus_r);
    b.eps_kappa_alt = 4.0 * a * (1.0 - a) * (1.0 - a) / (b.laplacian_sup * dplus_r);
    return b;
}

inline AcPinningBounds ac_pinning_bounds(const Graph& g, const NodeFunction& u0) {
    return ac_pinning_bounds(g, u0, eigendecompose(g).rho);
}

}  // namespace curvflow
