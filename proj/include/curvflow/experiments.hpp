#pragma once

// Canned example experiments: their graphs, initial sets and pass/fail checks.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "mbo.hpp"
#include "spectral.hpp"

namespace curvflow::experiments {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string name;
    std::vector<Check> checks;
    Json summary = Json::object();

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void check(std::string check_name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(check_name), ok, std::move(detail)});
    }
    Json to_json() const {
        Json cs = Json::array();
        for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return {{"experiment", name}, {"passed", passed()}, {"checks", cs}, {"summary", summary}};
    }
};

inline std::string fmt(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// ---------------------------------------------------------------------------
// Shipped initial sets. The torus, buckyball, lattice and two-moons sets are
// approximate reconstructions chosen to match the expected bounds and
// iteration counts; see the README.

inline constexpr std::size_t torus_n1 = 32;
inline constexpr std::size_t torus_n2 = 12;

/// 15 x 8 block at columns 10..24, rows 1..8, with a 2 x 3 notch cut from
/// its top-right corner. 114 nodes, max |curvature| 2.
inline NodeSet torus_initial_set() {
    std::vector<bool> m(torus_n1 * torus_n2, false);
    for (std::size_t y = 1; y < 9; ++y)
        for (std::size_t x = 10; x < 25; ++x) m[y * torus_n1 + x] = true;
    for (std::size_t y = 1; y < 4; ++y)
        for (std::size_t x = 23; x < 25; ++x) m[y * torus_n1 + x] = false;
    return NodeSet::from_mask(m);
}

/// Nontrivial set made of whole columns of the n1 x n2 torus.
inline bool is_vertical_strip(const NodeSet& s, std::size_t n1, std::size_t n2) {
    if (s.is_trivial(n1 * n2)) return false;
    const auto m = s.mask(n1 * n2);
    for (std::size_t x = 0; x < n1; ++x)
        for (std::size_t y = 1; y < n2; ++y)
            if (m[y * n1 + x] != m[x]) return false;
    return true;
}

/// Connected 14-node patch of the buckyball in generator numbering.
inline NodeSet buckyball_cap() { return NodeSet({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 35, 36}, 60); }

/// Leaves of one branch of the depth-3 binary tree (nodes 1-4 when counted
/// from 1).
inline NodeSet tree_initial_set() { return NodeSet({0, 1, 2, 3}, 15); }

/// Nodes 1, 2, 3, 4, 9, 10, 13 when counted from 1.
inline NodeSet tree_target_set() { return NodeSet({0, 1, 2, 3, 8, 9, 12}, 15); }

/// Grid of the flip-interval example: 3 x 3, r = 1, S = {4, 6, 7, 8, 9}
/// counted from 1, and the node examined is 5.
inline Graph flip_grid() { return grid(3, 3, 1.0, 1.0, 1.0); }
inline NodeSet flip_grid_set() { return NodeSet({3, 5, 6, 7, 8}, 9); }
inline constexpr std::size_t flip_grid_node = 4;

inline LatticeSpec lattice_spec() { return {14, 14, 14}; }

namespace detail {

inline NodeSet lattice_block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    const auto sp = lattice_spec();
    const std::size_t cols = sp.square_cols + sp.triangular_cols;
    std::vector<bool> m(sp.rows * cols, false);
    for (std::size_t a = r0; a < r1; ++a)
        for (std::size_t b = c0; b < c1; ++b) m[a * cols + b] = true;
    return NodeSet::from_mask(m);
}

}  // namespace detail

/// Interior block straddling both patches (rows 3..10, columns 5..22).
inline NodeSet lattice_interior_set() { return detail::lattice_block(3, 11, 5, 23); }

/// Block in the top-right corner of the triangular patch (rows 0..7,
/// columns 16..27).
inline NodeSet lattice_border_set() { return detail::lattice_block(0, 8, 16, 28); }

/// Nodes whose second observed coordinate exceeds 1/4.
inline NodeSet moons_initial_set(const MoonsSample& s) {
    std::vector<bool> m(s.points.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = s.points[i][1] > 0.25;
    return NodeSet::from_mask(m);
}

/// Fraction of nodes labelled consistently with `truth`, up to swapping sides.
inline double purity(const NodeSet& s, const NodeSet& truth, std::size_t n) {
    const auto a = s.mask(n), b = truth.mask(n);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += a[i] == b[i];
    return static_cast<double>(std::max(agree, n - agree)) / static_cast<double>(n);
}

inline Json one_based(const NodeSet& s) {
    Json a = Json::array();
    for (auto i : s) a.push_back(i + 1);
    return a;
}

inline int iterations(const MboTrace& tr) { return tr.converged_at ? *tr.converged_at : -1; }

// ---------------------------------------------------------------------------
// Experiments

namespace detail {

inline void spectrum_check(Report& rep, const SpectralDecomposition& sd, const std::vector<double>& expect, double tol) {
    double err = 0.0;
    for (std::size_t k = 0; k < expect.size(); ++k) err = std::max(err, std::abs(sd.eigenvalues[k] - expect[k]));
    rep.check("spectrum", err <= tol, "max error " + fmt(err, 3));
    rep.summary["eigenvalues"] = sd.eigenvalues;
}

/// One-step pinning just below tau_c and a trivial step just above.
inline void bracket_check(Report& rep, const Graph& g, const NodeSet& s, double tau_c, double delta) {
    const NodeSet below = mbo_step(g, s, tau_c - delta);
    const NodeSet above = mbo_step(g, s, tau_c + delta);
    rep.check("pinned below tau_c", below == s, "tau = " + fmt(tau_c - delta, 8));
    rep.check("trivial above tau_c", above.is_trivial(g.size()) && above != s, "tau = " + fmt(tau_c + delta, 8));
    rep.summary["tau_c"] = tau_c;
}

}  // namespace detail

inline Report repro_complete() {
    Report rep{"complete", {}, Json::object()};
    const Graph g = complete(4);
    const auto sd = eigendecompose(g);
    detail::spectrum_check(rep, sd, {0, 4, 4, 4}, 1e-8);
    const NodeSet s({0}, 4);
    const double rs = volume(g, s) / g.volume();
    const double tau_c = complete_graph_critical_tau(sd.rho, rs);
    detail::bracket_check(rep, g, s, tau_c, 1e-3);
    const auto tb = tau_bounds(g, s, sd);
    rep.check("tau_rho < tau_c < tau_t", tb.tau_rho < tau_c && tau_c < tb.tau_t,
              fmt(tb.tau_rho) + " < " + fmt(tau_c) + " < " + fmt(tb.tau_t));
    rep.summary["tau_rho"] = tb.tau_rho;
    rep.summary["tau_t"] = tb.tau_t;
    return rep;
}

inline Report repro_star() {
    Report rep{"star", {}, Json::object()};
    const Graph g = star(5);
    const auto sd = eigendecompose(g);
    detail::spectrum_check(rep, sd, {0, 1, 1, 1, 5}, 1e-8);
    const NodeSet s({0}, 5);
    const double tau_c = std::log(8.0 / 3.0) / 5.0;
    detail::bracket_check(rep, g, s, tau_c, 1e-3);
    return rep;
}

inline constexpr double tree_tau_step = 0.05;
inline constexpr int tree_tau_count = 100;  // tau = 0.05, 0.10, ..., 5.00

/// The MBO scan runs on the r = 0 tree; with r = 1 the heat flow never lifts
/// node 9 to 1/2, see the README. The normalized cut uses r = 1 volumes.
inline Report repro_tree() {
    Report rep{"tree", {}, Json::object()};
    const NodeSet s0 = tree_initial_set();
    const NodeSet target = tree_target_set();
    const Graph g0 = regular_tree(3, 2, 1.0, 1.0, 0.0);
    const Graph g1 = regular_tree(3, 2, 1.0, 1.0, 1.0);
    const auto sd0 = eigendecompose(g0);
    const auto sd1 = eigendecompose(g1);
    double lo = -1.0, hi = -1.0;
    bool reached_r1 = false;
    for (int k = 1; k <= tree_tau_count; ++k) {
        const double tau = tree_tau_step * k;
        if (mbo_run(g0, s0, {tau, 100}, &sd0).final_set() == target) {
            if (lo < 0) lo = tau;
            hi = tau;
        }
        if (mbo_run(g1, s0, {tau, 100}, &sd1).final_set() == target) reached_r1 = true;
    }
    rep.check("MBO reaches {1,2,3,4,9,10,13}", lo > 0, lo > 0 ? "r = 0, tau in [" + fmt(lo) + ", " + fmt(hi) + "]" : "no tau on the grid");
    NodeSet final_set = s0;
    int iters = -1;
    if (lo > 0) {
        const double tau = 0.5 * (lo + hi);
        const auto tr = mbo_run(g0, s0, {tau, 100}, &sd0);
        final_set = tr.final_set();
        iters = iterations(tr);
        rep.summary["tau"] = tau;
    }
    // exhaustive normalized cut over all bipartitions with 0 in the first part
    const double target_cut = balanced_cut(g1, {target, target.complement(15)});
    double best = infinity;
    for (unsigned mask = 1; mask < (1u << 15) - 1; mask += 2) {
        std::vector<bool> m(15);
        for (unsigned i = 0; i < 15; ++i) m[i] = (mask >> i) & 1u;
        const NodeSet a = NodeSet::from_mask(m);
        best = std::min(best, balanced_cut(g1, {a, a.complement(15)}));
    }
    rep.check("target minimizes the normalized cut", target_cut <= best + 1e-12,
              "C_1(target) = " + fmt(target_cut) + ", min = " + fmt(best));
    rep.summary["final_set"] = one_based(final_set);
    rep.summary["iterations_to_stationary"] = iters;
    rep.summary["tau_window_r0"] = {lo, hi};
    rep.summary["reached_with_r1"] = reached_r1;
    rep.summary["normalized_cut"] = target_cut;
    return rep;
}

/// The flip theorem's own hypothesis fails on this instance (kappa^2 = 9/16
/// against ||(Delta')^2 chi||_inf = 3/2); the reduced quantity reproduces the
/// expected interval, but the heat flow flips node 5 only from tau ~ 2.15.
inline Report repro_grid_interval() {
    Report rep{"grid-interval", {}, Json::object()};
    const Graph g = flip_grid();
    const NodeSet s = flip_grid_set();
    const auto fa = local_flip_analysis(g, s, flip_grid_node);
    const double t1 = 3.0 - std::sqrt(5.0), t2 = 3.0 + std::sqrt(5.0);
    auto err_of = [&](const std::optional<std::pair<double, double>>& iv) {
        return iv ? std::max(std::abs(iv->first - t1), std::abs(iv->second - t2)) : infinity;
    };
    rep.check("flip theorem interval is (3 - sqrt 5, 3 + sqrt 5)", err_of(fa.interval) <= 1e-12,
              fa.interval ? "error " + fmt(err_of(fa.interval), 3)
                          : "no interval: kappa^2 = " + fmt(fa.kappa * fa.kappa) + ", N = " + fmt(fa.n_norm));
    rep.check("reduced form gives (3 - sqrt 5, 3 + sqrt 5)", err_of(fa.interval_reduced) <= 1e-12,
              "N_reduced = " + fmt(fa.n_reduced));
    int flips = 0;
    std::string missed;
    constexpr int samples = 16;
    for (int k = 0; k < samples; ++k) {
        const double tau = t1 + (t2 - t1) * (k + 0.5) / samples;
        if (mbo_step(g, s, tau).contains(flip_grid_node)) ++flips;
        else missed += (missed.empty() ? "" : " ") + fmt(tau, 4);
    }
    rep.check("node 5 flips at 16 interior tau", flips == samples,
              std::to_string(flips) + "/16" + (missed.empty() ? "" : ", no flip at " + missed));
    const auto gc = local_gap_condition(g, s, flip_grid_node);
    rep.summary["kappa"] = fa.kappa;
    rep.summary["n_norm"] = fa.n_norm;
    rep.summary["n_reduced"] = fa.n_reduced;
    rep.summary["gap_condition"] = {{"lhs", gc.lhs}, {"rhs", gc.rhs}, {"holds", gc.holds()}};
    rep.summary["tau_interval"] = fa.interval ? Json{fa.interval->first, fa.interval->second} : Json();
    rep.summary["tau_interval_reduced"] =
        fa.interval_reduced ? Json{fa.interval_reduced->first, fa.interval_reduced->second} : Json();
    rep.summary["flips"] = flips;
    return rep;
}

namespace detail {

inline Report torus_run(const std::string& name, double tau, int expect_iters, bool expect_strip) {
    Report rep{name, {}, Json::object()};
    const Graph g = torus(torus_n1, torus_n2);
    const auto sd = eigendecompose(g);
    const NodeSet s0 = torus_initial_set();
    const auto tr = mbo_run(g, s0, {tau, 200}, &sd);
    const int it = iterations(tr);
    const bool strip = is_vertical_strip(tr.final_set(), torus_n1, torus_n2);
    rep.check("iterates become stationary", it >= 0);
    rep.check(expect_strip ? "final set is a vertical strip" : "final set is not a strip", strip == expect_strip);
    rep.check("iterations within 2 of " + std::to_string(expect_iters), it >= 0 && std::abs(it - expect_iters) <= 2,
              std::to_string(it));
    if (expect_strip && strip) {
        bool stat = true;
        for (double t : {1.12, 4.0}) stat = stat && mbo_step(g, tr.final_set(), t, &sd) == tr.final_set();
        rep.check("strip is stationary for tau = 1.12 and 4", stat);
    }
    const auto tb = tau_bounds(g, s0, sd);
    rep.summary["tau"] = tau;
    rep.summary["iterations_to_stationary"] = it;
    rep.summary["final_is_strip"] = strip;
    rep.summary["final_size"] = tr.final_set().size();
    rep.summary["initial_size"] = s0.size();
    rep.summary["tau_rho"] = tb.tau_rho;
    rep.summary["tau_kappa"] = tb.tau_kappa;
    return rep;
}

}  // namespace detail

inline Report repro_torus_freeze() {
    Report rep = detail::torus_run("torus-freeze", 1.12, 4, false);
    const double tr = rep.summary["tau_rho"].get<double>();
    const double tk = rep.summary["tau_kappa"].get<double>();
    rep.check("tau_rho ~ 0.0057", std::abs(tr - 0.0057) < 5e-5, fmt(tr));
    rep.check("tau_kappa = 1/4", std::abs(tk - 0.25) < 1e-12, fmt(tk));
    return rep;
}

inline Report repro_torus_strip() { return detail::torus_run("torus-strip", 4.0, 5, true); }

struct BuckyballRegimes {
    double tau_pin = 0.0;      // sup of the pinned range from 0
    double tau_trivial = 0.0;  // inf of the one-step-trivial range
};

/// Both thresholds by a 0.01 scan on (0, 6] refined by bisection to 1e-6.
inline BuckyballRegimes buckyball_regimes(const Graph& g, const NodeSet& s, const SpectralDecomposition& sd) {
    auto pinned = [&](double t) { return mbo_step(g, s, t, &sd) == s; };
    auto trivial = [&](double t) { return mbo_step(g, s, t, &sd).is_trivial(g.size()); };
    BuckyballRegimes r;
    double a = 0.0, b = 0.0;
    for (int k = 1; k <= 600; ++k) {
        if (!pinned(0.01 * k)) {
            b = 0.01 * k;
            break;
        }
        a = 0.01 * k;
    }
    while (b - a > 1e-6) (pinned(0.5 * (a + b)) ? a : b) = 0.5 * (a + b);
    r.tau_pin = a;
    a = 6.0;
    b = 6.0;
    for (int k = 600; k >= 1; --k) {
        if (!trivial(0.01 * k)) {
            a = 0.01 * k;
            break;
        }
        b = 0.01 * k;
    }
    while (b - a > 1e-6) (trivial(0.5 * (a + b)) ? b : a) = 0.5 * (a + b);
    r.tau_trivial = b;
    return r;
}

inline Report repro_buckyball() {
    Report rep{"buckyball", {}, Json::object()};
    const Graph g = buckyball();
    const auto sd = eigendecompose(g);
    const double l2 = sd.eigenvalues[1], ln = sd.eigenvalues.back();
    rep.check("lambda_2 = 0.2434", std::abs(l2 - 0.2434) <= 5e-4, fmt(l2));
    rep.check("lambda_60 = 5.6180", std::abs(ln - 5.6180) <= 5e-4, fmt(ln));
    const NodeSet s = buckyball_cap();
    const auto tb = tau_bounds(g, s, sd);
    rep.check("tau_rho = 0.0223", std::round(tb.tau_rho * 1e4) == 223.0, fmt(tb.tau_rho));
    rep.check("tau_t = 15.1811", std::round(tb.tau_t_printed * 1e4) == 151811.0, fmt(tb.tau_t_printed));
    const auto reg = buckyball_regimes(g, s, sd);
    const double mid = 0.5 * (reg.tau_pin + reg.tau_trivial);
    const auto tr_mid = mbo_run(g, s, {mid, 200}, &sd);
    const bool shrink = tr_mid.final_set().empty() && iterations(tr_mid) > 1;
    rep.check("pinned / shrinking / trivial regimes", reg.tau_pin < reg.tau_trivial && shrink,
              "pinned below " + fmt(reg.tau_pin) + ", trivial above " + fmt(reg.tau_trivial));
    rep.check("pinning threshold near 1.89", std::abs(reg.tau_pin - 1.89) <= 0.3, fmt(reg.tau_pin));
    rep.check("trivial threshold near 3.54", std::abs(reg.tau_trivial - 3.54) <= 0.3, fmt(reg.tau_trivial));
    const auto tr2 = mbo_run(g, s, {2.0, 200}, &sd);
    rep.summary["lambda2"] = l2;
    rep.summary["lambda60"] = ln;
    rep.summary["tau_rho"] = tb.tau_rho;
    rep.summary["tau_t"] = tb.tau_t;
    rep.summary["tau_t_printed"] = tb.tau_t_printed;
    rep.summary["tau_pin"] = reg.tau_pin;
    rep.summary["tau_trivial"] = reg.tau_trivial;
    rep.summary["tau2_iterations"] = iterations(tr2);
    rep.summary["tau2_final_size"] = tr2.final_set().size();
    return rep;
}

inline Report repro_lattices() {
    Report rep{"lattices", {}, Json::object()};
    const auto sp = lattice_spec();
    const Graph g = adjoined_lattices(sp);
    const std::size_t cols = sp.square_cols + sp.triangular_cols;
    auto in_square = [&](std::size_t i) { return i % cols < sp.square_cols; };

    const NodeSet a0 = lattice_interior_set();
    const auto ta = mbo_run(g, a0, {0.8, 500});
    std::size_t sq0 = 0, sq1 = 0, tri1 = 0;
    for (auto i : a0) sq0 += in_square(i);
    for (auto i : ta.final_set()) (in_square(i) ? sq1 : tri1) += 1;
    rep.check("tau 0.8: triangular part vanishes", iterations(ta) >= 0 && tri1 == 0, std::to_string(tri1) + " nodes left");
    rep.check("tau 0.8: square part only loses corners", sq1 >= sq0 * 9 / 10 && sq1 <= sq0,
              std::to_string(sq1) + " of " + std::to_string(sq0));

    const NodeSet b0 = lattice_border_set();
    const auto tb = mbo_run(g, b0, {0.9, 500});
    bool on_border = false;
    for (auto i : tb.final_set()) on_border = on_border || i / cols == 0 || i % cols == cols - 1;
    const bool shrank = tb.final_set().size() < b0.size() && !tb.final_set().empty();
    rep.check("tau 0.9: shrinks but stays pinned on the border", iterations(tb) >= 0 && shrank && on_border,
              std::to_string(tb.final_set().size()) + " of " + std::to_string(b0.size()));
    rep.summary["interior_iterations"] = iterations(ta);
    rep.summary["border_iterations"] = iterations(tb);
    return rep;
}

inline Report repro_two_moons() {
    Report rep{"two-moons", {}, Json::object()};
    MoonsConfig cfg;
    cfg.seed = 1;
    const MoonsSample ms = two_moons(cfg);
    rep.check("graph is connected", is_connected(ms.graph));
    rep.check("ground truth is 300/300", ms.ground_truth.size() == 300);
    const NodeSet s0 = moons_initial_set(ms);
    const auto tr = mbo_run(ms.graph, s0, {5.0, 30});
    const int it = iterations(tr);
    const double p = purity(tr.final_set(), ms.ground_truth, ms.graph.size());
    rep.check("converges within 30 iterations", it >= 0, std::to_string(it));
    rep.check("purity >= 0.9", p >= 0.9, fmt(p, 4));
    rep.summary["iterations_to_stationary"] = it;
    rep.summary["purity"] = p;
    rep.summary["initial_purity"] = purity(s0, ms.ground_truth, ms.graph.size());
    rep.summary["edges"] = ms.graph.num_edges();
    return rep;
}

inline const std::vector<std::string>& repro_names() {
    static const std::vector<std::string> names = {"complete",     "star",        "tree",      "grid-interval", "torus-freeze",
                                                   "torus-strip",  "buckyball",   "lattices",  "two-moons"};
    return names;
}

inline Report repro(const std::string& name) {
    if (name == "complete") return repro_complete();
    if (name == "star") return repro_star();
    if (name == "tree") return repro_tree();
    if (name == "grid-interval") return repro_grid_interval();
    if (name == "torus-freeze") return repro_torus_freeze();
    if (name == "torus-strip") return repro_torus_strip();
    if (name == "buckyball") return repro_buckyball();
    if (name == "lattices") return repro_lattices();
    if (name == "two-moons") return repro_two_moons();
    throw UnknownExperiment("unknown experiment '" + name + "'");
}

}  // namespace curvflow::experiments
