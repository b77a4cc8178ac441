// curvflow command-line front end.
//
// Exit codes: 0 success / all checks passed, 1 a check failed, 2 bad input,
// 3 internal error. Errors are reported as one JSON object on stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "curvflow/curvflow.hpp"

namespace fs = std::filesystem;
using namespace curvflow;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kInternalError = 3 };

struct Context {
    std::optional<Graph> graph;
    std::optional<Layout> layout;
    std::optional<MoonsSample> moons;
    std::string family;
    std::size_t n1 = 0, n2 = 0;
};

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ParseError(std::string("field '") + key + "' has the wrong type");
    }
}

/// Graph from {"family": ..., params} or {"file": path}.
Context build_graph_spec(const Json& spec, std::uint64_t seed) {
    if (!spec.is_object()) throw ParseError("graph spec must be an object");
    Context c;
    if (spec.contains("file")) {
        c.graph = read_graph(spec.at("file").get<std::string>());
        c.family = "file";
        return c;
    }
    const std::string fam = get_or<std::string>(spec, "family", "");
    const double w = get_or(spec, "weight", 1.0);
    const double q = get_or(spec, "q", 1.0);
    const double r = get_or(spec, "r", 0.0);
    c.family = fam;
    auto sz = [&](const char* key, std::size_t def) { return get_or<std::size_t>(spec, key, def); };
    if (fam == "complete") c.graph = complete(sz("n", 4), w, q, r);
    else if (fam == "star") c.graph = star(sz("n", 5), w, q, r);
    else if (fam == "cycle") c.graph = cycle(sz("n", 8), w, q, r);
    else if (fam == "path") c.graph = path(sz("n", 8), w, q, r);
    else if (fam == "torus") {
        c.n1 = sz("n1", 32);
        c.n2 = sz("n2", 12);
        c.graph = torus(c.n1, c.n2, w, q, r);
        c.layout = torus_layout(c.n1, c.n2);
    } else if (fam == "grid") {
        const std::size_t rows = sz("rows", 3), cols = sz("cols", 3);
        c.graph = grid(rows, cols, w, q, r);
        c.layout = grid_layout(rows, cols);
    } else if (fam == "tree") {
        const std::size_t depth = sz("depth", 3), children = sz("children", 2);
        c.graph = regular_tree(depth, children, w, q, r);
        c.layout = regular_tree_layout(depth, children);
    } else if (fam == "buckyball") {
        c.graph = buckyball(w, q, r);
        c.layout = buckyball_layout();
    } else if (fam == "lattices") {
        LatticeSpec ls{sz("rows", 14), sz("square_cols", 14), sz("triangular_cols", 14)};
        c.graph = adjoined_lattices(ls, w, q, r);
        c.layout = adjoined_lattices_layout(ls);
    } else if (fam == "two-moons") {
        MoonsConfig mc;
        mc.n_points = sz("points", mc.n_points);
        mc.ambient_dim = sz("dim", mc.ambient_dim);
        mc.noise_sigma = get_or(spec, "sigma", mc.noise_sigma);
        mc.k = sz("k", mc.k);
        mc.seed = get_or<std::uint64_t>(spec, "seed", seed);
        mc.q = q;
        mc.r = r;
        mc.resample_on_degenerate = get_or(spec, "resample", false);
        c.moons = two_moons(mc);
        c.graph = c.moons->graph;
        c.layout = c.moons->clean;
    } else {
        throw ParseError("unknown graph family '" + fam + "'");
    }
    return c;
}

/// Named initial sets shipped with the examples.
NodeSet asset_set(const std::string& name, const Context& c) {
    const std::size_t n = c.graph->size();
    auto need = [&](std::size_t expect) {
        if (n != expect) throw ParseError("asset '" + name + "' needs a graph with " + std::to_string(expect) + " nodes");
    };
    if (name == "torus") return need(384), experiments::torus_initial_set();
    if (name == "buckyball") return need(60), experiments::buckyball_cap();
    if (name == "tree") return need(15), experiments::tree_initial_set();
    if (name == "grid-flip") return need(9), experiments::flip_grid_set();
    if (name == "lattice-interior") return need(392), experiments::lattice_interior_set();
    if (name == "lattice-border") return need(392), experiments::lattice_border_set();
    if (name == "moons") {
        if (!c.moons) throw ParseError("asset 'moons' needs the two-moons family");
        return experiments::moons_initial_set(*c.moons);
    }
    throw ParseError("unknown asset '" + name + "'");
}

/// Initial condition: a JSON array of node ids, {"set": [...]}, {"asset": name}
/// or {"file": path}.
NodeSet parse_set(const Json& j, const Context& c) {
    if (j.is_array()) return node_set_from_json(j, c.graph->size());
    if (j.is_object() && j.contains("set")) return node_set_from_json(j.at("set"), c.graph->size());
    if (j.is_object() && j.contains("asset")) return asset_set(j.at("asset").get<std::string>(), c);
    if (j.is_object() && j.contains("file")) return node_set_from_json(read_json_file(j.at("file").get<std::string>()), c.graph->size());
    throw ParseError("cannot read an initial set from this JSON");
}

/// Node function: a JSON array or {"function": [...]}; a set spec becomes
/// 2 chi_S - 1.
NodeFunction parse_function(const Json& j, const Context& c) {
    const std::size_t n = c.graph->size();
    if (j.is_object() && j.contains("function")) return node_function_from_json(j.at("function"), n);
    if (j.is_array() && j.size() == n && !j.empty() && j[0].is_number_float()) return node_function_from_json(j, n);
    const NodeSet s = parse_set(j, c);
    NodeFunction u(n, -1.0);
    for (auto i : s) u[i] = 1.0;
    return u;
}

Json set_json(const NodeSet& s) { return node_set_to_json(s); }

TieBreak parse_tie_break(const std::string& s) {
    if (s == "prefer-previous") return TieBreak::PreferPrevious;
    if (s == "lexicographic-min") return TieBreak::LexicographicMin;
    throw ParseError("tie break must be prefer-previous or lexicographic-min");
}

DistanceMode parse_distance(const std::string& s) {
    if (s == "interface") return DistanceMode::Interface;
    if (s == "one-sided") return DistanceMode::OneSided;
    throw ParseError("distance must be interface or one-sided");
}

Json tau_bounds_json(const TauBounds& b) {
    return {{"tau_rho", b.tau_rho},     {"tau_kappa", b.tau_kappa},         {"tau_t", b.tau_t},
            {"tau_t_printed", b.tau_t_printed}, {"tau_universal", b.tau_universal}, {"lambda2", b.lambda2},
            {"rho", b.rho},             {"gap_condition", b.gap_condition}};
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(); }

Json function_json(const NodeFunction& u) {
    Json a = Json::array();
    for (double x : u) a.push_back(finite_or_null(x));
    return a;
}

// ---- runners ---------------------------------------------------------------

struct MboResult {
    MboTrace trace;
    Json summary;
};

MboResult run_mbo(const Graph& g, const NodeSet& s0, double tau, int max_iter, std::ostream* trace_out) {
    MboResult r;
    r.trace = mbo_run(g, s0, {tau, max_iter});
    if (trace_out) {
        JsonLinesWriter w(*trace_out);
        for (std::size_t k = 0; k < r.trace.sets.size(); ++k)
            w.write({{"k", k}, {"set", set_json(r.trace.sets[k])}, {"tv", r.trace.tv[k]},
                     {"lyapunov", r.trace.lyapunov[k]}, {"mass", r.trace.mass[k]}});
    }
    r.summary = {{"tau", tau},
                 {"iterations_to_stationary", r.trace.converged_at ? Json(*r.trace.converged_at) : Json()},
                 {"stationary", r.trace.converged_at.has_value()},
                 {"final_set", set_json(r.trace.final_set())},
                 {"final_size", r.trace.final_set().size()},
                 {"lyapunov", r.trace.lyapunov}};
    return r;
}

std::vector<NodeSet> run_mcf(const Graph& g, const NodeSet& s0, const McfParams& p, std::ostream* out, Json& summary) {
    std::vector<NodeSet> sets{s0};
    std::optional<JsonLinesWriter> w;
    if (out) w.emplace(*out);
    if (w) w->write({{"k", 0}, {"set", set_json(s0)}, {"tv", tv_set(g, s0)}});
    bool fixed = false;
    for (int k = 0; k < p.max_steps; ++k) {
        const NodeSet& cur = sets.back();
        if (cur.is_trivial(g.size())) break;
        const McfStepResult st = mcf_step(g, cur, p);
        const bool same = st.next_set == cur;
        if (w)
            w->write({{"k", k + 1}, {"set", set_json(st.next_set)}, {"objective", st.objective},
                      {"tv", tv_set(g, st.next_set)}, {"unique", st.minimizer_unique}, {"exact", st.exact_arithmetic}});
        if (same) {
            fixed = true;
            break;
        }
        sets.push_back(st.next_set);
    }
    summary = {{"dt", p.dt},
               {"steps", sets.size() - 1},
               {"fixed_point", fixed},
               {"final_set", set_json(sets.back())},
               {"final_size", sets.back().size()}};
    return sets;
}

Json run_ac(const Graph& g, const NodeFunction& u0, const AcParams& p, std::ostream* out) {
    const AcTrace tr = ace_evolve(g, u0, p);
    if (out) {
        JsonLinesWriter w(*out);
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            w.write({{"t", tr.times[k]}, {"u", tr.states[k]}, {"gl", tr.gl_energy[k]}});
    }
    Json sc = Json::array();
    for (const auto& e : tr.sign_changes) sc.push_back({{"t", e.time}, {"node", e.node}});
    bool monotone = true;
    for (std::size_t k = 1; k < tr.gl_energy.size(); ++k)
        monotone = monotone && tr.gl_energy[k] <= tr.gl_energy[k - 1] + 1e-9 * std::max(1.0, std::abs(tr.gl_energy[k - 1]));
    return {{"eps", p.eps},
            {"t_final", tr.times.back()},
            {"steps", tr.steps},
            {"stationary", tr.stationary},
            {"sign_changes", sc},
            {"gl_initial", tr.gl_energy.front()},
            {"gl_final", tr.gl_energy.back()},
            {"gl_nonincreasing", monotone},
            {"final_sign_set", set_json(superlevel_set(tr.states.back(), 0.0))}};
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty()) return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw InvalidArgument("cannot write " + path);
    return f;
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

// ---- manifest --------------------------------------------------------------

/// Compares the summary against expected outcomes; returns the failed checks.
Json check_expected(const Json& expected, const Json& summary, const Context& c, const NodeSet& final_set) {
    Json failures = Json::array();
    if (!expected.is_object()) return failures;
    const Json tol = expected.value("tolerance", Json::object());
    for (const auto& [key, want] : expected.items()) {
        if (key == "tolerance") continue;
        bool ok = false;
        Json got;
        if (key == "final_is_strip") {
            if (c.family != "torus") throw ParseError("final_is_strip needs the torus family");
            got = experiments::is_vertical_strip(final_set, c.n1, c.n2);
            ok = got == want;
        } else if (key == "final_set") {
            got = set_json(final_set);
            ok = node_set_from_json(want, c.graph->size()) == final_set;
        } else if (key == "final_set_one_based") {
            got = experiments::one_based(final_set);
            ok = got == want;
        } else if (key == "purity_min") {
            if (!c.moons) throw ParseError("purity_min needs the two-moons family");
            const double p = experiments::purity(final_set, c.moons->ground_truth, c.graph->size());
            got = p;
            ok = p >= want.get<double>();
        } else if (summary.contains(key)) {
            got = summary.at(key);
            if (want.is_number() && got.is_number()) {
                const double t = tol.value(key, 0.0);
                ok = std::abs(got.get<double>() - want.get<double>()) <= t;
            } else {
                ok = got == want;
            }
        } else {
            throw ParseError("unknown expected outcome '" + key + "'");
        }
        if (!ok) failures.push_back({{"check", key}, {"expected", want}, {"got", got}});
    }
    return failures;
}

int run_manifest(const std::string& path, const std::string& out_override) {
    const Json m = read_json_file(path);
    if (!m.is_object()) throw ParseError("manifest must be an object");
    const std::uint64_t seed = get_or<std::uint64_t>(m, "seed", 1);
    if (!m.contains("graph") || !m.contains("method")) throw ParseError("manifest needs 'graph' and 'method'");
    const Context c = build_graph_spec(m.at("graph"), seed);
    const Graph& g = *c.graph;
    const Json& method = m.at("method");
    const std::string name = get_or<std::string>(method, "name", "");
    const fs::path out_dir = out_override.empty() ? fs::path(get_or<std::string>(m, "output_dir", ".")) : fs::path(out_override);
    fs::create_directories(out_dir);
    auto trace = open_out((out_dir / "trace.jsonl").string());

    Json result;
    std::vector<NodeSet> sets;
    if (name == "mbo") {
        const NodeSet s0 = parse_set(m.at("init"), c);
        auto r = run_mbo(g, s0, get_or(method, "tau", 1.0), get_or(method, "max_iter", 1000), trace.get());
        result = r.summary;
        sets = r.trace.sets;
        if (c.family == "torus") result["final_is_strip"] = experiments::is_vertical_strip(sets.back(), c.n1, c.n2);
    } else if (name == "mcf") {
        const NodeSet s0 = parse_set(m.at("init"), c);
        McfParams p;
        p.dt = get_or(method, "dt", 1.0);
        p.max_steps = get_or(method, "steps", 100);
        p.tie_break = parse_tie_break(get_or<std::string>(method, "tie_break", "prefer-previous"));
        p.distance = parse_distance(get_or<std::string>(method, "distance", "interface"));
        sets = run_mcf(g, s0, p, trace.get(), result);
    } else if (name == "ac") {
        AcParams p;
        p.eps = get_or(method, "eps", 1.0);
        p.t_end = get_or(method, "t_end", 1.0);
        p.output_dt = get_or(method, "output_dt", 0.0);
        const NodeFunction u0 = parse_function(m.at("init"), c);
        result = run_ac(g, u0, p, trace.get());
        sets = {superlevel_set(u0, 0.0), node_set_from_json(result.at("final_sign_set"), g.size())};
    } else {
        throw ParseError("method must be mbo, mcf or ac");
    }
    {
        std::ofstream csv(out_dir / "membership.csv", std::ios::binary);
        write_membership_csv(csv, sets, g.size(), c.layout ? &*c.layout : nullptr);
    }
    if (c.moons) result["purity"] = experiments::purity(sets.back(), c.moons->ground_truth, g.size());
    const Json failures = check_expected(m.value("expected", Json::object()), result, c, sets.back());
    const Json summary = {{"manifest", m}, {"result", result}, {"failures", failures}, {"passed", failures.empty()}};
    write_json_file((out_dir / "summary.json").string(), summary);
    print_json(summary);
    return failures.empty() ? kOk : kCheckFailed;
}

void report_error(const std::string& kind, const std::string& message) {
    std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

int classify(const Error& e) {
    const std::string& k = e.kind();
    if (k == "ConvergenceFailure" || k == "IntegratorFailure") return kInternalError;
    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature flows and threshold dynamics on graphs"};
    app.require_subcommand(1);

    std::string graph_path, init_path, trace_path, out_path, coords_path, csv_path;
    std::uint64_t seed = 1;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a graph family");
    std::string family;
    std::size_t n = 0, n1 = 32, n2 = 12, rows = 3, cols = 3, depth = 3, children = 2, square_cols = 14, tri_cols = 14;
    std::size_t points = 600, dim = 100, knn = 10;
    double weight = 1.0, q = 1.0, r = 0.0, sigma = 0.1;
    std::string truth_path;
    bool resample = false;
    gen->add_option("family", family, "complete|star|cycle|path|torus|grid|tree|buckyball|lattices|two-moons")->required();
    gen->add_option("--n", n, "Node count (complete, star, cycle, path)");
    gen->add_option("--n1", n1, "Torus columns");
    gen->add_option("--n2", n2, "Torus rows");
    gen->add_option("--rows", rows, "Grid or lattice rows");
    gen->add_option("--cols", cols, "Grid columns");
    gen->add_option("--depth", depth, "Tree depth");
    gen->add_option("--children", children, "Children per tree node");
    gen->add_option("--square-cols", square_cols, "Square-lattice columns");
    gen->add_option("--triangular-cols", tri_cols, "Triangular-lattice columns");
    gen->add_option("--points", points, "Two-moons sample size");
    gen->add_option("--dim", dim, "Two-moons ambient dimension");
    gen->add_option("--sigma", sigma, "Two-moons noise level");
    gen->add_option("--k", knn, "Two-moons nearest neighbours");
    gen->add_option("--seed", seed, "Two-moons seed");
    gen->add_flag("--resample", resample, "Resample a disconnected two-moons graph");
    gen->add_option("--weight", weight, "Edge weight");
    gen->add_option("--q", q, "Edge exponent q");
    gen->add_option("--r", r, "Degree exponent r");
    gen->add_option("-o,--output", out_path, "Graph JSON output (stdout when omitted)");
    gen->add_option("--coords", coords_path, "Node coordinate JSON output");
    gen->add_option("--truth", truth_path, "Two-moons ground-truth set output");

    // spectral
    auto* spec = app.add_subcommand("spectral", "Eigenvalues, spectral radius and bounds");
    std::string sets_path;
    bool with_vectors = false;
    spec->add_option("--graph", graph_path, "Graph JSON")->required();
    spec->add_option("--sets", sets_path, "JSON array of sets for the Cheeger-type bound");
    spec->add_flag("--vectors", with_vectors, "Include eigenvectors");

    // geometry
    auto* geo = app.add_subcommand("geometry", "Curvature, boundaries and signed distance of a set");
    geo->add_option("--graph", graph_path, "Graph JSON")->required();
    geo->add_option("--set", init_path, "Node set JSON")->required();

    // mbo
    auto* mbo = app.add_subcommand("mbo", "Run MBO threshold dynamics");
    double tau = 1.0;
    int max_iter = 1000;
    mbo->add_option("--graph", graph_path, "Graph JSON")->required();
    mbo->add_option("--init", init_path, "Initial set JSON")->required();
    mbo->add_option("--tau", tau, "Diffusion time")->required();
    mbo->add_option("--max-iter", max_iter, "Iteration cap");
    mbo->add_option("--trace", trace_path, "JSON-lines trace output");
    mbo->add_option("--csv", csv_path, "Membership CSV output");
    mbo->add_option("--coords", coords_path, "Node coordinates for the CSV");

    // ac
    auto* ac = app.add_subcommand("ac", "Integrate the graph Allen-Cahn equation");
    AcParams acp;
    ac->add_option("--graph", graph_path, "Graph JSON")->required();
    ac->add_option("--init", init_path, "Initial function JSON (a set gives 2 chi_S - 1)")->required();
    ac->add_option("--eps", acp.eps, "Interface parameter")->required();
    ac->add_option("--t-end", acp.t_end, "Final time")->required();
    ac->add_option("--rel-tol", acp.rel_tol, "Relative tolerance");
    ac->add_option("--abs-tol", acp.abs_tol, "Absolute tolerance");
    ac->add_option("--output-dt", acp.output_dt, "Spacing of recorded states");
    ac->add_option("--trace", trace_path, "JSON-lines trace output");

    // mcf
    auto* mcf = app.add_subcommand("mcf", "Run the discrete mean curvature flow");
    McfParams mp;
    std::string tie = "prefer-previous", dist = "interface";
    mcf->add_option("--graph", graph_path, "Graph JSON")->required();
    mcf->add_option("--init", init_path, "Initial set JSON")->required();
    mcf->add_option("--dt", mp.dt, "Time step")->required();
    mcf->add_option("--steps", mp.max_steps, "Step cap");
    mcf->add_option("--tie-break", tie, "prefer-previous|lexicographic-min");
    mcf->add_option("--distance", dist, "interface|one-sided");
    mcf->add_option("--trace", trace_path, "JSON-lines output (stdout when omitted)");
    mcf->add_option("--csv", csv_path, "Membership CSV output");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Pinning and trivial-dynamics bounds");
    std::string u0_path;
    bnd->add_option("--graph", graph_path, "Graph JSON")->required();
    bnd->add_option("--set", init_path, "Node set JSON");
    bnd->add_option("--u0", u0_path, "Initial function for the Allen-Cahn bounds");

    // repro
    auto* rep = app.add_subcommand("repro", "Reproduce a canned example and check it");
    std::string repro_name;
    rep->add_option("name", repro_name, "Experiment name or 'all'")->required();

    // run
    auto* run = app.add_subcommand("run", "Run an experiment manifest");
    std::string manifest_path;
    run->add_option("manifest", manifest_path, "Manifest JSON")->required();
    run->add_option("--out", out_path, "Output directory (overrides the manifest)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report_error("UsageError", e.what());
        return kInputError;
    }

    try {
        auto load = [&] {
            Context c;
            c.graph = read_graph(graph_path);
            return c;
        };
        if (*gen) {
            Json spec_json = {{"family", family}, {"weight", weight}, {"q", q}, {"r", r}, {"n1", n1}, {"n2", n2},
                              {"rows", rows}, {"cols", cols}, {"depth", depth}, {"children", children},
                              {"square_cols", square_cols}, {"triangular_cols", tri_cols}, {"points", points},
                              {"dim", dim}, {"sigma", sigma}, {"k", knn}, {"seed", seed}, {"resample", resample}};
            if (n > 0) spec_json["n"] = n;
            if (family == "lattices" && !gen->get_option("--rows")->count()) spec_json["rows"] = 14;
            const Context c = build_graph_spec(spec_json, seed);
            const Json gj = graph_to_json(*c.graph);
            if (out_path.empty()) std::cout << gj.dump() << '\n';
            else write_json_file(out_path, gj);
            if (!coords_path.empty()) {
                if (!c.layout) throw InvalidArgument("family '" + family + "' has no coordinates");
                write_json_file(coords_path, layout_to_json(*c.layout));
            }
            if (!truth_path.empty()) {
                if (!c.moons) throw InvalidArgument("--truth needs the two-moons family");
                write_json_file(truth_path, set_json(c.moons->ground_truth));
            }
            return kOk;
        }
        if (*spec) {
            const Context c = load();
            const Graph& g = *c.graph;
            const auto sd = eigendecompose(g);
            std::vector<NodeSet> sets;
            if (!sets_path.empty()) {
                const Json sj = read_json_file(sets_path);
                if (!sj.is_array()) throw ParseError("--sets must hold an array of sets");
                for (const auto& s : sj) sets.push_back(node_set_from_json(s, g.size()));
            }
            const auto b = spectral_bounds(g, sets);
            Json bj = {{"lambda2_upper_trace", b.lambda2_upper_trace},
                       {"lambdan_lower_trace", b.lambdan_lower_trace},
                       {"lambda2_upper_trace_degree", b.lambda2_upper_trace_degree},
                       {"lambdan_lower_trace_degree", b.lambdan_lower_trace_degree},
                       {"lambda2_upper_noncomplete", b.lambda2_upper_noncomplete ? Json(*b.lambda2_upper_noncomplete) : Json()},
                       {"lambda2_upper_cheeger", b.lambda2_upper_cheeger ? Json(*b.lambda2_upper_cheeger) : Json()},
                       {"rho_upper", b.rho_upper}};
            Json out = {{"eigenvalues", sd.eigenvalues}, {"rho", sd.rho}, {"bounds", bj}};
            if (with_vectors) out["eigenvectors"] = sd.eigenvectors;
            print_json(out);
            return kOk;
        }
        if (*geo) {
            const Context c = load();
            const Graph& g = *c.graph;
            const NodeSet s = parse_set(read_json_file(init_path), c);
            Json out = {{"curvature", curvature(g, s)},
                        {"boundary", set_json(boundary(g, s))},
                        {"boundary_complement", set_json(boundary_complement(g, s))},
                        {"sigma", set_json(curvflow::sigma(g, s))},
                        {"tv", tv_set(g, s)},
                        {"volume", volume(g, s)}};
            if (!s.is_trivial(g.size())) out["signed_distance"] = function_json(signed_distance(g, s));
            print_json(out);
            return kOk;
        }
        if (*mbo) {
            const Context c = load();
            const NodeSet s0 = parse_set(read_json_file(init_path), c);
            auto tf = open_out(trace_path);
            auto res = run_mbo(*c.graph, s0, tau, max_iter, tf.get());
            if (!csv_path.empty()) {
                std::optional<Layout> xy;
                if (!coords_path.empty()) {
                    Layout l;
                    for (const auto& p : read_json_file(coords_path)) l.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
                    xy = std::move(l);
                }
                auto cf = open_out(csv_path);
                write_membership_csv(*cf, res.trace.sets, c.graph->size(), xy ? &*xy : nullptr);
            }
            print_json(res.summary);
            return kOk;
        }
        if (*ac) {
            const Context c = load();
            const NodeFunction u0 = parse_function(read_json_file(init_path), c);
            auto tf = open_out(trace_path);
            print_json(run_ac(*c.graph, u0, acp, tf.get()));
            return kOk;
        }
        if (*mcf) {
            const Context c = load();
            mp.tie_break = parse_tie_break(tie);
            mp.distance = parse_distance(dist);
            const NodeSet s0 = parse_set(read_json_file(init_path), c);
            auto tf = open_out(trace_path);
            Json summary;
            const auto sets = run_mcf(*c.graph, s0, mp, tf ? static_cast<std::ostream*>(tf.get()) : &std::cout, summary);
            if (!csv_path.empty()) {
                auto cf = open_out(csv_path);
                write_membership_csv(*cf, sets, c.graph->size());
            }
            if (tf) print_json(summary);
            return kOk;
        }
        if (*bnd) {
            const Context c = load();
            const Graph& g = *c.graph;
            const auto sd = eigendecompose(g);
            Json out = {{"rho", sd.rho}, {"lambda2", sd.lambda2()}};
            if (!init_path.empty()) out["mbo"] = tau_bounds_json(tau_bounds(g, parse_set(read_json_file(init_path), c), sd));
            if (!u0_path.empty()) {
                const auto b = ac_pinning_bounds(g, parse_function(read_json_file(u0_path), c), sd.rho);
                out["allen_cahn"] = {{"eps_rho", b.eps_rho}, {"eps_kappa", b.eps_kappa}, {"eps_kappa_alt", b.eps_kappa_alt},
                                     {"alpha", b.alpha}, {"c", b.c}, {"laplacian_sup", b.laplacian_sup}};
            }
            print_json(out);
            return kOk;
        }
        if (*rep) {
            std::vector<std::string> names;
            if (repro_name == "all") names = experiments::repro_names();
            else names = {repro_name};
            bool all_ok = true;
            Json reports = Json::array();
            for (const auto& nm : names) {
                const auto report = experiments::repro(nm);
                for (const auto& ch : report.checks)
                    std::cerr << (ch.pass ? "PASS " : "FAIL ") << report.name << ": " << ch.name
                              << (ch.detail.empty() ? "" : " (" + ch.detail + ")") << '\n';
                all_ok = all_ok && report.passed();
                reports.push_back(report.to_json());
            }
            print_json(names.size() == 1 ? reports[0] : reports);
            return all_ok ? kOk : kCheckFailed;
        }
        if (*run) return run_manifest(manifest_path, out_path);
    } catch (const Error& e) {
        report_error(e.kind(), e.what());
        return classify(e);
    } catch (const Json::exception& e) {
        report_error("ParseError", e.what());
        return kInputError;
    } catch (const std::exception& e) {
        report_error("InternalError", e.what());
        return kInternalError;
    }
    return kInternalError;
}
