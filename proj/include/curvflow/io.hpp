#pragma once

// JSON, JSON-lines and CSV serialization. Graphs use
// {"n": int, "q": float, "r": float, "edges": [[i, j, w], ...]} with 0-based
// indices; node functions and node sets are plain arrays.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "generators.hpp"
#include "graph.hpp"

namespace curvflow {

using Json = nlohmann::json;

namespace detail {

inline double finite_number(const Json& v, const std::string& what) {
    if (!v.is_number()) throw ParseError(what + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(what + " is not finite");
    return x;
}

inline std::size_t index_value(const Json& v, const std::string& what) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
    throw ParseError(what + " is not a non-negative integer");
}

inline Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace detail

inline Json graph_to_json(const Graph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edge_list()) edges.push_back({e.i, e.j, e.weight});
    return {{"n", g.size()}, {"q", g.q()}, {"r", g.r()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("graph JSON must be an object");
    if (!j.contains("n") || !j.contains("edges")) throw ParseError("graph JSON needs \"n\" and \"edges\"");
    const std::size_t n = detail::index_value(j.at("n"), "n");
    const double q = j.contains("q") ? detail::finite_number(j.at("q"), "q") : 1.0;
    const double r = j.contains("r") ? detail::finite_number(j.at("r"), "r") : 0.0;
    const Json& ej = j.at("edges");
    if (!ej.is_array()) throw ParseError("\"edges\" must be an array");
    std::vector<WeightedEdge> edges;
    edges.reserve(ej.size());
    for (const auto& e : ej) {
        if (!e.is_array() || (e.size() != 2 && e.size() != 3)) throw ParseError("edge must be [i, j] or [i, j, w]");
        const double w = e.size() == 3 ? detail::finite_number(e[2], "edge weight") : 1.0;
        edges.push_back({detail::index_value(e[0], "edge endpoint"), detail::index_value(e[1], "edge endpoint"), w});
    }
    return build_graph(n, edges, q, r);
}

inline Json node_set_to_json(const NodeSet& s) { return Json(s.members()); }

inline NodeSet node_set_from_json(const Json& j, std::size_t n) {
    if (!j.is_array()) throw ParseError("node set must be an array");
    std::vector<std::size_t> m;
    for (const auto& v : j) m.push_back(detail::index_value(v, "set member"));
    return NodeSet(std::move(m), n);
}

inline Json node_function_to_json(const NodeFunction& u) { return Json(u); }

inline NodeFunction node_function_from_json(const Json& j, std::size_t n) {
    if (!j.is_array()) throw ParseError("node function must be an array");
    if (j.size() != n) throw ParseError("node function has " + std::to_string(j.size()) + " entries, graph has " + std::to_string(n));
    NodeFunction u;
    u.reserve(n);
    for (const auto& v : j) u.push_back(detail::finite_number(v, "node value"));
    return u;
}

inline Json layout_to_json(const Layout& xy) {
    Json a = Json::array();
    for (const auto& p : xy) a.push_back({p[0], p[1]});
    return a;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline Json read_json_file(const std::string& path) { return detail::parse_text(read_file(path)); }

inline Graph read_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

/// One compact JSON document per line.
class JsonLinesWriter {
public:
    explicit JsonLinesWriter(std::ostream& out) : out_(&out) {}
    void write(const Json& j) { *out_ << j.dump() << '\n'; }

private:
    std::ostream* out_;
};

/// node_id,x,y,iter0,iter1,... with 0/1 membership per iterate. Coordinates
/// are left empty when no layout is known.
inline void write_membership_csv(std::ostream& out, const std::vector<NodeSet>& sets, std::size_t n,
                                 const Layout* xy = nullptr) {
    out << "node_id,x,y";
    for (std::size_t k = 0; k < sets.size(); ++k) out << ",iter" << k;
    out << '\n';
    std::vector<std::vector<bool>> masks;
    for (const auto& s : sets) masks.push_back(s.mask(n));
    out << std::setprecision(10);
    for (std::size_t i = 0; i < n; ++i) {
        out << i << ',';
        if (xy && i < xy->size()) out << (*xy)[i][0] << ',' << (*xy)[i][1];
        else out << ',';
        for (const auto& m : masks) out << ',' << (m[i] ? 1 : 0);
        out << '\n';
    }
}

}  // namespace curvflow
