#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace curvflow {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CURVFLOW_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

CURVFLOW_DEFINE_ERROR(InvalidArgument);
CURVFLOW_DEFINE_ERROR(IsolatedNode);
CURVFLOW_DEFINE_ERROR(SelfLoop);
CURVFLOW_DEFINE_ERROR(NegativeWeight);
CURVFLOW_DEFINE_ERROR(ConflictingDuplicate);
CURVFLOW_DEFINE_ERROR(DisconnectedGraph);
CURVFLOW_DEFINE_ERROR(TrivialSet);
CURVFLOW_DEFINE_ERROR(EmptySet);
CURVFLOW_DEFINE_ERROR(DegreeTooSmall);
CURVFLOW_DEFINE_ERROR(WeightedGraph);
CURVFLOW_DEFINE_ERROR(InvalidPartition);
CURVFLOW_DEFINE_ERROR(ConvergenceFailure);
CURVFLOW_DEFINE_ERROR(HalfVolume);
CURVFLOW_DEFINE_ERROR(IntegratorFailure);
CURVFLOW_DEFINE_ERROR(ZeroInitialComponent);
CURVFLOW_DEFINE_ERROR(InvalidSize);
CURVFLOW_DEFINE_ERROR(DegenerateSample);
CURVFLOW_DEFINE_ERROR(UnknownExperiment);
CURVFLOW_DEFINE_ERROR(ParseError);

#undef CURVFLOW_DEFINE_ERROR

/// Real value per node, indexed 0..n-1.
using NodeFunction = std::vector<double>;

struct WeightedEdge {
    std::size_t i;
    std::size_t j;
    double weight;
};

/// Finite, undirected, weighted graph with the (q, r) calculus parameters.
///
/// Adjacency is stored in CSR form: the neighbors of node i occupy the slots
/// `offset(i) .. offset(i+1)-1`, sorted by neighbor index. Every stored weight
/// is strictly positive; `mirror(k)` is the slot of the reverse edge.
/// Immutable after construction.
class Graph {
public:
    Graph(std::size_t n, std::span<const WeightedEdge> edges, double q, double r);
    Graph(std::size_t n, std::initializer_list<WeightedEdge> edges, double q, double r)
        : Graph(n, std::span<const WeightedEdge>(edges.begin(), edges.size()), q, r) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return nbr_.size() / 2; }
    std::size_t num_slots() const noexcept { return nbr_.size(); }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }

    std::size_t offset(std::size_t i) const noexcept { return off_[i]; }
    std::size_t neighbor(std::size_t slot) const noexcept { return nbr_[slot]; }
    double weight(std::size_t slot) const noexcept { return w_[slot]; }
    std::size_t mirror(std::size_t slot) const noexcept { return mirror_[slot]; }
    std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
        return {nbr_.data() + off_[i], off_[i + 1] - off_[i]};
    }
    std::span<const double> weights(std::size_t i) const noexcept {
        return {w_.data() + off_[i], off_[i + 1] - off_[i]};
    }

    /// Weight of the pair (i, j), zero when not adjacent.
    double weight(std::size_t i, std::size_t j) const noexcept;
    /// Slot index of (i, j) or num_slots() when not adjacent.
    std::size_t slot(std::size_t i, std::size_t j) const noexcept;

    double degree(std::size_t i) const noexcept { return deg_[i]; }
    const std::vector<double>& degrees() const noexcept { return deg_; }
    double max_degree() const noexcept { return dmax_; }
    double min_degree() const noexcept { return dmin_; }
    /// d_i^r, the node measure of the V inner product.
    double measure(std::size_t i) const noexcept { return mu_[i]; }
    const std::vector<double>& measures() const noexcept { return mu_; }
    double volume() const noexcept { return vol_; }

    /// Edge list with i < j, in slot order.
    std::vector<WeightedEdge> edge_list() const;
    bool is_unweighted() const noexcept;
    bool is_complete() const noexcept { return nbr_.size() == n_ * (n_ - 1); }

private:
    std::size_t n_;
    double q_;
    double r_;
    std::vector<std::size_t> off_;
    std::vector<std::size_t> nbr_;
    std::vector<double> w_;
    std::vector<std::size_t> mirror_;
    std::vector<double> deg_;
    std::vector<double> mu_;
    double dmax_ = 0.0;
    double dmin_ = 0.0;
    double vol_ = 0.0;
};

/// Validating constructor; (i, j) and (j, i) name the same edge and may both
/// appear only with the same weight.
inline Graph build_graph(std::size_t n, std::span<const WeightedEdge> edges, double q, double r) {
    return Graph(n, edges, q, r);
}

inline Graph::Graph(std::size_t n, std::span<const WeightedEdge> edges, double q, double r)
    : n_(n), q_(q), r_(r) {
    if (n == 0) throw InvalidArgument("graph must have at least one node");
    if (!(q >= 0.5 && q <= 1.0)) throw InvalidArgument("q must lie in [1/2, 1]");
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("r must lie in [0, 1]");

    // (lo, hi, weight, listed as (hi, lo))
    std::vector<std::tuple<std::size_t, std::size_t, double, bool>> pairs;
    pairs.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.i >= n || e.j >= n)
            throw InvalidArgument("edge endpoint out of range: (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
        if (e.i == e.j) throw SelfLoop("self-loop at node " + std::to_string(e.i));
        if (!std::isfinite(e.weight)) throw InvalidArgument("edge weight must be finite");
        if (e.weight <= 0.0)
            throw NegativeWeight("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                 ") has non-positive weight");
        pairs.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j), e.weight, e.i > e.j);
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a), std::get<3>(a)) <
               std::tie(std::get<0>(b), std::get<1>(b), std::get<3>(b));
    });
    std::vector<std::tuple<std::size_t, std::size_t, double>> uniq;
    uniq.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [a, b, w, flipped] = pairs[k];
        if (k > 0 && std::get<0>(pairs[k - 1]) == a && std::get<1>(pairs[k - 1]) == b) {
            const std::string name = "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
            if (std::get<3>(pairs[k - 1]) == flipped)
                throw ConflictingDuplicate("edge " + name + " listed twice");
            if (std::get<2>(pairs[k - 1]) != w)
                throw ConflictingDuplicate("edge " + name + " listed with different weights");
            continue;
        }
        uniq.emplace_back(a, b, w);
    }

    std::vector<std::size_t> count(n, 0);
    for (const auto& [a, b, w] : uniq) {
        ++count[a];
        ++count[b];
    }
    off_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) off_[i + 1] = off_[i] + count[i];
    nbr_.assign(off_[n], 0);
    w_.assign(off_[n], 0.0);
    std::vector<std::size_t> fill(off_.begin(), off_.end() - 1);
    for (const auto& [a, b, w] : uniq) {
        nbr_[fill[a]] = b;
        w_[fill[a]++] = w;
        nbr_[fill[b]] = a;
        w_[fill[b]++] = w;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t k = off_[i]; k < off_[i + 1]; ++k) row.emplace_back(nbr_[k], w_[k]);
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size(); ++k) {
            nbr_[off_[i] + k] = row[k].first;
            w_[off_[i] + k] = row[k].second;
        }
    }
    mirror_.assign(nbr_.size(), 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = off_[i]; k < off_[i + 1]; ++k) mirror_[k] = slot(nbr_[k], i);

    deg_.assign(n, 0.0);
    mu_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t k = off_[i]; k < off_[i + 1]; ++k) d += w_[k];
        if (d <= 0.0) throw IsolatedNode("node " + std::to_string(i) + " has degree zero");
        deg_[i] = d;
        mu_[i] = r == 0.0 ? 1.0 : std::pow(d, r);
        vol_ += mu_[i];
    }
    dmax_ = *std::max_element(deg_.begin(), deg_.end());
    dmin_ = *std::min_element(deg_.begin(), deg_.end());
}

inline std::size_t Graph::slot(std::size_t i, std::size_t j) const noexcept {
    auto first = nbr_.begin() + static_cast<std::ptrdiff_t>(off_[i]);
    auto last = nbr_.begin() + static_cast<std::ptrdiff_t>(off_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return nbr_.size();
    return static_cast<std::size_t>(it - nbr_.begin());
}

inline double Graph::weight(std::size_t i, std::size_t j) const noexcept {
    std::size_t k = slot(i, j);
    return k == nbr_.size() ? 0.0 : w_[k];
}

inline std::vector<WeightedEdge> Graph::edge_list() const {
    std::vector<WeightedEdge> out;
    out.reserve(num_edges());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = off_[i]; k < off_[i + 1]; ++k)
            if (i < nbr_[k]) out.push_back({i, nbr_[k], w_[k]});
    return out;
}

inline bool Graph::is_unweighted() const noexcept {
    return std::all_of(w_.begin(), w_.end(), [](double w) { return w == 1.0; });
}

/// Skew-symmetric function on ordered node pairs, stored per adjacency slot.
/// Values off the edge set are implicitly zero.
class EdgeFunction {
public:
    EdgeFunction() = default;
    explicit EdgeFunction(const Graph& g) : values_(g.num_slots(), 0.0) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t slot) noexcept { return values_[slot]; }
    double operator[](std::size_t slot) const noexcept { return values_[slot]; }
    double at(const Graph& g, std::size_t i, std::size_t j) const {
        std::size_t k = g.slot(i, j);
        return k == g.num_slots() ? 0.0 : values_[k];
    }
    const std::vector<double>& values() const& noexcept { return values_; }
    std::vector<double> values() && noexcept { return std::move(values_); }

    /// Largest |phi_ij + phi_ji| over all slots.
    double skew_defect(const Graph& g) const {
        double worst = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k)
            worst = std::max(worst, std::abs(values_[k] + values_[g.mirror(k)]));
        return worst;
    }

private:
    std::vector<double> values_;
};

/// Sorted set of distinct node indices.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::vector<std::size_t> members, std::size_t n) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
            throw InvalidArgument("duplicate node in set");
        if (!members_.empty() && members_.back() >= n)
            throw InvalidArgument("set member " + std::to_string(members_.back()) +
                                  " out of range");
    }
    NodeSet(std::initializer_list<std::size_t> members, std::size_t n)
        : NodeSet(std::vector<std::size_t>(members), n) {}

    static NodeSet from_mask(const std::vector<bool>& mask) {
        NodeSet s;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) s.members_.push_back(i);
        return s;
    }
    static NodeSet all(std::size_t n) {
        NodeSet s;
        s.members_.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.members_[i] = i;
        return s;
    }

    const std::vector<std::size_t>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::size_t i) const noexcept {
        return std::binary_search(members_.begin(), members_.end(), i);
    }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    std::vector<bool> mask(std::size_t n) const {
        std::vector<bool> m(n, false);
        for (auto i : members_) m[i] = true;
        return m;
    }
    NodeFunction indicator(std::size_t n) const {
        NodeFunction u(n, 0.0);
        for (auto i : members_) u[i] = 1.0;
        return u;
    }
    NodeSet complement(std::size_t n) const {
        std::vector<bool> m = mask(n);
        m.flip();
        return from_mask(m);
    }
    /// True for the empty set and for V.
    bool is_trivial(std::size_t n) const noexcept { return members_.empty() || members_.size() == n; }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;
    friend auto operator<=>(const NodeSet& a, const NodeSet& b) { return a.members_ <=> b.members_; }

private:
    std::vector<std::size_t> members_;
};

inline NodeSet with_node(const NodeSet& s, std::size_t node, std::size_t n) {
    auto m = s.mask(n);
    m[node] = true;
    return NodeSet::from_mask(m);
}

inline NodeSet without_node(const NodeSet& s, std::size_t node, std::size_t n) {
    auto m = s.mask(n);
    m[node] = false;
    return NodeSet::from_mask(m);
}

/// Connected-component label per node, labels assigned in order of first node.
inline std::vector<std::size_t> component_labels(const Graph& g) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(g.size(), unset);
    std::vector<std::size_t> stack;
    std::size_t next = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (auto w : g.neighbors(v))
                if (label[w] == unset) {
                    label[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return label;
}

inline std::size_t num_components(const Graph& g) {
    auto labels = component_labels(g);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

inline bool is_connected(const Graph& g) { return num_components(g) == 1; }

}  // namespace curvflow
