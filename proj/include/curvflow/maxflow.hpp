#pragma once

// Highest-label push-relabel maximum flow with the gap heuristic.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <type_traits>
#include <vector>

namespace curvflow {

template <class Cap>
class MaxFlow {
public:
    struct Arc {
        std::size_t to;
        std::size_t rev;  // index of the reverse arc inside adj_[to]
        Cap cap;          // residual capacity
        Cap orig;
    };

    explicit MaxFlow(std::size_t n, Cap tolerance = Cap{}) : n_(n), tol_(tolerance), adj_(n) {}

    std::size_t size() const noexcept { return n_; }

    /// Adds u -> v with capacity c and v -> u with capacity c_rev. Returns
    /// the position of the forward arc in adjacency(u).
    std::size_t add_edge(std::size_t u, std::size_t v, Cap c, Cap c_rev = Cap{}) {
        const std::size_t pu = adj_[u].size();
        const std::size_t pv = adj_[v].size() + (u == v ? 1 : 0);
        adj_[u].push_back({v, pv, c, c});
        adj_[v].push_back({u, pu, c_rev, c_rev});
        return pu;
    }

    const std::vector<Arc>& adjacency(std::size_t u) const { return adj_[u]; }

    /// Net flow pushed along an arc (positive u -> to).
    Cap flow(std::size_t u, std::size_t pos) const {
        const Arc& a = adj_[u][pos];
        return a.orig - a.cap;
    }

    Cap solve(std::size_t s, std::size_t t);

    /// Nodes reachable from the source in the residual network: the
    /// inclusion-minimal source side of a minimum cut.
    std::vector<bool> min_source_side() const;
    /// Complement of the nodes that can reach the sink: the inclusion-maximal
    /// source side of a minimum cut.
    std::vector<bool> max_source_side() const;

private:
    bool positive(Cap c) const { return c > tol_; }

    std::size_t n_;
    Cap tol_;
    std::vector<std::vector<Arc>> adj_;
    std::size_t s_ = 0;
    std::size_t t_ = 0;
};

template <class Cap>
Cap MaxFlow<Cap>::solve(std::size_t s, std::size_t t) {
    s_ = s;
    t_ = t;
    const std::size_t n = n_;
    const std::size_t hmax = 2 * n + 1;
    std::vector<std::size_t> h(n, 0), cur(n, 0), count(hmax + 1, 0);
    std::vector<Cap> excess(n, Cap{});
    std::vector<std::vector<std::size_t>> bucket(hmax + 1);
    std::vector<bool> queued(n, false);
    std::size_t top = 0;

    auto activate = [&](std::size_t v) {
        if (v == s || v == t || queued[v] || !positive(excess[v])) return;
        queued[v] = true;
        bucket[h[v]].push_back(v);
        top = std::max(top, h[v]);
    };

    h[s] = n;
    for (std::size_t v = 0; v < n; ++v) ++count[h[v]];
    for (auto& a : adj_[s]) {
        if (!positive(a.cap)) continue;
        const Cap d = a.cap;
        a.cap -= d;
        adj_[a.to][a.rev].cap += d;
        excess[a.to] += d;
        excess[s] -= d;
        activate(a.to);
    }

    auto relabel = [&](std::size_t v) {
        std::size_t best = hmax;
        for (const auto& a : adj_[v])
            if (positive(a.cap)) best = std::min(best, h[a.to] + 1);
        const std::size_t old = h[v];
        --count[old];
        h[v] = std::min(best, hmax);
        ++count[h[v]];
        cur[v] = 0;
        if (count[old] == 0 && old < n) {
            // gap: nodes above it can no longer reach the sink
            for (std::size_t w = 0; w < n; ++w)
                if (w != s && h[w] > old && h[w] < n) {
                    --count[h[w]];
                    h[w] = n + 1;
                    ++count[h[w]];
                    cur[w] = 0;
                }
        }
    };

    for (;;) {
        while (top > 0 && bucket[top].empty()) --top;
        if (bucket[top].empty()) break;
        const std::size_t v = bucket[top].back();
        bucket[top].pop_back();
        queued[v] = false;
        if (h[v] != top) {
            // stale entry after a gap relabel
            activate(v);
            continue;
        }
        while (positive(excess[v])) {
            if (cur[v] == adj_[v].size()) {
                relabel(v);
                if (h[v] >= hmax) break;
                continue;
            }
            Arc& a = adj_[v][cur[v]];
            if (positive(a.cap) && h[v] == h[a.to] + 1) {
                const Cap d = std::min(excess[v], a.cap);
                a.cap -= d;
                adj_[a.to][a.rev].cap += d;
                excess[v] -= d;
                excess[a.to] += d;
                activate(a.to);
            } else {
                ++cur[v];
            }
        }
    }

    Cap value{};
    for (const auto& a : adj_[t]) value += a.cap - a.orig;  // inflow into t
    return value;
}

template <class Cap>
std::vector<bool> MaxFlow<Cap>::min_source_side() const {
    std::vector<bool> seen(n_, false);
    std::deque<std::size_t> q{s_};
    seen[s_] = true;
    while (!q.empty()) {
        const std::size_t v = q.front();
        q.pop_front();
        for (const auto& a : adj_[v])
            if (!seen[a.to] && positive(a.cap)) {
                seen[a.to] = true;
                q.push_back(a.to);
            }
    }
    return seen;
}

template <class Cap>
std::vector<bool> MaxFlow<Cap>::max_source_side() const {
    std::vector<bool> reach(n_, false);
    std::deque<std::size_t> q{t_};
    reach[t_] = true;
    while (!q.empty()) {
        const std::size_t w = q.front();
        q.pop_front();
        for (const auto& a : adj_[w]) {
            const Arc& back = adj_[a.to][a.rev];  // a.to -> w
            if (!reach[a.to] && positive(back.cap)) {
                reach[a.to] = true;
                q.push_back(a.to);
            }
        }
    }
    reach.flip();
    return reach;
}

}  // namespace curvflow
