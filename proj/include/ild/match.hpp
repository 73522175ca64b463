#pragma once

// Bottleneck distance between barcodes. Exact: binary search over the finite
// candidate set of pairwise and diagonal costs, with Hopcroft-Karp matching
// deciding feasibility at each threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "ild/pmod.hpp"
#include "ild/weights.hpp"

namespace ild {

namespace detail {

/// Hopcroft-Karp maximum matching on a bipartite graph given as adjacency
/// lists from the left side.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t nleft, std::size_t nright, std::vector<std::vector<std::size_t>> adj)
        : nl_(nleft), nr_(nright), adj_(std::move(adj)) {}

    std::size_t max_matching() {
        match_l_.assign(nl_, npos);
        match_r_.assign(nr_, npos);
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < nl_; ++u)
                if (match_l_[u] == npos && dfs(u)) ++matched;
        }
        return matched;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool bfs() {
        std::queue<std::size_t> q;
        dist_.assign(nl_, npos);
        for (std::size_t u = 0; u < nl_; ++u)
            if (match_l_[u] == npos) {
                dist_[u] = 0;
                q.push(u);
            }
        bool found = false;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj_[u]) {
                std::size_t w = match_r_[v];
                if (w == npos)
                    found = true;
                else if (dist_[w] == npos) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (std::size_t v : adj_[u]) {
            std::size_t w = match_r_[v];
            if (w == npos || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = v;
                match_r_[v] = u;
                return true;
            }
        }
        dist_[u] = npos;
        return false;
    }

    std::size_t nl_, nr_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_, match_r_, dist_;
};

/// Cost of matching two bars: L-infinity on endpoints; finite deaths never
/// match infinite ones.
inline double bar_match_cost(const Bar& x, const Bar& y) {
    if (x.essential() != y.essential()) return std::numeric_limits<double>::infinity();
    if (x.essential()) return std::abs(x.birth - y.birth);
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

/// Cost of matching a bar to the diagonal; infinite bars cannot.
inline double bar_diag_cost(const Bar& x) {
    if (x.essential()) return std::numeric_limits<double>::infinity();
    return (x.death - x.birth) / 2.0;
}

/// Is there a perfect matching at threshold t? Bars may pair up (cost <= t)
/// or retire to the diagonal (half-length <= t).
inline bool bottleneck_feasible(const std::vector<Bar>& b1, const std::vector<Bar>& b2, double t) {
    const std::size_t n1 = b1.size(), n2 = b2.size();
    const std::size_t n = n1 + n2;
    std::vector<std::vector<std::size_t>> adj(n);
    // left: [0,n1) real bars of b1, [n1,n) diagonal slots
    // right: [0,n2) real bars of b2, [n2,n) diagonal slots
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j)
            if (bar_match_cost(b1[i], b2[j]) <= t) adj[i].push_back(j);
        if (bar_diag_cost(b1[i]) <= t)
            for (std::size_t j = n2; j < n; ++j) adj[i].push_back(j);
    }
    for (std::size_t i = n1; i < n; ++i) {
        const Bar& y = b2[i - n1];
        if (bar_diag_cost(y) <= t) adj[i].push_back(i - n1);
        for (std::size_t j = n2; j < n; ++j) adj[i].push_back(j);
    }
    return BipartiteMatcher(n, n, std::move(adj)).max_matching() == n;
}

}  // namespace detail

/// Exact bottleneck distance. Minimal threshold admitting a perfect matching,
/// found by binary search over the sorted finite set of candidate costs.
inline WeightValue bottleneck(const Barcode& bc1, const Barcode& bc2) {
    const auto& b1 = bc1.bars;
    const auto& b2 = bc2.bars;

    std::size_t inf1 = 0, inf2 = 0;
    for (const auto& b : b1) inf1 += b.essential();
    for (const auto& b : b2) inf2 += b.essential();
    if (inf1 != inf2) return WeightValue::infinity();

    std::vector<double> candidates{0.0};
    for (const auto& x : b1)
        for (const auto& y : b2) {
            double c = detail::bar_match_cost(x, y);
            if (std::isfinite(c)) candidates.push_back(c);
        }
    for (const auto& x : b1)
        if (!x.essential()) candidates.push_back(detail::bar_diag_cost(x));
    for (const auto& y : b2)
        if (!y.essential()) candidates.push_back(detail::bar_diag_cost(y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    if (!detail::bottleneck_feasible(b1, b2, candidates.back())) return WeightValue::infinity();

    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (detail::bottleneck_feasible(b1, b2, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return WeightValue(candidates[lo]);
}

}  // namespace ild
