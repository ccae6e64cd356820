#include "perturb/matching.hpp"

#include <deque>
#include <limits>

namespace perturb {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

struct HopcroftKarp {
    const std::vector<Bitset>& rows;
    int nl, nr;
    std::vector<int> lm, rm, dist;

    HopcroftKarp(const std::vector<Bitset>& rows_, int right)
        : rows(rows_), nl(static_cast<int>(rows_.size())), nr(right), lm(nl, -1), rm(nr, -1),
          dist(nl) {}

    bool bfs() {
        std::deque<int> q;
        for (int u = 0; u < nl; ++u) {
            dist[u] = lm[u] < 0 ? 0 : kInf;
            if (lm[u] < 0) q.push_back(u);
        }
        bool reachable_free = false;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            rows[u].for_each([&](int v) {
                int w = rm[v];
                if (w < 0) {
                    reachable_free = true;
                } else if (dist[w] == kInf) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            });
        }
        return reachable_free;
    }

    bool dfs(int u) {
        for (int v = rows[u].next(0); v >= 0; v = rows[u].next(v + 1)) {
            int w = rm[v];
            if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
                lm[u] = v;
                rm[v] = u;
                return true;
            }
        }
        dist[u] = kInf;
        return false;
    }

    int run() {
        int size = 0;
        while (bfs())
            for (int u = 0; u < nl; ++u)
                if (lm[u] < 0 && dfs(u)) ++size;
        return size;
    }
};

}  // namespace

BipartiteMatching max_bipartite_matching(const std::vector<Bitset>& left_rows, int right_size) {
    HopcroftKarp hk(left_rows, right_size);
    BipartiteMatching m;
    m.size = hk.run();
    m.left_match = std::move(hk.lm);
    m.right_match = std::move(hk.rm);
    return m;
}

std::optional<HallViolation> hall_violation(const std::vector<Bitset>& left_rows, int right_size,
                                            const BipartiteMatching& m) {
    const int nl = static_cast<int>(left_rows.size());
    int free_left = -1;
    for (int u = 0; u < nl; ++u)
        if (m.left_match[u] < 0) free_left = u;
    if (free_left < 0) return std::nullopt;

    // alternating reachability from an unmatched left vertex: the reachable
    // left set X has N(X) fully matched into X, and |N(X)| = |X| - 1
    std::vector<bool> seen_left(nl, false);
    Bitset seen_right(right_size);
    std::deque<int> q{free_left};
    seen_left[free_left] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        left_rows[u].for_each([&](int v) {
            if (seen_right.test(v)) return;
            seen_right.set(v);
            int w = m.right_match[v];
            if (w >= 0 && !seen_left[w]) {
                seen_left[w] = true;
                q.push_back(w);
            }
        });
    }
    HallViolation viol;
    for (int u = 0; u < nl; ++u)
        if (seen_left[u]) viol.left_set.push_back(u);
    viol.joint_neighborhood = seen_right;
    return viol;
}

namespace {

// Edmonds' blossom algorithm over bitset adjacency.
struct Blossom {
    int n;
    const std::vector<Bitset>& rows;
    std::vector<int> match, parent, base;
    std::vector<bool> used, blossom;

    explicit Blossom(const std::vector<Bitset>& rows_)
        : n(static_cast<int>(rows_.size())), rows(rows_), match(n, -1), parent(n, -1), base(n),
          used(n), blossom(n) {}

    int lca(int a, int b) {
        std::vector<bool> mark(n, false);
        for (;;) {
            a = base[a];
            mark[a] = true;
            if (match[a] < 0) break;
            a = parent[match[a]];
        }
        for (;;) {
            b = base[b];
            if (mark[b]) return b;
            b = parent[match[b]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base[v] != b) {
            blossom[base[v]] = true;
            blossom[base[match[v]]] = true;
            parent[v] = child;
            child = match[v];
            v = parent[match[v]];
        }
    }

    int find_path(int root) {
        std::fill(used.begin(), used.end(), false);
        std::fill(parent.begin(), parent.end(), -1);
        for (int i = 0; i < n; ++i) base[i] = i;
        used[root] = true;
        std::deque<int> q{root};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int to = rows[v].next(0); to >= 0; to = rows[v].next(to + 1)) {
                if (base[v] == base[to] || match[v] == to) continue;
                if (to == root || (match[to] >= 0 && parent[match[to]] >= 0)) {
                    int curbase = lca(v, to);
                    std::fill(blossom.begin(), blossom.end(), false);
                    mark_path(v, curbase, to);
                    mark_path(to, curbase, v);
                    for (int i = 0; i < n; ++i)
                        if (blossom[base[i]]) {
                            base[i] = curbase;
                            if (!used[i]) {
                                used[i] = true;
                                q.push_back(i);
                            }
                        }
                } else if (parent[to] < 0) {
                    parent[to] = v;
                    if (match[to] < 0) return to;
                    used[match[to]] = true;
                    q.push_back(match[to]);
                }
            }
        }
        return -1;
    }

    void run() {
        for (int v = 0; v < n; ++v) {
            if (match[v] >= 0) continue;
            int u = find_path(v);
            while (u >= 0) {
                int pv = parent[u], ppv = match[pv];
                match[u] = pv;
                match[pv] = u;
                u = ppv;
            }
        }
    }
};

}  // namespace

std::vector<int> max_general_matching(const std::vector<Bitset>& rows) {
    Blossom b(rows);
    // greedy warm start
    for (int v = 0; v < b.n; ++v) {
        if (b.match[v] >= 0) continue;
        for (int u = rows[v].next(0); u >= 0; u = rows[v].next(u + 1))
            if (b.match[u] < 0) {
                b.match[v] = u;
                b.match[u] = v;
                break;
            }
    }
    b.run();
    return b.match;
}

}  // namespace perturb
