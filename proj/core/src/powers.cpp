#include "perturb/powers.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace perturb {

Graph rth_power(const Graph& g, int r) {
    if (r < 1) throw std::invalid_argument("rth_power: r must be >= 1");
    const int n = g.vertex_count();
    GraphBuilder b(n);
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (dist[v] == r) continue;
            g.neighbors(v).for_each([&](int u) {
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            });
        }
        for (int v = s + 1; v < n; ++v)
            if (dist[v] >= 1 && dist[v] <= r) b.add_edge(s, v);
    }
    return b.build();
}

Graph square_of_path(int k) {
    if (k < 1) throw std::invalid_argument("square_of_path: k must be >= 1");
    GraphBuilder b(k);
    for (int i = 0; i < k; ++i)
        for (int d = 1; d <= 2; ++d)
            if (i + d < k) b.add_edge(i, i + d);
    return b.build();
}

Graph square_of_cycle(int n) {
    if (n < 3) throw std::invalid_argument("square_of_cycle: n must be >= 3");
    GraphBuilder b(n);
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= 2; ++d) {
            int j = (i + d) % n;
            if (j != i && !b.has_edge(i, j)) b.add_edge(i, j);
        }
    return b.build();
}

Rational one_density(const Graph& f) {
    const int n = f.vertex_count();
    if (n < 2) throw std::invalid_argument("one_density: need at least 2 vertices");
    if (n > kOneDensityCap) throw std::invalid_argument("one_density: exact mode capped at 12 vertices");

    std::vector<uint32_t> rows(n, 0);
    for (int v = 0; v < n; ++v)
        f.neighbors(v).for_each([&](int u) { rows[v] |= 1u << u; });

    Rational best(0);
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        int sz = std::popcount(mask);
        if (sz < 2) continue;
        int edges = 0;
        for (uint32_t rest = mask; rest;) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            edges += std::popcount(rows[v] & rest);
        }
        Rational d(edges, sz - 1);
        if (d > best) best = d;
    }
    return best;
}

bool is_strictly_1_balanced(const Graph& f) {
    const int n = f.vertex_count();
    if (n < 2) throw std::invalid_argument("is_strictly_1_balanced: need at least 2 vertices");
    if (n > kOneDensityCap)
        throw std::invalid_argument("is_strictly_1_balanced: exact mode capped at 12 vertices");

    std::vector<uint32_t> rows(n, 0);
    for (int v = 0; v < n; ++v)
        f.neighbors(v).for_each([&](int u) { rows[v] |= 1u << u; });

    const uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
    Rational whole(static_cast<long long>(f.edge_count()), n - 1);
    // proper spanning subgraphs lose edges, so only vertex subsets matter
    for (uint32_t mask = 1; mask < all; ++mask) {
        int sz = std::popcount(mask);
        if (sz < 2) continue;
        int edges = 0;
        for (uint32_t rest = mask; rest;) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            edges += std::popcount(rows[v] & rest);
        }
        if (Rational(edges, sz - 1) >= whole) return false;
    }
    return true;
}

namespace {

bool distinct_in_range(const Graph& g, const std::vector<int>& seq) {
    std::vector<int> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("verifier: duplicate vertices");
    for (int v : seq)
        if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("verifier: vertex out of range");
    return true;
}

}  // namespace

bool verify_square_cycle(const Graph& g, const std::vector<int>& ordering) {
    const int n = static_cast<int>(ordering.size());
    if (n < 3) return false;
    distinct_in_range(g, ordering);
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= 2; ++d) {
            int j = (i + d) % n;
            if (j == i) continue;
            if (!g.has_edge(ordering[i], ordering[j])) return false;
        }
    return true;
}

bool verify_square_path(const Graph& g, const std::vector<int>& seq, bool relax_end_edges) {
    const int k = static_cast<int>(seq.size());
    if (k < 1) return false;
    distinct_in_range(g, seq);
    for (int i = 0; i < k; ++i)
        for (int d = 1; d <= 2; ++d) {
            int j = i + d;
            if (j >= k) continue;
            if (relax_end_edges && d == 1 && (i == 0 || j == k - 1)) continue;
            if (!g.has_edge(seq[i], seq[j])) return false;
        }
    return true;
}

int MaxDeg2Graph::total() const {
    int t = 0;
    for (int p : path_lengths) t += p;
    for (int c : cycle_lengths) t += c;
    return t;
}

std::string MaxDeg2Graph::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int p : path_lengths) {
        os << (first ? "" : "+") << "P" << p;
        first = false;
    }
    for (int c : cycle_lengths) {
        os << (first ? "" : "+") << "C" << c;
        first = false;
    }
    return os.str();
}

Graph MaxDeg2Graph::realize() const {
    GraphBuilder b(total());
    int at = 0;
    for (int p : path_lengths) {
        for (int i = 1; i < p; ++i) b.add_edge(at + i - 1, at + i);
        at += p;
    }
    for (int c : cycle_lengths) {
        for (int i = 1; i < c; ++i) b.add_edge(at + i - 1, at + i);
        b.add_edge(at, at + c - 1);
        at += c;
    }
    return b.build();
}

namespace {

void enum_cycles(int rem, int max_len, MaxDeg2Graph& cur, std::vector<MaxDeg2Graph>& out) {
    if (rem == 0) {
        out.push_back(cur);
        return;
    }
    for (int c = std::min(rem, max_len); c >= 3; --c) {
        cur.cycle_lengths.push_back(c);
        enum_cycles(rem - c, c, cur, out);
        cur.cycle_lengths.pop_back();
    }
}

void enum_paths(int rem, int max_len, MaxDeg2Graph& cur, std::vector<MaxDeg2Graph>& out) {
    enum_cycles(rem, rem, cur, out);
    for (int p = std::min(rem, max_len); p >= 1; --p) {
        cur.path_lengths.push_back(p);
        enum_paths(rem - p, p, cur, out);
        cur.path_lengths.pop_back();
    }
}

}  // namespace

std::vector<MaxDeg2Graph> enumerate_maxdeg2(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_maxdeg2: n must be >= 1");
    if (n > kMaxDeg2EnumCap) throw std::invalid_argument("enumerate_maxdeg2: n over enumeration cap");
    std::vector<MaxDeg2Graph> out;
    MaxDeg2Graph cur;
    enum_paths(n, n, cur, out);
    return out;
}

}  // namespace perturb
