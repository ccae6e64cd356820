#include "perturb/generators.hpp"

#include "perturb/stability.hpp"

#include <cmath>

namespace perturb {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
}

// visits each index of [0, space) independently with probability p,
// in increasing order, via geometric skips
template <typename F>
void sample_indices(long long space, double p, Rng& rng, F&& accept) {
    if (space <= 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (long long t = 0; t < space; ++t) accept(t);
        return;
    }
    const double logq = std::log1p(-p);
    long long t = -1;
    while (true) {
        double u = rng.next_double();
        double skip = std::floor(std::log1p(-u) / logq);
        if (skip > static_cast<double>(space)) break;
        t += 1 + static_cast<long long>(skip);
        if (t >= space) break;
        accept(t);
    }
}

// decodes pair index t (pairs u<v in lexicographic order) for an n-universe
std::pair<int, int> decode_pair(long long t, int n) {
    // first(u) rows have n-1-u entries; cum(u) = u*n - u(u+1)/2
    double disc = static_cast<double>(2 * n - 1) * (2 * n - 1) - 8.0 * static_cast<double>(t);
    int u = static_cast<int>((2.0 * n - 1.0 - std::sqrt(disc)) / 2.0);
    auto cum = [&](long long x) { return x * n - x * (x + 1) / 2; };
    while (u > 0 && cum(u) > t) --u;
    while (cum(u + 1) <= t) ++u;
    int v = static_cast<int>(t - cum(u)) + u + 1;
    return {u, v};
}

}  // namespace

Graph gnp(int n, double p, Seed seed) {
    check_probability(p);
    GraphBuilder b(n);
    Rng rng(seed);
    sample_indices(static_cast<long long>(n) * (n - 1) / 2, p, rng, [&](long long t) {
        auto [u, v] = decode_pair(t, n);
        b.add_edge(u, v);
    });
    return b.build();
}

DiGraph gnp_directed(int n, double p, Seed seed) {
    check_probability(p);
    DiGraphBuilder b(n);
    Rng rng(seed);
    sample_indices(static_cast<long long>(n) * (n - 1), p, rng, [&](long long t) {
        int u = static_cast<int>(t / (n - 1));
        int r = static_cast<int>(t % (n - 1));
        int v = r + (r >= u ? 1 : 0);
        b.add_arc(u, v);
    });
    return b.build();
}

Graph gnp_multipartite(const std::vector<int>& part_sizes, double p, Seed seed) {
    check_probability(p);
    int n = 0;
    std::vector<int> offset;
    for (int s : part_sizes) {
        if (s <= 0) throw std::invalid_argument("gnp_multipartite: parts must be nonempty");
        offset.push_back(n);
        n += s;
    }
    GraphBuilder b(n);
    const int k = static_cast<int>(part_sizes.size());
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Rng rng(seed.child("block", static_cast<uint64_t>(i) * k + j));
            long long space = static_cast<long long>(part_sizes[i]) * part_sizes[j];
            sample_indices(space, p, rng, [&](long long t) {
                int a = static_cast<int>(t / part_sizes[j]);
                int c = static_cast<int>(t % part_sizes[j]);
                b.add_edge(offset[i] + a, offset[j] + c);
            });
        }
    return b.build();
}

Graph gnp_bipartite_between(int universe, const Bitset& a, const Bitset& b, double p, Seed seed) {
    check_probability(p);
    if (a.intersects(b)) throw std::invalid_argument("gnp_bipartite_between: sides overlap");
    auto av = a.to_vector();
    auto bv = b.to_vector();
    GraphBuilder gb(universe);
    Rng rng(seed);
    sample_indices(static_cast<long long>(av.size()) * bv.size(), p, rng, [&](long long t) {
        gb.add_edge(av[t / bv.size()], bv[t % bv.size()]);
    });
    return gb.build();
}

namespace {

long long rational_floor(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q.convert_to<long long>();
}

// round to nearest, ties to even
int round_half_even(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    BigInt rem = num - q * den;  // 0 <= rem < den for non-negative r
    BigInt twice = 2 * rem;
    if (twice > den || (twice == den && (q & 1) == 1)) ++q;
    return q.convert_to<int>();
}

}  // namespace

ExtremalBipartite extremal_bipartite(const Rational& alpha, int n) {
    if (!(alpha > 0 && alpha < Rational(1, 2)))
        throw std::invalid_argument("extremal_bipartite: alpha must be in (0, 1/2)");
    int size_a = round_half_even(alpha * n);
    if (size_a < 1 || size_a >= n)
        throw std::invalid_argument("extremal_bipartite: degenerate class size");
    GraphBuilder b(n);
    Bitset a_set(n), b_set(n);
    for (int v = 0; v < size_a; ++v) a_set.set(v);
    for (int v = size_a; v < n; ++v) b_set.set(v);
    for (int u = 0; u < size_a; ++u)
        for (int v = size_a; v < n; ++v) b.add_edge(u, v);
    return {b.build(), a_set, b_set};
}

StableInstance stable_instance(const Rational& alpha, const Rational& beta, int n, double noise,
                               Seed seed) {
    if (!(beta > 0) || beta * 4 >= alpha)
        throw std::invalid_argument("stable_instance: need 0 < beta < alpha/4");
    if (beta * n < 1)
        throw std::invalid_argument("stable_instance: beta*n < 1 cannot absorb rounding");
    if (noise < 0 || noise > 1) throw std::invalid_argument("stable_instance: bad noise");

    auto ext = extremal_bipartite(alpha, n);
    GraphBuilder gb(ext.graph);
    const Bitset& A = ext.a;
    const Bitset& B = ext.b;
    const int size_a = A.count();
    const int size_b = B.count();

    const long long beta_n2 = rational_floor(beta * n * n);
    const long long min_deg = rational_floor(alpha * n);

    // (ii) first: B-internal random edges at half the stability budget, so the
    // cross-edge deletions below have degree slack to spend
    {
        double q = 0.0;
        long long pairs_b = static_cast<long long>(size_b) * (size_b - 1) / 2;
        if (pairs_b > 0) q = std::min(1.0, static_cast<double>(beta_n2) / (2.0 * pairs_b));
        Rng rng(seed.child("b-internal"));
        auto bv = B.to_vector();
        sample_indices(pairs_b, q, rng, [&](long long t) {
            auto [i, j] = decode_pair(t, size_b);
            gb.add_edge(bv[i], bv[j]);
        });
        // enforce the e(G[B]) budget exactly
        long long eb = gb.build().edges_within(B);
        while (eb > beta_n2) {
            int v = bv[rng.next_int(size_b)];
            auto row = gb.neighbors(v) & B;
            int u = row.next(0);
            if (u < 0) continue;
            gb.remove_edge(u, v);
            --eb;
        }
    }

    // (i) cross-edge deletions, capped so every stability condition survives:
    // each vertex keeps all but floor(beta n / 2) of its cross edges, and the
    // overall minimum degree never drops below floor(alpha n)
    {
        const long long per_vertex_cap = rational_floor(beta * n) / 2;
        std::vector<int> deleted(n, 0);
        long long target = static_cast<long long>(noise * static_cast<double>(n) * n);
        Rng rng(seed.child("noise"));
        auto av = A.to_vector();
        auto bv = B.to_vector();
        for (long long attempt = 0; attempt < target; ++attempt) {
            int a = av[rng.next_int(size_a)];
            int b = bv[rng.next_int(size_b)];
            if (!gb.has_edge(a, b)) continue;
            if (deleted[a] >= per_vertex_cap || deleted[b] >= per_vertex_cap) continue;
            if (gb.neighbors(a).count() - 1 < min_deg) continue;
            if (gb.neighbors(b).count() - 1 < min_deg) continue;
            gb.remove_edge(a, b);
            ++deleted[a];
            ++deleted[b];
        }
    }

    StableInstance inst{gb.build(), StabilityWitness{A, B, alpha, beta}};
    if (!verify_stable(inst.graph, inst.witness))
        throw std::logic_error("stable_instance: construction violated its own witness");
    for (int v = 0; v < n; ++v)
        if (inst.graph.degree(v) < min_deg)
            throw std::logic_error("stable_instance: minimum degree fell below floor(alpha n)");
    return inst;
}

}  // namespace perturb
