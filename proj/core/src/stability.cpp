#include "perturb/stability.hpp"

#include <algorithm>
#include <numeric>

namespace perturb {

namespace {

bool size_window(long long size, const Rational& center, const Rational& beta, int n) {
    Rational s(size);
    return s >= (center - beta) * n && s <= (center + beta) * n;
}

}  // namespace

bool verify_stable(const Graph& g, const StabilityWitness& w) {
    const int n = g.vertex_count();
    if ((w.a | w.b) != Bitset::full(n) || w.a.intersects(w.b)) return false;
    if (w.a.none() || w.b.none()) return false;

    if (!size_window(w.a.count(), w.alpha, w.beta, n)) return false;
    if (!size_window(w.b.count(), Rational(1) - w.alpha, w.beta, n)) return false;

    const Rational quarter_alpha_n = w.alpha * n / 4;
    const Rational beta_n = w.beta * n;
    bool min_degree_ok = true;
    long long a_low = 0, b_low = 0;
    w.a.for_each([&](int v) {
        int cross = g.degree_into(v, w.b);
        if (Rational(cross) < quarter_alpha_n) min_degree_ok = false;
        if (Rational(cross) < Rational(w.b.count()) - beta_n) ++a_low;
    });
    w.b.for_each([&](int v) {
        int cross = g.degree_into(v, w.a);
        if (Rational(cross) < quarter_alpha_n) min_degree_ok = false;
        if (Rational(cross) < Rational(w.a.count()) - beta_n) ++b_low;
    });
    if (!min_degree_ok) return false;
    if (Rational(a_low) > beta_n || Rational(b_low) > beta_n) return false;

    return Rational(g.edges_within(w.b)) <= w.beta * n * n;
}

namespace {

// How far a candidate partition is from satisfying the stability conditions;
// zero slack means the verifier passes.  Used to drive local moves.
long long stability_deficit(const Graph& g, const Bitset& a, const Bitset& b,
                            const Rational& alpha, const Rational& beta) {
    const int n = g.vertex_count();
    long long deficit = 0;
    auto over = [](const Rational& x) {
        if (x <= 0) return 0LL;
        BigInt num = boost::multiprecision::numerator(x);
        BigInt den = boost::multiprecision::denominator(x);
        BigInt q = (num + den - 1) / den;
        return q.convert_to<long long>();
    };

    deficit += over((alpha - beta) * n - a.count());
    deficit += over(Rational(a.count()) - (alpha + beta) * n);

    const Rational quarter = alpha * n / 4;
    const Rational beta_n = beta * n;
    long long a_low = 0, b_low = 0;
    a.for_each([&](int v) {
        int cross = g.degree_into(v, b);
        deficit += over(quarter - cross);
        if (Rational(cross) < Rational(b.count()) - beta_n) ++a_low;
    });
    b.for_each([&](int v) {
        int cross = g.degree_into(v, a);
        deficit += over(quarter - cross);
        if (Rational(cross) < Rational(a.count()) - beta_n) ++b_low;
    });
    deficit += over(Rational(a_low) - beta_n);
    deficit += over(Rational(b_low) - beta_n);
    deficit += over((Rational(g.edges_within(b)) - beta * n * n) / n);
    return deficit;
}

}  // namespace

std::optional<StabilityWitness> find_stable_partition(const Graph& g, const Rational& alpha,
                                                      const Rational& beta,
                                                      const StablePartitionOptions& opts) {
    const int n = g.vertex_count();
    if (n == 0) return std::nullopt;

    if (n <= opts.exhaustive_max_n) {
        for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            Bitset a(n), b(n);
            for (int v = 0; v < n; ++v)
                (mask >> v & 1) ? a.set(v) : b.set(v);
            StabilityWitness w{a, b, alpha, beta};
            if (verify_stable(g, w)) return w;
        }
        return std::nullopt;
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int u, int v) { return g.degree(u) > g.degree(v); });

    long long size_a = std::llround(to_double(alpha * n));
    // In near-extremal graphs the small class A is the high-degree one, so the
    // top-degree seed is tried first; the low-degree seed is kept as a fallback.
    for (bool top_degree : {true, false}) {
        Bitset a(n), b(n);
        for (int i = 0; i < n; ++i) {
            int v = top_degree ? order[i] : order[n - 1 - i];
            (i < size_a) ? a.set(v) : b.set(v);
        }
        long long deficit = stability_deficit(g, a, b, alpha, beta);
        long long spent = 0;
        while (deficit > 0 && spent < opts.budget) {
            long long best_gain = 0;
            int best_u = -1, best_v = -1;
            for (int u = a.next(0); u >= 0 && spent < opts.budget; u = a.next(u + 1)) {
                for (int v = b.next(0); v >= 0 && spent < opts.budget; v = b.next(v + 1)) {
                    ++spent;
                    Bitset a2 = a, b2 = b;
                    a2.reset(u);
                    a2.set(v);
                    b2.reset(v);
                    b2.set(u);
                    long long d2 = stability_deficit(g, a2, b2, alpha, beta);
                    if (deficit - d2 > best_gain) {
                        best_gain = deficit - d2;
                        best_u = u;
                        best_v = v;
                    }
                }
            }
            if (best_u < 0) break;
            a.reset(best_u);
            a.set(best_v);
            b.reset(best_v);
            b.set(best_u);
            deficit -= best_gain;
        }
        StabilityWitness w{a, b, alpha, beta};
        if (verify_stable(g, w)) return w;
    }
    return std::nullopt;
}

}  // namespace perturb
