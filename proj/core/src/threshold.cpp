#include "perturb/threshold.hpp"

#include "perturb/certificates.hpp"
#include "perturb/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace perturb {

double ThresholdPrediction::value(double n) const {
    if (zero) return 0.0;
    double v = std::pow(n, to_double(exponent));
    if (log_exponent != 0) v *= std::pow(std::log(n), to_double(log_exponent));
    return v;
}

std::string ThresholdPrediction::formula() const {
    if (zero) return "0";
    std::ostringstream os;
    os << "n^(" << to_string(exponent) << ")";
    if (log_exponent != 0) os << " (log n)^(" << to_string(log_exponent) << ")";
    return os.str();
}

namespace {

// alpha = 1/(k+1) exactly?  returns k or 0
int boundary_k(const Rational& alpha) {
    if (alpha <= 0) return 0;
    Rational inv = Rational(1) / alpha;
    BigInt num = boost::multiprecision::numerator(inv);
    BigInt den = boost::multiprecision::denominator(inv);
    if (den != 1) return 0;
    long long v = num.convert_to<long long>();
    return v >= 3 ? static_cast<int>(v - 1) : 0;
}

int open_interval_k(const Rational& alpha) {
    // k with alpha in (1/(k+1), 1/k)
    Rational inv = Rational(1) / alpha;
    BigInt num = boost::multiprecision::numerator(inv);
    BigInt den = boost::multiprecision::denominator(inv);
    BigInt q = num / den;  // floor, inv > 0
    return static_cast<int>(q.convert_to<long long>());
}

}  // namespace

ThresholdPrediction predicted_threshold(const Rational& alpha) {
    if (alpha < 0 || alpha >= 1) throw std::invalid_argument("predicted_threshold: alpha in [0,1)");
    ThresholdPrediction out;
    out.alpha = alpha;
    if (alpha >= Rational(2, 3)) {
        out.zero = true;
        out.regime = "extremal";
        return out;
    }
    if (alpha == 0) {
        out.regime = "pure-random";
        out.exponent = Rational(-1, 2);
        return out;
    }
    if (alpha >= Rational(1, 2)) {
        out.regime = "linear-random-edges";
        out.exponent = Rational(-1);
        return out;
    }
    if (int k = boundary_k(alpha); k >= 2) {
        out.k = k;
        out.regime = "boundary";
        out.exponent = Rational(-(k - 1), 2 * k - 3);
        out.log_exponent = Rational(1, 2 * k - 3);
        return out;
    }
    int k = open_interval_k(alpha);
    out.k = k;
    out.regime = "open-interval";
    out.exponent = Rational(-(k - 1), 2 * k - 3);
    return out;
}

ThresholdPrediction predicted_threshold_universality(const Rational& alpha) {
    if (alpha < 0 || alpha >= 1)
        throw std::invalid_argument("predicted_threshold_universality: alpha in [0,1)");
    ThresholdPrediction out;
    out.alpha = alpha;
    if (alpha >= Rational(2, 3)) {
        out.zero = true;
        out.regime = "extremal";
        return out;
    }
    if (alpha == 0) {
        out.regime = "pure-random";
        out.exponent = Rational(-2, 3);
        out.log_exponent = Rational(1, 3);
        return out;
    }
    if (alpha > Rational(1, 3)) {
        out.regime = "linear-random-edges";
        out.exponent = Rational(-1);
        return out;
    }
    if (alpha == Rational(1, 3)) {
        out.regime = "boundary";
        out.exponent = Rational(-1);
        out.log_exponent = Rational(1);
        return out;
    }
    out.regime = "open-interval";
    out.exponent = Rational(-2, 3);
    return out;
}

const char* to_string(DeciderKind k) {
    switch (k) {
        case DeciderKind::exact_oracle: return "exact";
        case DeciderKind::extremal_pipeline: return "pipeline";
        case DeciderKind::certificate_refuter: return "certificate";
    }
    return "?";
}

std::pair<double, double> wilson_interval(int successes, int trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = trials;
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (phat + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

bool run_trial(const PerturbedModel& model, const Decider& dec, Seed trial_seed) {
    const int n = model.dense_part.vertex_count();
    switch (dec.kind) {
        case DeciderKind::exact_oracle: {
            if (n > dec.oracle_max_n)
                throw std::invalid_argument("exact decider beyond its size bound");
            Graph u = graph_union(model.dense_part, gnp(n, model.p, trial_seed.child("gnp")));
            auto r = find_square_ham_cycle(u, dec.oracle_budget);
            if (r.status == SearchStatus::budget_exhausted)
                throw std::runtime_error("exact decider ran out of budget");
            return r.status == SearchStatus::found;
        }
        case DeciderKind::extremal_pipeline: {
            auto r = run_extremal_pipeline(model.dense_part, dec.witness, dec.k, model.p,
                                           trial_seed.child("pipeline"), dec.pipeline_cfg);
            return r.success;
        }
        case DeciderKind::certificate_refuter: {
            Graph u = graph_union(model.dense_part, gnp(n, model.p, trial_seed.child("gnp")));
            auto pk = packing_obstruction(u, dec.witness.a, dec.witness.b, dec.k);
            if (pk) return true;
            auto sg = small_gap_obstruction(u, dec.witness.a, dec.witness.b, dec.k);
            return sg.has_value();
        }
    }
    return false;
}

}  // namespace

SweepPoint estimate_success_prob(const PerturbedModel& model, const Decider& decider, int trials,
                                 Seed seed, int jobs) {
    SweepPoint pt;
    pt.p = model.p;
    pt.trials = trials;
    pt.decider = decider.kind;
    pt.seed = seed.base;

    std::atomic<int> successes{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mu;

    jobs = std::max(1, jobs);
    auto worker = [&](int from, int to) {
        for (int i = from; i < to && !failed.load(); ++i) {
            try {
                if (run_trial(model, decider, seed.child("trial", i))) successes.fetch_add(1);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(error_mu);
                failed = true;
                error = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        int chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            int from = j * chunk;
            int to = std::min(trials, from + chunk);
            if (from < to) pool.emplace_back(worker, from, to);
        }
        for (auto& th : pool) th.join();
    }
    if (failed) throw std::runtime_error("estimate_success_prob: " + error);

    pt.successes = successes.load();
    auto [lo, hi] = wilson_interval(pt.successes, pt.trials);
    pt.wilson_low = lo;
    pt.wilson_high = hi;
    return pt;
}

BisectResult bisect_critical_p(const std::function<SweepPoint(double)>& estimate, double p_lo,
                               double p_hi, double target, double tol, int max_probes) {
    if (!(p_lo > 0 && p_hi > p_lo && p_hi <= 1))
        throw std::invalid_argument("bisect_critical_p: bad endpoints");
    BisectResult res;
    SweepPoint lo_pt = estimate(p_lo);
    SweepPoint hi_pt = estimate(p_hi);
    res.trace.push_back(lo_pt);
    res.trace.push_back(hi_pt);
    res.probes = 2;
    if (lo_pt.rate() > target || hi_pt.rate() < target)
        throw std::runtime_error("bisect_critical_p: endpoints do not bracket the target");

    double best_p = p_hi;
    double best_gap = std::abs(hi_pt.rate() - target);
    double lo = p_lo, hi = p_hi;
    while (res.probes < max_probes && hi / lo > 1.02) {
        double mid = std::exp((std::log(lo) + std::log(hi)) / 2);
        SweepPoint pt = estimate(mid);
        res.trace.push_back(pt);
        ++res.probes;
        double gap = std::abs(pt.rate() - target);
        if (gap < best_gap) {
            best_gap = gap;
            best_p = mid;
        }
        if (gap <= tol) break;
        (pt.rate() < target ? lo : hi) = mid;
    }
    res.p_hat = best_p;
    return res;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 points");
    std::vector<double> xs, ys;
    for (auto [n, p] : pts) {
        if (n <= 0 || p <= 0) throw std::invalid_argument("fit_exponent: positive inputs required");
        xs.push_back(std::log(n));
        ys.push_back(std::log(p));
    }
    {
        auto sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        if (std::unique(sorted.begin(), sorted.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }) -
                sorted.begin() < 3)
            throw std::invalid_argument("fit_exponent: degenerate design (need 3 distinct n)");
    }
    const size_t n = xs.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.stderr_slope = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return fit;
}

namespace {

Rational falling_factorial(long long n, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r *= Rational(n - i);
    return r;
}

Rational binomial(long long n, long long k) {
    if (k < 0 || k > n) return Rational(0);
    Rational r(1);
    for (long long i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

Rational rational_pow(const Rational& base, long long e) {
    Rational r(1);
    for (long long i = 0; i < e; ++i) r *= base;
    return r;
}

long long factorial_ll(int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace

long long e_tilde(int k, int m) {
    if (k < 2 || m < 2) throw std::invalid_argument("e_tilde: need k >= 2, m >= 2");
    const long long blocks = m / k;
    if (m % k == 0) return blocks * (2 * k - 3) + blocks - 1;
    if (m % k == 1) return blocks * (2 * k - 3) + blocks;
    return blocks * (2 * k - 3) + blocks + 2 * (m - k * blocks) - 3;
}

double JansonBounds::lower_tail(double gamma) const {
    double e = to_double(expectation_labeled);
    double d = to_double(delta_labeled);
    if (e <= 0) return 1.0;
    return std::min(1.0, std::exp(-gamma * gamma * e * e / (2 * (e + d))));
}

JansonBounds janson_bounds(const JansonInput& in) {
    if (in.p < 0 || in.p > 1) throw std::invalid_argument("janson_bounds: p outside [0,1]");
    JansonBounds out;
    int k = in.k;
    int s = 1;
    switch (in.structure) {
        case JansonStructure::pk2_in_set: break;
        case JansonStructure::sublinear_pk1: k = in.k + 1; break;
        case JansonStructure::linked_squares: s = in.s; break;
    }
    if (k < 2 || s < 1) throw std::invalid_argument("janson_bounds: unsupported structure");
    const int tuple_len = s * k;
    const long long edges = static_cast<long long>(s) * (2 * k - 3) + (s - 1);
    const long long aut = (s == 1) ? (k == 3 ? 6 : 2) : 1;

    out.expectation_labeled = falling_factorial(in.set_size, tuple_len) * rational_pow(in.p, edges);
    out.expectation = out.expectation_labeled / aut;

    Rational delta(0);
    for (int m = 2; m <= tuple_len - 1; ++m) {
        long long shared = e_tilde(k, m);
        Rational pairs = Rational(factorial_ll(m)) * binomial(tuple_len, m) *
                         binomial(tuple_len, m) * falling_factorial(in.set_size, 2 * tuple_len - m);
        delta += pairs * rational_pow(in.p, 2 * edges - shared);
    }
    out.delta_labeled = delta;
    return out;
}

double relative_entropy(double x, double y) {
    if (x < 0 || x > 1 || y <= 0 || y >= 1)
        throw std::invalid_argument("relative_entropy: domain violation");
    double r = 0;
    if (x > 0) r += x * std::log(x / y);
    if (x < 1) r += (1 - x) * std::log((1 - x) / (1 - y));
    return r;
}

ChernoffBounds chernoff_bounds(long long n, double p, double delta) {
    if (n <= 0 || p <= 0 || p >= 1 || delta < 0 || delta > p)
        throw std::invalid_argument("chernoff_bounds: domain violation");
    ChernoffBounds b{};
    const double mean = static_cast<double>(n) * p;
    b.multiplicative = std::min(1.0, 2 * std::exp(-delta * delta * mean / 3));
    b.relative_entropy_value = relative_entropy(p - delta, p);
    b.entropy_form = std::min(1.0, std::exp(-b.relative_entropy_value * static_cast<double>(n)));
    return b;
}

}  // namespace perturb
