#pragma once

#include "perturb/extremal.hpp"
#include "perturb/generators.hpp"
#include "perturb/rational.hpp"

#include <functional>
#include <string>
#include <vector>

namespace perturb {

// Closed-form perturbed-threshold predictions (the piecewise tables).
struct ThresholdPrediction {
    Rational alpha;
    int k = 0;  // the guiding block length where applicable
    std::string regime;
    bool zero = false;
    Rational exponent;      // exponent of n
    Rational log_exponent;  // exponent of log n

    double value(double n) const;
    std::string formula() const;
};

ThresholdPrediction predicted_threshold(const Rational& alpha);
ThresholdPrediction predicted_threshold_universality(const Rational& alpha);

// ----- Monte Carlo estimation -----

enum class DeciderKind { exact_oracle, extremal_pipeline, certificate_refuter };

const char* to_string(DeciderKind k);

struct Decider {
    DeciderKind kind = DeciderKind::exact_oracle;
    int k = 2;
    // witness over the dense part; required by the pipeline and the refuter
    StabilityWitness witness;
    ExtremalConfig pipeline_cfg;
    long long oracle_budget = -1;
    int oracle_max_n = 12;
};

struct SweepPoint {
    double p = 0;
    int trials = 0;
    int successes = 0;
    DeciderKind decider = DeciderKind::exact_oracle;
    uint64_t seed = 0;
    double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
    double wilson_low = 0;
    double wilson_high = 1;
};

std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.959963985);

// Success fraction over `trials` derived seeds.  Success means: containment
// found (exact oracle), pipeline succeeded (extremal), or absence proven
// (certificate refuter) -- the decider kind is recorded with the point.
SweepPoint estimate_success_prob(const PerturbedModel& model, const Decider& decider, int trials,
                                 Seed seed, int jobs = 1);

struct BisectResult {
    double p_hat = 0;
    int probes = 0;
    std::vector<SweepPoint> trace;
};

// Bisection on log p between bracketing endpoints; the estimate callback is
// typically estimate_success_prob at fixed trials.
BisectResult bisect_critical_p(const std::function<SweepPoint(double)>& estimate, double p_lo,
                               double p_hi, double target, double tol, int max_probes = 30);

struct ExponentFit {
    double slope = 0;
    double stderr_slope = 0;
    double intercept = 0;
};

// least-squares slope of log p over log n; needs >= 3 distinct n
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& n_p_points);

// ----- Janson / Chernoff calculators -----

enum class JansonStructure { pk2_in_set, linked_squares, sublinear_pk1 };

struct JansonInput {
    JansonStructure structure = JansonStructure::pk2_in_set;
    int k = 2;
    int s = 1;  // number of linked blocks (linked_squares only)
    long long set_size = 0;
    Rational p;
};

struct JansonBounds {
    Rational expectation;          // copy-count convention (labeled / |Aut|)
    Rational expectation_labeled;  // tuple-indexed family
    Rational delta_labeled;        // per-overlap-size upper bound on Δ[X]
    double lower_tail(double gamma) const;
};

// E[X] from exact tuple counts; Δ[X] by the per-overlap-size sum with the
// three-case maximal-intersection formula, all in exact rationals.
JansonBounds janson_bounds(const JansonInput& in);

// the largest edge count of an m-vertex intersection of two linked-squares
// graphs with parameter k (valid for 2 <= m <= sk-1)
long long e_tilde(int k, int m);

struct ChernoffBounds {
    double multiplicative;     // P[|X-E| >= delta E] <= 2 exp(-delta^2 E / 3)
    double entropy_form;       // P[X <= E - delta n] <= exp(-D(p-delta||p) n)
    double relative_entropy_value;  // D(p-delta || p)
};

ChernoffBounds chernoff_bounds(long long n, double p, double delta);
double relative_entropy(double x, double y);  // D(x||y)

}  // namespace perturb
