#pragma once

#include "perturb/graph.hpp"
#include "perturb/rational.hpp"

#include <optional>
#include <string>

namespace perturb {

enum class CertificateKind { packing_obstruction, small_gap_obstruction };

// A finite counting witness that g contains no square Hamilton cycle,
// together with the inequality instance it satisfies (both sides exact).
struct AbsenceCertificate {
    CertificateKind kind;
    Bitset a;
    Bitset b;
    int k = 2;

    long long pk2_count = 0;        // copies of P_k^2 inside B (or packing size)
    bool used_packing = false;      // tighter mode: vertex-disjoint packing
    long long pk1_count = 0;        // copies of P_{k+1}^2 inside B
    long long uncovered = 0;        // z: B-vertices in no P_k^2 inside B

    Rational lhs;
    Rational rhs;
    std::string inequality;  // human-readable instance, e.g. "0 < (9 - 2*3)/2"
};

// Finite strengthening of the packing lower bound.  Requires (A,B) to
// partition V(g) with A internally edgeless.  Any embedding of C_n^2 forces
// at least (n - k|A|)/k vertex-disjoint P_k^2 copies inside B (each of the
// |A| cyclic gaps of length g_i >= 3 yields floor((g_i-1)/k) of them and
// sum g_i = n), so a smaller copy count certifies absence.
std::optional<AbsenceCertificate> packing_obstruction(const Graph& g, const Bitset& a,
                                                      const Bitset& b, int k,
                                                      bool use_packing = false);

// Finite strengthening of the boundary-case lower bound.  With z the number
// of B-vertices in no P_k^2 inside B and c+ the number of P_{k+1}^2 copies
// inside B, any embedding satisfies
//     z <= (k^2-1) c+ + (k-1) max(0, (k+1)|A| - n)      (k >= 3),
// since short gaps (<= k) carry at most k-1 uncovered vertices each, their
// number is at most the total gap excess (k+1)c+ + (k+1)|A| - n.  For k = 2
// every gap run has length >= 2 = k, so z >= 1 alone certifies absence.
std::optional<AbsenceCertificate> small_gap_obstruction(const Graph& g, const Bitset& a,
                                                        const Bitset& b, int k);

// re-evaluates the stored inequality and preconditions from the graph
bool recheck_certificate(const Graph& g, const AbsenceCertificate& c);

std::string certificate_to_json(const AbsenceCertificate& c);

}  // namespace perturb
