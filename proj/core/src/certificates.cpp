#include "perturb/certificates.hpp"

#include "perturb/oracle.hpp"

#include <sstream>

namespace perturb {

namespace {

bool valid_partition(const Graph& g, const Bitset& a, const Bitset& b) {
    return !a.intersects(b) && (a | b) == Bitset::full(g.vertex_count());
}

bool a_edgeless(const Graph& g, const Bitset& a) {
    return g.edges_within(a) == 0;
}

}  // namespace

std::optional<AbsenceCertificate> packing_obstruction(const Graph& g, const Bitset& a,
                                                      const Bitset& b, int k, bool use_packing) {
    if (k < 2) throw std::invalid_argument("packing_obstruction: k must be >= 2");
    if (!valid_partition(g, a, b)) throw std::invalid_argument("packing_obstruction: (A,B) must partition V");
    if (a.none()) throw std::invalid_argument("packing_obstruction: A must be nonempty");
    if (!a_edgeless(g, a)) return std::nullopt;

    const int n = g.vertex_count();
    long long count;
    if (use_packing) {
        auto pk = max_disjoint_pk2_packing(g, k, b);
        if (!pk.exact) return std::nullopt;  // a lower bound cannot certify
        count = pk.size;
    } else {
        count = count_pk2_copies(g, k, b);
    }

    Rational lhs(count);
    Rational rhs(n - static_cast<long long>(k) * a.count(), k);
    if (!(lhs < rhs)) return std::nullopt;

    AbsenceCertificate cert;
    cert.kind = CertificateKind::packing_obstruction;
    cert.a = a;
    cert.b = b;
    cert.k = k;
    cert.pk2_count = count;
    cert.used_packing = use_packing;
    cert.lhs = lhs;
    cert.rhs = rhs;
    std::ostringstream os;
    os << count << " < (" << n << " - " << k << "*" << a.count() << ")/" << k;
    cert.inequality = os.str();
    return cert;
}

std::optional<AbsenceCertificate> small_gap_obstruction(const Graph& g, const Bitset& a,
                                                        const Bitset& b, int k) {
    if (k < 2) throw std::invalid_argument("small_gap_obstruction: k must be >= 2");
    if (!valid_partition(g, a, b)) throw std::invalid_argument("small_gap_obstruction: (A,B) must partition V");
    if (a.none()) throw std::invalid_argument("small_gap_obstruction: A must be nonempty");
    if (!a_edgeless(g, a)) return std::nullopt;

    const int n = g.vertex_count();
    Bitset covered = pk2_covered_vertices(g, k, b);
    long long z = b.count() - intersection_count(covered, b);

    AbsenceCertificate cert;
    cert.kind = CertificateKind::small_gap_obstruction;
    cert.a = a;
    cert.b = b;
    cert.k = k;
    cert.uncovered = z;

    if (k == 2) {
        // degenerate case: every B-run in an embedding has length >= 2, so
        // every B-vertex lies in a B-internal edge; one uncovered vertex suffices
        if (z < 1) return std::nullopt;
        cert.pk1_count = 0;
        cert.lhs = Rational(z);
        cert.rhs = Rational(0);
        cert.inequality = std::to_string(z) + " > 0";
        return cert;
    }

    long long cplus = count_pk2_copies(g, k + 1, b);
    cert.pk1_count = cplus;
    long long slack = std::max(0LL, static_cast<long long>(k + 1) * a.count() - n);
    Rational lhs(z);
    Rational rhs = Rational(static_cast<long long>(k) * k - 1) * cplus +
                   Rational(k - 1) * slack;
    if (!(lhs > rhs)) return std::nullopt;
    cert.lhs = lhs;
    cert.rhs = rhs;
    std::ostringstream os;
    os << z << " > (" << k << "^2-1)*" << cplus << " + (" << k - 1 << ")*max(0," << k + 1 << "*"
       << a.count() << "-" << n << ")";
    cert.inequality = os.str();
    return cert;
}

bool recheck_certificate(const Graph& g, const AbsenceCertificate& c) {
    if (!valid_partition(g, c.a, c.b) || !a_edgeless(g, c.a)) return false;
    const int n = g.vertex_count();
    if (c.kind == CertificateKind::packing_obstruction) {
        long long count = c.used_packing ? max_disjoint_pk2_packing(g, c.k, c.b).size
                                         : count_pk2_copies(g, c.k, c.b);
        if (count != c.pk2_count) return false;
        return Rational(count) < Rational(n - static_cast<long long>(c.k) * c.a.count(), c.k);
    }
    Bitset covered = pk2_covered_vertices(g, c.k, c.b);
    long long z = c.b.count() - intersection_count(covered, c.b);
    if (z != c.uncovered) return false;
    if (c.k == 2) return z >= 1;
    long long cplus = count_pk2_copies(g, c.k + 1, c.b);
    if (cplus != c.pk1_count) return false;
    long long slack = std::max(0LL, static_cast<long long>(c.k + 1) * c.a.count() - n);
    return Rational(z) > Rational(static_cast<long long>(c.k) * c.k - 1) * cplus +
                             Rational(c.k - 1) * slack;
}

std::string certificate_to_json(const AbsenceCertificate& c) {
    std::ostringstream os;
    os << "{\"kind\":\""
       << (c.kind == CertificateKind::packing_obstruction ? "packing_obstruction"
                                                          : "small_gap_obstruction")
       << "\",\"k\":" << c.k << ",\"A\":[";
    bool first = true;
    c.a.for_each([&](int v) {
        os << (first ? "" : ",") << v;
        first = false;
    });
    os << "],\"counts\":{\"pk2\":" << c.pk2_count << ",\"pk1\":" << c.pk1_count
       << ",\"uncovered\":" << c.uncovered << ",\"used_packing\":" << (c.used_packing ? "true" : "false")
       << "},\"inequality\":\"" << c.inequality << "\",\"lhs\":\"" << to_string(c.lhs)
       << "\",\"rhs\":\"" << to_string(c.rhs) << "\"}";
    return os.str();
}

}  // namespace perturb
