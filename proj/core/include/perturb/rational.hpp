#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace perturb {

// Exact rational arithmetic for densities and certificate inequalities.
// Arbitrary precision: Janson calculators raise small probabilities to
// large powers, which overflows any fixed-width pair.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Parses "a/b", plain integers, and decimal strings ("0.3333") exactly.
Rational parse_rational(const std::string& text);

inline std::string to_string(const Rational& r) {
    return r.str();
}

}  // namespace perturb
