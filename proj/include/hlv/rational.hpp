#pragma once

// Arbitrary-precision rationals. Thin layer over GMP's mpq_class: GMP already
// keeps gcd(|num|, den) = 1 and den > 0 after canonicalize(), which is exactly
// the invariant we need.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hlv {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Canonical string form: "n" when the denominator is 1, else "n/d".
inline std::string rat_to_string(const Rat& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("rat_from_string: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

inline Int rat_num(const Rat& r) { return r.get_num(); }
inline Int rat_den(const Rat& r) { return r.get_den(); }

// gcd of |a|, |b| as nonnegative rationals-of-integers; used for polynomial content.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s), the canonical generator of the
    // fractional ideal (a, b).
    Int n;
    mpz_gcd(n.get_mpz_t(), Int(a.get_num() * b.get_den()).get_mpz_t(),
            Int(b.get_num() * a.get_den()).get_mpz_t());
    Rat g(n, a.get_den() * b.get_den());
    g.canonicalize();
    return g;
}

inline Int factorial(int n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

}  // namespace hlv
