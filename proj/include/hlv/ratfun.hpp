#pragma once

// Normalized rational functions num/den over the Laurent ring. Canonical
// representative: den is a pure polynomial with no monomial factor, integer
// coprime coefficients and positive leading coefficient; gcd(num, den) = 1.
// Equality of rational functions is plain structural equality.

#include <hlv/laurent.hpp>
#include <hlv/polygcd.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace hlv {

class RatFun {
public:
    RatFun() : num_(Laurent::zero()), den_(Laurent::one()) {}
    RatFun(const Laurent& num) : num_(num), den_(Laurent::one()) {}  // NOLINT: implicit by design
    RatFun(const Rat& c) : num_(Laurent::constant(c)), den_(Laurent::one()) {}
    RatFun(long c) : num_(Laurent::constant(Rat(c))), den_(Laurent::one()) {}

    static RatFun of(const Laurent& num, const Laurent& den) {
        RatFun f;
        f.num_ = num;
        f.den_ = den;
        f.normalize();
        return f;
    }

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }
    friend bool operator<(const RatFun& a, const RatFun& b) {
        if (!(a.den_ == b.den_)) return a.den_ < b.den_;
        return a.num_ < b.num_;
    }

    friend RatFun operator-(const RatFun& a) {
        RatFun r = a;
        r.num_ = -r.num_;
        return r;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        RatFun r;
        if (a.den_ == b.den_) {
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
        } else {
            r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
            r.den_ = a.den_ * b.den_;
        }
        r.normalize();
        return r;
    }

    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        RatFun r;
        r.num_ = a.num_ * b.num_;
        if (a.den_.is_one()) {
            r.den_ = b.den_;
        } else if (b.den_.is_one()) {
            r.den_ = a.den_;
        } else {
            r.den_ = a.den_ * b.den_;
        }
        r.normalize();
        return r;
    }

    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw std::domain_error("RatFun: division by zero");
        if (a.is_zero()) return RatFun();
        RatFun r;
        r.num_ = a.num_ * b.den_;
        r.den_ = a.den_ * b.num_;
        r.normalize();
        return r;
    }

    RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
    RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
    RatFun& operator*=(const RatFun& b) { return *this = *this * b; }
    RatFun& operator/=(const RatFun& b) { return *this = *this / b; }

    RatFun pn_substitute(int n) const {
        if (n == 1) return *this;
        RatFun r;
        r.num_ = num_.pn_substitute(n);
        r.den_ = den_.pn_substitute(n);
        r.normalize();
        return r;
    }

    RatFun substitute_one(VarId id) const {
        RatFun r;
        r.num_ = num_.substitute_one(id);
        r.den_ = den_.substitute_one(id);
        if (r.den_.is_zero()) throw std::domain_error("RatFun::substitute_one: denominator vanished");
        r.normalize();
        return r;
    }

    RatFun substitute_scale_var(VarId a, VarId m) const {
        RatFun r;
        r.num_ = num_.substitute_scale_var(a, m);
        r.den_ = den_.substitute_scale_var(a, m);
        r.normalize();
        return r;
    }

    RatFun invert_var(VarId id) const {
        RatFun r;
        r.num_ = num_.invert_var(id);
        r.den_ = den_.invert_var(id);
        r.normalize();
        return r;
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
    }

private:
    Laurent num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
        if (num_.is_zero()) {
            den_ = Laurent::one();
            return;
        }
        if (!den_.is_constant()) {
            // Denominator monomial unit moves into the numerator.
            Laurent mono, rest;
            den_.monomial_split(mono, rest);
            if (!mono.is_one()) {
                const auto& [me, mc] = *mono.terms().begin();
                Laurent inv = Laurent::constant(Rat(1));
                for (std::size_t i = 0; i < me.size(); ++i)
                    if (me[i] != 0) inv *= Laurent::variable(mono.vars()[i], -me[i]);
                num_ = num_ * inv;
                den_ = rest;
            }
            if (!den_.is_constant()) {
                if (auto q = divide_exact(num_, den_)) {
                    num_ = *q;
                    den_ = Laurent::one();
                } else {
                    Laurent g = poly_gcd(num_, den_);
                    if (!g.is_constant()) {
                        auto qn = divide_exact(num_, g);
                        auto qd = divide_exact(den_, g);
                        if (!qn || !qd) throw std::logic_error("RatFun: gcd does not divide");
                        num_ = *qn;
                        den_ = *qd;
                    }
                }
            }
        }
        // Denominator becomes primitive with positive leading coefficient.
        Rat c = den_.content();
        if (c != 1) {
            den_ = den_ * (Rat(1) / c);
            num_ = num_ * (Rat(1) / c);
        }
    }
};

// Laurent-or-verdict result of the divisibility test.
struct NotPolynomial {
    RatFun reduced;  // the fully reduced witness num/den with den non-unit
};

using LaurentVerdict = std::variant<Laurent, NotPolynomial>;

// The integrality verdict primitive: f as a Laurent polynomial when den | num
// (monomial units q^a t^b u^c absorbed), or a NotPolynomial witness.
inline LaurentVerdict to_laurent(const RatFun& f) {
    if (f.is_polynomial()) return f.num();
    if (auto q = divide_exact(f.num(), f.den())) return *q;
    return NotPolynomial{f};
}

inline bool is_laurent(const RatFun& f) { return std::holds_alternative<Laurent>(to_laurent(f)); }

inline Laurent expect_laurent(const RatFun& f, const char* what = "expect_laurent") {
    auto v = to_laurent(f);
    if (auto* p = std::get_if<Laurent>(&v)) return *p;
    throw std::domain_error(std::string(what) + ": not a Laurent polynomial: " + f.to_string());
}

}  // namespace hlv
