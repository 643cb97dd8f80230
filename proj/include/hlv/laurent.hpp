#pragma once

// Exact multivariate Laurent polynomials over Q. Negative exponents are
// permitted only for variables flagged laurent_ok (q, t, u_i); T, v and free
// generators stay polynomial. Terms are kept in a map ordered lexicographically
// by exponent vector, with the variable list sorted by the global semantic
// order, so every value has one canonical representation.

#include <hlv/rational.hpp>
#include <hlv/variables.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlv {

class Laurent {
public:
    using Exp = std::vector<int>;
    using TermMap = std::map<Exp, Rat>;

    Laurent() = default;

    static Laurent zero() { return Laurent(); }
    static Laurent one() { return constant(Rat(1)); }

    static Laurent constant(const Rat& c) {
        Laurent p;
        if (c != 0) p.terms_[Exp{}] = c;
        return p;
    }

    static Laurent variable(VarId id, int e = 1, const Rat& c = Rat(1)) {
        Laurent p;
        if (c == 0) return p;
        if (e == 0) return constant(c);
        if (e < 0 && !VarPool::instance().laurent_ok(id))
            throw std::domain_error("Laurent: negative exponent on non-Laurent variable " +
                                    VarPool::instance().name(id));
        p.vars_ = {id};
        p.terms_[Exp{e}] = c;
        return p;
    }

    const std::vector<VarId>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exp(vars_.size(), 0)); }
    bool is_one() const { return is_constant() && constant_value() == 1; }

    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        auto it = terms_.find(Exp(vars_.size(), 0));
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Coefficient of the exponent-zero monomial ("constant term").
    Rat constant_term() const { return constant_value(); }

    std::size_t term_count() const { return terms_.size(); }

    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }
    friend bool operator<(const Laurent& a, const Laurent& b) {
        if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
        if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
        for (auto ia = a.terms_.begin(), ib = b.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return false;
    }

    friend Laurent operator-(const Laurent& a) {
        Laurent r = a;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent r;
        std::vector<int> ma, mb;
        r.vars_ = merge_vars(a.vars_, b.vars_, ma, mb);
        for (const auto& [e, c] : a.terms_) r.terms_[remap(e, ma, r.vars_.size())] += c;
        for (const auto& [e, c] : b.terms_) {
            auto key = remap(e, mb, r.vars_.size());
            auto it = r.terms_.find(key);
            if (it == r.terms_.end()) {
                r.terms_.emplace(std::move(key), c);
            } else {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
        r.prune_zeros();
        r.compress();
        return r;
    }

    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        if (a.is_zero() || b.is_zero()) return Laurent();
        if (a.is_constant()) return b * a.constant_value();
        if (b.is_constant()) return a * b.constant_value();
        Laurent r;
        std::vector<int> ma, mb;
        r.vars_ = merge_vars(a.vars_, b.vars_, ma, mb);
        std::size_t n = r.vars_.size();
        for (const auto& [ea, ca] : a.terms_) {
            Exp base = remap(ea, ma, n);
            for (const auto& [eb, cb] : b.terms_) {
                Exp e = base;
                for (std::size_t i = 0; i < eb.size(); ++i) e[static_cast<std::size_t>(mb[i])] += eb[i];
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    Rat c = ca * cb;
                    if (c != 0) r.terms_.emplace(std::move(e), std::move(c));
                } else {
                    it->second += ca * cb;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        }
        r.compress();
        return r;
    }

    friend Laurent operator*(const Laurent& a, const Rat& c) {
        if (c == 0) return Laurent();
        Laurent r = a;
        for (auto& [e, cc] : r.terms_) cc *= c;
        return r;
    }
    friend Laurent operator*(const Rat& c, const Laurent& a) { return a * c; }

    Laurent& operator+=(const Laurent& b) { return *this = *this + b; }
    Laurent& operator-=(const Laurent& b) { return *this = *this - b; }
    Laurent& operator*=(const Laurent& b) { return *this = *this * b; }

    Laurent pow(int k) const {
        if (k < 0) throw std::domain_error("Laurent::pow: negative power");
        Laurent r = one(), base = *this;
        while (k > 0) {
            if (k & 1) r *= base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    // p_n action: monomial variables get exponents scaled, generators get
    // their tracked p-power multiplied. Rational coefficients are fixed.
    Laurent pn_substitute(int n) const {
        if (n < 1) throw std::domain_error("pn_substitute: n must be >= 1");
        if (n == 1) return *this;
        Laurent r;
        auto& pool = VarPool::instance();
        std::vector<VarId> images(vars_.size());
        std::vector<bool> is_mono(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            is_mono[i] = pool.kind(vars_[i]) == VarKind::Monomial;
            images[i] = pool.pn_image(vars_[i], n);
        }
        for (const auto& [e, c] : terms_) {
            Laurent term = constant(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                term *= variable(images[i], is_mono[i] ? e[i] * n : e[i]);
            }
            r += term;
        }
        return r;
    }

    // var := 1
    Laurent substitute_one(VarId id) const {
        int idx = var_index(id);
        if (idx < 0) return *this;
        Laurent r;
        r.vars_ = vars_;
        r.vars_.erase(r.vars_.begin() + idx);
        for (const auto& [e, c] : terms_) {
            Exp ne = e;
            ne.erase(ne.begin() + idx);
            r.terms_[ne] += c;
        }
        r.prune_zeros();
        r.compress();
        return r;
    }

    // var := value (rational, nonzero if negative exponents occur)
    Laurent substitute_value(VarId id, const Rat& value) const {
        int idx = var_index(id);
        if (idx < 0) return *this;
        Laurent r;
        r.vars_ = vars_;
        r.vars_.erase(r.vars_.begin() + idx);
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<std::size_t>(idx)];
            Rat scale(1);
            if (k != 0) {
                if (value == 0 && k < 0) throw std::domain_error("substitute_value: 0^negative");
                Rat base = value;
                int kk = k;
                if (kk < 0) {
                    base = Rat(1) / base;
                    kk = -kk;
                }
                for (int j = 0; j < kk; ++j) scale *= base;
            }
            Exp ne = e;
            ne.erase(ne.begin() + idx);
            r.terms_[ne] += c * scale;
        }
        r.prune_zeros();
        r.compress();
        return r;
    }

    // var a := m * a for a monomial variable m (e.g. v -> u*v).
    Laurent substitute_scale_var(VarId a, VarId m) const {
        int ia = var_index(a);
        if (ia < 0) return *this;
        Laurent r;
        for (const auto& [e, c] : terms_) {
            Laurent term = constant(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                term *= variable(vars_[i], e[i]);
            }
            int k = e[static_cast<std::size_t>(ia)];
            if (k != 0) term *= variable(m, k);
            r += term;
        }
        return r;
    }

    // var := var^{-1} (requires a Laurent-friendly variable)
    Laurent invert_var(VarId id) const {
        int idx = var_index(id);
        if (idx < 0) return *this;
        if (!VarPool::instance().laurent_ok(id))
            throw std::domain_error("invert_var: variable not Laurent-invertible");
        Laurent r;
        r.vars_ = vars_;
        for (const auto& [e, c] : terms_) {
            Exp ne = e;
            ne[static_cast<std::size_t>(idx)] = -ne[static_cast<std::size_t>(idx)];
            r.terms_[ne] = c;
        }
        return r;
    }

    int degree(VarId id) const {
        int idx = var_index(id);
        if (idx < 0 || terms_.empty()) return 0;
        int d = INT32_MIN;
        for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(idx)]);
        return d;
    }
    int valuation(VarId id) const {
        int idx = var_index(id);
        if (idx < 0 || terms_.empty()) return 0;
        int d = INT32_MAX;
        for (const auto& [e, c] : terms_) d = std::min(d, e[static_cast<std::size_t>(idx)]);
        return d;
    }

    bool has_var(VarId id) const { return var_index(id) >= 0; }

    // Multiply by a monomial given as (var, exponent) pairs.
    Laurent shifted(const std::vector<std::pair<VarId, int>>& mono) const {
        Laurent m = one();
        for (auto [id, e] : mono) m *= variable(id, e);
        return *this * m;
    }

    // Splits off the monomial content: *this = mono * rest where rest has
    // valuation 0 in every variable. Negative parts of mono must be legal.
    void monomial_split(Laurent& mono, Laurent& rest) const {
        mono = one();
        rest = *this;
        if (terms_.empty()) return;
        Laurent shift = one();
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            int v = INT32_MAX;
            for (const auto& [e, c] : terms_) v = std::min(v, e[i]);
            if (v != 0) {
                mono *= variable(vars_[i], v);
                shift *= variable(vars_[i], -v);
            }
        }
        if (!shift.is_one()) rest = raw_shift(*this, shift);
    }

    // Exponent of every variable >= 0?
    bool is_polynomial() const {
        for (const auto& [e, c] : terms_)
            for (int x : e)
                if (x < 0) return false;
        return true;
    }

    // Gathers distinct values of an exponent functional (used by series
    // truncation and grading filters). fn maps (VarId, exp) contributions.
    template <typename Fn>
    void for_each_term(Fn&& fn) const {
        for (const auto& [e, c] : terms_) fn(vars_, e, c);
    }

    // Leading term under lex order on the canonical variable order.
    std::pair<Exp, Rat> leading_term() const {
        if (terms_.empty()) throw std::domain_error("leading_term of zero");
        auto it = terms_.rbegin();
        return {it->first, it->second};
    }

    // Rational content (gcd of coefficients) with the sign of the leading term.
    Rat content() const {
        if (terms_.empty()) return Rat(0);
        Rat g(0);
        for (const auto& [e, c] : terms_) g = rat_gcd(g, c);
        if (leading_term().second < 0) g = -g;
        return g;
    }

    std::string to_string() const;

private:
    std::vector<VarId> vars_;
    TermMap terms_;

    int var_index(VarId id) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == id) return static_cast<int>(i);
        return -1;
    }

    void prune_zeros() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->second == 0 ? terms_.erase(it) : std::next(it);
    }

    // Drop variables that no longer occur.
    void compress() {
        if (vars_.empty()) return;
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) used[i] = true;
        if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
        std::vector<VarId> nv;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) nv.push_back(vars_[i]);
        TermMap nt;
        for (const auto& [e, c] : terms_) {
            Exp ne;
            ne.reserve(nv.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                if (used[i]) ne.push_back(e[i]);
            nt.emplace(std::move(ne), c);
        }
        vars_ = std::move(nv);
        terms_ = std::move(nt);
    }

    static std::vector<VarId> merge_vars(const std::vector<VarId>& a, const std::vector<VarId>& b,
                                         std::vector<int>& mapA, std::vector<int>& mapB) {
        std::vector<VarId> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        mapA.assign(a.size(), -1);
        mapB.assign(b.size(), -1);
        while (i < a.size() || j < b.size()) {
            if (i < a.size() && (j == b.size() || a[i] == b[j] || var_less(a[i], b[j]))) {
                if (j < b.size() && a[i] == b[j]) mapB[j++] = static_cast<int>(out.size());
                mapA[i++] = static_cast<int>(out.size());
                out.push_back(a[i - 1]);
            } else {
                mapB[j++] = static_cast<int>(out.size());
                out.push_back(b[j - 1]);
            }
        }
        return out;
    }

    static Exp remap(const Exp& e, const std::vector<int>& map, std::size_t n) {
        Exp ne(n, 0);
        for (std::size_t i = 0; i < e.size(); ++i) ne[static_cast<std::size_t>(map[i])] = e[i];
        return ne;
    }

    static Laurent raw_shift(const Laurent& p, const Laurent& mono) {
        // mono is a single monomial; bypass the laurent_ok check since the
        // shift only removes a common factor already present in p.
        Laurent r;
        std::vector<int> ma, mb;
        r.vars_ = merge_vars(p.vars_, mono.vars_, ma, mb);
        Exp shift(r.vars_.size(), 0);
        const auto& [me, mc] = *mono.terms_.begin();
        for (std::size_t i = 0; i < me.size(); ++i) shift[static_cast<std::size_t>(mb[i])] = me[i];
        for (const auto& [e, c] : p.terms_) {
            Exp ne = remap(e, ma, r.vars_.size());
            for (std::size_t i = 0; i < ne.size(); ++i) ne[i] += shift[i];
            r.terms_.emplace(std::move(ne), c * mc);
        }
        r.compress();
        return r;
    }

    friend std::optional<Laurent> divide_exact(const Laurent& a, const Laurent& b);
    friend Laurent poly_gcd(const Laurent& a, const Laurent& b);
    friend struct LaurentOps;
};

// Access helper for free functions that need raw construction.
struct LaurentOps {
    static Laurent build(std::vector<VarId> vars, Laurent::TermMap terms) {
        Laurent p;
        p.vars_ = std::move(vars);
        p.terms_ = std::move(terms);
        p.prune_zeros();
        p.compress();
        return p;
    }
};

inline std::string Laurent::to_string() const {
    if (terms_.empty()) return "0";
    auto& pool = VarPool::instance();
    std::string s;
    // Leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += pool.name(vars_[i]);
            if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
        Rat cc = c;
        bool neg = cc < 0;
        if (neg) cc = -cc;
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (mono.empty()) {
            s += rat_to_string(cc);
        } else {
            if (cc != 1) s += rat_to_string(cc) + "*";
            s += mono;
        }
    }
    return s;
}

}  // namespace hlv
