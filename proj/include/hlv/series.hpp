#pragma once

// Degree-truncated symmetric series in several alphabets over the RatFun
// coefficient ring, stored in the power-sum basis: a term is a tuple of
// partitions (one per alphabet) with a RatFun coefficient.
//
// Truncation is explicit everywhere: each series carries per-alphabet degree
// caps plus optional caps on designated coefficient variables (T, v, u_i).
// Operations never silently change a bound; results are re-truncated to the
// merged bounds of the operands.

#include <hlv/bases.hpp>
#include <hlv/ratfun.hpp>

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlv {

using AlphaId = int;

class AlphaPool {
public:
    static AlphaPool& instance() {
        static AlphaPool p;
        return p;
    }

    AlphaId by_name(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        names_.push_back(name);
        AlphaId id = static_cast<AlphaId>(names_.size() - 1);
        ids_[name] = id;
        return id;
    }

    std::string name(AlphaId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(static_cast<std::size_t>(id));
    }

private:
    AlphaPool() {
        // Fixed interning order keeps alphabet ids (and hence canonical term
        // order) reproducible across runs.
        for (const char* n : {"X", "Y", "Z", "X*"}) {
            names_.emplace_back(n);
            ids_[n] = static_cast<AlphaId>(names_.size() - 1);
        }
        for (int i = 1; i <= 8; ++i) {
            names_.push_back("X" + std::to_string(i));
            ids_[names_.back()] = static_cast<AlphaId>(names_.size() - 1);
        }
    }

    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::map<std::string, AlphaId> ids_;
};

inline AlphaId alpha_X() { return AlphaPool::instance().by_name("X"); }
inline AlphaId alpha_Y() { return AlphaPool::instance().by_name("Y"); }
inline AlphaId alpha_Z() { return AlphaPool::instance().by_name("Z"); }
inline AlphaId alpha_Xstar() { return AlphaPool::instance().by_name("X*"); }
inline AlphaId alpha_Xi(int i) { return AlphaPool::instance().by_name("X" + std::to_string(i)); }

// Degree bounds: per-alphabet caps (required for every alphabet of a series)
// and optional caps on coefficient variables.
struct Trunc {
    std::map<AlphaId, int> alpha;
    std::map<VarId, int> var;

    static Trunc merge(const Trunc& a, const Trunc& b) {
        Trunc t = a;
        for (auto [k, v] : b.alpha) {
            auto it = t.alpha.find(k);
            t.alpha[k] = it == t.alpha.end() ? v : std::min(it->second, v);
        }
        for (auto [k, v] : b.var) {
            auto it = t.var.find(k);
            t.var[k] = it == t.var.end() ? v : std::min(it->second, v);
        }
        return t;
    }

    int alpha_cap(AlphaId a) const {
        auto it = alpha.find(a);
        if (it == alpha.end()) throw std::logic_error("Trunc: missing alphabet cap");
        return it->second;
    }

    friend bool operator==(const Trunc& a, const Trunc& b) {
        return a.alpha == b.alpha && a.var == b.var;
    }
};

using SeriesKey = std::vector<Partition>;

class SymSeries {
public:
    SymSeries() = default;
    explicit SymSeries(Trunc tr) : trunc_(std::move(tr)) {
        for (auto [a, c] : trunc_.alpha) alphas_.push_back(a);
        std::sort(alphas_.begin(), alphas_.end());
    }

    static SymSeries zero(const Trunc& tr) { return SymSeries(tr); }

    static SymSeries constant(const RatFun& c, const Trunc& tr) {
        SymSeries s(tr);
        if (!c.is_zero()) s.add_term(SeriesKey(s.alphas_.size()), c);
        return s;
    }

    // coeff * prod_i p_{la_i}[A_i]
    static SymSeries monomial(const Trunc& tr, const std::vector<std::pair<AlphaId, Partition>>& ps,
                              const RatFun& coeff) {
        SymSeries s(tr);
        SeriesKey key(s.alphas_.size());
        for (const auto& [a, la] : ps) {
            int idx = s.alpha_index(a);
            if (idx < 0) throw std::logic_error("SymSeries::monomial: alphabet not declared");
            std::vector<int> parts = key[static_cast<std::size_t>(idx)].parts();
            parts.insert(parts.end(), la.parts().begin(), la.parts().end());
            key[static_cast<std::size_t>(idx)] = Partition::from_unsorted(std::move(parts));
        }
        s.add_term(key, coeff);
        return s;
    }

    const Trunc& trunc() const { return trunc_; }
    const std::vector<AlphaId>& alphabets() const { return alphas_; }
    const std::map<SeriesKey, RatFun>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool has_alphabet(AlphaId a) const { return alpha_index(a) >= 0; }

    RatFun coefficient(const SeriesKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? RatFun() : it->second;
    }

    RatFun constant_coefficient() const { return coefficient(SeriesKey(alphas_.size())); }

    static int key_degree(const SeriesKey& key) {
        int d = 0;
        for (const auto& la : key) d += la.size();
        return d;
    }

    friend bool operator==(const SymSeries& a, const SymSeries& b) {
        return a.alphas_ == b.alphas_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const SymSeries& a, const SymSeries& b) { return !(a == b); }

    friend SymSeries operator-(const SymSeries& s) {
        SymSeries r = s;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    friend SymSeries operator+(const SymSeries& a, const SymSeries& b) {
        SymSeries r(Trunc::merge(a.trunc_, b.trunc_));
        for (const auto& [k, c] : a.terms_) r.add_term(a.remap_key(k, r), c);
        for (const auto& [k, c] : b.terms_) r.add_term(b.remap_key(k, r), c);
        return r;
    }
    friend SymSeries operator-(const SymSeries& a, const SymSeries& b) { return a + (-b); }

    friend SymSeries operator*(const SymSeries& a, const SymSeries& b) {
        SymSeries r(Trunc::merge(a.trunc_, b.trunc_));
        for (const auto& [ka, ca] : a.terms_) {
            SeriesKey base = a.remap_key(ka, r);
            for (const auto& [kb, cb] : b.terms_) {
                SeriesKey key = base;
                merge_into(key, b.remap_key(kb, r));
                if (!r.key_within_caps(key)) continue;
                r.add_term(key, ca * cb);
            }
        }
        return r;
    }

    friend SymSeries operator*(const SymSeries& a, const RatFun& c) {
        if (c.is_zero()) return SymSeries::zero(a.trunc_);
        SymSeries r(a.trunc_);
        for (const auto& [k, cc] : a.terms_) r.add_term(k, cc * c);
        return r;
    }
    friend SymSeries operator*(const RatFun& c, const SymSeries& a) { return a * c; }

    SymSeries& operator+=(const SymSeries& b) { return *this = *this + b; }
    SymSeries& operator-=(const SymSeries& b) { return *this = *this - b; }
    SymSeries& operator*=(const SymSeries& b) { return *this = *this * b; }

    // p_n on the whole lambda-ring: coefficient variables via pn_substitute,
    // alphabet indices by scaling every part.
    SymSeries pn_apply(int n) const {
        if (n == 1) return *this;
        SymSeries r(trunc_);
        for (const auto& [k, c] : terms_) {
            SeriesKey key(k.size());
            for (std::size_t i = 0; i < k.size(); ++i) key[i] = k[i].scaled(n);
            if (!r.key_within_caps(key)) continue;
            r.add_term(key, c.pn_substitute(n));
        }
        return r;
    }

    // ---- plethystic substitutions in one alphabet ----

    // A -> A + c for a coefficient-ring element c.
    SymSeries shift_alphabet(AlphaId a, const RatFun& c) const {
        int idx = require_alpha(a);
        if (c.is_zero()) return *this;
        SymSeries r(trunc_);
        std::map<int, RatFun> pn_c;  // p_k[c]
        for (const auto& [k, coeff] : terms_) {
            const auto& parts = k[static_cast<std::size_t>(idx)].parts();
            std::size_t l = parts.size();
            // Iterate over subsets of positions kept in the alphabet.
            for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
                RatFun factor = coeff;
                std::vector<int> kept;
                for (std::size_t i = 0; i < l; ++i) {
                    if (mask & (std::size_t{1} << i)) {
                        kept.push_back(parts[i]);
                    } else {
                        auto it = pn_c.find(parts[i]);
                        if (it == pn_c.end()) it = pn_c.emplace(parts[i], c.pn_substitute(parts[i])).first;
                        factor *= it->second;
                    }
                }
                if (factor.is_zero()) continue;
                SeriesKey key = k;
                key[static_cast<std::size_t>(idx)] = Partition::from_unsorted(std::move(kept));
                r.add_term(key, factor);
            }
        }
        return r;
    }

    // A -> c*A: each p_n[A] picks up the factor p_n[c].
    SymSeries scale_alphabet(AlphaId a, const RatFun& c) const {
        int idx = require_alpha(a);
        SymSeries r(trunc_);
        std::map<int, RatFun> pn_c;
        for (const auto& [k, coeff] : terms_) {
            RatFun factor = coeff;
            for (int part : k[static_cast<std::size_t>(idx)].parts()) {
                auto it = pn_c.find(part);
                if (it == pn_c.end()) it = pn_c.emplace(part, c.pn_substitute(part)).first;
                factor *= it->second;
            }
            if (!factor.is_zero()) r.add_term(k, factor);
        }
        return r;
    }

    SymSeries rename_alphabet(AlphaId from, AlphaId to) const {
        int idx = require_alpha(from);
        if (has_alphabet(to)) throw std::logic_error("rename_alphabet: target already present");
        Trunc tr = trunc_;
        tr.alpha[to] = tr.alpha.at(from);
        tr.alpha.erase(from);
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) {
            SeriesKey key(r.alphas_.size());
            for (std::size_t i = 0; i < alphas_.size(); ++i) {
                AlphaId dst = alphas_[i] == from ? to : alphas_[i];
                key[static_cast<std::size_t>(r.alpha_index(dst))] = k[i];
            }
            r.add_term(key, c);
        }
        (void)idx;
        return r;
    }

    // A -> B1 + ... + Bk (targets must be fresh). p_n[A] -> sum_j p_n[Bj].
    SymSeries split_alphabet(AlphaId a, const std::vector<AlphaId>& targets) const {
        int idx = require_alpha(a);
        for (AlphaId b : targets)
            if (has_alphabet(b)) throw std::logic_error("split_alphabet: target already present");
        Trunc tr = trunc_;
        int cap = tr.alpha.at(a);
        tr.alpha.erase(a);
        for (AlphaId b : targets) tr.alpha[b] = cap;
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) {
            const auto& parts = k[static_cast<std::size_t>(idx)].parts();
            // Assign every part independently to one of the targets.
            std::vector<std::vector<int>> assigned(targets.size());
            std::function<void(std::size_t)> rec = [&](std::size_t pos) {
                if (pos == parts.size()) {
                    SeriesKey key(r.alphas_.size());
                    for (std::size_t i = 0; i < alphas_.size(); ++i) {
                        if (alphas_[i] == a) continue;
                        key[static_cast<std::size_t>(r.alpha_index(alphas_[i]))] = k[i];
                    }
                    bool ok = true;
                    for (std::size_t j = 0; j < targets.size(); ++j) {
                        Partition pj = Partition::from_unsorted(std::vector<int>(assigned[j]));
                        if (pj.size() > r.trunc_.alpha_cap(targets[j])) {
                            ok = false;
                            break;
                        }
                        key[static_cast<std::size_t>(r.alpha_index(targets[j]))] = pj;
                    }
                    if (ok) r.add_term(key, c);
                    return;
                }
                for (std::size_t j = 0; j < targets.size(); ++j) {
                    assigned[j].push_back(parts[pos]);
                    rec(pos + 1);
                    assigned[j].pop_back();
                }
            };
            rec(0);
        }
        return r;
    }

    // p_n[A] -> x^n for a monomial coefficient variable x.
    SymSeries eval_alphabet_monomial(AlphaId a, VarId x) const {
        int idx = require_alpha(a);
        Trunc tr = trunc_;
        int cap = tr.alpha.at(a);
        tr.alpha.erase(a);
        auto it = tr.var.find(x);
        tr.var[x] = it == tr.var.end() ? cap : std::min(cap, it->second);
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) {
            int d = k[static_cast<std::size_t>(idx)].size();
            SeriesKey key = erase_index(k, idx);
            r.add_term(key, c * RatFun(Laurent::variable(x, d, Rat(1))));
        }
        return r;
    }

    // p_n[A] -> p_n[c]: full plethystic evaluation of the alphabet.
    SymSeries eval_alphabet(AlphaId a, const RatFun& c) const {
        int idx = require_alpha(a);
        Trunc tr = trunc_;
        tr.alpha.erase(a);
        SymSeries r(tr);
        std::map<int, RatFun> pn_c;
        for (const auto& [k, coeff] : terms_) {
            RatFun factor = coeff;
            for (int part : k[static_cast<std::size_t>(idx)].parts()) {
                auto it = pn_c.find(part);
                if (it == pn_c.end()) it = pn_c.emplace(part, c.pn_substitute(part)).first;
                factor *= it->second;
            }
            if (!factor.is_zero()) r.add_term(erase_index(k, idx), factor);
        }
        return r;
    }

    // Declare an extra alphabet with the given cap (no terms touch it yet).
    SymSeries with_alphabet(AlphaId a, int cap) const {
        if (has_alphabet(a)) throw std::logic_error("with_alphabet: already present");
        Trunc tr = trunc_;
        tr.alpha[a] = cap;
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) r.add_term(remap_key(k, r), c);
        return r;
    }

    // Remove the declaration of an alphabet that no term uses.
    SymSeries drop_alphabet(AlphaId a) const {
        int idx = require_alpha(a);
        Trunc tr = trunc_;
        tr.alpha.erase(a);
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) {
            if (!k[static_cast<std::size_t>(idx)].empty())
                throw std::logic_error("drop_alphabet: alphabet in use");
            r.add_term(erase_index(k, idx), c);
        }
        return r;
    }

    SymSeries with_trunc(const Trunc& tr) const {
        SymSeries r(tr);
        for (const auto& [k, c] : terms_) {
            SeriesKey key = remap_key(k, r);
            if (r.key_within_caps(key)) r.add_term(key, c);
        }
        return r;
    }

    SymSeries map_coeffs(const std::function<RatFun(const RatFun&)>& fn) const {
        SymSeries r(trunc_);
        for (const auto& [k, c] : terms_) {
            RatFun nc = fn(c);
            if (!nc.is_zero()) r.add_term(k, nc);
        }
        return r;
    }

    SymSeries substitute_one(VarId x) const {
        return map_coeffs([&](const RatFun& c) { return c.substitute_one(x); });
    }

    // Keep only coefficient monomials passing pred(key, exponents of watch).
    SymSeries filter(const std::vector<VarId>& watch,
                     const std::function<bool(const SeriesKey&, const std::vector<int>&)>& pred) const {
        SymSeries r(trunc_);
        for (const auto& [k, c] : terms_) {
            for (VarId w : watch)
                if (c.den().has_var(w))
                    throw std::logic_error("SymSeries::filter: watched variable in denominator");
            std::map<std::vector<int>, Laurent> groups;
            c.num().for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat& cc) {
                std::vector<int> exps(watch.size(), 0);
                Laurent mono = Laurent::constant(cc);
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    if (e[i] == 0) continue;
                    mono *= Laurent::variable(vars[i], e[i]);
                    for (std::size_t wi = 0; wi < watch.size(); ++wi)
                        if (vars[i] == watch[wi]) exps[wi] = e[i];
                }
                groups[exps] += mono;
            });
            RatFun keep;
            for (const auto& [exps, num] : groups)
                if (pred(k, exps)) keep += RatFun::of(num, c.den());
            if (!keep.is_zero()) r.add_term(k, keep);
        }
        return r;
    }

    // Coefficient of x^d as a series with x removed from the coefficients.
    SymSeries extract_var_coefficient(VarId x, int d) const {
        SymSeries picked = filter({x}, [&](const SeriesKey&, const std::vector<int>& e) { return e[0] == d; });
        // Every surviving monomial has exponent exactly d in x, so setting
        // x := 1 is the same as dividing by x^d.
        return picked.map_coeffs([&](const RatFun& c) {
            return RatFun::of(c.num().substitute_one(x), c.den());
        });
    }

    // Max degree over the watched variable across all coefficients.
    int var_degree(VarId x) const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, c.num().degree(x));
        return d;
    }

    int alpha_degree_max(AlphaId a) const {
        int idx = require_alpha(a);
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k[static_cast<std::size_t>(idx)].size());
        return d;
    }

    // Group terms by the partition carried by alphabet a; values lose a.
    std::map<Partition, SymSeries> group_by(AlphaId a) const {
        int idx = require_alpha(a);
        Trunc tr = trunc_;
        tr.alpha.erase(a);
        std::map<Partition, SymSeries> out;
        for (const auto& [k, c] : terms_) {
            const Partition& la = k[static_cast<std::size_t>(idx)];
            auto it = out.find(la);
            if (it == out.end()) it = out.emplace(la, SymSeries(tr)).first;
            it->second.add_term(erase_index(k, idx), c);
        }
        return out;
    }

    static SymSeries from_groups(AlphaId a, int cap, const std::map<Partition, SymSeries>& groups,
                                 const Trunc& base) {
        Trunc tr = base;
        tr.alpha[a] = cap;
        SymSeries r(tr);
        int idx = r.alpha_index(a);
        for (const auto& [la, g] : groups) {
            if (la.size() > cap) continue;
            for (const auto& [k, c] : g.terms_) {
                SeriesKey key = g.remap_key(k, r);
                key[static_cast<std::size_t>(idx)] = la;
                r.add_term(key, c);
            }
        }
        return r;
    }

    std::string to_string() const;

private:
    std::vector<AlphaId> alphas_;  // sorted
    std::map<SeriesKey, RatFun> terms_;
    Trunc trunc_;

    int alpha_index(AlphaId a) const {
        for (std::size_t i = 0; i < alphas_.size(); ++i)
            if (alphas_[i] == a) return static_cast<int>(i);
        return -1;
    }
    int require_alpha(AlphaId a) const {
        int idx = alpha_index(a);
        if (idx < 0) throw std::logic_error("SymSeries: alphabet not declared: " + AlphaPool::instance().name(a));
        return idx;
    }

    bool key_within_caps(const SeriesKey& key) const {
        for (std::size_t i = 0; i < alphas_.size(); ++i)
            if (key[i].size() > trunc_.alpha_cap(alphas_[i])) return false;
        return true;
    }

    // Truncate a coefficient against the variable caps; den must avoid capped vars.
    RatFun truncate_coeff(const RatFun& c) const {
        if (trunc_.var.empty() || c.is_zero()) return c;
        bool touched = false;
        for (auto [x, cap] : trunc_.var) {
            if (c.den().has_var(x))
                throw std::logic_error("SymSeries: capped variable in a denominator");
            if (c.num().degree(x) > cap) touched = true;
        }
        if (!touched) return c;
        Laurent num;
        c.num().for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat& cc) {
            for (std::size_t i = 0; i < vars.size(); ++i) {
                auto it = trunc_.var.find(vars[i]);
                if (it != trunc_.var.end() && e[i] > it->second) return;
            }
            Laurent mono = Laurent::constant(cc);
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (e[i] != 0) mono *= Laurent::variable(vars[i], e[i]);
            num += mono;
        });
        return RatFun::of(num, c.den());
    }

    void add_term(const SeriesKey& key, const RatFun& c) {
        if (!key_within_caps(key)) return;
        RatFun cc = truncate_coeff(c);
        if (cc.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, std::move(cc));
        } else {
            it->second += cc;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Remap a key of *this onto the alphabet layout of r.
    SeriesKey remap_key(const SeriesKey& k, const SymSeries& r) const {
        SeriesKey key(r.alphas_.size());
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            int j = r.alpha_index(alphas_[i]);
            if (j < 0) throw std::logic_error("SymSeries: alphabet lost in remap");
            key[static_cast<std::size_t>(j)] = k[i];
        }
        return key;
    }

    static void merge_into(SeriesKey& dst, const SeriesKey& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            if (src[i].empty()) continue;
            std::vector<int> parts = dst[i].parts();
            parts.insert(parts.end(), src[i].parts().begin(), src[i].parts().end());
            dst[i] = Partition::from_unsorted(std::move(parts));
        }
    }

    static SeriesKey erase_index(const SeriesKey& k, int idx) {
        SeriesKey key = k;
        key.erase(key.begin() + idx);
        return key;
    }

    friend SymSeries pexp(const SymSeries&);
    friend SymSeries plog(const SymSeries&);
    friend int conv_budget(const SymSeries&);
};

inline std::string SymSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    auto& ap = AlphaPool::instance();
    for (const auto& [k, c] : terms_) {
        if (!s.empty()) s += "\n";
        std::string mono;
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            if (k[i].empty()) continue;
            if (!mono.empty()) mono += "*";
            mono += "p" + k[i].to_string() + "[" + ap.name(alphas_[i]) + "]";
        }
        if (mono.empty()) mono = "1";
        s += "(" + c.to_string() + ") " + mono;
    }
    return s;
}

// Budget for the truncation grading, validating that every term of F has
// positive degree in it (otherwise pexp/plog would not truncate).
inline int conv_budget(const SymSeries& F) {
    // Capped variables that stay nonnegative across F count toward the grading.
    std::set<VarId> positive;
    for (auto [x, cap] : F.trunc_.var) {
        bool ok = true;
        for (const auto& [k, c] : F.terms_) {
            if (c.den().has_var(x)) ok = false;
            if (c.num().valuation(x) < 0) ok = false;
            if (!ok) break;
        }
        if (ok) positive.insert(x);
    }
    for (const auto& [k, c] : F.terms_) {
        int alpha_deg = SymSeries::key_degree(k);
        if (alpha_deg >= 1) continue;
        // Every coefficient monomial must carry positive capped degree.
        bool all_ok = true;
        c.num().for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat&) {
            int d = 0;
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (positive.count(vars[i])) d += e[i];
            if (d < 1) all_ok = false;
        });
        if (!all_ok)
            throw std::domain_error("pexp/plog: term with no positive graded degree (non-truncatable)");
    }
    int budget = 0;
    for (auto [a, cap] : F.trunc_.alpha) budget += cap;
    for (VarId x : positive) budget += F.trunc_.var.at(x);
    return budget;
}

// Plethystic exponential exp(sum p_n[F]/n); F must have positive graded valuation.
inline SymSeries pexp(const SymSeries& F) {
    int budget = conv_budget(F);
    SymSeries G = SymSeries::zero(F.trunc());
    for (int n = 1; n <= budget + 1; ++n) {
        SymSeries pn = F.pn_apply(n);
        if (pn.is_zero()) break;
        G += pn * RatFun(Rat(1, n));
    }
    SymSeries R = SymSeries::constant(RatFun(Rat(1)), F.trunc());
    SymSeries P = R;
    for (int k = 1; k <= budget + 1; ++k) {
        P = P * G * RatFun(Rat(1, k));
        if (P.is_zero()) break;
        R += P;
    }
    return R;
}

// Plethystic logarithm: inverse of pexp on series with constant term 1.
// The all-empty key may keep capped-variable monomials (they carry their own
// grading); the scalar 1 is subtracted and conv_budget rejects anything that
// would make the logarithm non-truncatable.
inline SymSeries plog(const SymSeries& G) {
    SymSeries F = G - SymSeries::constant(RatFun(Rat(1)), G.trunc());
    int budget = conv_budget(F);
    // log(1 + F)
    SymSeries L = SymSeries::zero(G.trunc());
    SymSeries P = SymSeries::constant(RatFun(Rat(1)), G.trunc());
    for (int k = 1; k <= budget + 1; ++k) {
        P = P * F;
        if (P.is_zero()) break;
        L += P * RatFun(Rat((k % 2) ? 1 : -1, k));
    }
    // Moebius inversion
    static const auto moebius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    SymSeries R = SymSeries::zero(G.trunc());
    for (int n = 1; n <= budget + 1; ++n) {
        int mu = moebius(n);
        SymSeries pn = L.pn_apply(n);
        if (pn.is_zero() && n > 1) break;
        if (mu != 0 && !pn.is_zero()) R += pn * RatFun(Rat(mu, n));
    }
    return R;
}

// Hall / modified Hall pairing in one alphabet shared by F and G; all other
// alphabets must be disjoint and pass through. (p_la, p_mu)^S = delta * z_la * p_la[S].
inline SymSeries pair_contract(const SymSeries& F, const SymSeries& G, AlphaId a, const RatFun& S) {
    for (AlphaId x : F.alphabets())
        if (x != a && G.has_alphabet(x)) throw std::logic_error("pair_contract: shared passthrough alphabet");
    auto gf = F.group_by(a);
    auto gg = G.group_by(a);
    Trunc tr = Trunc::merge(F.trunc(), G.trunc());
    tr.alpha.erase(a);
    SymSeries r = SymSeries::zero(tr);
    std::map<int, RatFun> pnS;
    for (const auto& [la, fs] : gf) {
        auto it = gg.find(la);
        if (it == gg.end()) continue;
        RatFun factor(Rat(z_factor(la)));
        for (int part : la.parts()) {
            auto ps = pnS.find(part);
            if (ps == pnS.end()) ps = pnS.emplace(part, S.pn_substitute(part)).first;
            factor *= ps->second;
        }
        r += fs * it->second * factor;
    }
    return r;
}

// Pairing of two alphabets inside one series (the trace contraction).
inline SymSeries self_contract(const SymSeries& F, AlphaId a, AlphaId b, const RatFun& S) {
    auto ga = F.group_by(a);
    Trunc tr = F.trunc();
    tr.alpha.erase(a);
    tr.alpha.erase(b);
    SymSeries r = SymSeries::zero(tr);
    std::map<int, RatFun> pnS;
    for (const auto& [la, part_a] : ga) {
        auto gb = part_a.group_by(b);
        auto it = gb.find(la);
        if (it == gb.end()) continue;
        RatFun factor(Rat(z_factor(la)));
        for (int part : la.parts()) {
            auto ps = pnS.find(part);
            if (ps == pnS.end()) ps = pnS.emplace(part, S.pn_substitute(part)).first;
            factor *= ps->second;
        }
        r += it->second * factor;
    }
    return r;
}

// m-basis view of one alphabet: partition (m-index) -> coefficient series.
inline std::map<Partition, SymSeries> expand_in_m(const SymSeries& F, AlphaId a) {
    auto groups = F.group_by(a);
    Trunc tr = F.trunc();
    tr.alpha.erase(a);
    // Organize by degree and convert with the p->m matrix.
    std::map<Partition, SymSeries> out;
    std::map<int, std::vector<std::pair<Partition, const SymSeries*>>> by_deg;
    for (const auto& [la, g] : groups) by_deg[la.size()].push_back({la, &g});
    auto& tables = BasisTables::instance();
    for (const auto& [d, items] : by_deg) {
        const auto& ps = tables.partitions(d);
        const auto& M = tables.from_p(d, Basis::M);
        std::vector<const SymSeries*> pvec(ps.size(), nullptr);
        for (const auto& [la, g] : items) pvec[static_cast<std::size_t>(tables.index_of(d, la))] = g;
        for (std::size_t row = 0; row < ps.size(); ++row) {
            SymSeries acc = SymSeries::zero(tr);
            for (std::size_t col = 0; col < ps.size(); ++col) {
                if (!pvec[col]) continue;
                const Rat& m = M.at(static_cast<int>(row), static_cast<int>(col));
                if (m != 0) acc += *pvec[col] * RatFun(m);
            }
            if (!acc.is_zero()) out[ps[row]] = acc;
        }
    }
    return out;
}

// Inverse of expand_in_m.
inline SymSeries assemble_from_m(AlphaId a, int cap, const std::map<Partition, SymSeries>& groups,
                                 const Trunc& base) {
    auto& tables = BasisTables::instance();
    std::map<Partition, SymSeries> pgroups;
    std::map<int, std::vector<std::pair<Partition, const SymSeries*>>> by_deg;
    for (const auto& [la, g] : groups) by_deg[la.size()].push_back({la, &g});
    Trunc tr = base;
    for (const auto& [d, items] : by_deg) {
        const auto& ps = tables.partitions(d);
        const auto& M = tables.to_p(d, Basis::M);
        std::vector<const SymSeries*> mvec(ps.size(), nullptr);
        for (const auto& [la, g] : items) mvec[static_cast<std::size_t>(tables.index_of(d, la))] = g;
        for (std::size_t row = 0; row < ps.size(); ++row) {
            SymSeries acc = SymSeries::zero(tr);
            for (std::size_t col = 0; col < ps.size(); ++col) {
                if (!mvec[col]) continue;
                const Rat& m = M.at(static_cast<int>(row), static_cast<int>(col));
                if (m != 0) acc += *mvec[col] * RatFun(m);
            }
            if (!acc.is_zero()) pgroups[ps[row]] = acc;
        }
    }
    return SymSeries::from_groups(a, cap, pgroups, base);
}

}  // namespace hlv
