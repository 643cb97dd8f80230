#pragma once

// Exact division and multivariate gcd for Laurent. Division works on the
// polynomial parts (monomial factors are units of the Laurent ring and are
// split off first). gcd strategy by variable count:
//   1 var:  monic Euclid over Q,
//   2 vars: evaluation/interpolation (Brown) with trial-division verification,
//   3+:     primitive PRS recursion (rare here; denominators live in Q[q,t]).

#include <hlv/laurent.hpp>

#include <map>
#include <optional>
#include <vector>

namespace hlv {

namespace detail {

// Univariate view of p in variable x: exponent of x -> coefficient Laurent.
inline std::map<int, Laurent> uni_view(const Laurent& p, VarId x) {
    std::map<int, Laurent> out;
    p.for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat& c) {
        Laurent mono = Laurent::constant(c);
        int dx = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == x) {
                dx = e[i];
            } else if (e[i] != 0) {
                mono *= Laurent::variable(vars[i], e[i]);
            }
        }
        out[dx] += mono;
    });
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace detail

// a / b when the quotient is again a Laurent polynomial (monomial units in
// q, t, u_i allowed); std::nullopt otherwise.
inline std::optional<Laurent> divide_exact(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) throw std::domain_error("divide_exact: division by zero");
    if (a.is_zero()) return Laurent::zero();
    Laurent ma, A, mb, B;
    a.monomial_split(ma, A);
    b.monomial_split(mb, B);

    // Quotient of the monomial units; reject if it would force a negative
    // exponent on T, v or a generator.
    const auto& mea = ma.terms().begin()->first;
    const auto& meb = mb.terms().begin()->first;
    std::map<VarId, int> mono;
    for (std::size_t i = 0; i < mea.size(); ++i) mono[ma.vars()[i]] += mea[i];
    for (std::size_t i = 0; i < meb.size(); ++i) mono[mb.vars()[i]] -= meb[i];
    Laurent unit = Laurent::one();
    for (auto [id, e] : mono) {
        if (e == 0) continue;
        if (e < 0 && !VarPool::instance().laurent_ok(id)) return std::nullopt;
        unit *= Laurent::variable(id, e);
    }

    if (B.is_constant()) return unit * A * (Rat(1) / B.constant_value());

    // Long division by leading terms in the canonical lex order.
    Laurent R = A, Q;
    while (!R.is_zero()) {
        auto [er, cr] = R.leading_term();
        auto [eb, cb] = B.leading_term();
        std::map<VarId, int> diff;
        for (std::size_t i = 0; i < er.size(); ++i) diff[R.vars()[i]] += er[i];
        for (std::size_t i = 0; i < eb.size(); ++i) diff[B.vars()[i]] -= eb[i];
        Laurent qmono = Laurent::constant(cr / cb);
        for (auto [id, e] : diff) {
            if (e < 0) return std::nullopt;
            if (e > 0) qmono *= Laurent::variable(id, e);
        }
        Q += qmono;
        R -= qmono * B;
    }
    return unit * Q;
}

// Canonical form for gcd results: polynomial part, rational content 1,
// positive leading coefficient.
inline Laurent gcd_canonical(const Laurent& p) {
    if (p.is_zero()) return p;
    Laurent mono, rest;
    p.monomial_split(mono, rest);
    Rat c = rest.content();
    return rest * (Rat(1) / c);
}

Laurent poly_gcd(const Laurent& a, const Laurent& b);

namespace detail {

// ---- univariate dense arithmetic over Q ----

using UniPoly = std::vector<Rat>;  // coefficient of x^i at index i

inline UniPoly uni_from(const Laurent& p, VarId x) {
    UniPoly out;
    p.for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat& c) {
        int d = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == x) {
                d = e[i];
            } else if (e[i] != 0) {
                throw std::logic_error("uni_from: extra variable");
            }
        }
        if (d < 0) throw std::logic_error("uni_from: negative exponent");
        if (out.size() <= static_cast<std::size_t>(d)) out.resize(static_cast<std::size_t>(d) + 1);
        out[static_cast<std::size_t>(d)] += c;
    });
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

inline Laurent uni_to(const UniPoly& p, VarId x) {
    Laurent out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0) out += Laurent::variable(x, static_cast<int>(i), p[i]);
    return out;
}

inline void uni_trim(UniPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Monic Euclidean gcd; result is monic (or empty for gcd(0,0)).
inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
    uni_trim(a);
    uni_trim(b);
    while (!b.empty()) {
        // a mod b with b made monic on the fly
        Rat lead = b.back();
        for (auto& c : b) c /= lead;
        while (a.size() >= b.size() && !a.empty()) {
            Rat f = a.back();
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
            uni_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

inline Rat uni_eval(const UniPoly& p, const Rat& c) {
    Rat r(0);
    for (std::size_t i = p.size(); i-- > 0;) r = r * c + p[i];
    return r;
}

// ---- bivariate gcd by evaluation / interpolation ----

// View of a bivariate polynomial as x-exponent -> univariate poly in y.
inline std::map<int, UniPoly> bi_view(const Laurent& p, VarId x, VarId y) {
    std::map<int, UniPoly> out;
    p.for_each_term([&](const std::vector<VarId>& vars, const std::vector<int>& e, const Rat& c) {
        int dx = 0, dy = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == x) dx = e[i];
            else if (vars[i] == y) dy = e[i];
            else if (e[i] != 0) throw std::logic_error("bi_view: extra variable");
        }
        auto& poly = out[dx];
        if (poly.size() <= static_cast<std::size_t>(dy)) poly.resize(static_cast<std::size_t>(dy) + 1);
        poly[static_cast<std::size_t>(dy)] += c;
    });
    for (auto it = out.begin(); it != out.end();) {
        uni_trim(it->second);
        it = it->second.empty() ? out.erase(it) : std::next(it);
    }
    return out;
}

inline int bi_deg_y(const std::map<int, UniPoly>& v) {
    int d = 0;
    for (const auto& [dx, p] : v) d = std::max(d, static_cast<int>(p.size()) - 1);
    return d;
}

// Newton interpolation through (points[i], values[i]).
inline UniPoly uni_interpolate(const std::vector<Rat>& points, const std::vector<Rat>& values) {
    std::size_t n = points.size();
    std::vector<Rat> coef = values;  // divided differences
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n; i-- > j;)
            coef[i] = (coef[i] - coef[i - 1]) / (points[i] - points[i - j]);
    UniPoly result{};
    UniPoly basis{Rat(1)};
    for (std::size_t i = 0; i < n; ++i) {
        if (result.size() < basis.size()) result.resize(basis.size(), Rat(0));
        for (std::size_t k = 0; k < basis.size(); ++k) result[k] += coef[i] * basis[k];
        // basis *= (x - points[i])
        basis.insert(basis.begin(), Rat(0));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) basis[k] -= points[i] * basis[k + 1];
    }
    uni_trim(result);
    return result;
}

inline Laurent gcd_bivariate(const Laurent& A, const Laurent& B, VarId x, VarId y) {
    auto vA = bi_view(A, x, y);
    auto vB = bi_view(B, x, y);

    // Contents w.r.t. x are univariate in y.
    auto content_of = [&](const std::map<int, UniPoly>& v) {
        UniPoly g;
        for (const auto& [dx, p] : v) g = uni_gcd(g, p);
        return g;
    };
    UniPoly contA = content_of(vA), contB = content_of(vB);
    UniPoly contG = uni_gcd(contA, contB);
    Laurent pA = *divide_exact(A, uni_to(contA, y));
    Laurent pB = *divide_exact(B, uni_to(contB, y));
    vA = bi_view(pA, x, y);
    vB = bi_view(pB, x, y);

    UniPoly lcA = vA.rbegin()->second, lcB = vB.rbegin()->second;
    UniPoly gamma = uni_gcd(lcA, lcB);
    int bound = std::min(bi_deg_y(vA), bi_deg_y(vB)) + static_cast<int>(gamma.size());

    auto eval_at = [&](const std::map<int, UniPoly>& v, const Rat& c) {
        UniPoly out;
        for (const auto& [dx, p] : v) {
            Rat val = uni_eval(p, c);
            if (out.size() <= static_cast<std::size_t>(dx)) out.resize(static_cast<std::size_t>(dx) + 1);
            out[static_cast<std::size_t>(dx)] = val;
        }
        uni_trim(out);
        return out;
    };

    int best_deg = INT32_MAX;
    std::vector<Rat> points;
    std::vector<std::vector<Rat>> samples;  // per point: coefficients of gamma(c) * monic gcd
    long next = 0;
    int guard = 0;
    while (true) {
        if (++guard > 2000) throw std::logic_error("gcd_bivariate: too many evaluation points");
        Rat c(next);
        next = next > 0 ? -next : -next + 1;  // 0, 1, -1, 2, -2, ...
        if (uni_eval(lcA, c) == 0 || uni_eval(lcB, c) == 0) continue;
        UniPoly ga = eval_at(vA, c), gb = eval_at(vB, c);
        UniPoly g = uni_gcd(ga, gb);
        int d = static_cast<int>(g.size()) - 1;
        if (d == 0) return gcd_canonical(uni_to(contG, y));  // coprime primitive parts
        if (d < best_deg) {
            best_deg = d;
            points.clear();
            samples.clear();
        }
        if (d == best_deg) {
            Rat scale = uni_eval(gamma, c);
            std::vector<Rat> row(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) row[i] = g[i] * scale;
            points.push_back(c);
            samples.push_back(std::move(row));
        }
        if (static_cast<int>(points.size()) >= bound + 1) {
            // Interpolate each x-coefficient, then verify by trial division.
            Laurent G;
            for (int dx = 0; dx <= best_deg; ++dx) {
                std::vector<Rat> vals(points.size());
                for (std::size_t i = 0; i < points.size(); ++i)
                    vals[i] = dx < static_cast<int>(samples[i].size()) ? samples[i][static_cast<std::size_t>(dx)] : Rat(0);
                UniPoly coeff = uni_interpolate(points, vals);
                if (!coeff.empty()) G += uni_to(coeff, y) * Laurent::variable(x, dx, Rat(1));
            }
            G = gcd_canonical(G);
            // strip y-content that came from the gamma scaling
            auto vG = bi_view(G, x, y);
            UniPoly contGy = content_of(vG);
            if (static_cast<int>(contGy.size()) > 1) G = gcd_canonical(*divide_exact(G, uni_to(contGy, y)));
            if (!G.is_zero() && divide_exact(pA, G) && divide_exact(pB, G))
                return gcd_canonical(uni_to(contG, y) * G);
            // Unlucky point set; restart sampling at higher precision.
            best_deg = INT32_MAX;
            points.clear();
            samples.clear();
        }
    }
}

inline Laurent content_in(const std::map<int, Laurent>& view) {
    Laurent g;
    for (const auto& [d, c] : view) {
        g = poly_gcd(g, c);
        if (g.is_constant() && !g.is_zero()) return Laurent::one();
    }
    return g;
}

// Pseudo-remainder of A by B in variable x.
inline Laurent pseudo_rem(Laurent A, const Laurent& B, VarId x) {
    auto vB = uni_view(B, x);
    int dB = vB.rbegin()->first;
    const Laurent lcB = vB.rbegin()->second;
    while (!A.is_zero()) {
        auto vA = uni_view(A, x);
        int dA = vA.rbegin()->first;
        if (dA < dB) break;
        const Laurent lcA = vA.rbegin()->second;
        A = lcB * A - lcA * Laurent::variable(x, dA - dB, Rat(1)) * B;
    }
    return A;
}

}  // namespace detail

// gcd of the polynomial parts of a and b, in gcd_canonical form. Monomial
// factors are units and are ignored. gcd(0, 0) = 0.
inline Laurent poly_gcd(const Laurent& a, const Laurent& b) {
    if (a.is_zero()) return gcd_canonical(b);
    if (b.is_zero()) return gcd_canonical(a);
    Laurent ma, A, mb, B;
    a.monomial_split(ma, A);
    b.monomial_split(mb, B);
    if (A.is_constant() || B.is_constant()) return Laurent::one();
    if (A == B) return gcd_canonical(A);

    // Variable set of the pair.
    std::vector<VarId> vars = A.vars();
    for (VarId v : B.vars())
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    std::sort(vars.begin(), vars.end(), var_less);

    if (vars.size() == 1) {
        auto g = detail::uni_gcd(detail::uni_from(A, vars[0]), detail::uni_from(B, vars[0]));
        return gcd_canonical(detail::uni_to(g, vars[0]));
    }
    if (vars.size() == 2) return detail::gcd_bivariate(A, B, vars[1], vars[0]);

    // Cheap wins before the PRS fallback.
    if (divide_exact(A, B)) return gcd_canonical(B);
    if (divide_exact(B, A)) return gcd_canonical(A);

    VarId x = vars.back();
    auto vA = detail::uni_view(A, x);
    auto vB = detail::uni_view(B, x);
    Laurent contA = detail::content_in(vA);
    Laurent contB = detail::content_in(vB);
    Laurent g0 = poly_gcd(contA, contB);

    auto prim = [&](const Laurent& p, const Laurent& cont) {
        auto q = divide_exact(p, cont);
        if (!q) throw std::logic_error("poly_gcd: content does not divide");
        return *q;
    };
    Laurent pA = prim(A, contA);
    Laurent pB = prim(B, contB);
    if (detail::uni_view(pA, x).rbegin()->first < detail::uni_view(pB, x).rbegin()->first)
        std::swap(pA, pB);

    while (!pB.is_zero()) {
        Laurent R = detail::pseudo_rem(pA, pB, x);
        pA = std::move(pB);
        if (R.is_zero()) {
            pB = Laurent::zero();
        } else {
            auto vR = detail::uni_view(R, x);
            Laurent contR = detail::content_in(vR);
            pB = prim(R, contR);
        }
    }
    return gcd_canonical(g0 * pA);
}

}  // namespace hlv
