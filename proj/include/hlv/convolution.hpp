#pragma once

// The graph-indexed logarithmic convolution calculus and its modified (S)
// form: phi_k factors, c_Gamma[S], graph weights, the bipartite convolution
// L^S(A, B), the directed-graph trace, and the pExp/pairing/pLog brute-force
// oracle used to cross-check the graph formulas.

#include <hlv/graphs.hpp>
#include <hlv/macdonald.hpp>
#include <hlv/series.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace hlv {

// phi_k(n) = prod over primes p | n of (1 - p^{-k}). phi_0(n) = 0 for n > 1.
inline Rat phi_k(int k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("phi_k: k >= 0, n >= 1 required");
    Rat r(1);
    for (int p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        Rat pk(1);
        for (int i = 0; i < k; ++i) pk *= p;
        r *= Rat(1) - Rat(1) / pk;
    }
    return r;
}

// c_Gamma[S] = S * prod_e p_{m(e)}[S] / prod_v p_{m(v)}[S]; a polynomial for
// connected admissible graphs (and divisible by S^{b(Gamma)}).
inline Laurent c_gamma(const ColoredGraph& g, const Laurent& S) {
    RatFun r{Laurent::one()};
    std::map<int, Laurent> pnS;
    auto pn = [&](int n) -> const Laurent& {
        auto it = pnS.find(n);
        if (it == pnS.end()) it = pnS.emplace(n, S.pn_substitute(n)).first;
        return it->second;
    };
    r = RatFun(S);
    for (const auto& e : g.edges) r *= RatFun(pn(e.color));
    for (int c : g.vcolor) r /= RatFun(pn(c));
    return expect_laurent(r, "c_gamma");
}

// Coefficient families: values are series (often constants over free
// generators, or carrying other alphabets). Missing keys mean zero.
using BiFamily = std::map<Partition, SymSeries>;
using DoubleFamily = std::map<std::pair<Partition, Partition>, SymSeries>;

namespace detail {

inline SymSeries family_value(const BiFamily& f, const Partition& la, const Trunc& tr) {
    auto it = f.find(la);
    return it == f.end() ? SymSeries::zero(tr) : it->second;
}

}  // namespace detail

// Weight of a bipartite graph: #Aut(V) prod m(e) / prod m(v) times the
// product over vertices of p_{m(v)}[A_{la(v)}] resp. p_{m(v)}[B_{la(v)}].
inline SymSeries graph_weight(const ColoredGraph& g, const BiFamily& A, const BiFamily& B,
                              const Trunc& tr) {
    SymSeries w = SymSeries::constant(RatFun(Rat(1)), tr);
    Rat scale(1);
    for (const auto& e : g.edges) scale *= e.color;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const Partition lav = g.local_partition(v, false);
        scale *= Rat(aut_count(lav));
        scale /= g.vcolor[static_cast<std::size_t>(v)];
        const BiFamily& fam = v < g.n1 ? A : B;
        SymSeries val = detail::family_value(fam, lav, tr);
        if (val.is_zero()) return SymSeries::zero(tr);
        w *= val.pn_apply(g.vcolor[static_cast<std::size_t>(v)]);
        if (w.is_zero()) return w;
    }
    return w * RatFun(scale);
}

// Directed version; la(v) from outgoing colors, mu(v) from incoming.
inline SymSeries graph_weight(const ColoredGraph& g, const DoubleFamily& A, const Trunc& tr) {
    SymSeries w = SymSeries::constant(RatFun(Rat(1)), tr);
    Rat scale(1);
    for (const auto& e : g.edges) scale *= e.color;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const Partition lav = g.local_partition(v, false);
        const Partition muv = g.local_partition(v, true);
        scale *= Rat(aut_count(lav) * aut_count(muv));
        scale /= g.vcolor[static_cast<std::size_t>(v)];
        auto it = A.find({lav, muv});
        if (it == A.end()) return SymSeries::zero(tr);
        w *= it->second.pn_apply(g.vcolor[static_cast<std::size_t>(v)]);
        if (w.is_zero()) return w;
    }
    return w * RatFun(scale);
}

// L^S(A, B): sum over connected admissible bipartite graphs of degree <= D of
// phi_{b}(g) c_Gamma[S] w(Gamma) / #Aut(Gamma). With S = 1 this is the
// unmodified logarithmic convolution.
inline SymSeries log_convolution(const BiFamily& A, const BiFamily& B, const Laurent& S, int D,
                                 const Trunc& tr) {
    SymSeries total = SymSeries::zero(tr);
    for (int d = 0; d <= D; ++d) {
        for (const auto& cg : enumerate_bipartite(d)) {
            Rat phi = phi_k(cg.graph.betti(), cg.graph.color_gcd());
            if (phi == 0) continue;
            SymSeries w = graph_weight(cg.graph, A, B, tr);
            if (w.is_zero()) continue;
            Laurent c = c_gamma(cg.graph, S);
            total += w * RatFun::of(Laurent::constant(phi), Laurent::constant(Rat(cg.aut))) * RatFun(c);
        }
    }
    return total;
}

// Trace of an S-admissible kernel given as its coefficient family
// A_{la,mu}: sum over connected admissible directed graphs of degree <= E.
// The enumeration is pruned to the support of the family.
inline SymSeries trace_modified(const DoubleFamily& A, const Laurent& S, int E, const Trunc& tr) {
    std::set<std::pair<Partition, Partition>> support;
    for (const auto& [key, val] : A)
        if (!val.is_zero() && !(key.first.empty() && key.second.empty())) support.insert(key);
    SymSeries total = SymSeries::zero(tr);
    for (int d = 0; d <= E; ++d) {
        for (const auto& cg : enumerate_directed(d, d == 0 ? nullptr : &support)) {
            Rat phi = phi_k(cg.graph.betti(), cg.graph.color_gcd());
            if (phi == 0) continue;
            SymSeries w = graph_weight(cg.graph, A, tr);
            if (w.is_zero()) continue;
            Laurent c = c_gamma(cg.graph, S);
            total += w * RatFun::of(Laurent::constant(phi), Laurent::constant(Rat(cg.aut))) * RatFun(c);
        }
    }
    return total;
}

// Independent oracle: S * pLog (pExp[A[X]/S], pExp[B[X]/S])^S_X computed with
// no graph enumeration at all. Family values must carry their own grading
// (concrete coefficients with a T-weight, or positive alphabet degree).
inline SymSeries brute_force_log_conv(const BiFamily& A, const BiFamily& B, const Laurent& S,
                                      int D, const Trunc& tr) {
    AlphaId X = AlphaPool::instance().by_name("X#oracle");
    Trunc trx = tr;
    trx.alpha[X] = D;
    RatFun invS = RatFun(Rat(1)) / RatFun(S);
    auto build = [&](const BiFamily& fam) {
        SymSeries s = SymSeries::zero(trx);
        for (const auto& [la, val] : fam) {
            SymSeries v = val.has_alphabet(X) ? val : val.with_alphabet(X, D);
            s += v * SymSeries::monomial(trx, {{X, la}}, invS);
        }
        return s;
    };
    SymSeries C = pair_contract(pexp(build(A)), pexp(build(B)), X, RatFun(S));
    return plog(C) * RatFun(S);
}

// Same oracle for the trace: S * pLog of the modified self-pairing of
// pExp[A[X, X*]/S].
inline SymSeries brute_force_trace(const DoubleFamily& A, const Laurent& S, int D, const Trunc& tr) {
    AlphaId X = AlphaPool::instance().by_name("X#oracle");
    AlphaId Xs = AlphaPool::instance().by_name("X*#oracle");
    Trunc trx = tr;
    trx.alpha[X] = D;
    trx.alpha[Xs] = D;
    RatFun invS = RatFun(Rat(1)) / RatFun(S);
    SymSeries s = SymSeries::zero(trx);
    for (const auto& [key, val] : A) {
        SymSeries v = val;
        if (!v.has_alphabet(X)) v = v.with_alphabet(X, D);
        if (!v.has_alphabet(Xs)) v = v.with_alphabet(Xs, D);
        s += v * SymSeries::monomial(trx, {{X, key.first}, {Xs, key.second}}, invS);
    }
    SymSeries C = self_contract(pexp(s), X, Xs, RatFun(S));
    return plog(C) * RatFun(S);
}

}  // namespace hlv
