#pragma once

// Modified Macdonald polynomials and the eigenoperator zoo built on them:
// Delta_F, Delta_v, nabla and its inverse, the shifts tau_c / tau*_c, Tesler's
// operator, N_la in both product and pairing form, and operator kernel
// logarithms L^S_U with pExp[L/S] = U pExp[XY/S].
//
// The table is characterized by triangularity of H~_mu[X(1-q)] against
// {s_la : la >= mu} and of H~_mu[X(1-t)] against {s_la : la >= mu'} (dominance
// order), normalized by <H~_mu, s_(n)> = 1, and is solved degree by degree as
// an exact linear system over Q(q,t). The result is validated downstream
// against the norm product formula and the nabla eigenvalues.

#include <hlv/series.hpp>

#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hlv {

// S = -(1-q)(1-t), the modifier used throughout.
inline Laurent modifier_S() {
    Laurent one = Laurent::one();
    Laurent q = Laurent::variable(var_q());
    Laurent t = Laurent::variable(var_t());
    return -((one - q) * (one - t));
}

// B_la = sum over cells q^c t^r.
inline Laurent b_lambda(const Partition& la) {
    Laurent b;
    for (const Cell& s : cells_of(la))
        b += Laurent::variable(var_q(), s.col) * Laurent::variable(var_t(), s.row);
    return b;
}

// D_la = -1 - S*B_la.
inline Laurent d_lambda(const Partition& la) {
    return -Laurent::one() - modifier_S() * b_lambda(la);
}

// Dbar_la = D_la(q^{-1}, t^{-1}).
inline Laurent dbar_lambda(const Partition& la) {
    return d_lambda(la).invert_var(var_q()).invert_var(var_t());
}

// (H~_la, H~_la)^S = prod over cells (q^a - t^{l+1})(q^{a+1} - t^l).
inline Laurent mac_norm_sq(const Partition& la) {
    Laurent n = Laurent::one();
    Laurent q = Laurent::variable(var_q());
    Laurent t = Laurent::variable(var_t());
    for (const Cell& s : cells_of(la)) {
        auto [a, l] = arm_leg(la, s);
        n *= (Laurent::variable(var_q(), a) - Laurent::variable(var_t(), l + 1)) *
             (Laurent::variable(var_q(), a + 1) - Laurent::variable(var_t(), l));
    }
    return n;
}

// N_la(u) = prod over cells (q^a - u t^{l+1})(q^{a+1} - u^{-1} t^l).
inline Laurent n_lambda_product(const Partition& la, VarId u) {
    Laurent n = Laurent::one();
    for (const Cell& s : cells_of(la)) {
        auto [a, l] = arm_leg(la, s);
        n *= (Laurent::variable(var_q(), a) - Laurent::variable(u) * Laurent::variable(var_t(), l + 1)) *
             (Laurent::variable(var_q(), a + 1) - Laurent::variable(u, -1) * Laurent::variable(var_t(), l));
    }
    return n;
}

// The alternative printed form (-u)^{-|la|} q^{n(la')} t^{n(la)}
// prod (1 - u q^{-a} t^{l+1})(1 - u t^{-l} q^{a+1}); equal to the above.
inline Laurent n_lambda_product_alt(const Partition& la, VarId u) {
    Laurent n = Laurent::variable(var_q(), stat_n_conj(la)) * Laurent::variable(var_t(), stat_n(la)) *
                Laurent::variable(u, -la.size(), Rat((la.size() % 2) ? -1 : 1));
    for (const Cell& s : cells_of(la)) {
        auto [a, l] = arm_leg(la, s);
        n *= (Laurent::one() - Laurent::variable(u) * Laurent::variable(var_q(), -a) * Laurent::variable(var_t(), l + 1)) *
             (Laurent::one() - Laurent::variable(u) * Laurent::variable(var_t(), -l) * Laurent::variable(var_q(), a + 1));
    }
    return n;
}

// Exact linear solve over Q(q,t); rows are augmented (n coefficients + rhs).
// Requires a unique solution; throws on inconsistency or rank deficiency.
inline std::vector<RatFun> solve_linear(std::vector<std::vector<RatFun>> rows, std::size_t n) {
    std::vector<std::vector<RatFun>> pivots;
    for (std::size_t col = 0; col < n; ++col) {
        int best = -1;
        std::size_t best_size = SIZE_MAX;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r][col].is_zero()) continue;
            std::size_t sz = rows[r][col].num().term_count() + rows[r][col].den().term_count();
            if (sz < best_size) {
                best = static_cast<int>(r);
                best_size = sz;
            }
        }
        if (best < 0) throw std::domain_error("solve_linear: rank deficient");
        std::vector<RatFun> piv = rows[static_cast<std::size_t>(best)];
        rows.erase(rows.begin() + best);
        RatFun lead = piv[col];
        for (auto& x : piv) x /= lead;
        for (auto& row : rows) {
            if (row[col].is_zero()) continue;
            RatFun f = row[col];
            for (std::size_t j = col; j <= n; ++j) row[j] -= f * piv[j];
        }
        for (auto& prow : pivots) {
            if (prow[col].is_zero()) continue;
            RatFun f = prow[col];
            for (std::size_t j = col; j <= n; ++j) prow[j] -= f * piv[j];
        }
        pivots.push_back(std::move(piv));
    }
    for (const auto& row : rows)
        if (!row[n].is_zero()) throw std::domain_error("solve_linear: inconsistent system");
    std::vector<RatFun> x(n);
    for (std::size_t col = 0; col < n; ++col)
        for (const auto& prow : pivots)
            if (!prow[col].is_zero()) {
                x[col] = prow[n];
                break;
            }
    return x;
}

class MacdonaldTable {
public:
    explicit MacdonaldTable(int degree) : degree_(degree) {
        for (int d = 0; d <= degree; ++d) build_degree(d);
    }

    int degree() const { return degree_; }

    // m-basis expansion; coefficients are honest polynomials in Z[q,t].
    const std::map<Partition, Laurent>& htilde_m(const Partition& la) const {
        auto it = m_table_.find(la);
        if (it == m_table_.end()) throw std::out_of_range("MacdonaldTable: degree exceeded");
        return it->second;
    }

    const std::map<Partition, RatFun>& htilde_p(const Partition& la) const {
        return p_table_.at(la);
    }

    // H~_la as a series in one alphabet.
    SymSeries htilde_series(const Partition& la, AlphaId a, const Trunc& tr) const {
        SymSeries s = SymSeries::zero(tr);
        for (const auto& [mu, c] : htilde_p(la))
            s += SymSeries::monomial(tr, {{a, mu}}, c);
        return s;
    }

    // Expansion of a series in the H~ basis of alphabet a (degree <= table degree).
    std::map<Partition, SymSeries> expand_in_htilde(const SymSeries& F, AlphaId a) const {
        auto mgroups = expand_in_m(F, a);
        Trunc tr = F.trunc();
        tr.alpha.erase(a);
        std::map<int, std::map<Partition, SymSeries>> by_deg;
        for (auto& [mu, g] : mgroups) by_deg[mu.size()].emplace(mu, std::move(g));
        std::map<Partition, SymSeries> out;
        auto& tables = BasisTables::instance();
        for (auto& [d, items] : by_deg) {
            if (d > degree_) throw std::out_of_range("expand_in_htilde: table degree exceeded");
            const auto& ps = tables.partitions(d);
            const auto& inv = minv_.at(d);  // c_mu = sum_j inv[mu][j] * mcoeff_j
            for (std::size_t row = 0; row < ps.size(); ++row) {
                SymSeries acc = SymSeries::zero(tr);
                for (std::size_t col = 0; col < ps.size(); ++col) {
                    auto it = items.find(ps[col]);
                    if (it == items.end()) continue;
                    const RatFun& w = inv[row][col];
                    if (!w.is_zero()) acc += it->second * w;
                }
                if (!acc.is_zero()) out[ps[row]] = acc;
            }
        }
        return out;
    }

    SymSeries assemble_from_htilde(AlphaId a, int cap, const std::map<Partition, SymSeries>& groups,
                                   const Trunc& base) const {
        std::map<Partition, SymSeries> mgroups;
        for (const auto& [la, g] : groups) {
            for (const auto& [mu, c] : htilde_m(la)) {
                auto it = mgroups.find(mu);
                SymSeries add = g * RatFun(c);
                if (it == mgroups.end()) {
                    mgroups.emplace(mu, std::move(add));
                } else {
                    it->second += add;
                }
            }
        }
        return assemble_from_m(a, cap, mgroups, base);
    }

    // Eigenoperator: F in the alphabet a with H~_la scaled by eigen(la).
    SymSeries apply_eigen(const SymSeries& F, AlphaId a,
                          const std::function<RatFun(const Partition&)>& eigen) const {
        auto groups = expand_in_htilde(F, a);
        std::map<Partition, SymSeries> scaled;
        for (auto& [la, g] : groups) {
            SymSeries s = g * eigen(la);
            if (!s.is_zero()) scaled.emplace(la, std::move(s));
        }
        return assemble_from_htilde(a, F.trunc().alpha_cap(a), scaled, [&] {
            Trunc tr = F.trunc();
            tr.alpha.erase(a);
            return tr;
        }());
    }

private:
    void build_degree(int d) {
        auto& tables = BasisTables::instance();
        const auto& ps = tables.partitions(d);
        std::size_t n = ps.size();

        // s_nu[X(1-q)] and s_nu[X(1-t)] expanded back in the s-basis.
        auto plethysm_matrix = [&](VarId var) {
            std::vector<std::vector<RatFun>> M(n, std::vector<RatFun>(n));
            for (std::size_t nu = 0; nu < n; ++nu) {
                PExpansion sp = tables.s_in_p(ps[nu]);
                for (const auto& [mu, c] : sp) {
                    Laurent scale = Laurent::constant(c);
                    for (int part : mu.parts())
                        scale *= Laurent::one() - Laurent::variable(var, part);
                    // p_mu contributes chi^rho(mu) to s_rho
                    for (std::size_t rho = 0; rho < n; ++rho) {
                        Int chi = tables.character(ps[rho], mu);
                        if (chi != 0) M[rho][nu] += RatFun(scale * Rat(chi));
                    }
                }
            }
            return M;
        };
        auto Mq = plethysm_matrix(var_q());
        auto Mt = plethysm_matrix(var_t());

        int idx_row = -1;  // index of the one-row partition (n)
        for (std::size_t i = 0; i < n; ++i)
            if (ps[i].length() <= 1) idx_row = static_cast<int>(i);

        std::vector<std::vector<RatFun>> hm_rows(n);  // H~ in s-basis per mu
        for (std::size_t mi = 0; mi < n; ++mi) {
            const Partition& mu = ps[mi];
            Partition muc = mu.conjugate();
            std::vector<std::vector<RatFun>> rows;
            for (std::size_t rho = 0; rho < n; ++rho) {
                if (!dominates(ps[rho], mu)) {
                    std::vector<RatFun> row(Mq[rho]);
                    row.push_back(RatFun());
                    rows.push_back(std::move(row));
                }
                if (!dominates(ps[rho], muc)) {
                    std::vector<RatFun> row(Mt[rho]);
                    row.push_back(RatFun());
                    rows.push_back(std::move(row));
                }
            }
            std::vector<RatFun> norm(n + 1);
            norm[static_cast<std::size_t>(idx_row)] = RatFun(Rat(1));
            norm[n] = RatFun(Rat(1));
            rows.push_back(std::move(norm));
            hm_rows[mi] = solve_linear(std::move(rows), n);
        }

        // Convert s -> m and s -> p; coefficients must land in Z[q,t].
        const RatMatrix& s2m = [&]() -> const RatMatrix& {
            // m-coeffs = from_p(M) * p-coeffs; p-coeffs of s_la come from s_in_p.
            return tables.from_p(d, Basis::M);
        }();
        for (std::size_t mi = 0; mi < n; ++mi) {
            const Partition& mu = ps[mi];
            // p-expansion
            std::vector<RatFun> pvec(n);
            for (std::size_t nu = 0; nu < n; ++nu) {
                if (hm_rows[mi][nu].is_zero()) continue;
                PExpansion sp = tables.s_in_p(ps[nu]);
                for (const auto& [rho, c] : sp)
                    pvec[static_cast<std::size_t>(tables.index_of(d, rho))] += hm_rows[mi][nu] * RatFun(c);
            }
            std::map<Partition, RatFun> pmap;
            for (std::size_t i = 0; i < n; ++i)
                if (!pvec[i].is_zero()) pmap[ps[i]] = pvec[i];
            // m-expansion with integrality check
            std::map<Partition, Laurent> mmap;
            for (std::size_t row = 0; row < n; ++row) {
                RatFun acc;
                for (std::size_t col = 0; col < n; ++col) {
                    const Rat& w = s2m.at(static_cast<int>(row), static_cast<int>(col));
                    if (w != 0 && !pvec[col].is_zero()) acc += pvec[col] * RatFun(w);
                }
                if (acc.is_zero()) continue;
                Laurent c = expect_laurent(acc, "MacdonaldTable");
                for (const auto& [e, coeff] : c.terms())
                    if (!is_integer(coeff))
                        throw std::logic_error("MacdonaldTable: non-integer m-coefficient");
                mmap[ps[row]] = c;
            }
            m_table_[mu] = std::move(mmap);
            p_table_[mu] = std::move(pmap);
        }

        // Inverse of (m-coeff matrix of H~) for basis inversion, cached per degree.
        std::vector<std::vector<RatFun>> inv(n, std::vector<RatFun>(n));
        {
            // Solve M * C = I column by column where M[j][mu] = m-coeff j of H~_mu.
            for (std::size_t rhs = 0; rhs < n; ++rhs) {
                std::vector<std::vector<RatFun>> rows(n, std::vector<RatFun>(n + 1));
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::size_t mi = 0; mi < n; ++mi) {
                        auto it = m_table_[ps[mi]].find(ps[j]);
                        if (it != m_table_[ps[mi]].end()) rows[j][mi] = RatFun(it->second);
                    }
                    rows[j][n] = RatFun(Rat(j == rhs ? 1 : 0));
                }
                auto col = solve_linear(std::move(rows), n);
                for (std::size_t mi = 0; mi < n; ++mi) inv[mi][rhs] = col[mi];
            }
        }
        minv_[d] = std::move(inv);
    }

    int degree_;
    std::map<Partition, std::map<Partition, Laurent>> m_table_;
    std::map<Partition, std::map<Partition, RatFun>> p_table_;
    std::map<int, std::vector<std::vector<RatFun>>> minv_;
};

// ---- operators in one alphabet ----

// Delta_F for a closed-form symmetric function F (single-alphabet series):
// eigenvalue F[B_la].
inline SymSeries apply_delta_F(const SymSeries& Fsym, AlphaId fa, const SymSeries& G, AlphaId a,
                               const MacdonaldTable& table) {
    return table.apply_eigen(G, a, [&](const Partition& la) {
        SymSeries v = Fsym.eval_alphabet(fa, RatFun(b_lambda(la)));
        return v.constant_coefficient();
    });
}

// Delta_v: eigenvalue prod over cells (1 - v q^c t^r) with v any monomial variable.
inline RatFun delta_v_eigenvalue(const Partition& la, VarId v) {
    Laurent e = Laurent::one();
    for (const Cell& s : cells_of(la))
        e *= Laurent::one() - Laurent::variable(v) * Laurent::variable(var_q(), s.col) *
                                  Laurent::variable(var_t(), s.row);
    return RatFun(e);
}

inline SymSeries apply_delta_v(const SymSeries& G, AlphaId a, VarId v, const MacdonaldTable& table) {
    return table.apply_eigen(G, a, [&](const Partition& la) { return delta_v_eigenvalue(la, v); });
}

// Delta_u^{-1} = sum u^n Delta_{h_n}: eigenvalue sum_n u^n h_n[B_la], truncated
// by the cap on u.
inline SymSeries apply_delta_u_inv(const SymSeries& G, AlphaId a, VarId u, const MacdonaldTable& table) {
    auto it = G.trunc().var.find(u);
    if (it == G.trunc().var.end()) throw std::logic_error("apply_delta_u_inv: u must be capped");
    int cap = it->second;
    return table.apply_eigen(G, a, [&](const Partition& la) {
        Laurent B = b_lambda(la);
        std::vector<Laurent> p(static_cast<std::size_t>(cap) + 1), h(static_cast<std::size_t>(cap) + 1);
        for (int k = 1; k <= cap; ++k) p[static_cast<std::size_t>(k)] = B.pn_substitute(k);
        h[0] = Laurent::one();
        Laurent e = Laurent::one();
        for (int m = 1; m <= cap; ++m) {
            Laurent acc;
            for (int k = 1; k <= m; ++k) acc += p[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(m - k)];
            h[static_cast<std::size_t>(m)] = acc * Rat(1, m);
            e += h[static_cast<std::size_t>(m)] * Laurent::variable(u, m);
        }
        return RatFun(e);
    });
}

// nabla and its inverse (the paper's sign convention: includes (-1)^{|la|}).
inline RatFun nabla_eigenvalue(const Partition& la, bool inverse = false) {
    int sgn = (la.size() % 2) ? -1 : 1;
    int np = stat_n_conj(la), nn = stat_n(la);
    if (inverse) {
        np = -np;
        nn = -nn;
    }
    return RatFun(Laurent::variable(var_q(), np) * Laurent::variable(var_t(), nn) * Rat(sgn));
}

inline SymSeries apply_nabla(const SymSeries& G, AlphaId a, const MacdonaldTable& table) {
    return table.apply_eigen(G, a, [&](const Partition& la) { return nabla_eigenvalue(la); });
}
inline SymSeries apply_nabla_inv(const SymSeries& G, AlphaId a, const MacdonaldTable& table) {
    return table.apply_eigen(G, a, [&](const Partition& la) { return nabla_eigenvalue(la, true); });
}

// Shift operators.
inline SymSeries apply_tau(const SymSeries& G, AlphaId a, const RatFun& c) {
    return G.shift_alphabet(a, c);
}

inline SymSeries apply_tau_star(const SymSeries& G, AlphaId a, const RatFun& c, const Laurent& S) {
    SymSeries arg = SymSeries::monomial(G.trunc(), {{a, Partition{1}}}, c / RatFun(S));
    return G * pexp(arg);
}

// Tesler's operator nabla tau* tau.
inline SymSeries apply_tesler(const SymSeries& G, AlphaId a, const MacdonaldTable& table) {
    Laurent S = modifier_S();
    SymSeries r = apply_tau(G, a, RatFun(Rat(1)));
    r = apply_tau_star(r, a, RatFun(Rat(1)), S);
    return apply_nabla(r, a, table);
}

// N_la(u) via the pairing (tau_{u^{-1}-qt} H~_la, tau_{u-1} H~_la)^S.
inline Laurent n_lambda_via_pairing(const Partition& la, VarId u, const MacdonaldTable& table) {
    AlphaId X = alpha_X();
    Trunc tr;
    tr.alpha[X] = la.size();
    SymSeries H = table.htilde_series(la, X, tr);
    Laurent qt = Laurent::variable(var_q()) * Laurent::variable(var_t());
    RatFun c1 = RatFun(Laurent::variable(u, -1) - qt);
    RatFun c2 = RatFun(Laurent::variable(u) - Laurent::one());
    SymSeries F = apply_tau(H, X, c1);
    SymSeries G = apply_tau(H.rename_alphabet(X, alpha_Y()), alpha_Y(), c2).rename_alphabet(alpha_Y(), X);
    SymSeries r = pair_contract(F, G, X, RatFun(modifier_S()));
    return expect_laurent(r.constant_coefficient(), "n_lambda_via_pairing");
}

// The reproducing kernel pExp[XY/S].
inline SymSeries cauchy_kernel(AlphaId xa, AlphaId ya, int deg, const Laurent& S) {
    Trunc tr;
    tr.alpha[xa] = deg;
    tr.alpha[ya] = deg;
    SymSeries arg = SymSeries::monomial(tr, {{xa, Partition{1}}, {ya, Partition{1}}},
                                        RatFun(Rat(1)) / RatFun(S));
    return pexp(arg);
}

// Kernel logarithm of an operator acting in the alphabet X of the Cauchy
// kernel: L with pExp[L/S] = U pExp[XY/S]. When `check_admissible`, every
// coefficient of L must pass to_laurent (no denominators beyond monomials).
inline SymSeries operator_kernel_log(const std::function<SymSeries(const SymSeries&, AlphaId)>& U,
                                     int deg, const Laurent& S, bool check_admissible = true) {
    SymSeries K = U(cauchy_kernel(alpha_X(), alpha_Y(), deg, S), alpha_X());
    SymSeries L = plog(K) * RatFun(S);
    if (check_admissible) {
        for (const auto& [k, c] : L.terms())
            if (!is_laurent(c))
                throw std::logic_error("operator_kernel_log: non-polynomial coefficient (admissibility violated): " +
                                       c.to_string());
    }
    return L;
}

}  // namespace hlv
