#pragma once

// Change of basis between p, m, e, h, s for a single degree, with all
// transition data cached. Everything here is over Q (the q,t coefficients
// never enter basis transitions; they ride along in the series layer).

#include <hlv/partition.hpp>
#include <hlv/rational.hpp>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hlv {

using PExpansion = std::map<Partition, Rat>;  // expansion in the p-basis

namespace detail {
inline PExpansion pexp_mul(const PExpansion& a, const PExpansion& b) {
    PExpansion r;
    for (const auto& [la, ca] : a)
        for (const auto& [mu, cb] : b) {
            std::vector<int> parts = la.parts();
            parts.insert(parts.end(), mu.parts().begin(), mu.parts().end());
            r[Partition::from_unsorted(std::move(parts))] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}
}  // namespace detail

// Dense square matrix over Q with exact Gaussian elimination.
class RatMatrix {
public:
    RatMatrix(int n, int m) : n_(n), m_(m), a_(static_cast<std::size_t>(n) * m, Rat(0)) {}
    Rat& at(int i, int j) { return a_[static_cast<std::size_t>(i) * m_ + j]; }
    const Rat& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }
    int rows() const { return n_; }
    int cols() const { return m_; }

    RatMatrix inverse() const {
        if (n_ != m_) throw std::logic_error("RatMatrix::inverse: not square");
        RatMatrix aug = *this;
        RatMatrix inv(n_, n_);
        for (int i = 0; i < n_; ++i) inv.at(i, i) = 1;
        for (int col = 0; col < n_; ++col) {
            int piv = -1;
            for (int r = col; r < n_; ++r)
                if (aug.at(r, col) != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw std::domain_error("RatMatrix::inverse: singular");
            for (int j = 0; j < n_; ++j) {
                std::swap(aug.at(col, j), aug.at(piv, j));
                std::swap(inv.at(col, j), inv.at(piv, j));
            }
            Rat d = aug.at(col, col);
            for (int j = 0; j < n_; ++j) {
                aug.at(col, j) /= d;
                inv.at(col, j) /= d;
            }
            for (int r = 0; r < n_; ++r) {
                if (r == col || aug.at(r, col) == 0) continue;
                Rat f = aug.at(r, col);
                for (int j = 0; j < n_; ++j) {
                    aug.at(r, j) -= f * aug.at(col, j);
                    inv.at(r, j) -= f * inv.at(col, j);
                }
            }
        }
        return inv;
    }

private:
    int n_, m_;
    std::vector<Rat> a_;
};

enum class Basis { P, M, E, H, S };

class BasisTables {
public:
    static BasisTables& instance() {
        static BasisTables t;
        return t;
    }

    const std::vector<Partition>& partitions(int d) {
        std::lock_guard<std::mutex> lock(mu_);
        return partitions_locked(d);
    }

    int index_of(int d, const Partition& la) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto& ps = partitions_locked(d);
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (ps[i] == la) return static_cast<int>(i);
        throw std::logic_error("BasisTables: partition not of degree");
    }

    // h_la, e_la, s_la expanded in the p-basis.
    PExpansion h_in_p(const Partition& la) { return prod_in_p(la, /*elementary=*/false); }
    PExpansion e_in_p(const Partition& la) { return prod_in_p(la, /*elementary=*/true); }

    PExpansion s_in_p(const Partition& la) {
        int d = la.size();
        std::lock_guard<std::mutex> lock(mu_);
        const auto& ps = partitions_locked(d);
        PExpansion out;
        for (const auto& mu : ps) {
            Rat c = Rat(character_locked(la, mu)) / Rat(z_factor(mu));
            if (c != 0) out[mu] = c;
        }
        return out;
    }

    // Murnaghan-Nakayama character chi^la(mu).
    Int character(const Partition& la, const Partition& mu) {
        std::lock_guard<std::mutex> lock(mu_);
        return character_locked(la, mu);
    }

    // Matrix converting p-coefficients to `to`-coefficients in degree d:
    // F_to(row) = sum_col M[row][col] * F_p(col), rows/cols in partition order.
    const RatMatrix& from_p(int d, Basis to) {
        std::lock_guard<std::mutex> lock(mu_);
        return from_p_locked(d, to);
    }
    // Matrix converting `from`-coefficients to p-coefficients in degree d.
    const RatMatrix& to_p(int d, Basis from) {
        std::lock_guard<std::mutex> lock(mu_);
        if (from == Basis::P) return identity_locked(d);
        auto key = std::make_pair(d, from);
        auto it = to_p_.find(key);
        if (it != to_p_.end()) return it->second;
        RatMatrix m = from_p_locked(d, from).inverse();
        return to_p_.emplace(key, std::move(m)).first->second;
    }

private:
    BasisTables() = default;

    const std::vector<Partition>& partitions_locked(int d) {
        auto it = partitions_.find(d);
        if (it != partitions_.end()) return it->second;
        return partitions_.emplace(d, partitions_of(d)).first->second;
    }

    PExpansion prod_in_p(const Partition& la, bool elementary) {
        std::lock_guard<std::mutex> lock(mu_);
        PExpansion out{{Partition{}, Rat(1)}};
        for (int part : la.parts()) out = detail::pexp_mul(out, single_in_p_locked(part, elementary));
        return out;
    }

    // h_n (or e_n) in the p-basis: sum over |la| = n of eps(la) p_la / z_la.
    const PExpansion& single_in_p_locked(int n, bool elementary) {
        auto& cache = elementary ? e_single_ : h_single_;
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        PExpansion out;
        for (const auto& la : partitions_locked(n)) {
            Rat c = Rat(1) / Rat(z_factor(la));
            if (elementary && (n - la.length()) % 2 == 1) c = -c;
            out[la] = c;
        }
        return cache.emplace(n, std::move(out)).first->second;
    }

    Int character_locked(const Partition& la, const Partition& mu) {
        if (la.size() != mu.size()) return 0;
        if (la.empty()) return 1;
        auto key = std::make_pair(la, mu);
        auto it = chi_.find(key);
        if (it != chi_.end()) return it->second;

        // Remove a border strip of length mu_1 via beta-numbers.
        int r = mu.part(0);
        std::vector<int> rest(mu.parts().begin() + 1, mu.parts().end());
        Partition mu_rest(rest);
        int l = la.length();
        std::vector<int> beta(static_cast<std::size_t>(l));
        for (int i = 0; i < l; ++i) beta[static_cast<std::size_t>(i)] = la.part(i) + (l - 1 - i);
        Int total = 0;
        for (int i = 0; i < l; ++i) {
            int b = beta[static_cast<std::size_t>(i)] - r;
            if (b < 0) continue;
            bool clash = false;
            int crossings = 0;
            for (int j = 0; j < l; ++j) {
                if (j == i) continue;
                if (beta[static_cast<std::size_t>(j)] == b) clash = true;
                if (beta[static_cast<std::size_t>(j)] > b && beta[static_cast<std::size_t>(j)] < beta[static_cast<std::size_t>(i)]) ++crossings;
            }
            if (clash) continue;
            std::vector<int> nb = beta;
            nb[static_cast<std::size_t>(i)] = b;
            std::sort(nb.begin(), nb.end(), std::greater<int>());
            std::vector<int> parts;
            for (int j = 0; j < l; ++j) {
                int p = nb[static_cast<std::size_t>(j)] - (l - 1 - j);
                if (p > 0) parts.push_back(p);
            }
            Int sub = character_locked(Partition(parts), mu_rest);
            total += (crossings % 2 == 0) ? sub : -sub;
        }
        chi_.emplace(key, total);
        return total;
    }

    const RatMatrix& identity_locked(int d) {
        auto key = std::make_pair(d, Basis::P);
        auto it = to_p_.find(key);
        if (it != to_p_.end()) return it->second;
        int n = static_cast<int>(partitions_locked(d).size());
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return to_p_.emplace(key, std::move(m)).first->second;
    }

    const RatMatrix& from_p_locked(int d, Basis to) {
        if (to == Basis::P) return identity_locked(d);
        auto key = std::make_pair(d, to);
        auto it = from_p_.find(key);
        if (it != from_p_.end()) return it->second;
        const auto& ps = partitions_locked(d);
        int n = static_cast<int>(ps.size());
        RatMatrix m(n, n);
        if (to == Basis::M) {
            // F_m(mu) = <F, h_mu> = sum_la F_p(la) z_la [p_la](h_mu)
            for (int row = 0; row < n; ++row) {
                PExpansion h = h_mu_locked(ps[static_cast<std::size_t>(row)]);
                for (int col = 0; col < n; ++col) {
                    auto itc = h.find(ps[static_cast<std::size_t>(col)]);
                    if (itc != h.end())
                        m.at(row, col) = itc->second * Rat(z_factor(ps[static_cast<std::size_t>(col)]));
                }
            }
        } else if (to == Basis::S) {
            // p_mu = sum_la chi^la(mu) s_la
            for (int row = 0; row < n; ++row)
                for (int col = 0; col < n; ++col)
                    m.at(row, col) = Rat(character_locked(ps[static_cast<std::size_t>(row)], ps[static_cast<std::size_t>(col)]));
        } else {
            // h or e: F = sum_la c_la b_la iff F_p = B^T c with
            // B[la][mu] = [p_mu](b_la), so the conversion matrix is (B^T)^{-1}.
            RatMatrix bt(n, n);
            for (int row = 0; row < n; ++row) {
                PExpansion exp_row{{Partition{}, Rat(1)}};
                for (int part : ps[static_cast<std::size_t>(row)].parts())
                    exp_row = detail::pexp_mul(exp_row, single_in_p_locked(part, to == Basis::E));
                for (int col = 0; col < n; ++col) {
                    auto itc = exp_row.find(ps[static_cast<std::size_t>(col)]);
                    if (itc != exp_row.end()) bt.at(col, row) = itc->second;
                }
            }
            m = bt.inverse();
        }
        return from_p_.emplace(key, std::move(m)).first->second;
    }

    const PExpansion& h_mu_locked(const Partition& mu) {
        auto it = h_mu_.find(mu);
        if (it != h_mu_.end()) return it->second;
        PExpansion out{{Partition{}, Rat(1)}};
        for (int part : mu.parts()) out = detail::pexp_mul(out, single_in_p_locked(part, false));
        return h_mu_.emplace(mu, std::move(out)).first->second;
    }

    std::mutex mu_;
    std::map<int, std::vector<Partition>> partitions_;
    std::map<int, PExpansion> h_single_, e_single_;
    std::map<Partition, PExpansion> h_mu_;
    std::map<std::pair<Partition, Partition>, Int> chi_;
    std::map<std::pair<int, Basis>, RatMatrix> from_p_, to_p_;
};

}  // namespace hlv
