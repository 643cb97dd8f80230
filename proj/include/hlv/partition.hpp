#pragma once

// Integer partitions: diagrams, cell statistics, automorphism counts,
// bounded enumeration.

#include <hlv/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlv {

// Weakly decreasing list of positive parts; the empty partition is Partition{}.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
            if (i > 0 && parts_[i - 1] < parts_[i])
                throw std::invalid_argument("Partition: parts must be weakly decreasing");
        }
    }
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    // Builds from an arbitrary multiset of positive parts.
    static Partition from_unsorted(std::vector<int> parts) {
        std::sort(parts.begin(), parts.end(), std::greater<int>());
        return Partition(std::move(parts));
    }

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }
    int part(int i) const { return parts_.at(static_cast<std::size_t>(i)); }

    int size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

    Partition conjugate() const {
        std::vector<int> c;
        if (!parts_.empty()) {
            c.assign(static_cast<std::size_t>(parts_[0]), 0);
            for (int p : parts_)
                for (int j = 0; j < p; ++j) ++c[static_cast<std::size_t>(j)];
        }
        return Partition(std::move(c));
    }

    Partition scaled(int k) const {
        std::vector<int> s(parts_);
        for (int& p : s) p *= k;
        return Partition(std::move(s));
    }

    // Canonical total order: by size, then by the parts vector.
    friend bool operator<(const Partition& a, const Partition& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.parts_ < b.parts_;
    }
    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
    friend bool operator>(const Partition& a, const Partition& b) { return b < a; }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> parts_;
};

struct Cell {
    int col = 0;  // 0-based column index c
    int row = 0;  // 0-based row index r
};

inline bool cell_in_diagram(const Partition& la, const Cell& s) {
    return s.row >= 0 && s.row < la.length() && s.col >= 0 && s.col < la.part(s.row);
}

inline std::vector<Cell> cells_of(const Partition& la) {
    std::vector<Cell> cs;
    for (int r = 0; r < la.length(); ++r)
        for (int c = 0; c < la.part(r); ++c) cs.push_back(Cell{c, r});
    return cs;
}

// Arm and leg lengths of a cell (cells strictly right in the row / strictly
// above in the column, with rows drawn bottom-up).
struct ArmLeg {
    int arm = 0;
    int leg = 0;
};

inline ArmLeg arm_leg(const Partition& la, const Cell& s) {
    if (!cell_in_diagram(la, s)) throw std::out_of_range("arm_leg: cell outside diagram");
    Partition conj = la.conjugate();
    return ArmLeg{la.part(s.row) - s.col - 1, conj.part(s.col) - s.row - 1};
}

// n(la) = sum (i-1)*la_i.
inline int stat_n(const Partition& la) {
    int n = 0;
    for (int i = 0; i < la.length(); ++i) n += i * la.part(i);
    return n;
}

inline int stat_n_conj(const Partition& la) { return stat_n(la.conjugate()); }

// #Aut(la): product of multiplicity factorials over distinct part values.
inline Int aut_count(const Partition& la) {
    Int a = 1;
    int run = 1;
    for (int i = 1; i <= la.length(); ++i) {
        if (i < la.length() && la.part(i) == la.part(i - 1)) {
            ++run;
        } else {
            a *= factorial(run);
            run = 1;
        }
    }
    return a;
}

// z_la = #Aut(la) * prod(la_i); the squared norm of p_la under the Hall pairing.
inline Int z_factor(const Partition& la) {
    Int z = aut_count(la);
    for (int p : la.parts()) z *= p;
    return z;
}

// Dominance partial order: la >= mu iff all partial sums dominate (same size).
inline bool dominates(const Partition& la, const Partition& mu) {
    if (la.size() != mu.size()) return false;
    int sa = 0, sb = 0;
    int n = std::max(la.length(), mu.length());
    for (int i = 0; i < n; ++i) {
        sa += i < la.length() ? la.part(i) : 0;
        sb += i < mu.length() ? mu.part(i) : 0;
        if (sa < sb) return false;
    }
    return true;
}

// All partitions of n, in the canonical (size, parts) order.
inline std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partitions_of: n must be >= 0");
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int maxPart) {
        if (rem == 0) {
            out.push_back(Partition(cur));
            return;
        }
        for (int p = std::min(rem, maxPart); p >= 1; --p) {
            cur.push_back(p);
            rec(rem - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Partition> partitions_up_to(int n) {
    std::vector<Partition> out;
    for (int d = 0; d <= n; ++d) {
        auto pd = partitions_of(d);
        out.insert(out.end(), pd.begin(), pd.end());
    }
    return out;
}

inline const Partition& empty_partition() {
    static const Partition e{};
    return e;
}

}  // namespace hlv
