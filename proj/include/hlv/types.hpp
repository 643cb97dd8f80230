#pragma once

// Types and double types: unordered tuples of (k, la) pairs resp.
// (k, la, mu) triples, stored sorted under a fixed total order.

#include <hlv/partition.hpp>

#include <algorithm>
#include <functional>
#include <tuple>
#include <vector>

namespace hlv {

struct TypePair {
    int k = 1;
    Partition la;  // nonempty for TypeTuple entries

    friend bool operator<(const TypePair& a, const TypePair& b) {
        // Fixed order: by k, then |la|, then lexicographically on parts.
        return std::make_tuple(a.k, a.la.size(), a.la.parts()) <
               std::make_tuple(b.k, b.la.size(), b.la.parts());
    }
    friend bool operator==(const TypePair& a, const TypePair& b) {
        return a.k == b.k && a.la == b.la;
    }
};

class TypeTuple {
public:
    TypeTuple() = default;
    explicit TypeTuple(std::vector<TypePair> pairs) : pairs_(std::move(pairs)) {
        for (const auto& p : pairs_) {
            if (p.k <= 0) throw std::invalid_argument("TypeTuple: k must be positive");
            if (p.la.empty()) throw std::invalid_argument("TypeTuple: partitions must be nonempty");
        }
        std::sort(pairs_.begin(), pairs_.end());
    }

    const std::vector<TypePair>& pairs() const { return pairs_; }

    int degree() const {
        int d = 0;
        for (const auto& p : pairs_) d += p.k * p.la.size();
        return d;
    }

    Int aut_count() const {
        Int a = 1;
        int run = 1;
        for (std::size_t i = 1; i <= pairs_.size(); ++i) {
            if (i < pairs_.size() && pairs_[i] == pairs_[i - 1]) {
                ++run;
            } else {
                a *= factorial(run);
                run = 1;
            }
        }
        return a;
    }

    // flat(tau): the partition with components k_i * la^{(i)}_j.
    Partition flatten() const {
        std::vector<int> parts;
        for (const auto& p : pairs_)
            for (int x : p.la.parts()) parts.push_back(p.k * x);
        return Partition::from_unsorted(std::move(parts));
    }

    friend bool operator<(const TypeTuple& a, const TypeTuple& b) { return a.pairs_ < b.pairs_; }
    friend bool operator==(const TypeTuple& a, const TypeTuple& b) { return a.pairs_ == b.pairs_; }

private:
    std::vector<TypePair> pairs_;

    friend bool operator<(const TypePair& a, const TypePair& b);
};

struct TypeTriple {
    int k = 1;
    Partition la, mu;  // (la, mu) != ((), ())

    friend bool operator<(const TypeTriple& a, const TypeTriple& b) {
        return std::make_tuple(a.k, a.la.size(), a.la.parts(), a.mu.size(), a.mu.parts()) <
               std::make_tuple(b.k, b.la.size(), b.la.parts(), b.mu.size(), b.mu.parts());
    }
    friend bool operator==(const TypeTriple& a, const TypeTriple& b) {
        return a.k == b.k && a.la == b.la && a.mu == b.mu;
    }
};

class DoubleType {
public:
    DoubleType() = default;
    explicit DoubleType(std::vector<TypeTriple> triples) : triples_(std::move(triples)) {
        for (const auto& t : triples_) {
            if (t.k <= 0) throw std::invalid_argument("DoubleType: k must be positive");
            if (t.la.empty() && t.mu.empty())
                throw std::invalid_argument("DoubleType: ((),()) index not allowed");
        }
        std::sort(triples_.begin(), triples_.end());
    }

    const std::vector<TypeTriple>& triples() const { return triples_; }

    Int aut_count() const {
        Int a = 1;
        int run = 1;
        for (std::size_t i = 1; i <= triples_.size(); ++i) {
            if (i < triples_.size() && triples_[i] == triples_[i - 1]) {
                ++run;
            } else {
                a *= factorial(run);
                run = 1;
            }
        }
        return a;
    }

    Partition flatten1() const {
        std::vector<int> parts;
        for (const auto& t : triples_)
            for (int x : t.la.parts()) parts.push_back(t.k * x);
        return Partition::from_unsorted(std::move(parts));
    }
    Partition flatten2() const {
        std::vector<int> parts;
        for (const auto& t : triples_)
            for (int x : t.mu.parts()) parts.push_back(t.k * x);
        return Partition::from_unsorted(std::move(parts));
    }

    friend bool operator<(const DoubleType& a, const DoubleType& b) { return a.triples_ < b.triples_; }
    friend bool operator==(const DoubleType& a, const DoubleType& b) { return a.triples_ == b.triples_; }

private:
    std::vector<TypeTriple> triples_;
};

// All types of degree n (complete, duplicate-free, in lexicographic order of
// the sorted pair sequences).
inline std::vector<TypeTuple> types_of_degree(int n) {
    if (n < 0) throw std::invalid_argument("types_of_degree: n must be >= 0");
    // Candidate pairs of weight k*|la| <= n, listed in the fixed total order.
    std::vector<TypePair> cand;
    for (int k = 1; k <= n; ++k)
        for (int m = 1; k * m <= n; ++m)
            for (const auto& la : partitions_of(m)) cand.push_back(TypePair{k, la});
    std::sort(cand.begin(), cand.end());

    std::vector<TypeTuple> out;
    std::vector<TypePair> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int rem) {
        if (rem == 0) {
            out.push_back(TypeTuple(cur));
            return;
        }
        for (std::size_t i = from; i < cand.size(); ++i) {
            int w = cand[i].k * cand[i].la.size();
            if (w > rem) continue;
            cur.push_back(cand[i]);
            rec(i, rem - w);  // multiset: same pair may repeat
            cur.pop_back();
        }
    };
    rec(0, n);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hlv
