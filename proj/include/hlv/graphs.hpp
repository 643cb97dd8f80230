#pragma once

// Colored multigraphs for the convolution calculus: bipartite (black/white
// vertex classes) and directed (loops allowed), with positive integer colors
// on vertices and edges subject to m(v) | m(e) for incident pairs.
//
// Canonical labeling is iterative signature refinement with full backtracking
// on the first non-singleton class; graphs here stay tiny (<= ~10 vertices),
// so exhaustive branch exploration is fine. The automorphism order is the
// number of distinct leaf labelings reproducing the canonical encoding times
// the parallel-edge permutation factor.

#include <hlv/types.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace hlv {

struct GraphEdge {
    int a = 0, b = 0;  // bipartite: a in V1, b in V2; directed: a -> b
    int color = 1;
    friend bool operator<(const GraphEdge& x, const GraphEdge& y) {
        return std::tie(x.a, x.b, x.color) < std::tie(y.a, y.b, y.color);
    }
    friend bool operator==(const GraphEdge& x, const GraphEdge& y) {
        return x.a == y.a && x.b == y.b && x.color == y.color;
    }
};

struct ColoredGraph {
    bool directed = false;
    int n1 = 0, n2 = 0;              // directed graphs use n1 only
    std::vector<int> vcolor;         // size n1 + n2; V2 vertices come after V1
    std::vector<GraphEdge> edges;    // kept sorted

    int vertex_count() const { return n1 + n2; }
    int edge_count() const { return static_cast<int>(edges.size()); }

    int degree() const {
        int d = 0;
        for (const auto& e : edges) d += e.color;
        return d;
    }

    // First Betti number #E - #V + 1 (underlying undirected graph, connected).
    int betti() const { return edge_count() - vertex_count() + 1; }

    // gcd of all vertex and edge colors.
    int color_gcd() const {
        int g = 0;
        for (int c : vcolor) g = std::gcd(g, c);
        for (const auto& e : edges) g = std::gcd(g, e.color);
        return g;
    }

    bool connected() const {
        int n = vertex_count();
        if (n == 0) return false;
        std::vector<int> parent(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            return x;
        };
        for (const auto& e : edges) {
            int u = e.a, w = directed ? e.b : n1 + e.b;
            parent[static_cast<std::size_t>(find(u))] = find(w);
        }
        int root = find(0);
        for (int v = 1; v < n; ++v)
            if (find(v) != root) return false;
        return true;
    }

    bool admissible() const {
        for (const auto& e : edges) {
            int u = e.a, w = directed ? e.b : n1 + e.b;
            if (e.color % vcolor[static_cast<std::size_t>(u)] != 0) return false;
            if (e.color % vcolor[static_cast<std::size_t>(w)] != 0) return false;
        }
        return true;
    }

    // Partition of incident edge colors divided by m(v). For bipartite graphs
    // every incident edge counts; for directed graphs pick outgoing or
    // incoming. Loops count on both sides.
    Partition local_partition(int v, bool incoming) const {
        std::vector<int> parts;
        for (const auto& e : edges) {
            if (directed) {
                if (!incoming && e.a == v) parts.push_back(e.color / vcolor[static_cast<std::size_t>(v)]);
                if (incoming && e.b == v) parts.push_back(e.color / vcolor[static_cast<std::size_t>(v)]);
            } else {
                int w = n1 + e.b;
                if (e.a == v || w == v) parts.push_back(e.color / vcolor[static_cast<std::size_t>(v)]);
            }
        }
        return Partition::from_unsorted(std::move(parts));
    }

    friend bool operator<(const ColoredGraph& x, const ColoredGraph& y) {
        return std::tie(x.directed, x.n1, x.n2, x.vcolor, x.edges) <
               std::tie(y.directed, y.n1, y.n2, y.vcolor, y.edges);
    }
    friend bool operator==(const ColoredGraph& x, const ColoredGraph& y) {
        return x.directed == y.directed && x.n1 == y.n1 && x.n2 == y.n2 && x.vcolor == y.vcolor &&
               x.edges == y.edges;
    }
};

namespace detail {

inline int n_of(const ColoredGraph& g, const GraphEdge& e) { return g.n1 + e.b; }

// Relabel by perm (old vertex -> new vertex, side-preserving) and sort edges.
inline ColoredGraph apply_labeling(const ColoredGraph& g, const std::vector<int>& perm) {
    ColoredGraph out = g;
    for (int v = 0; v < g.vertex_count(); ++v)
        out.vcolor[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = g.vcolor[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (g.directed) {
            out.edges[i] = GraphEdge{perm[static_cast<std::size_t>(e.a)], perm[static_cast<std::size_t>(e.b)], e.color};
        } else {
            out.edges[i] = GraphEdge{perm[static_cast<std::size_t>(e.a)], perm[static_cast<std::size_t>(n_of(g, e))] - g.n1, e.color};
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

}  // namespace detail

// Canonical form plus the full automorphism order (vertex automorphisms times
// permutations of parallel equal-colored edges).
class GraphCanonizer {
public:
    explicit GraphCanonizer(const ColoredGraph& g) : g_(g), n_(g.vertex_count()) {}

    std::pair<ColoredGraph, Int> run() {
        pins_.clear();
        leaves_.clear();
        search();
        // Canonical = minimal encoding among distinct leaf labelings; the
        // number of labelings hitting it is the vertex automorphism order.
        std::set<std::vector<int>> distinct;
        const ColoredGraph* best = nullptr;
        int count = 0;
        for (const auto& [labeling, graph] : leaves_) {
            if (!distinct.insert(labeling).second) continue;
            if (!best || graph < *best) {
                best = &graph;
                count = 1;
            } else if (graph == *best) {
                ++count;
            }
        }
        Int aut = count;
        // Parallel edges with identical endpoints and colors permute freely.
        std::size_t i = 0;
        while (i < best->edges.size()) {
            std::size_t j = i;
            while (j < best->edges.size() && best->edges[j] == best->edges[i]) ++j;
            aut *= factorial(static_cast<int>(j - i));
            i = j;
        }
        return {*best, aut};
    }

private:
    using Signature = std::vector<long>;

    int side(int v) const { return v < g_.n1 ? 0 : 1; }

    // Signature refinement from scratch given the current pin sequence.
    std::vector<int> refine() const {
        std::vector<int> cls(static_cast<std::size_t>(n_), 0);
        // initial classes: (pin index, side, vertex color)
        {
            std::vector<std::pair<Signature, int>> sigs;
            for (int v = 0; v < n_; ++v) {
                long pin = static_cast<long>(pin_index(v));
                sigs.push_back({{pin, side(v), g_.vcolor[static_cast<std::size_t>(v)]}, v});
            }
            assign_classes(sigs, cls);
        }
        while (true) {
            std::vector<std::pair<Signature, int>> sigs;
            for (int v = 0; v < n_; ++v) {
                Signature s{cls[static_cast<std::size_t>(v)]};
                std::vector<std::tuple<int, int, int>> inc;
                for (const auto& e : g_.edges) {
                    int u = e.a, w = g_.directed ? e.b : g_.n1 + e.b;
                    if (u == v && w == v) {
                        inc.push_back({2, e.color, cls[static_cast<std::size_t>(v)]});
                    } else if (u == v) {
                        inc.push_back({0, e.color, cls[static_cast<std::size_t>(w)]});
                    } else if (w == v) {
                        inc.push_back({1, e.color, cls[static_cast<std::size_t>(u)]});
                    }
                }
                std::sort(inc.begin(), inc.end());
                for (const auto& [d, c, k] : inc) {
                    s.push_back(d);
                    s.push_back(c);
                    s.push_back(k);
                }
                sigs.push_back({std::move(s), v});
            }
            std::vector<int> next(static_cast<std::size_t>(n_));
            assign_classes(sigs, next);
            if (next == cls) break;
            cls = std::move(next);
        }
        return cls;
    }

    static void assign_classes(std::vector<std::pair<Signature, int>>& sigs, std::vector<int>& cls) {
        std::sort(sigs.begin(), sigs.end());
        int id = -1;
        const Signature* prev = nullptr;
        for (const auto& [s, v] : sigs) {
            if (!prev || s != *prev) ++id;
            cls[static_cast<std::size_t>(v)] = id;
            prev = &s;
        }
    }

    int pin_index(int v) const {
        for (std::size_t i = 0; i < pins_.size(); ++i)
            if (pins_[i] == v) return static_cast<int>(i);
        return n_;  // unpinned sort after pinned
    }

    void search() {
        std::vector<int> cls = refine();
        // discrete?
        std::vector<int> seen(static_cast<std::size_t>(n_), 0);
        bool discrete = true;
        for (int v = 0; v < n_; ++v) {
            if (seen[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])]++) {
                discrete = false;
                break;
            }
        }
        if (discrete) {
            // labeling: class id IS the new vertex index... classes are
            // ordered by signature, which sorts pinned first; sides are part
            // of the initial signature but V1 must map to V1. Renumber per side.
            std::vector<int> perm(static_cast<std::size_t>(n_), -1);
            std::vector<std::pair<int, int>> order;  // (class, vertex)
            for (int v = 0; v < n_; ++v) order.push_back({cls[static_cast<std::size_t>(v)], v});
            std::sort(order.begin(), order.end());
            int next1 = 0, next2 = g_.n1;
            for (const auto& [c, v] : order) {
                perm[static_cast<std::size_t>(v)] = side(v) == 0 ? next1++ : next2++;
            }
            leaves_.push_back({perm, detail::apply_labeling(g_, perm)});
            return;
        }
        // branch on the first smallest non-singleton class
        std::vector<std::vector<int>> members;
        int maxc = *std::max_element(cls.begin(), cls.end());
        members.assign(static_cast<std::size_t>(maxc) + 1, {});
        for (int v = 0; v < n_; ++v) members[static_cast<std::size_t>(cls[static_cast<std::size_t>(v)])].push_back(v);
        int target = -1;
        std::size_t best_size = SIZE_MAX;
        for (int c = 0; c <= maxc; ++c) {
            if (members[static_cast<std::size_t>(c)].size() > 1 && members[static_cast<std::size_t>(c)].size() < best_size) {
                best_size = members[static_cast<std::size_t>(c)].size();
                target = c;
            }
        }
        for (int v : members[static_cast<std::size_t>(target)]) {
            pins_.push_back(v);
            search();
            pins_.pop_back();
        }
    }

    const ColoredGraph& g_;
    int n_;
    std::vector<int> pins_;
    std::vector<std::pair<std::vector<int>, ColoredGraph>> leaves_;
};

struct CanonicalGraph {
    ColoredGraph graph;
    Int aut = 1;
    friend bool operator<(const CanonicalGraph& a, const CanonicalGraph& b) { return a.graph < b.graph; }
};

inline CanonicalGraph canonicalize(const ColoredGraph& g) {
    auto [cg, aut] = GraphCanonizer(g).run();
    return CanonicalGraph{cg, aut};
}

// ---- enumeration by stub assembly ----

namespace detail {

// Multisets of (color, partition[, partition]) prototypes realizing total
// stub weight d, built from the ordered candidate list to avoid duplicates.
struct DirectedProto {
    int m = 1;
    Partition out, in;
};

// Enumerate matchings between two stub lists grouped by color; cb receives
// the vector of matched (slot1, slot2) index pairs.
inline void match_stubs(const std::vector<std::pair<int, int>>& stubs1,  // (vertex, color)
                        const std::vector<std::pair<int, int>>& stubs2,
                        const std::function<void(const std::vector<std::pair<int, int>>&)>& cb) {
    // group indices by color
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_color;
    for (std::size_t i = 0; i < stubs1.size(); ++i) by_color[stubs1[i].second].first.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < stubs2.size(); ++i) by_color[stubs2[i].second].second.push_back(static_cast<int>(i));
    for (const auto& [c, pair] : by_color)
        if (pair.first.size() != pair.second.size()) return;
    std::vector<std::pair<int, int>> matched;
    std::function<void(std::map<int, std::pair<std::vector<int>, std::vector<int>>>::const_iterator)> rec;
    std::vector<std::map<int, std::pair<std::vector<int>, std::vector<int>>>::const_iterator> groups;
    for (auto it = by_color.begin(); it != by_color.end(); ++it) groups.push_back(it);
    std::function<void(std::size_t)> per_group = [&](std::size_t gi) {
        if (gi == groups.size()) {
            cb(matched);
            return;
        }
        const auto& [c, pair] = *groups[gi];
        std::vector<int> perm = pair.second;
        std::sort(perm.begin(), perm.end());
        do {
            std::size_t base = matched.size();
            for (std::size_t i = 0; i < perm.size(); ++i)
                matched.push_back({pair.first[i], perm[i]});
            per_group(gi + 1);
            matched.resize(base);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    per_group(0);
}

}  // namespace detail

// Connected admissible colored bipartite graphs of degree d, up to
// isomorphism, including the two degree-0 single-vertex graphs. Trees whose
// color gcd exceeds 1 are skipped (their phi factor vanishes identically).
inline std::vector<CanonicalGraph> enumerate_bipartite(int d) {
    std::vector<CanonicalGraph> out;
    if (d == 0) {
        for (int side = 0; side < 2; ++side) {
            ColoredGraph g;
            g.directed = false;
            g.n1 = side == 0 ? 1 : 0;
            g.n2 = side == 0 ? 0 : 1;
            g.vcolor = {1};
            out.push_back(CanonicalGraph{g, Int(1)});
        }
        return out;
    }
    std::set<ColoredGraph> seen;
    std::vector<CanonicalGraph> found;
    auto sides = types_of_degree(d);  // vertex configurations of one side
    for (const auto& t1 : sides) {
        Partition f1 = t1.flatten();
        for (const auto& t2 : sides) {
            if (!(t2.flatten() == f1)) continue;
            // stub lists
            std::vector<std::pair<int, int>> stubs1, stubs2;
            ColoredGraph base;
            base.directed = false;
            base.n1 = static_cast<int>(t1.pairs().size());
            base.n2 = static_cast<int>(t2.pairs().size());
            for (std::size_t v = 0; v < t1.pairs().size(); ++v) {
                base.vcolor.push_back(t1.pairs()[v].k);
                for (int part : t1.pairs()[v].la.parts())
                    stubs1.push_back({static_cast<int>(v), t1.pairs()[v].k * part});
            }
            for (std::size_t v = 0; v < t2.pairs().size(); ++v) {
                base.vcolor.push_back(t2.pairs()[v].k);
                for (int part : t2.pairs()[v].la.parts())
                    stubs2.push_back({static_cast<int>(v), t2.pairs()[v].k * part});
            }
            detail::match_stubs(stubs1, stubs2, [&](const std::vector<std::pair<int, int>>& matched) {
                ColoredGraph g = base;
                for (const auto& [i1, i2] : matched)
                    g.edges.push_back(GraphEdge{stubs1[static_cast<std::size_t>(i1)].first,
                                                stubs2[static_cast<std::size_t>(i2)].first,
                                                stubs1[static_cast<std::size_t>(i1)].second});
                std::sort(g.edges.begin(), g.edges.end());
                if (!g.connected()) return;
                if (g.betti() == 0 && g.color_gcd() > 1) return;  // vanishing tree
                auto canon = canonicalize(g);
                if (seen.insert(canon.graph).second) found.push_back(std::move(canon));
            });
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

// Connected admissible colored directed graphs of degree d (sum of edge
// colors), up to isomorphism; loops allowed. Optional support restricts the
// (out, in) local partition pairs available to vertices (used by the trace,
// whose coefficient family usually has small support). Degree 0 yields the
// single no-edge vertex.
inline std::vector<CanonicalGraph> enumerate_directed(
    int d, const std::set<std::pair<Partition, Partition>>* support = nullptr) {
    std::vector<CanonicalGraph> found;
    if (d == 0) {
        ColoredGraph g;
        g.directed = true;
        g.n1 = 1;
        g.vcolor = {1};
        found.push_back(CanonicalGraph{g, Int(1)});
        return found;
    }
    // candidate prototypes ordered to enumerate multisets without repeats
    std::vector<detail::DirectedProto> cands;
    for (int m = 1; m <= d; ++m) {
        for (int so = 0; m * so <= d; ++so) {
            for (int si = 0; m * si <= d; ++si) {
                if (so == 0 && si == 0) continue;
                for (const auto& lo : partitions_of(so)) {
                    for (const auto& li : partitions_of(si)) {
                        if (support && !support->count({lo, li})) continue;
                        cands.push_back(detail::DirectedProto{m, lo, li});
                    }
                }
            }
        }
    }
    std::set<ColoredGraph> seen;
    std::vector<detail::DirectedProto> chosen;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t from, int out_left, int in_left) {
        if (out_left == 0 && in_left == 0) {
            if (chosen.empty()) return;
            // stub color balance
            std::vector<std::pair<int, int>> stubs_out, stubs_in;
            ColoredGraph base;
            base.directed = true;
            base.n1 = static_cast<int>(chosen.size());
            std::map<int, int> balance;
            for (std::size_t v = 0; v < chosen.size(); ++v) {
                base.vcolor.push_back(chosen[v].m);
                for (int part : chosen[v].out.parts()) {
                    stubs_out.push_back({static_cast<int>(v), chosen[v].m * part});
                    ++balance[chosen[v].m * part];
                }
                for (int part : chosen[v].in.parts()) {
                    stubs_in.push_back({static_cast<int>(v), chosen[v].m * part});
                    --balance[chosen[v].m * part];
                }
            }
            for (const auto& [c, b] : balance)
                if (b != 0) return;
            detail::match_stubs(stubs_out, stubs_in, [&](const std::vector<std::pair<int, int>>& matched) {
                ColoredGraph g = base;
                for (const auto& [io, ii] : matched)
                    g.edges.push_back(GraphEdge{stubs_out[static_cast<std::size_t>(io)].first,
                                                stubs_in[static_cast<std::size_t>(ii)].first,
                                                stubs_out[static_cast<std::size_t>(io)].second});
                std::sort(g.edges.begin(), g.edges.end());
                if (!g.connected()) return;
                if (g.betti() == 0 && g.color_gcd() > 1) return;
                auto canon = canonicalize(g);
                if (seen.insert(canon.graph).second) found.push_back(std::move(canon));
            });
            return;
        }
        if (from == cands.size()) return;
        for (std::size_t i = from; i < cands.size(); ++i) {
            int wo = cands[i].m * cands[i].out.size();
            int wi = cands[i].m * cands[i].in.size();
            if (wo > out_left || wi > in_left) continue;
            chosen.push_back(cands[i]);
            rec(i, out_left - wo, in_left - wi);
            chosen.pop_back();
        }
    };
    rec(0, d, d);
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace hlv
