#pragma once

// Global variable pool for the coefficient ring. Two kinds of symbols:
//
//  * monomial variables (q, t, u_i, T, v): p_n acts by raising to the n-th
//    power, i.e. exponent scaling;
//  * free lambda-ring generators A_la, B_la (and double-indexed A_{la,mu})
//    with a tracked p-power: p_n[p_m[A_la]] = p_{nm}[A_la].
//
// Interning is append-only and mutex-guarded; ids are process-global.
// Ordering of variables is semantic (q < t < u1 < u2 < ... < T < v < gens),
// not interning order, so canonical forms are reproducible.

#include <hlv/partition.hpp>

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace hlv {

using VarId = int;

enum class VarKind { Monomial, Gen };

struct VarInfo {
    VarKind kind = VarKind::Monomial;
    std::string name;
    bool laurent_ok = false;  // negative exponents permitted (q, t, u_i only)

    // Generator payload (kind == Gen).
    std::string gen_base;                 // "A", "B", ...
    Partition gen_idx1;
    std::optional<Partition> gen_idx2;    // set for double-indexed families
    int gen_power = 1;                    // tracked p-power

    // Semantic sort key: class, u-index, generator identity.
    // classes: 0=q, 1=t, 2=u_i, 3=T, 4=v, 5=generator
    int cls = 5;
    int uidx = 0;

    auto rank() const {
        return std::make_tuple(cls, uidx, gen_base, gen_idx1.size(), gen_idx1.parts(),
                               gen_idx2.has_value() ? 1 : 0,
                               gen_idx2 ? gen_idx2->size() : 0,
                               gen_idx2 ? gen_idx2->parts() : std::vector<int>{},
                               gen_power);
    }
};

class VarPool {
public:
    static VarPool& instance() {
        static VarPool pool;
        return pool;
    }

    VarId q() { return q_; }
    VarId t() { return t_; }
    VarId T() { return T_; }
    VarId v() { return v_; }

    VarId u(int i) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = u_ids_.find(i);
        if (it != u_ids_.end()) return it->second;
        VarInfo info;
        info.kind = VarKind::Monomial;
        info.name = "u" + std::to_string(i);
        info.laurent_ok = true;
        info.cls = 2;
        info.uidx = i;
        VarId id = add_locked(info);
        u_ids_[i] = id;
        return id;
    }

    VarId gen(const std::string& base, const Partition& idx1,
              const std::optional<Partition>& idx2 = std::nullopt, int power = 1) {
        std::lock_guard<std::mutex> lock(mu_);
        GenKey key{base, idx1.parts(), idx2 ? idx2->parts() : std::vector<int>{},
                   idx2.has_value(), power};
        auto it = gen_ids_.find(key);
        if (it != gen_ids_.end()) return it->second;
        VarInfo info;
        info.kind = VarKind::Gen;
        info.gen_base = base;
        info.gen_idx1 = idx1;
        info.gen_idx2 = idx2;
        info.gen_power = power;
        info.cls = 5;
        std::string nm = base + idx1.to_string();
        if (idx2) nm = base + "(" + idx1.to_string() + "," + idx2->to_string() + ")";
        if (power != 1) nm = "p" + std::to_string(power) + "[" + nm + "]";
        info.name = nm;
        VarId id = add_locked(info);
        gen_ids_[key] = id;
        return id;
    }

    // Lookup by name, used by JSON round-trips. Monomial names only.
    VarId monomial_by_name(const std::string& name) {
        if (name == "q") return q_;
        if (name == "t") return t_;
        if (name == "T") return T_;
        if (name == "v") return v_;
        if (name.size() >= 2 && name[0] == 'u') return u(std::stoi(name.substr(1)));
        throw std::invalid_argument("unknown monomial variable '" + name + "'");
    }

    const VarInfo& info(VarId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return infos_.at(static_cast<std::size_t>(id));
    }

    VarKind kind(VarId id) const { return info(id).kind; }
    std::string name(VarId id) const { return info(id).name; }
    bool laurent_ok(VarId id) const { return info(id).laurent_ok; }

    // Image of the variable under p_n. Monomial variables map to themselves
    // (the caller scales exponents); generators get their power multiplied.
    VarId pn_image(VarId id, int n) {
        VarInfo vi = info(id);
        if (vi.kind == VarKind::Monomial) return id;
        return gen(vi.gen_base, vi.gen_idx1, vi.gen_idx2, vi.gen_power * n);
    }

    bool less(VarId a, VarId b) const {
        if (a == b) return false;
        std::lock_guard<std::mutex> lock(mu_);
        return infos_[static_cast<std::size_t>(a)].rank() < infos_[static_cast<std::size_t>(b)].rank();
    }

private:
    struct GenKey {
        std::string base;
        std::vector<int> p1, p2;
        bool has2 = false;
        int power = 1;
        bool operator<(const GenKey& o) const {
            return std::tie(base, p1, has2, p2, power) < std::tie(o.base, o.p1, o.has2, o.p2, o.power);
        }
    };

    VarPool() {
        VarInfo vq;
        vq.name = "q";
        vq.laurent_ok = true;
        vq.cls = 0;
        q_ = add_locked(vq);
        VarInfo vt;
        vt.name = "t";
        vt.laurent_ok = true;
        vt.cls = 1;
        t_ = add_locked(vt);
        VarInfo vT;
        vT.name = "T";
        vT.laurent_ok = false;
        vT.cls = 3;
        T_ = add_locked(vT);
        VarInfo vv;
        vv.name = "v";
        vv.laurent_ok = false;
        vv.cls = 4;
        v_ = add_locked(vv);
    }

    VarId add_locked(const VarInfo& info) {
        infos_.push_back(info);
        return static_cast<VarId>(infos_.size() - 1);
    }

    mutable std::mutex mu_;
    std::deque<VarInfo> infos_;  // deque: references stay valid across appends
    std::map<int, VarId> u_ids_;
    std::map<GenKey, VarId> gen_ids_;
    VarId q_ = -1, t_ = -1, T_ = -1, v_ = -1;
};

inline VarId var_q() { return VarPool::instance().q(); }
inline VarId var_t() { return VarPool::instance().t(); }
inline VarId var_T() { return VarPool::instance().T(); }
inline VarId var_v() { return VarPool::instance().v(); }
inline VarId var_u(int i) { return VarPool::instance().u(i); }
inline VarId var_gen(const std::string& base, const Partition& idx1,
                     const std::optional<Partition>& idx2 = std::nullopt, int power = 1) {
    return VarPool::instance().gen(base, idx1, idx2, power);
}
inline bool var_less(VarId a, VarId b) { return VarPool::instance().less(a, b); }

}  // namespace hlv
