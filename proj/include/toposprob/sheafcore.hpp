#pragma once

// Presheaves of finite sets over a finite context poset, sieves, the
// subobject classifier and subobject enumeration.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toposprob/contextlab.hpp"
#include "toposprob/error.hpp"

namespace toposprob {

inline constexpr std::size_t kDefaultEnumerationCap = 4'000'000;

/// Elements of each component are 0..size-1; a restriction for V' ≤ V maps
/// indices of F(V) to indices of F(V').
class Presheaf {
  public:
    Presheaf(std::shared_ptr<const PosetOrder> order, std::vector<std::size_t> sizes)
        : order_(std::move(order)), sizes_(std::move(sizes)) {
        require(sizes_.size() == order_->size(), ErrorKind::PosetMismatch,
                "one component per context required");
    }

    [[nodiscard]] const PosetOrder &order() const noexcept { return *order_; }
    [[nodiscard]] const std::shared_ptr<const PosetOrder> &order_ptr() const noexcept {
        return order_;
    }
    [[nodiscard]] std::size_t size(ContextId v) const { return sizes_.at(v); }

    void set_restriction(ContextId upper, ContextId lower, std::vector<std::size_t> map) {
        require(order_->leq(lower, upper), ErrorKind::NotAFunctor,
                "restriction between incomparable contexts");
        require(map.size() == sizes_.at(upper), ErrorKind::NotAFunctor, "restriction arity");
        restrictions_[{upper, lower}] = std::move(map);
    }

    [[nodiscard]] std::size_t restrict(ContextId upper, ContextId lower, std::size_t x) const {
        auto it = restrictions_.find({upper, lower});
        require(it != restrictions_.end(), ErrorKind::NotAFunctor,
                "missing restriction " + order_->name(upper) + " -> " + order_->name(lower));
        return it->second.at(x);
    }

    /// Image of a set of elements of F(upper) in F(lower).
    [[nodiscard]] std::uint64_t restrict_set(ContextId upper, ContextId lower,
                                             std::uint64_t elements) const {
        std::uint64_t out = 0;
        while (elements) {
            const auto x = static_cast<std::size_t>(std::countr_zero(elements));
            elements &= elements - 1;
            out |= std::uint64_t{1} << restrict(upper, lower, x);
        }
        return out;
    }

    void set_label(ContextId v, std::size_t x, std::string label) {
        labels_[{v, x}] = std::move(label);
    }

    [[nodiscard]] std::string label(ContextId v, std::size_t x) const {
        auto it = labels_.find({v, x});
        return it == labels_.end() ? std::to_string(x) : it->second;
    }

  private:
    std::shared_ptr<const PosetOrder> order_;
    std::vector<std::size_t> sizes_;
    std::map<std::pair<ContextId, ContextId>, std::vector<std::size_t>> restrictions_;
    std::map<std::pair<ContextId, std::size_t>, std::string> labels_;
};

struct FunctorViolation {
    ContextId lower;
    ContextId middle;
    ContextId upper;
    std::size_t element;
    std::string description;
};

/// First violation of identity or composition laws, if any.
inline std::optional<FunctorViolation> find_functor_violation(const Presheaf &f) {
    const auto &order = f.order();
    for (ContextId v = 0; v < order.size(); ++v) {
        for (std::size_t x = 0; x < f.size(v); ++x) {
            std::size_t y = f.restrict(v, v, x);
            if (y != x) {
                return FunctorViolation{v, v, v, x, "identity restriction moves an element"};
            }
        }
    }
    for (ContextId upper = 0; upper < order.size(); ++upper) {
        for (ContextId middle : order.members(order.down(upper))) {
            for (ContextId lower : order.members(order.down(middle))) {
                for (std::size_t x = 0; x < f.size(upper); ++x) {
                    std::size_t direct = f.restrict(upper, lower, x);
                    std::size_t composed = f.restrict(middle, lower, f.restrict(upper, middle, x));
                    if (direct != composed) {
                        return FunctorViolation{lower, middle, upper, x,
                                                "restrictions do not compose"};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

inline void validate_presheaf(const Presheaf &f) {
    if (auto w = find_functor_violation(f)) {
        const auto &o = f.order();
        fail(ErrorKind::NotAFunctor, w->description + " at (" + o.name(w->lower) + " <= " +
                                         o.name(w->middle) + " <= " + o.name(w->upper) +
                                         ", element " + std::to_string(w->element) + ")");
    }
}

/// A sieve on `stage`: a down-closed subset of ↓stage.
struct Sieve {
    ContextId stage = 0;
    ContextMask members = 0;

    friend bool operator==(const Sieve &, const Sieve &) = default;
};

inline bool is_sieve(const PosetOrder &order, const Sieve &s) {
    if ((s.members & ~order.down(s.stage)) != 0) {
        return false;
    }
    for (ContextId v : order.members(s.members)) {
        if ((order.down(v) & ~s.members) != 0) {
            return false;
        }
    }
    return true;
}

inline Sieve principal_sieve(const PosetOrder &order, ContextId v) { return {v, order.down(v)}; }

/// All sieves on V, in increasing order of their member masks.
inline std::vector<ContextMask> sieves_on(const PosetOrder &order, ContextId v,
                                          std::size_t cap = kDefaultEnumerationCap) {
    // Largest ids are the minimal contexts, so walking ids downwards visits
    // every element after everything strictly below it.
    std::vector<ContextId> elems = order.members(order.down(v));
    std::vector<ContextMask> out;
    auto rec = [&](auto &&self, std::size_t i, ContextMask chosen) -> void {
        if (i == elems.size()) {
            out.push_back(chosen);
            require(out.size() <= cap, ErrorKind::PosetTooLarge, "too many sieves");
            return;
        }
        ContextId x = elems[elems.size() - 1 - i];
        self(self, i + 1, chosen);
        ContextMask below = order.down(x) & ~bit(x);
        if ((below & ~chosen) == 0) {
            self(self, i + 1, chosen | bit(x));
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Ω together with the sieve each element index stands for.
struct OmegaPresheaf {
    Presheaf presheaf;
    std::vector<std::vector<ContextMask>> sieves;

    [[nodiscard]] std::size_t index_of(ContextId v, ContextMask members) const {
        const auto &list = sieves.at(v);
        auto it = std::lower_bound(list.begin(), list.end(), members);
        require(it != list.end() && *it == members, ErrorKind::InvalidArgument,
                "not a sieve on " + presheaf.order().name(v));
        return static_cast<std::size_t>(it - list.begin());
    }
};

inline OmegaPresheaf omega_presheaf(std::shared_ptr<const PosetOrder> order,
                                    std::size_t cap = kDefaultEnumerationCap) {
    std::vector<std::vector<ContextMask>> sieves;
    std::vector<std::size_t> sizes;
    for (ContextId v = 0; v < order->size(); ++v) {
        sieves.push_back(sieves_on(*order, v, cap));
        sizes.push_back(sieves.back().size());
    }
    OmegaPresheaf omega{Presheaf(order, sizes), std::move(sieves)};
    for (ContextId upper = 0; upper < order->size(); ++upper) {
        for (ContextId lower : order->members(order->down(upper))) {
            std::vector<std::size_t> map;
            for (ContextMask s : omega.sieves[upper]) {
                map.push_back(omega.index_of(lower, s & order->down(lower)));
            }
            omega.presheaf.set_restriction(upper, lower, std::move(map));
        }
    }
    return omega;
}

enum class HeytingOp { meet, join, implies, negate };

/// Stagewise Heyting operations on Ω_V; implication by its Kripke-Joyal form.
inline Sieve sieve_heyting(const PosetOrder &order, HeytingOp op, const Sieve &a,
                           const std::optional<Sieve> &b = std::nullopt) {
    if (op != HeytingOp::negate) {
        require(b.has_value(), ErrorKind::InvalidArgument, "binary Heyting operation needs b");
        require(b->stage == a.stage, ErrorKind::StageMismatch, "sieves on different stages");
    }
    switch (op) {
    case HeytingOp::meet: return {a.stage, a.members & b->members};
    case HeytingOp::join: return {a.stage, a.members | b->members};
    case HeytingOp::implies:
    case HeytingOp::negate: {
        const ContextMask target = op == HeytingOp::implies ? b->members : 0;
        ContextMask out = 0;
        for (ContextId v : order.members(order.down(a.stage))) {
            if ((order.down(v) & a.members & ~target) == 0) {
                out |= bit(v);
            }
        }
        return {a.stage, out};
    }
    }
    return a;
}

inline Sieve sieve_meet(const PosetOrder &o, const Sieve &a, const Sieve &b) {
    return sieve_heyting(o, HeytingOp::meet, a, b);
}
inline Sieve sieve_join(const PosetOrder &o, const Sieve &a, const Sieve &b) {
    return sieve_heyting(o, HeytingOp::join, a, b);
}
inline Sieve sieve_implies(const PosetOrder &o, const Sieve &a, const Sieve &b) {
    return sieve_heyting(o, HeytingOp::implies, a, b);
}
inline Sieve sieve_not(const PosetOrder &o, const Sieve &a) {
    return sieve_heyting(o, HeytingOp::negate, a);
}

/// Global element of Ω: one sieve per stage.
struct GlobalSieveSection {
    std::vector<ContextMask> at;

    [[nodiscard]] Sieve sieve(ContextId v) const { return {v, at.at(v)}; }

    friend bool operator==(const GlobalSieveSection &, const GlobalSieveSection &) = default;
};

inline GlobalSieveSection principal_section(const PosetOrder &order) {
    GlobalSieveSection s;
    for (ContextId v = 0; v < order.size(); ++v) {
        s.at.push_back(order.down(v));
    }
    return s;
}

inline GlobalSieveSection empty_section(const PosetOrder &order) {
    return GlobalSieveSection{std::vector<ContextMask>(order.size(), 0)};
}

/// Every component is a sieve and the section restricts correctly:
/// s(V) ∩ ↓V' = s(V') for V' ≤ V.
inline bool is_global_section(const PosetOrder &order, const GlobalSieveSection &s) {
    if (s.at.size() != order.size()) {
        return false;
    }
    for (ContextId v = 0; v < order.size(); ++v) {
        if (!is_sieve(order, s.sieve(v))) {
            return false;
        }
        for (ContextId w : order.members(order.down(v))) {
            if ((s.at[v] & order.down(w)) != s.at[w]) {
                return false;
            }
        }
    }
    return true;
}

/// Per-context subsets of a presheaf's components, as bitsets.
/// `domain` lists the contexts the subobject lives over (↓V for local ones).
struct Subobject {
    ContextMask domain = 0;
    std::vector<std::uint64_t> parts;

    friend bool operator==(const Subobject &, const Subobject &) = default;
    friend auto operator<=>(const Subobject &a, const Subobject &b) {
        return a.parts <=> b.parts;
    }
};

inline bool is_subobject(const Presheaf &f, const Subobject &s) {
    const auto &order = f.order();
    if (s.parts.size() != order.size()) {
        return false;
    }
    for (ContextId v = 0; v < order.size(); ++v) {
        const bool inside = (s.domain & bit(v)) != 0;
        if (!inside && s.parts[v] != 0) {
            return false;
        }
        if (f.size(v) < 64 && (s.parts[v] >> f.size(v)) != 0) {
            return false;
        }
    }
    for (ContextId v : order.members(s.domain)) {
        for (ContextId w : order.members(order.down(v) & s.domain)) {
            if ((f.restrict_set(v, w, s.parts[v]) & ~s.parts[w]) != 0) {
                return false;
            }
        }
    }
    return true;
}

/// S restricted to ↓V.
inline Subobject restrict_to(const PosetOrder &order, const Subobject &s, ContextId v) {
    Subobject out{s.domain & order.down(v), s.parts};
    for (ContextId w = 0; w < order.size(); ++w) {
        if (!(out.domain & bit(w))) {
            out.parts[w] = 0;
        }
    }
    return out;
}

inline bool subobject_leq(const Subobject &a, const Subobject &b) {
    for (std::size_t v = 0; v < a.parts.size(); ++v) {
        if ((a.parts[v] & ~b.parts[v]) != 0) {
            return false;
        }
    }
    return true;
}

struct EnumerationOptions {
    std::size_t cap = kDefaultEnumerationCap;
    /// Reject families with an empty component anywhere in the domain.
    bool nonempty_components = false;
};

/// All subobjects of F over `domain` (a down-closed set of contexts), in
/// canonical order. Stages are fixed from maximal to minimal, each stage
/// ranging over supersets of what stability already forces.
inline std::vector<Subobject> enumerate_subobjects(const Presheaf &f, ContextMask domain,
                                                   const EnumerationOptions &opts = {}) {
    const auto &order = f.order();
    std::vector<ContextId> stages = order.members(domain);
    for (ContextId v : stages) {
        require(f.size(v) <= 63, ErrorKind::EnumerationTooLarge,
                "component at " + order.name(v) + " too large to enumerate");
    }
    std::vector<Subobject> out;
    Subobject current{domain, std::vector<std::uint64_t>(order.size(), 0)};
    auto rec = [&](auto &&self, std::size_t i) -> void {
        if (i == stages.size()) {
            out.push_back(current);
            require(out.size() <= opts.cap, ErrorKind::EnumerationTooLarge,
                    "more than " + std::to_string(opts.cap) + " subobjects");
            return;
        }
        const ContextId v = stages[i];
        std::uint64_t forced = 0;
        for (std::size_t k = 0; k < i; ++k) {
            const ContextId u = stages[k];
            if (u != v && order.leq(v, u)) {
                forced |= f.restrict_set(u, v, current.parts[u]);
            }
        }
        const std::uint64_t full = (std::uint64_t{1} << f.size(v)) - 1;
        const std::uint64_t free = full & ~forced;
        // Ascending enumeration of subsets of `free`.
        std::uint64_t extra = 0;
        while (true) {
            std::uint64_t part = forced | extra;
            if (!(opts.nonempty_components && part == 0)) {
                current.parts[v] = part;
                self(self, i + 1);
            }
            if (extra == free) {
                break;
            }
            extra = (extra - free) & free;
        }
        current.parts[v] = 0;
    };
    rec(rec, 0);
    return out;
}

inline std::vector<Subobject> enumerate_subobjects(const Presheaf &f,
                                                   const EnumerationOptions &opts = {}) {
    return enumerate_subobjects(f, f.order().all(), opts);
}

/// ⟦S1 ⊆ S2⟧: at V the sieve of V' ≤ V with S1(V') ⊆ S2(V').
inline GlobalSieveSection valuation_subseteq(const Presheaf &f, const Subobject &s1,
                                             const Subobject &s2) {
    const auto &order = f.order();
    require(s1.parts.size() == order.size() && s2.parts.size() == order.size() &&
                s1.domain == s2.domain,
            ErrorKind::ParentMismatch, "subobjects of different parents");
    require(is_subobject(f, s1) && is_subobject(f, s2), ErrorKind::ParentMismatch,
            "argument is not a subobject of the given presheaf");
    ContextMask good = 0;
    for (ContextId v = 0; v < order.size(); ++v) {
        if ((s1.parts[v] & ~s2.parts[v]) == 0) {
            good |= bit(v);
        }
    }
    GlobalSieveSection out;
    for (ContextId v = 0; v < order.size(); ++v) {
        // Only V' whose whole lower set is good survive as a sieve.
        ContextMask m = 0;
        for (ContextId w : order.members(order.down(v))) {
            if ((order.down(w) & ~good) == 0) {
                m |= bit(w);
            }
        }
        out.at.push_back(m);
    }
    return out;
}

} // namespace toposprob
