#pragma once

// Hyper-elements of the outer presheaf O, the maps k, j, c, d between
// Hyp(O), Sub_cl(Σ) and Sub(O), local power objects, and truth objects
// over V(H).
//
// Elements of O_V are indexed by block mask, so the lattice order on O_V is
// mask inclusion and joins are bitwise or.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "toposprob/linalg.hpp"
#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"
#include "toposprob/states.hpp"

namespace toposprob {

struct HyperElement {
    std::vector<BlockMask> at;

    friend bool operator==(const HyperElement &, const HyperElement &) = default;
    friend auto operator<=>(const HyperElement &, const HyperElement &) = default;
};

/// δ(γ_V)_{V'} ⪯ γ_{V'} for all V' ≤ V.
inline bool is_hyper_element(const Presheaf &outer, const HyperElement &h) {
    const auto &order = outer.order();
    if (h.at.size() != order.size()) {
        return false;
    }
    for (ContextId v = 0; v < order.size(); ++v) {
        if (h.at[v] >= outer.size(v)) {
            return false;
        }
        for (ContextId w : order.members(order.down(v))) {
            if ((outer.restrict(v, w, h.at[v]) & ~std::size_t{h.at[w]}) != 0) {
                return false;
            }
        }
    }
    return true;
}

/// Every hyper-element over `domain` (entries outside it are 0). Contexts
/// are chosen top-down, pruning on the condition against those above.
inline std::vector<HyperElement> enumerate_hyper_elements(const Presheaf &outer, ContextMask domain,
                                                          std::size_t cap = kDefaultEnumerationCap) {
    const auto &order = outer.order();
    const auto stages = order.members(domain);
    std::vector<HyperElement> out;
    HyperElement cur{std::vector<BlockMask>(order.size(), 0)};
    auto rec = [&](auto &&self, std::size_t i) -> void {
        if (i == stages.size()) {
            out.push_back(cur);
            require(out.size() <= cap, ErrorKind::TooLarge,
                    "more than " + std::to_string(cap) + " hyper-elements");
            return;
        }
        const ContextId v = stages[i];
        for (std::size_t x = 0; x < outer.size(v); ++x) {
            bool ok = true;
            for (std::size_t k = 0; k < i && ok; ++k) {
                const ContextId u = stages[k];
                if (order.leq(v, u) && u != v) {
                    ok = (outer.restrict(u, v, cur.at[u]) & ~x) == 0;
                }
            }
            if (ok) {
                cur.at[v] = static_cast<BlockMask>(x);
                self(self, i + 1);
            }
        }
        cur.at[v] = 0;
    };
    rec(rec, 0);
    return out;
}

inline std::vector<HyperElement> enumerate_hyper_elements(const Presheaf &outer) {
    return enumerate_hyper_elements(outer, outer.order().all());
}

/// k(γ)_V = α_V(γ_V).
inline ClopenSubobject k_map(const PosetOrder &order, const HyperElement &h,
                             ContextMask domain = ~ContextMask{0}) {
    domain &= order.all();
    ClopenSubobject s{Subobject{domain, std::vector<std::uint64_t>(order.size(), 0)}};
    for (ContextId v : order.members(domain)) {
        s.sub.parts[v] = alpha(LatticeElement{h.at.at(v)}).bits;
    }
    return s;
}

/// j(S)_V = α_V^{-1}(S_V).
inline HyperElement j_inverse(const ClopenSubobject &s) {
    HyperElement h{std::vector<BlockMask>(s.sub.parts.size(), 0)};
    for (std::size_t v = 0; v < s.sub.parts.size(); ++v) {
        if (s.sub.domain & bit(v)) {
            h.at[v] = alpha_inv(s.at(v)).bits;
        }
    }
    return h;
}

/// Subobject of O; bit x of parts[V] marks the lattice element with mask x.
using OuterSubobject = Subobject;

/// c(A)_V = ⋁ A_V.
inline HyperElement c_map(const OuterSubobject &a) {
    HyperElement h{std::vector<BlockMask>(a.parts.size(), 0)};
    for (std::size_t v = 0; v < a.parts.size(); ++v) {
        if (!(a.domain & bit(v))) {
            continue;
        }
        require(a.parts[v] != 0, ErrorKind::EmptyComponent,
                "component " + std::to_string(v) + " of the outer subobject is empty");
        std::uint64_t elems = a.parts[v];
        BlockMask join = 0;
        while (elems) {
            join |= static_cast<BlockMask>(std::countr_zero(elems));
            elems &= elems - 1;
        }
        h.at[v] = join;
    }
    return h;
}

/// d(γ)_V = {α : α ⪯ γ_V}.
inline OuterSubobject d_inverse(const PosetOrder &order, const HyperElement &h,
                                ContextMask domain = ~ContextMask{0}) {
    domain &= order.all();
    OuterSubobject a{domain, std::vector<std::uint64_t>(order.size(), 0)};
    for (ContextId v : order.members(domain)) {
        const BlockMask g = h.at.at(v);
        // Submasks of g, including 0.
        BlockMask m = g;
        while (true) {
            a.parts[v] |= std::uint64_t{1} << m;
            if (m == 0) {
                break;
            }
            m = (m - 1) & g;
        }
    }
    return a;
}

/// A lies in the image of d: each component is the principal down-set of its join.
inline bool is_ideal_subobject(const PosetOrder &order, const OuterSubobject &a) {
    for (ContextId v : order.members(a.domain)) {
        if (a.parts[v] == 0) {
            return false;
        }
    }
    return d_inverse(order, c_map(a), a.domain) == a;
}

struct AppendixReport {
    std::size_t hyper_elements = 0;
    std::size_t clopen_subobjects = 0;
    std::size_t outer_subobjects = 0; // nonempty components
    std::size_t outer_ideal = 0;
    std::size_t c_images = 0;
    bool kj_identity = true;
    bool jk_identity = true;
    bool cd_identity = true;
    bool dc_identity_on_ideal = true;
    /// d∘c = id over every nonempty-component subobject of O.
    bool dc_identity_all = true;
    std::size_t dc_failures = 0;
    bool outputs_valid = true;
    std::string witness;

    [[nodiscard]] bool counts_agree() const {
        return hyper_elements == clopen_subobjects && clopen_subobjects == c_images &&
               c_images == outer_ideal;
    }
};

/// Three independent enumerations (hyper-elements, clopen subobjects of Σ,
/// subobjects of O pushed through c) and the four round trips.
template <Scalar S>
AppendixReport check_appendix(const ContextPoset<S> &poset, double eps = kDefaultEpsilon,
                              std::size_t cap = kDefaultEnumerationCap) {
    AppendixReport rep;
    const auto &order = poset.order();
    const Presheaf outer = outer_presheaf(poset, eps);
    const Presheaf sigma = spectral_presheaf(poset.order_ptr());

    const auto hyp = enumerate_hyper_elements(outer, order.all(), cap);
    const auto sub = enumerate_subobjects(sigma, EnumerationOptions{cap, false});
    const auto subo = enumerate_subobjects(outer, EnumerationOptions{cap, true});
    rep.hyper_elements = hyp.size();
    rep.clopen_subobjects = sub.size();
    rep.outer_subobjects = subo.size();

    auto note = [&](bool &flag, const std::string &what) {
        if (flag) {
            flag = false;
            if (rep.witness.empty()) {
                rep.witness = what;
            }
        }
    };

    for (std::size_t i = 0; i < hyp.size(); ++i) {
        const auto k = k_map(order, hyp[i]);
        if (!is_subobject(sigma, k.sub)) {
            note(rep.outputs_valid, "k of hyper-element #" + std::to_string(i) + " is not a subobject");
        }
        if (!(j_inverse(k) == hyp[i])) {
            note(rep.jk_identity, "j(k(h)) != h for hyper-element #" + std::to_string(i));
        }
        const auto d = d_inverse(order, hyp[i]);
        if (!is_subobject(outer, d)) {
            note(rep.outputs_valid, "d of hyper-element #" + std::to_string(i) + " is not stable");
        }
        if (!(c_map(d) == hyp[i])) {
            note(rep.cd_identity, "c(d(h)) != h for hyper-element #" + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < sub.size(); ++i) {
        const auto j = j_inverse(ClopenSubobject{sub[i]});
        if (!is_hyper_element(outer, j)) {
            note(rep.outputs_valid, "j of subobject #" + std::to_string(i) + " is not a hyper-element");
        }
        if (!(k_map(order, j).sub == sub[i])) {
            note(rep.kj_identity, "k(j(S)) != S for subobject #" + std::to_string(i));
        }
    }
    std::set<HyperElement> images;
    for (std::size_t i = 0; i < subo.size(); ++i) {
        const auto c = c_map(subo[i]);
        if (!is_hyper_element(outer, c)) {
            note(rep.outputs_valid, "c of outer subobject #" + std::to_string(i) +
                                        " is not a hyper-element");
        }
        images.insert(c);
        const bool back = d_inverse(order, c) == subo[i];
        if (back) {
            ++rep.outer_ideal;
        } else {
            ++rep.dc_failures;
            rep.dc_identity_all = false;
        }
    }
    rep.c_images = images.size();
    // On the image of d, d∘c must be the identity.
    for (const auto &h : hyp) {
        const auto d = d_inverse(order, h);
        if (!(d_inverse(order, c_map(d)) == d)) {
            note(rep.dc_identity_on_ideal, "d(c(A)) != A for an ideal subobject");
        }
    }
    return rep;
}

struct LocalPowerReport {
    ContextId context = 0;
    std::size_t outer_subobjects = 0;
    std::size_t outer_ideal = 0;
    std::size_t clopen_subobjects = 0;
    std::size_t f_images = 0;
    bool fg_identity = true;
    bool gf_identity_on_ideal = true;
    bool gf_identity_all = true;
    bool naturality = true;
    std::string witness;

    [[nodiscard]] bool bijection_on_ideal() const {
        return outer_ideal == clopen_subobjects && f_images == clopen_subobjects && fg_identity &&
               gf_identity_on_ideal;
    }
};

/// f_V = k∘c and g_V = d∘j between Sub(O↓V) and Sub_cl(Σ↓V), plus the
/// naturality squares against restriction to every V' ≤ V.
template <Scalar S>
LocalPowerReport power_object_local(const ContextPoset<S> &poset, ContextId v,
                                    double eps = kDefaultEpsilon,
                                    std::size_t cap = kDefaultEnumerationCap) {
    const auto &order = poset.order();
    require(v < order.size(), ErrorKind::UnknownContext, "power_object_local");
    const Presheaf outer = outer_presheaf(poset, eps);
    const Presheaf sigma = spectral_presheaf(poset.order_ptr());
    const ContextMask dom = order.down(v);
    LocalPowerReport rep;
    rep.context = v;

    std::vector<Subobject> subo, sub;
    try {
        subo = enumerate_subobjects(outer, dom, EnumerationOptions{cap, true});
        sub = enumerate_subobjects(sigma, dom, EnumerationOptions{cap, false});
    } catch (const Error &e) {
        fail(ErrorKind::TooLarge, e.detail());
    }
    rep.outer_subobjects = subo.size();
    rep.clopen_subobjects = sub.size();

    auto f = [&](const OuterSubobject &a, ContextMask d) { return k_map(order, c_map(a), d).sub; };
    auto g = [&](const Subobject &s, ContextMask d) {
        return d_inverse(order, j_inverse(ClopenSubobject{s}), d);
    };
    auto note = [&](bool &flag, const std::string &what) {
        if (flag) {
            flag = false;
            if (rep.witness.empty()) {
                rep.witness = what;
            }
        }
    };

    std::set<Subobject> images;
    for (const auto &a : subo) {
        const auto fa = f(a, dom);
        images.insert(fa);
        const bool ideal = is_ideal_subobject(order, a);
        rep.outer_ideal += ideal ? 1 : 0;
        if (!(g(fa, dom) == a)) {
            rep.gf_identity_all = false;
            if (ideal) {
                note(rep.gf_identity_on_ideal, "g(f(A)) != A on an ideal subobject");
            }
        }
        for (ContextId w : order.members(dom)) {
            if (!(f(restrict_to(order, a, w), order.down(w)) == restrict_to(order, fa, w))) {
                note(rep.naturality, "f not natural at " + order.name(w));
            }
        }
    }
    rep.f_images = images.size();
    for (const auto &s : sub) {
        const auto gs = g(s, dom);
        if (!(f(gs, dom) == s)) {
            note(rep.fg_identity, "f(g(S)) != S");
        }
        for (ContextId w : order.members(dom)) {
            if (!(g(restrict_to(order, s, w), order.down(w)) == restrict_to(order, gs, w))) {
                note(rep.naturality, "g not natural at " + order.name(w));
            }
        }
    }
    return rep;
}

/// T_org^ψ: at V, the α ∈ O_V with α ⪰ |ψ⟩⟨ψ|.
template <Scalar S>
OuterSubobject truth_object_org(const PureState<S> &psi, const ContextPoset<S> &poset,
                                double eps = kDefaultEpsilon) {
    require(psi.dim() == poset.dim(), ErrorKind::DimensionMismatch, "state vs poset");
    OuterSubobject t{poset.order().all(), std::vector<std::uint64_t>(poset.size(), 0)};
    for (ContextId v = 0; v < poset.size(); ++v) {
        const auto &c = poset.context(v);
        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
            if (projector_leq(psi.projector(), c.lattice_element(bits), eps)) {
                t.parts[v] |= std::uint64_t{1} << bits;
            }
        }
    }
    return t;
}

/// Truth object over V(H): a clopen S of Σ↓V lies in T_V iff every
/// component S_{V'} passes a per-context test. The test is tr(ρ P) ≥ r for
/// T^{ρ,r} and |ψ⟩⟨ψ| ⪯ P for T^ψ. Components are never materialized.
class TruthObjectRho {
  public:
    [[nodiscard]] static TruthObjectRho mixed(const StateTable &table, const Rational &r,
                                              bool allow_zero = false) {
        require_threshold(r, allow_zero);
        TruthObjectRho t;
        t.order_ = table.order_ptr();
        t.r_ = r;
        for (ContextId v = 0; v < table.order().size(); ++v) {
            std::vector<bool> row;
            for (BlockMask bits = 0; bits < (BlockMask{1} << table.order().blocks(v)); ++bits) {
                row.push_back(table.trace(v, {bits}) >= r);
            }
            t.holds_.push_back(std::move(row));
        }
        return t;
    }

    template <Scalar S>
    [[nodiscard]] static TruthObjectRho pure(const PureState<S> &psi, const ContextPoset<S> &poset,
                                             double eps = kDefaultEpsilon) {
        require(psi.dim() == poset.dim(), ErrorKind::DimensionMismatch, "state vs poset");
        TruthObjectRho t;
        t.order_ = poset.order_ptr();
        t.r_ = 1;
        for (ContextId v = 0; v < poset.size(); ++v) {
            const auto &c = poset.context(v);
            std::vector<bool> row;
            for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                row.push_back(projector_leq(psi.projector(), c.lattice_element(bits), eps));
            }
            t.holds_.push_back(std::move(row));
        }
        return t;
    }

    /// `local` must cover ↓V.
    [[nodiscard]] bool member(const ClopenSubobject &local, ContextId v) const {
        const ContextMask dom = order_->down(v);
        require((local.sub.domain & dom) == dom, ErrorKind::StageMismatch,
                "subobject does not cover the stage");
        for (ContextId w : order_->members(dom)) {
            if (!holds_[w].at(local.at(w).bits)) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const Rational &r() const noexcept { return r_; }
    [[nodiscard]] const PosetOrder &order() const { return *order_; }

  private:
    TruthObjectRho() = default;
    std::shared_ptr<const PosetOrder> order_;
    Rational r_;
    std::vector<std::vector<bool>> holds_;
};

template <Scalar S>
TruthObjectRho truth_object_pure_new(const PureState<S> &psi, const ContextPoset<S> &poset,
                                     double eps = kDefaultEpsilon) {
    return TruthObjectRho::pure(psi, poset, eps);
}

/// ⟦S ∈ T⟧: at V, the V' ≤ V with S↓V' ∈ T_{V'}.
inline GlobalSieveSection membership_valuation(const ClopenSubobject &s, const TruthObjectRho &t) {
    const auto &order = t.order();
    require(s.sub.parts.size() == order.size() && s.sub.domain == order.all(),
            ErrorKind::PosetMismatch, "membership_valuation");
    ContextMask good = 0;
    for (ContextId v = 0; v < order.size(); ++v) {
        if (t.member(ClopenSubobject{restrict_to(order, s.sub, v)}, v)) {
            good |= bit(v);
        }
    }
    GlobalSieveSection out;
    for (ContextId v = 0; v < order.size(); ++v) {
        out.at.push_back(order.down(v) & good);
    }
    return out;
}

struct SquareReport {
    bool ok = true;
    std::size_t checks = 0;
    std::string witness;
};

/// Σ(i_{V'V})(α_V(P)) = α_{V'}(δ(P)_{V'}) for all V' ≤ V and P in P(V),
/// with α and δ evaluated on matrices.
template <Scalar S>
SquareReport check_square_cp1(const ContextPoset<S> &poset, double eps = kDefaultEpsilon) {
    SquareReport rep;
    const auto &order = poset.order();
    const Presheaf sigma = spectral_presheaf(poset.order_ptr());
    for (ContextId v = 0; v < poset.size(); ++v) {
        const auto &c = poset.context(v);
        for (ContextId w : order.members(order.down(v))) {
            for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                ++rep.checks;
                const auto p = c.lattice_element(bits);
                const auto lhs = sigma.restrict_set(v, w, alpha(c, p, eps).bits);
                const auto rhs = alpha(poset.context(w), daseinise(p, poset.context(w), eps), eps).bits;
                if (lhs != rhs && rep.ok) {
                    rep.ok = false;
                    rep.witness = order.name(w) + " <= " + order.name(v) + ", P mask " +
                                  std::to_string(bits);
                }
            }
        }
    }
    return rep;
}

/// α_{V'}^{-1}(Σ(i_{V'V})(S)) = δ(α_V^{-1}(S))_{V'} for all V' ≤ V and
/// clopen S ⊆ Σ_V, compared as projections.
template <Scalar S>
SquareReport check_square_cp2(const ContextPoset<S> &poset, double eps = kDefaultEpsilon) {
    SquareReport rep;
    const auto &order = poset.order();
    const Presheaf sigma = spectral_presheaf(poset.order_ptr());
    for (ContextId v = 0; v < poset.size(); ++v) {
        const auto &c = poset.context(v);
        for (ContextId w : order.members(order.down(v))) {
            const auto &cw = poset.context(w);
            for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                ++rep.checks;
                const CharacterSet s{bits};
                const auto restricted =
                    CharacterSet{static_cast<BlockMask>(sigma.restrict_set(v, w, s.bits))};
                const auto lhs = alpha_inv(cw, restricted);
                const auto rhs = daseinise(alpha_inv(c, s), cw, eps);
                if (!lhs.near(rhs, eps) && rep.ok) {
                    rep.ok = false;
                    rep.witness = order.name(w) + " <= " + order.name(v) + ", S mask " +
                                  std::to_string(bits);
                }
            }
        }
    }
    return rep;
}

} // namespace toposprob
