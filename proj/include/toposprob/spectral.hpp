#pragma once

// Spectral presheaf Σ, outer presheaf O, the isomorphisms α_V between
// projection lattices and clopen subsets of Gel'fand spectra, and outer
// daseinisation.

#include <optional>
#include <string>
#include <vector>

#include "toposprob/contextlab.hpp"
#include "toposprob/linalg.hpp"
#include "toposprob/sheafcore.hpp"

namespace toposprob {

/// Characters of a finite-dimensional commutative algebra are in bijection
/// with its frame blocks: character b sends a lattice element P to 1 iff
/// block b ≤ P. A set of characters is therefore a block mask.
struct CharacterSet {
    BlockMask bits = 0;
    friend bool operator==(const CharacterSet &, const CharacterSet &) = default;
};

/// Element of a context's projection lattice, as the set of blocks it sums.
struct LatticeElement {
    BlockMask bits = 0;
    friend bool operator==(const LatticeElement &, const LatticeElement &) = default;
};

/// Clopen subobject of Σ: one character set per context.
struct ClopenSubobject {
    Subobject sub;

    [[nodiscard]] CharacterSet at(ContextId v) const {
        return {static_cast<BlockMask>(sub.parts.at(v))};
    }
    friend bool operator==(const ClopenSubobject &, const ClopenSubobject &) = default;
};

/// Σ: the character of block b in V restricts to the character of the block
/// of V' that contains b.
inline Presheaf spectral_presheaf(std::shared_ptr<const PosetOrder> order) {
    std::vector<std::size_t> sizes;
    for (ContextId v = 0; v < order->size(); ++v) {
        sizes.push_back(order->blocks(v));
    }
    Presheaf sigma(order, sizes);
    for (ContextId upper = 0; upper < order->size(); ++upper) {
        for (std::size_t b = 0; b < order->blocks(upper); ++b) {
            sigma.set_label(upper, b, "λ" + std::to_string(b + 1) + "@" + order->name(upper));
        }
        for (ContextId lower : order->members(order->down(upper))) {
            std::vector<std::size_t> map;
            for (std::size_t b = 0; b < order->blocks(upper); ++b) {
                map.push_back(order->block_of(upper, lower, b));
            }
            sigma.set_restriction(upper, lower, std::move(map));
        }
    }
    return sigma;
}

/// Smallest lattice element of V above P: the blocks not orthogonal to P.
template <Scalar S>
LatticeElement daseinise_bits(const Projection<S> &p, const Context<S> &v,
                              double eps = kDefaultEpsilon) {
    require(p.dim() == v.dim(), ErrorKind::DimensionMismatch, "daseinise");
    BlockMask bits = 0;
    for (std::size_t b = 0; b < v.blocks(); ++b) {
        if (!(v.block(b).matrix() * p.matrix()).near_zero(eps)) {
            bits |= BlockMask{1} << b;
        }
    }
    return {bits};
}

/// δ(P)_V, the approximation of P from above within V.
template <Scalar S>
Projection<S> daseinise(const Projection<S> &p, const Context<S> &v, double eps = kDefaultEpsilon) {
    return v.lattice_element(daseinise_bits(p, v, eps).bits);
}

/// O: O(V) is the projection lattice of V (indexed by block mask) and the
/// restriction to V' is daseinisation into V', computed on the matrices.
template <Scalar S>
Presheaf outer_presheaf(const ContextPoset<S> &poset, double eps = kDefaultEpsilon) {
    const auto &order = poset.order();
    std::vector<std::size_t> sizes;
    for (ContextId v = 0; v < order.size(); ++v) {
        sizes.push_back(std::size_t{1} << order.blocks(v));
    }
    Presheaf outer(poset.order_ptr(), sizes);
    for (ContextId upper = 0; upper < order.size(); ++upper) {
        const auto &u = poset.context(upper);
        for (ContextId lower : order.members(order.down(upper))) {
            std::vector<std::size_t> map;
            for (BlockMask bits = 0; bits <= u.full_mask(); ++bits) {
                map.push_back(daseinise_bits(u.lattice_element(bits), poset.context(lower), eps).bits);
            }
            outer.set_restriction(upper, lower, std::move(map));
        }
    }
    return outer;
}

/// Block mask of P when P belongs to the lattice of V.
template <Scalar S>
std::optional<LatticeElement> lattice_index(const Context<S> &v, const Projection<S> &p,
                                            double eps = kDefaultEpsilon) {
    LatticeElement d = daseinise_bits(p, v, eps);
    if (v.lattice_element(d.bits).near(p, eps)) {
        return d;
    }
    return std::nullopt;
}

/// α_V(P) = {λ : λ(P) = 1}.
template <Scalar S>
CharacterSet alpha(const Context<S> &v, const Projection<S> &p, double eps = kDefaultEpsilon) {
    auto idx = lattice_index(v, p, eps);
    require(idx.has_value(), ErrorKind::NotInContext,
            "projection is not a sum of frame blocks of " + v.name());
    CharacterSet out;
    for (std::size_t b = 0; b < v.blocks(); ++b) {
        // λ_b(P) = 1 iff block b lies under P.
        if (projector_leq(v.block(b), p, eps)) {
            out.bits |= BlockMask{1} << b;
        }
    }
    return out;
}

template <Scalar S> Projection<S> alpha_inv(const Context<S> &v, CharacterSet s) {
    return v.lattice_element(s.bits);
}

/// Index-level α_V and its inverse; on block masks both are the identity.
inline CharacterSet alpha(LatticeElement p) { return {p.bits}; }
inline LatticeElement alpha_inv(CharacterSet s) { return {s.bits}; }

/// δ(P) as a clopen subobject: α_V(δ(P)_V) at every V.
template <Scalar S>
ClopenSubobject daseinise_global(const Projection<S> &p, const ContextPoset<S> &poset,
                                 double eps = kDefaultEpsilon) {
    ClopenSubobject out{Subobject{poset.order().all(), std::vector<std::uint64_t>(poset.size(), 0)}};
    for (ContextId v = 0; v < poset.size(); ++v) {
        out.sub.parts[v] = alpha(daseinise_bits(p, poset.context(v), eps)).bits;
    }
    return out;
}

/// Interval with rational (or infinite) ends.
struct Interval {
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    bool lo_closed = true;
    bool hi_closed = true;
};

/// Finite union of intervals.
struct BorelSet {
    std::vector<Interval> pieces;

    void validate() const {
        for (const auto &i : pieces) {
            if (i.lo && i.hi) {
                require(*i.lo <= *i.hi, ErrorKind::UnsupportedSetShape, "interval ends reversed");
                require(*i.lo != *i.hi || (i.lo_closed && i.hi_closed),
                        ErrorKind::UnsupportedSetShape, "degenerate open interval");
            }
        }
    }

    [[nodiscard]] bool contains(const Rational &x) const {
        for (const auto &i : pieces) {
            bool above = !i.lo || (i.lo_closed ? x >= *i.lo : x > *i.lo);
            bool below = !i.hi || (i.hi_closed ? x <= *i.hi : x < *i.hi);
            if (above && below) {
                return true;
            }
        }
        return false;
    }

    /// Membership of a floating eigenvalue; closed ends admit values within
    /// `tol`, open ends exclude them.
    [[nodiscard]] bool contains(double x, double tol) const {
        for (const auto &i : pieces) {
            bool above = !i.lo || (i.lo_closed ? x >= i.lo->get_d() - tol : x > i.lo->get_d() + tol);
            bool below = !i.hi || (i.hi_closed ? x <= i.hi->get_d() + tol : x < i.hi->get_d() - tol);
            if (above && below) {
                return true;
            }
        }
        return false;
    }
};

/// Ê[A ∈ Δ]: sum of the eigenprojectors of A whose eigenvalue lies in Δ.
/// Exact mode accepts diagonal A only.
template <Scalar S>
Projection<S> spectral_projector(const Matrix<S> &a, const BorelSet &delta,
                                 double eps = kDefaultEpsilon, double cluster = kClusterThreshold) {
    delta.validate();
    const std::size_t n = a.dim();
    if constexpr (is_exact_v<S>) {
        require(a.is_hermitian(eps), ErrorKind::NotHermitian, "observable");
        require(a.is_diagonal(eps), ErrorKind::ModeMismatch,
                "exact spectral calculus needs a diagonal observable");
        Matrix<S> m(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (delta.contains(a(i, i).re)) {
                m(i, i) = ComplexQ(1);
            }
        }
        return Projection<S>::unchecked(std::move(m));
    } else {
        Matrix<S> m(n);
        for (const auto &e : eigendecompose_hermitian(a, eps, cluster)) {
            if (delta.contains(e.value, cluster)) {
                m = m + e.projector.matrix();
            }
        }
        return Projection<S>::unchecked(std::move(m));
    }
}

} // namespace toposprob
