#pragma once

#include <string>
#include <utility>
#include <vector>

#include "toposprob/contextlab.hpp"
#include "toposprob/linalg.hpp"
#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"

namespace toposprob {

/// A vector state, kept as the ray it spans.
template <Scalar S> class PureState {
  public:
    static PureState from_vector(Vec<S> v, double eps = kDefaultEpsilon) {
        auto p = projector_from_vectors<S>({v}, eps);
        if constexpr (!is_exact_v<S>) {
            double n = std::sqrt(inner<S>(v, v).real());
            for (auto &x : v) {
                x /= n;
            }
        }
        return PureState(std::move(v), std::move(p));
    }

    [[nodiscard]] const Vec<S> &vector() const noexcept { return v_; }
    /// |ψ⟩⟨ψ| / ⟨ψ|ψ⟩
    [[nodiscard]] const Projection<S> &projector() const noexcept { return p_; }
    [[nodiscard]] std::size_t dim() const noexcept { return v_.size(); }

    [[nodiscard]] DensityMatrix<S> density(double eps = kDefaultEpsilon) const {
        return DensityMatrix<S>::from_matrix(p_.matrix(), eps);
    }

  private:
    PureState(Vec<S> v, Projection<S> p) : v_(std::move(v)), p_(std::move(p)) {}
    Vec<S> v_;
    Projection<S> p_;
};

template <Scalar S> struct MixtureSpec {
    std::vector<std::pair<PureState<S>, Rational>> components;
};

/// ρ = Σ w_i |ψ_i⟩⟨ψ_i|.
template <Scalar S>
DensityMatrix<S> density_from_mixture(const MixtureSpec<S> &m, double eps = kDefaultEpsilon) {
    require(!m.components.empty(), ErrorKind::WeightsNotNormalized, "empty mixture");
    Rational total = 0;
    const std::size_t dim = m.components.front().first.dim();
    Matrix<S> rho(dim);
    for (const auto &[psi, w] : m.components) {
        require(w > 0 && w <= 1, ErrorKind::WeightsNotNormalized, "weight outside (0,1]");
        require(psi.dim() == dim, ErrorKind::DimensionMismatch, "mixture components");
        total += w;
        rho = rho + scalar_traits<S>::from_rational(w) * psi.projector().matrix();
    }
    require(total == 1, ErrorKind::WeightsNotNormalized, "weights sum to " + to_string(total));
    return DensityMatrix<S>::from_matrix(std::move(rho), eps);
}

/// tr(ρ P) for every element P of every context lattice. Float traces are
/// rationalized once here so later threshold comparisons are exact and
/// reproducible.
class StateTable {
  public:
    StateTable() = default;

    template <Scalar S>
    StateTable(const ContextPoset<S> &poset, const DensityMatrix<S> &rho,
               double eps = kDefaultEpsilon)
        : order_(poset.order_ptr()), exact_(is_exact_v<S>) {
        require(rho.dim() == poset.dim(), ErrorKind::DimensionMismatch, "state vs poset");
        for (ContextId v = 0; v < poset.size(); ++v) {
            const auto &c = poset.context(v);
            std::vector<Rational> row;
            for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                row.push_back(trace_pairing(rho, c.lattice_element(bits), eps));
            }
            traces_.push_back(std::move(row));
        }
    }

    [[nodiscard]] const Rational &trace(ContextId v, LatticeElement p) const {
        return traces_.at(v).at(p.bits);
    }
    [[nodiscard]] const PosetOrder &order() const { return *order_; }
    [[nodiscard]] const std::shared_ptr<const PosetOrder> &order_ptr() const { return order_; }
    [[nodiscard]] bool exact() const noexcept { return exact_; }

    /// Every distinct trace value, sorted.
    [[nodiscard]] std::vector<Rational> values() const {
        std::vector<Rational> out;
        for (const auto &row : traces_) {
            out.insert(out.end(), row.begin(), row.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Bound on |stored - true| for each entry.
    [[nodiscard]] Rational error_bound() const {
        return exact_ ? Rational(0) : rationalize_error_bound();
    }

  private:
    std::shared_ptr<const PosetOrder> order_;
    std::vector<std::vector<Rational>> traces_;
    bool exact_ = true;
};

inline void require_threshold(const Rational &r, bool allow_zero = false) {
    require(r <= 1 && (r > 0 || (allow_zero && r == 0)), ErrorKind::InvalidThreshold,
            "threshold " + to_string(r) + " outside (0,1]");
}

/// ω^ψ = δ(|ψ⟩⟨ψ|).
template <Scalar S>
ClopenSubobject pseudo_state(const PureState<S> &psi, const ContextPoset<S> &poset,
                             double eps = kDefaultEpsilon) {
    return daseinise_global(psi.projector(), poset, eps);
}

/// ν(P; ψ): at V, the V' ≤ V with δ(P)_{V'} ⪰ |ψ⟩⟨ψ|.
template <Scalar S>
GlobalSieveSection truth_value_pure(const ContextPoset<S> &poset, const Projection<S> &p,
                                    const PureState<S> &psi, double eps = kDefaultEpsilon) {
    const auto &order = poset.order();
    ContextMask good = 0;
    for (ContextId v = 0; v < poset.size(); ++v) {
        if (projector_leq(psi.projector(), daseinise(p, poset.context(v), eps), eps)) {
            good |= bit(v);
        }
    }
    GlobalSieveSection out;
    for (ContextId v = 0; v < poset.size(); ++v) {
        out.at.push_back(order.down(v) & good);
    }
    return out;
}

/// ν(P; ρ)^r: at V, the V' ≤ V with tr(ρ δ(P)_{V'}) ≥ r.
template <Scalar S>
GlobalSieveSection truth_value_r(const ContextPoset<S> &poset, const Projection<S> &p,
                                 const DensityMatrix<S> &rho, const Rational &r,
                                 double eps = kDefaultEpsilon, bool allow_zero = false) {
    require_threshold(r, allow_zero);
    const auto &order = poset.order();
    ContextMask good = 0;
    for (ContextId v = 0; v < poset.size(); ++v) {
        if (trace_pairing(rho, daseinise(p, poset.context(v), eps), eps) >= r) {
            good |= bit(v);
        }
    }
    GlobalSieveSection out;
    for (ContextId v = 0; v < poset.size(); ++v) {
        out.at.push_back(order.down(v) & good);
    }
    return out;
}

/// The r = 1 valuation, which only sees the support of ρ.
template <Scalar S>
GlobalSieveSection truth_value_mixed_naive(const ContextPoset<S> &poset, const Projection<S> &p,
                                           const DensityMatrix<S> &rho,
                                           double eps = kDefaultEpsilon) {
    return truth_value_r(poset, p, rho, Rational(1), eps);
}

} // namespace toposprob
