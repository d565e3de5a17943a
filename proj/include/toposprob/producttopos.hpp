#pragma once

// Sheaves over V(H)_A × (0,1)_L. A basic open ↓V × (0,r) is written ⟨V,r⟩.
// Sieves on ⟨V,r⟩ are stored as one inclusive threshold per V' ≤ V: the
// sieve contains ⟨V',r'⟩ iff r' ≤ τ(V'); τ(V') = 0 means no nonempty open
// over V' is included.

#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "toposprob/measures.hpp"
#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"
#include "toposprob/states.hpp"

namespace toposprob {

struct ProductStage {
    ContextId context = 0;
    Rational r;

    friend bool operator==(const ProductStage &, const ProductStage &) = default;
};

/// ⟨V',r'⟩ ⪯ ⟨V,r⟩ iff V' ≤ V and r' ≤ r.
inline bool stage_leq(const PosetOrder &order, const ProductStage &a, const ProductStage &b) {
    return order.leq(a.context, b.context) && a.r <= b.r;
}

struct ProductSieve {
    ProductStage stage;
    ContextMask domain = 0;
    std::vector<Rational> thresholds;

    [[nodiscard]] const Rational &threshold(ContextId v) const { return thresholds.at(v); }
    [[nodiscard]] bool empty_at(ContextId v) const { return thresholds.at(v) == 0; }
    [[nodiscard]] bool contains(const ProductStage &s) const {
        return (domain & bit(s.context)) != 0 && s.r <= thresholds.at(s.context);
    }

    friend bool operator==(const ProductSieve &a, const ProductSieve &b) {
        if (!(a.stage == b.stage) || a.domain != b.domain) {
            return false;
        }
        for (std::size_t v = 0; v < a.thresholds.size(); ++v) {
            if ((a.domain & bit(v)) && a.thresholds[v] != b.thresholds[v]) {
                return false;
            }
        }
        return true;
    }
};

/// Domain is ↓V, thresholds lie in [0, r] and are antitone in the context.
inline bool is_product_sieve(const PosetOrder &order, const ProductSieve &s) {
    if (s.domain != order.down(s.stage.context) || s.thresholds.size() != order.size()) {
        return false;
    }
    for (ContextId v : order.members(s.domain)) {
        if (s.thresholds[v] < 0 || s.thresholds[v] > s.stage.r) {
            return false;
        }
        for (ContextId w : order.members(order.down(v))) {
            if (s.thresholds[w] < s.thresholds[v]) {
                return false;
            }
        }
    }
    return true;
}

/// Pull back along ⟨V',r'⟩ ⪯ ⟨V,r⟩: domain shrinks to ↓V', thresholds cap at r'.
inline ProductSieve restrict_sieve(const PosetOrder &order, const ProductSieve &s,
                                   const ProductStage &to) {
    require(stage_leq(order, to, s.stage), ErrorKind::StageMismatch, "restriction needs ⪯");
    ProductSieve out{to, order.down(to.context), std::vector<Rational>(order.size(), Rational(0))};
    for (ContextId v : order.members(out.domain)) {
        out.thresholds[v] = min(s.thresholds[v], to.r);
    }
    return out;
}

inline ProductSieve product_join(const ProductSieve &a, const ProductSieve &b) {
    require(a.stage == b.stage, ErrorKind::StageMismatch, "product_join");
    ProductSieve out = a;
    for (std::size_t v = 0; v < out.thresholds.size(); ++v) {
        out.thresholds[v] = max(a.thresholds[v], b.thresholds[v]);
    }
    return out;
}

/// A global element of Ω over the product, evaluated on demand.
class ProductTruthAssignment {
  public:
    ProductTruthAssignment(std::shared_ptr<const PosetOrder> order,
                           std::function<ProductSieve(const ProductStage &)> eval)
        : order_(std::move(order)), eval_(std::move(eval)) {}

    [[nodiscard]] ProductSieve at(const ProductStage &stage) const {
        require(stage.context < order_->size(), ErrorKind::UnknownContext, "stage context");
        require(stage.r >= 0 && stage.r <= 1, ErrorKind::OutOfRange, "stage threshold");
        return eval_(stage);
    }
    [[nodiscard]] const PosetOrder &order() const { return *order_; }

  private:
    std::shared_ptr<const PosetOrder> order_;
    std::function<ProductSieve(const ProductStage &)> eval_;
};

/// ℓ(γ)(⟨V,r⟩) = {⟨V',r'⟩ ⪯ ⟨V,r⟩ : γ(V') ≥ r'}, i.e. τ(V') = min(γ(V'), r).
inline ProductTruthAssignment ell_quantum(std::shared_ptr<const PosetOrder> order,
                                          GammaSection gamma) {
    require(gamma.values.size() == order->size(), ErrorKind::PosetMismatch, "ell_quantum");
    auto o = order;
    return ProductTruthAssignment(
        std::move(order), [o, gamma = std::move(gamma)](const ProductStage &st) {
            ProductSieve s{st, o->down(st.context),
                           std::vector<Rational>(o->size(), Rational(0))};
            for (ContextId v : o->members(s.domain)) {
                s.thresholds[v] = min(gamma.values[v], st.r);
            }
            return s;
        });
}

inline ProductTruthAssignment product_join(const ProductTruthAssignment &a,
                                           const ProductTruthAssignment &b,
                                           std::shared_ptr<const PosetOrder> order) {
    return ProductTruthAssignment(std::move(order), [a, b](const ProductStage &st) {
        return product_join(a.at(st), b.at(st));
    });
}

/// p₁*S: the component at ⟨V,r⟩ is S restricted to ↓V, whatever r is.
class PulledBackSubobject {
  public:
    PulledBackSubobject(std::shared_ptr<const PosetOrder> order, ClopenSubobject base)
        : order_(std::move(order)), base_(std::move(base)) {}

    [[nodiscard]] ClopenSubobject component(const ProductStage &st) const {
        return {restrict_to(*order_, base_.sub, st.context)};
    }
    [[nodiscard]] const ClopenSubobject &base() const noexcept { return base_; }

  private:
    std::shared_ptr<const PosetOrder> order_;
    ClopenSubobject base_;
};

inline PulledBackSubobject pullback_p1(std::shared_ptr<const PosetOrder> order,
                                       const ClopenSubobject &s) {
    return {std::move(order), s};
}

/// T̆^ρ: at ⟨V,r⟩ the clopen subobjects S of Σ↓V with tr(ρ P_{S_{V'}}) ≥ r for
/// every V' ≤ V.
class TruthObjectQuantum {
  public:
    explicit TruthObjectQuantum(StateTable table, bool allow_r_zero = false)
        : table_(std::move(table)), allow_r_zero_(allow_r_zero) {}

    [[nodiscard]] bool member(const ClopenSubobject &local, const ProductStage &st) const {
        require_threshold(st.r, allow_r_zero_);
        const auto &order = table_.order();
        const ContextMask dom = order.down(st.context);
        require((local.sub.domain & dom) == dom, ErrorKind::StageMismatch,
                "subobject does not cover the stage");
        for (ContextId v : order.members(dom)) {
            if (table_.trace(v, alpha_inv(local.at(v))) < st.r) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const StateTable &table() const noexcept { return table_; }

  private:
    StateTable table_;
    bool allow_r_zero_;
};

inline TruthObjectQuantum truth_object_quantum(StateTable table, bool allow_r_zero = false) {
    return TruthObjectQuantum(std::move(table), allow_r_zero);
}

/// {0, 1} and every trace the state takes on the poset's lattices.
inline std::vector<Rational> quantum_breakpoints(const StateTable &table) {
    std::vector<Rational> grid = table.values();
    grid.push_back(Rational(0));
    grid.push_back(Rational(1));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Anything answering T̆-style membership queries.
template <class T>
concept ProductTruthObject = requires(const T &t, const ClopenSubobject &s, const ProductStage &st) {
    { t.member(s, st) } -> std::convertible_to<bool>;
};

/// ξ^ρ(p₁*S) = ⟦p₁*S ∈ T̆^ρ⟧, from membership queries only. Membership at
/// fixed V' is a threshold predicate in r' whose threshold lies on `grid`,
/// so τ(V') is r when ⟨V',r⟩ admits S and otherwise the largest admitting
/// grid point below r.
template <ProductTruthObject TruthObject>
ProductTruthAssignment xi_rho(std::shared_ptr<const PosetOrder> order, const TruthObject &t,
                              const ClopenSubobject &s, std::vector<Rational> grid) {
    auto pb = pullback_p1(order, s);
    auto o = order;
    return ProductTruthAssignment(
        std::move(order), [o, t, pb, grid = std::move(grid)](const ProductStage &st) {
            ProductSieve out{st, o->down(st.context),
                             std::vector<Rational>(o->size(), Rational(0))};
            for (ContextId v : o->members(out.domain)) {
                if (st.r == 0) {
                    continue;
                }
                const ProductStage here{v, st.r};
                if (t.member(pb.component(here), here)) {
                    out.thresholds[v] = st.r;
                    continue;
                }
                Rational best = 0;
                for (const auto &b : grid) {
                    if (b > 0 && b < st.r) {
                        const ProductStage probe{v, b};
                        if (t.member(pb.component(probe), probe)) {
                            best = max(best, b);
                        }
                    }
                }
                out.thresholds[v] = best;
            }
            return out;
        });
}

inline ProductTruthAssignment xi_rho(const TruthObjectQuantum &t, const ClopenSubobject &s) {
    return xi_rho(t.table().order_ptr(), t, s, quantum_breakpoints(t.table()));
}

struct QuantumDiagramReport {
    bool ok = true;
    std::size_t subobjects = 0;
    std::size_t checks = 0;
    std::string witness;
};

/// ℓ∘μ^ρ = ξ^ρ∘p₁* on every clopen subobject of Σ at every stage ⟨V,r⟩ with r
/// a breakpoint, and join preservation of ξ^ρ∘p₁* on increasing chains.
template <ProductTruthObject TruthObject>
QuantumDiagramReport check_quantum_diagram(const StateTable &table, const TruthObject &t,
                                           std::uint64_t seed = 0,
                                           std::size_t cap = kDefaultEnumerationCap) {
    QuantumDiagramReport report;
    const auto &order_ptr = table.order_ptr();
    const auto &order = *order_ptr;
    const Presheaf sigma = spectral_presheaf(order_ptr);
    std::vector<Subobject> all;
    try {
        all = enumerate_subobjects(sigma, EnumerationOptions{cap, false});
    } catch (const Error &e) {
        fail(ErrorKind::TooLarge, e.detail());
    }
    report.subobjects = all.size();
    const auto grid = quantum_breakpoints(table);

    std::vector<ProductTruthAssignment> xis;
    for (const auto &sub : all) {
        const ClopenSubobject s{sub};
        const auto lhs = ell_quantum(order_ptr, mu_rho(table, s));
        const auto rhs = xi_rho(order_ptr, t, s, grid);
        for (ContextId v = 0; v < order.size(); ++v) {
            for (const auto &r : grid) {
                if (r == 0) {
                    continue;
                }
                ++report.checks;
                const ProductStage st{v, r};
                if (!(lhs.at(st) == rhs.at(st)) && report.ok) {
                    report.ok = false;
                    report.witness = "subobject #" + std::to_string(xis.size()) + " at <" +
                                     order.name(v) + ", " + to_string(r) + ">";
                }
            }
        }
        xis.push_back(rhs);
    }

    auto join_ok = [&](const std::vector<std::size_t> &chain) {
        Subobject uni = all[chain.front()];
        for (std::size_t i : chain) {
            for (std::size_t v = 0; v < uni.parts.size(); ++v) {
                uni.parts[v] |= all[i].parts[v];
            }
        }
        const auto lhs = xi_rho(order_ptr, t, ClopenSubobject{uni}, grid);
        for (ContextId v = 0; v < order.size(); ++v) {
            for (const auto &r : grid) {
                if (r == 0) {
                    continue;
                }
                ++report.checks;
                const ProductStage st{v, r};
                ProductSieve acc = xis[chain.front()].at(st);
                for (std::size_t i : chain) {
                    acc = product_join(acc, xis[i].at(st));
                }
                if (!(lhs.at(st) == acc)) {
                    return false;
                }
            }
        }
        return true;
    };

    // Two-element chains exhaustively when affordable, then random longer ones.
    if (all.size() <= 400) {
        for (std::size_t a = 0; a < all.size(); ++a) {
            for (std::size_t b = 0; b < all.size(); ++b) {
                if (a != b && subobject_leq(all[a], all[b]) && !join_ok({a, b}) && report.ok) {
                    report.ok = false;
                    report.witness = "join of chain (" + std::to_string(a) + ", " +
                                     std::to_string(b) + ")";
                }
            }
        }
    }
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 200 && !all.empty(); ++k) {
        std::vector<std::size_t> chain{static_cast<std::size_t>(rng() % all.size())};
        for (int step = 0; step < 4; ++step) {
            std::vector<std::size_t> above;
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (i != chain.back() && subobject_leq(all[chain.back()], all[i])) {
                    above.push_back(i);
                }
            }
            if (above.empty()) {
                break;
            }
            chain.push_back(above[rng() % above.size()]);
        }
        if (!join_ok(chain) && report.ok) {
            report.ok = false;
            report.witness = "join of a random chain of length " + std::to_string(chain.size());
        }
    }
    return report;
}

inline QuantumDiagramReport check_quantum_diagram(const StateTable &table, std::uint64_t seed = 0,
                                                  std::size_t cap = kDefaultEnumerationCap) {
    return check_quantum_diagram(table, truth_object_quantum(table), seed, cap);
}

struct StateSeparation {
    ContextId proposition_context;
    LatticeElement proposition;
    ProductStage stage;
    Rational first;
    Rational second;
};

/// Searches every lattice element P of every context for a stage where
/// ξ^ρ1(δ(P)) and ξ^ρ2(δ(P)) differ. The stage is ⟨V0, r⟩ with V0 the first
/// context where the measures differ and r the larger value there.
template <Scalar S>
std::optional<StateSeparation> separate_states(const ContextPoset<S> &poset,
                                               const DensityMatrix<S> &rho1,
                                               const DensityMatrix<S> &rho2,
                                               double eps = kDefaultEpsilon) {
    const StateTable t1(poset, rho1, eps);
    const StateTable t2(poset, rho2, eps);
    const auto to1 = truth_object_quantum(t1);
    const auto to2 = truth_object_quantum(t2);
    for (ContextId w = 0; w < poset.size(); ++w) {
        const auto &c = poset.context(w);
        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
            const auto s = daseinise_global(c.lattice_element(bits), poset, eps);
            const auto witness = check_separation(poset.order(), mu_rho(t1, s), mu_rho(t2, s));
            if (!witness) {
                continue;
            }
            const ProductStage st{witness->stage, witness->r};
            const auto a = xi_rho(to1, s).at(st);
            const auto b = xi_rho(to2, s).at(st);
            if (!(a == b)) {
                return StateSeparation{w, {bits}, st, a.threshold(st.context),
                                       b.threshold(st.context)};
            }
        }
    }
    return std::nullopt;
}

/// The same search restricted to r = 1, i.e. through the naive valuation.
template <Scalar S>
std::optional<StateSeparation> separate_states_naive(const ContextPoset<S> &poset,
                                                     const DensityMatrix<S> &rho1,
                                                     const DensityMatrix<S> &rho2,
                                                     double eps = kDefaultEpsilon) {
    for (ContextId w = 0; w < poset.size(); ++w) {
        const auto &c = poset.context(w);
        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
            const auto p = c.lattice_element(bits);
            const auto a = truth_value_mixed_naive(poset, p, rho1, eps);
            const auto b = truth_value_mixed_naive(poset, p, rho2, eps);
            for (ContextId v = 0; v < poset.size(); ++v) {
                if (a.at[v] != b.at[v]) {
                    return StateSeparation{w, {bits}, {v, Rational(1)}, Rational(0), Rational(0)};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace toposprob
