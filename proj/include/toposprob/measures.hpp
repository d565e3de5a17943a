#pragma once

// Global elements of the presheaf of nowhere-increasing [0,1]-valued
// functions, the state measures μ^ρ, and the threshold maps j_r.

#include <optional>
#include <string>
#include <vector>

#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"
#include "toposprob/states.hpp"

namespace toposprob {

/// Rational value per context, nowhere increasing: V' ≤ V ⇒ γ(V') ≥ γ(V).
struct GammaSection {
    std::vector<Rational> values;

    [[nodiscard]] const Rational &at(ContextId v) const { return values.at(v); }

    friend bool operator==(const GammaSection &, const GammaSection &) = default;
};

inline GammaSection constant_section(const PosetOrder &order, const Rational &value) {
    return GammaSection{std::vector<Rational>(order.size(), value)};
}

inline bool is_gamma_section(const PosetOrder &order, const GammaSection &g) {
    if (g.values.size() != order.size()) {
        return false;
    }
    for (ContextId v = 0; v < order.size(); ++v) {
        if (g.values[v] < 0 || g.values[v] > 1) {
            return false;
        }
        for (ContextId w : order.members(order.down(v))) {
            if (g.values[w] < g.values[v]) {
                return false;
            }
        }
    }
    return true;
}

/// μ^ρ(S)(V) = tr(ρ α_V^{-1}(S_V)).
inline GammaSection mu_rho(const StateTable &table, const ClopenSubobject &s) {
    const auto &order = table.order();
    require(s.sub.parts.size() == order.size(), ErrorKind::PosetMismatch, "mu_rho");
    GammaSection g;
    for (ContextId v = 0; v < order.size(); ++v) {
        g.values.push_back(table.trace(v, alpha_inv(s.at(v))));
    }
    return g;
}

inline GammaSection gamma_join(const std::vector<GammaSection> &family) {
    require(!family.empty(), ErrorKind::InvalidArgument, "empty family");
    GammaSection out = family.front();
    for (const auto &g : family) {
        require(g.values.size() == out.values.size(), ErrorKind::PosetMismatch, "gamma_join");
        for (std::size_t v = 0; v < g.values.size(); ++v) {
            out.values[v] = max(out.values[v], g.values[v]);
        }
    }
    return out;
}

inline bool gamma_leq(const GammaSection &a, const GammaSection &b) {
    require(a.values.size() == b.values.size(), ErrorKind::PosetMismatch, "gamma_leq");
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        if (a.values[v] > b.values[v]) {
            return false;
        }
    }
    return true;
}

/// j_r(γ)(V) = {V' ≤ V : γ(V') ≥ r}; j_1 is the map j.
inline GlobalSieveSection j_r_map(const PosetOrder &order, const GammaSection &g, const Rational &r,
                                  bool allow_zero = false) {
    require_threshold(r, allow_zero);
    require(g.values.size() == order.size(), ErrorKind::PosetMismatch, "j_r_map");
    ContextMask good = 0;
    for (ContextId v = 0; v < order.size(); ++v) {
        if (g.values[v] >= r) {
            good |= bit(v);
        }
    }
    GlobalSieveSection out;
    for (ContextId v = 0; v < order.size(); ++v) {
        out.at.push_back(order.down(v) & good);
    }
    return out;
}

struct SeparationWitness {
    Rational r;
    ContextId stage;
    Sieve first;
    Sieve second;
};

/// Witness that j_r tells γ1 and γ2 apart: at the first context V0 where they
/// differ, r is the larger of the two values, and j_r of the larger section
/// is principal at V0 while the other omits V0.
inline std::optional<SeparationWitness> check_separation(const PosetOrder &order,
                                                         const GammaSection &g1,
                                                         const GammaSection &g2) {
    require(g1.values.size() == order.size() && g2.values.size() == order.size(),
            ErrorKind::PosetMismatch, "check_separation");
    for (ContextId v = 0; v < order.size(); ++v) {
        if (g1.values[v] != g2.values[v]) {
            Rational r = max(g1.values[v], g2.values[v]);
            auto s1 = j_r_map(order, g1, r).sieve(v);
            auto s2 = j_r_map(order, g2, r).sieve(v);
            return SeparationWitness{r, v, s1, s2};
        }
    }
    return std::nullopt;
}

struct BornMinimum {
    Rational minimum;
    ContextId argmin;
};

/// min_V γ(V).
inline BornMinimum min_expectation(const GammaSection &g) {
    require(!g.values.empty(), ErrorKind::InvalidArgument, "empty poset");
    BornMinimum out{g.values.front(), 0};
    for (ContextId v = 1; v < g.values.size(); ++v) {
        if (g.values[v] < out.minimum) {
            out = {g.values[v], v};
        }
    }
    return out;
}

struct BornRuleCheck {
    Rational minimum;
    ContextId argmin;
    Rational expectation;
    /// Some context of the poset has P in its lattice; only then is the
    /// minimum guaranteed to be tr(ρP).
    bool covered;
    bool equal;
};

template <Scalar S>
BornRuleCheck born_rule_check(const ContextPoset<S> &poset, const DensityMatrix<S> &rho,
                              const Projection<S> &p, double eps = kDefaultEpsilon) {
    StateTable table(poset, rho, eps);
    auto m = min_expectation(mu_rho(table, daseinise_global(p, poset, eps)));
    bool covered = false;
    for (const auto &c : poset.contexts()) {
        covered = covered || lattice_index(c, p, eps).has_value();
    }
    Rational expectation = trace_pairing(rho, p, eps);
    return {m.minimum, m.argmin, expectation, covered, m.minimum == expectation};
}

/// μ^ρ sends the union of an increasing chain to the join of the values.
inline bool check_sigma_additivity(const StateTable &table,
                                   const std::vector<ClopenSubobject> &chain) {
    require(!chain.empty(), ErrorKind::InvalidArgument, "empty chain");
    for (std::size_t i = 1; i < chain.size(); ++i) {
        require(subobject_leq(chain[i - 1].sub, chain[i].sub), ErrorKind::NotIncreasing,
                "chain element " + std::to_string(i) + " is not above its predecessor");
    }
    ClopenSubobject uni = chain.front();
    std::vector<GammaSection> values;
    for (const auto &s : chain) {
        for (std::size_t v = 0; v < s.sub.parts.size(); ++v) {
            uni.sub.parts[v] |= s.sub.parts[v];
        }
        values.push_back(mu_rho(table, s));
    }
    return mu_rho(table, uni) == gamma_join(values);
}

} // namespace toposprob
