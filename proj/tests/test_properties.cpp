#include "support.hpp"

using namespace testing;

namespace {

constexpr int kCases = 1000;

// Random density matrix: a mixture of up to three random vectors.
template <Scalar S> DensityMatrix<S> random_state(std::mt19937_64 &rng, std::size_t dim) {
    MixtureSpec<S> m;
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<long> w(k);
    long total = 0;
    for (auto &x : w) {
        x = 1 + static_cast<long>(rng() % 4);
        total += x;
    }
    for (int i = 0; i < k; ++i) {
        Vec<S> v(dim, scalar_traits<S>::zero());
        while (true) {
            bool nonzero = false;
            for (auto &x : v) {
                const long re = static_cast<long>(rng() % 5) - 2;
                const long im = static_cast<long>(rng() % 3) - 1;
                x = scalar_traits<S>::from_rational(Rational(re), Rational(im));
                nonzero = nonzero || re != 0 || im != 0;
            }
            if (nonzero) {
                break;
            }
        }
        Rational weight(w[i], total);
        weight.canonicalize();
        m.components.emplace_back(PureState<S>::from_vector(v), weight);
    }
    return density_from_mixture(m);
}

GammaSection random_gamma(std::mt19937_64 &rng, const PosetOrder &o) {
    GammaSection g{std::vector<Rational>(o.size(), Rational(0))};
    for (ContextId v = 0; v < o.size(); ++v) {
        Rational floor = 0;
        for (ContextId u = 0; u < v; ++u) {
            if (o.leq(v, u)) {
                floor = max(floor, g.values[u]);
            }
        }
        Rational x(static_cast<long>(rng() % 13), 12);
        x.canonicalize();
        g.values[v] = max(floor, x);
    }
    return g;
}

template <Scalar S> struct Setup {
    const Materialized<S> &m;
    std::vector<ClopenSubobject> subs;
    std::vector<Projection<S>> lattice;

    explicit Setup(const Materialized<S> &mm) : m(mm), subs(clopen_subobjects(mm.poset().order_ptr())) {
        const auto &poset = m.poset();
        for (ContextId v = 0; v < poset.size(); ++v) {
            const auto &c = poset.context(v);
            for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                lattice.push_back(c.lattice_element(bits));
            }
        }
    }
};

template <Scalar S> void sieve_closure(const Materialized<S> &m, std::uint64_t seed) {
    Setup<S> s(m);
    const auto &poset = m.poset();
    const auto &o = poset.order();
    const auto sigma = spectral_presheaf(poset.order_ptr());
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kCases; ++i) {
        const auto rho = random_state<S>(rng, poset.dim());
        const auto &p = s.lattice[rng() % s.lattice.size()];
        const auto r = random_threshold(rng);
        const StateTable t(poset, rho, m.epsilon());
        CHECK(is_global_section(o, truth_value_r(poset, p, rho, r, m.epsilon())));
        CHECK(is_global_section(o, j_r_map(o, mu_rho(t, s.subs[rng() % s.subs.size()]), r)));
        CHECK(is_global_section(o, membership_valuation(daseinise_global(p, poset, m.epsilon()),
                                                        TruthObjectRho::mixed(t, r))));
        const auto &a = s.subs[rng() % s.subs.size()];
        const auto &b = s.subs[rng() % s.subs.size()];
        CHECK(is_global_section(o, valuation_subseteq(sigma, a.sub, b.sub)));
        const auto xi = xi_rho(truth_object_quantum(t), a).at({static_cast<ContextId>(rng() % o.size()), r});
        CHECK(is_product_sieve(o, xi));
    }
}

template <Scalar S> void mu_antitone(const Materialized<S> &m, std::uint64_t seed) {
    Setup<S> s(m);
    const auto &poset = m.poset();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kCases; ++i) {
        const StateTable t(poset, random_state<S>(rng, poset.dim()), m.epsilon());
        const auto &a = s.subs[rng() % s.subs.size()];
        const auto &b = s.subs[rng() % s.subs.size()];
        const auto ga = mu_rho(t, a);
        CHECK(is_gamma_section(poset.order(), ga));
        if (subobject_leq(a.sub, b.sub)) {
            CHECK(gamma_leq(ga, mu_rho(t, b)));
        }
    }
}

template <Scalar S> void j_r_monotone(const Materialized<S> &m, std::uint64_t seed) {
    const auto &o = m.poset().order();
    std::mt19937_64 rng(seed);
    auto inside = [&](const GlobalSieveSection &x, const GlobalSieveSection &y) {
        for (ContextId v = 0; v < o.size(); ++v) {
            if ((x.at[v] & ~y.at[v]) != 0) {
                return false;
            }
        }
        return true;
    };
    for (int i = 0; i < kCases; ++i) {
        const auto g = random_gamma(rng, o);
        auto r1 = random_threshold(rng);
        auto r2 = random_threshold(rng);
        if (r2 < r1) {
            std::swap(r1, r2);
        }
        CHECK(inside(j_r_map(o, g, r2), j_r_map(o, g, r1)));
        const auto h = gamma_join({g, random_gamma(rng, o)});
        CHECK(inside(j_r_map(o, g, r1), j_r_map(o, h, r1)));
    }
}

template <Scalar S> void ell_injective_join(const Materialized<S> &m, std::uint64_t seed) {
    const auto order = m.poset().order_ptr();
    const auto &o = *order;
    std::mt19937_64 rng(seed);
    std::vector<Rational> grid;
    for (long k = 1; k <= 12; ++k) {
        Rational r(k, 12);
        r.canonicalize();
        grid.push_back(r);
    }
    for (int i = 0; i < kCases; ++i) {
        const auto g1 = random_gamma(rng, o);
        const auto g2 = random_gamma(rng, o);
        const auto l1 = ell_quantum(order, g1);
        const auto l2 = ell_quantum(order, g2);
        bool differ = false;
        const auto lj = ell_quantum(order, gamma_join({g1, g2}));
        const auto jl = product_join(l1, l2, order);
        for (ContextId v = 0; v < o.size(); ++v) {
            for (const auto &r : grid) {
                differ = differ || !(l1.at({v, r}) == l2.at({v, r}));
                CHECK(lj.at({v, r}) == jl.at({v, r}));
            }
        }
        CHECK(differ == !(g1 == g2));
    }
}

template <Scalar S> void sigma_additive(const Materialized<S> &m, std::uint64_t seed) {
    Setup<S> s(m);
    const auto &poset = m.poset();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kCases; ++i) {
        const StateTable t(poset, random_state<S>(rng, poset.dim()), m.epsilon());
        std::vector<ClopenSubobject> chain{s.subs[rng() % s.subs.size()]};
        const int len = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < len; ++k) {
            std::vector<const ClopenSubobject *> above;
            for (const auto &c : s.subs) {
                if (subobject_leq(chain.back().sub, c.sub)) {
                    above.push_back(&c);
                }
            }
            chain.push_back(*above[rng() % above.size()]);
        }
        CHECK(check_sigma_additivity(t, chain));
    }
}

template <Scalar S> void naturality_and_slices(const Materialized<S> &m, std::uint64_t seed) {
    Setup<S> s(m);
    const auto &poset = m.poset();
    const auto order = poset.order_ptr();
    const auto &o = *order;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kCases; ++i) {
        const StateTable t(poset, random_state<S>(rng, poset.dim()), m.epsilon());
        const auto &sub = s.subs[rng() % s.subs.size()];
        const auto g = mu_rho(t, sub);
        const auto ell = ell_quantum(order, g);
        const auto xi = xi_rho(truth_object_quantum(t), sub);
        const ContextId v = static_cast<ContextId>(rng() % o.size());
        const auto down = o.members(o.down(v));
        const ContextId w = down[rng() % down.size()];
        auto r1 = random_threshold(rng);
        auto r2 = random_threshold(rng);
        if (r2 < r1) {
            std::swap(r1, r2);
        }
        // Restriction along ⟨w, r1⟩ ⪯ ⟨v, r2⟩ commutes with evaluation.
        CHECK(restrict_sieve(o, ell.at({v, r2}), {w, r1}) == ell.at({w, r1}));
        CHECK(restrict_sieve(o, xi.at({v, r2}), {w, r1}) == xi.at({w, r1}));
        // The r-slice of ℓ(γ) at ⟨v, r⟩ is j_r(γ)(v).
        const auto slice = ell.at({v, r2});
        ContextMask members = 0;
        for (ContextId u : o.members(o.down(v))) {
            if (slice.contains({u, r2})) {
                members |= bit(u);
            }
        }
        CHECK(members == j_r_map(o, g, r2).at[v]);
    }
}

} // namespace

TEST_CASE("sieve outputs are down-closed", "[property]") {
    sieve_closure(q3(), 11);
    sieve_closure(rotated3(), 12);
}

TEST_CASE("μ^ρ is nowhere increasing and monotone in S", "[property]") {
    mu_antitone(q3(), 21);
    mu_antitone(rotated3(), 22);
}

TEST_CASE("j_r is antitone in r and monotone in γ", "[property]") {
    j_r_monotone(q3(), 31);
    j_r_monotone(rotated3(), 32);
}

TEST_CASE("ℓ is injective and preserves joins", "[property]") {
    ell_injective_join(q3(), 41);
    ell_injective_join(rotated3(), 42);
}

TEST_CASE("σ-additivity holds on random increasing chains", "[property]") {
    sigma_additive(q3(), 51);
    sigma_additive(rotated3(), 52);
}

TEST_CASE("product sieves are natural and slice to j_r", "[property]") {
    naturality_and_slices(q3(), 61);
    naturality_and_slices(rotated3(), 62);
}
