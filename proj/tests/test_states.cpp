#include "support.hpp"

using namespace testing;

TEST_CASE("pure states are rays") {
    auto a = PureState<Q>::from_vector(qvec({2, 0, 0}));
    auto b = PureState<Q>::from_vector(qvec({1, 0, 0}));
    CHECK(a.projector().near(b.projector()));
    CHECK(a.dim() == 3);
    REQUIRE_KIND(PureState<Q>::from_vector(qvec({0, 0, 0})), ErrorKind::ZeroVector);
    auto f = PureState<F>::from_vector({F(3, 0), F(0, 4)});
    CHECK(std::abs(std::norm(f.vector()[0]) + std::norm(f.vector()[1]) - 1.0) < 1e-12);
}

TEST_CASE("mixtures") {
    MixtureSpec<Q> m;
    m.components.emplace_back(PureState<Q>::from_vector(qvec({1, 0, 0})), Rational(3, 4));
    m.components.emplace_back(PureState<Q>::from_vector(qvec({0, 1, 0})), Rational(1, 4));
    CHECK(density_from_mixture(m).matrix() == qdiag({Rational(3, 4), Rational(1, 4), 0}));
    CHECK(q3().state("mix").matrix() == q3().state("rho_tilde").matrix());
    m.components[1].second = Rational(1, 2);
    REQUIRE_KIND(density_from_mixture(m), ErrorKind::WeightsNotNormalized);
    m.components[1].second = 0;
    REQUIRE_KIND(density_from_mixture(m), ErrorKind::WeightsNotNormalized);
    REQUIRE_KIND(density_from_mixture(MixtureSpec<Q>{}), ErrorKind::WeightsNotNormalized);
    MixtureSpec<Q> dims;
    dims.components.emplace_back(PureState<Q>::from_vector(qvec({1, 0, 0})), Rational(1, 2));
    dims.components.emplace_back(PureState<Q>::from_vector(qvec({0, 1})), Rational(1, 2));
    REQUIRE_KIND(density_from_mixture(dims), ErrorKind::DimensionMismatch);
}

TEST_CASE("state table entries equal direct traces") {
    for (const char *name : {"q3", "dim4"}) {
        const auto m = load<Q>(name);
        const auto &poset = m.poset();
        for (const auto &s : m.instance().states) {
            const auto rho = m.state(s.name);
            const StateTable t(poset, rho);
            CHECK(t.exact());
            CHECK(t.error_bound() == 0);
            for (ContextId v = 0; v < poset.size(); ++v) {
                const auto &c = poset.context(v);
                for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                    CHECK(t.trace(v, {bits}) == (rho.matrix() * c.lattice_element(bits).matrix()).trace().re);
                }
            }
            const auto vals = t.values();
            CHECK(std::is_sorted(vals.begin(), vals.end()));
        }
    }
    REQUIRE_KIND(StateTable(q3().poset(), load<Q>("dim4").state("rho")), ErrorKind::DimensionMismatch);
}

TEST_CASE("truth value of a pure state") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto &o = poset.order();
    const auto e1 = m.pure_state("e1");
    // e1 lies under δ(P1) everywhere.
    CHECK(truth_value_pure(poset, m.proposition("P1"), e1) == principal_section(o));
    // δ(P2)_{V'} ⪰ |e1><e1| only at V3 (block {e1, e2}).
    const auto v = truth_value_pure(poset, m.proposition("P2"), e1);
    CHECK(v.at[o.id_of("Vmax")] == bit(o.id_of("V3")));
    CHECK(is_global_section(o, v));
}

TEST_CASE("truth value at a threshold") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto &o = poset.order();
    const auto p1 = m.proposition("P1");
    const auto rho = m.state("rho");
    const auto rt = m.state("rho_tilde");
    const Rational r(3, 4);
    CHECK(truth_value_r(poset, p1, rt, r) == principal_section(o));
    const auto nv = truth_value_r(poset, p1, rho, r);
    CHECK(nv.at[o.id_of("Vmax")] == bit(o.id_of("V3")));
    CHECK(nv.at[o.id_of("V3")] == bit(o.id_of("V3")));
    CHECK(nv.at[o.id_of("V1")] == 0);
    REQUIRE_KIND(truth_value_r(poset, p1, rho, Rational(0)), ErrorKind::InvalidThreshold);
    REQUIRE_KIND(truth_value_r(poset, p1, rho, Rational(5, 4)), ErrorKind::InvalidThreshold);
    CHECK(truth_value_r(poset, p1, rho, Rational(0), kDefaultEpsilon, true) == principal_section(o));
}

TEST_CASE("the naive valuation sees supports only") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto rho = m.state("rho");
    const auto rt = m.state("rho_tilde");
    for (ContextId w = 0; w < poset.size(); ++w) {
        const auto &c = poset.context(w);
        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
            const auto p = c.lattice_element(bits);
            CHECK(truth_value_mixed_naive(poset, p, rho) == truth_value_mixed_naive(poset, p, rt));
            CHECK(truth_value_mixed_naive(poset, p, rho) == truth_value_r(poset, p, rho, Rational(1)));
        }
    }
}

TEST_CASE("pseudo-state is the daseinised ray") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto w = pseudo_state(m.pure_state("e1"), poset);
    CHECK(w == daseinise_global(m.proposition("P1"), poset));
    CHECK(is_subobject(spectral_presheaf(poset.order_ptr()), w.sub));
}
