#include "support.hpp"

#include <set>

using namespace testing;

namespace {

// Oracle: hyper-elements by brute force over all tuples, with the condition
// evaluated on matrices (daseinise, then compare projections).
template <Scalar S> std::size_t brute_hyper_count(const ContextPoset<S> &poset) {
    const auto &o = poset.order();
    std::size_t count = 0;
    std::vector<BlockMask> h(o.size(), 0);
    auto rec = [&](auto &&self, std::size_t v) -> void {
        if (v == o.size()) {
            for (ContextId u = 0; u < o.size(); ++u) {
                const auto gu = poset.context(u).lattice_element(h[u]);
                for (ContextId l : o.members(o.down(u))) {
                    const auto &cl = poset.context(l);
                    if (!projector_leq(daseinise(gu, cl), cl.lattice_element(h[l]))) {
                        return;
                    }
                }
            }
            ++count;
            return;
        }
        for (BlockMask m = 0; m <= poset.context(v).full_mask(); ++m) {
            h[v] = m;
            self(self, v + 1);
        }
    };
    rec(rec, 0);
    return count;
}

} // namespace

TEST_CASE("hyper-elements of Q3") {
    const auto &poset = q3().poset();
    const auto outer = outer_presheaf(poset);
    const auto hyp = enumerate_hyper_elements(outer);
    CHECK(hyp.size() == 95);
    CHECK(brute_hyper_count(poset) == 95);
    for (const auto &h : hyp) {
        CHECK(is_hyper_element(outer, h));
    }
    REQUIRE_KIND(enumerate_hyper_elements(outer, poset.order().all(), 10), ErrorKind::TooLarge);
    CHECK_FALSE(is_hyper_element(outer, HyperElement{{0}}));
}

TEST_CASE("k and j are inverse bijections") {
    const auto &poset = q3().poset();
    const auto &o = poset.order();
    const auto outer = outer_presheaf(poset);
    for (const auto &h : enumerate_hyper_elements(outer)) {
        CHECK(j_inverse(k_map(o, h)) == h);
    }
    for (const auto &s : clopen_subobjects(poset.order_ptr())) {
        CHECK(k_map(o, j_inverse(s)) == s);
    }
}

TEST_CASE("c and d") {
    const auto &poset = q3().poset();
    const auto &o = poset.order();
    const auto outer = outer_presheaf(poset);
    for (const auto &h : enumerate_hyper_elements(outer)) {
        const auto d = d_inverse(o, h);
        CHECK(is_subobject(outer, d));
        CHECK(is_ideal_subobject(o, d));
        CHECK(c_map(d) == h);
    }
    OuterSubobject empty{o.all(), std::vector<std::uint64_t>(o.size(), 0)};
    REQUIRE_KIND(c_map(empty), ErrorKind::EmptyComponent);
    CHECK_FALSE(is_ideal_subobject(o, empty));
}

TEST_CASE("c is not injective on Sub(O)") {
    // On a single two-block context, {P1} and {0, P1} have the same join.
    const auto m = load<Q>("dim2");
    const auto &o = m.poset().order();
    OuterSubobject a{o.all(), {std::uint64_t{1} << 0b01}};
    OuterSubobject b{o.all(), {(std::uint64_t{1} << 0b01) | 1}};
    CHECK(c_map(a) == c_map(b));
    CHECK_FALSE(is_ideal_subobject(o, a));
    CHECK(is_ideal_subobject(o, b));
    const auto outer = outer_presheaf(m.poset());
    CHECK(enumerate_subobjects(outer, {kDefaultEnumerationCap, true}).size() == 15);
    CHECK(enumerate_hyper_elements(outer).size() == 4);
}

TEST_CASE("appendix report on Q3") {
    const auto rep = check_appendix(q3().poset());
    CHECK(rep.hyper_elements == 95);
    CHECK(rep.clopen_subobjects == 95);
    CHECK(rep.c_images == 95);
    CHECK(rep.outer_ideal == 95);
    CHECK(rep.outer_subobjects == 10970);
    CHECK(rep.counts_agree());
    CHECK(rep.kj_identity);
    CHECK(rep.jk_identity);
    CHECK(rep.cd_identity);
    CHECK(rep.dc_identity_on_ideal);
    CHECK(rep.outputs_valid);
    CHECK_FALSE(rep.dc_identity_all);
    CHECK(rep.dc_failures == 10970 - 95);
}

TEST_CASE("local power objects on Q3") {
    const auto &poset = q3().poset();
    for (ContextId v = 0; v < poset.size(); ++v) {
        const auto rep = power_object_local(poset, v);
        INFO(poset.order().name(v) << ": " << rep.witness);
        CHECK(rep.bijection_on_ideal());
        CHECK(rep.naturality);
        CHECK(rep.fg_identity);
        CHECK(rep.outer_ideal == rep.clopen_subobjects);
        CHECK(rep.outer_subobjects > rep.outer_ideal);
        CHECK_FALSE(rep.gf_identity_all);
    }
    const auto leaf = power_object_local(poset, 1);
    CHECK(leaf.outer_subobjects == 15);
    CHECK(leaf.clopen_subobjects == 4);
    REQUIRE_KIND(power_object_local(poset, 17), ErrorKind::UnknownContext);
    REQUIRE_KIND(power_object_local(poset, 0, kDefaultEpsilon, 5), ErrorKind::TooLarge);
}

TEST_CASE("T_org of a pure state") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto t = truth_object_org(m.pure_state("e1"), poset);
    const auto outer = outer_presheaf(poset);
    CHECK(is_subobject(outer, t));
    // At Vmax the elements above e1 are the masks containing block 0.
    CHECK(t.parts[0] == ((1u << 1) | (1u << 3) | (1u << 5) | (1u << 7)));
    REQUIRE_KIND(truth_object_org(PureState<Q>::from_vector(qvec({1, 0})), poset),
                 ErrorKind::DimensionMismatch);
}

TEST_CASE("membership in T^{ρ,r} equals ν^r") {
    const auto &m = q3();
    const auto &poset = m.poset();
    for (const char *state : {"rho", "rho_tilde", "mix"}) {
        const auto rho = m.state(state);
        const StateTable t(poset, rho);
        for (long k = 1; k <= 10; ++k) {
            const Rational r(k, 10);
            const auto to = TruthObjectRho::mixed(t, r);
            CHECK(to.r() == r);
            for (ContextId w = 0; w < poset.size(); ++w) {
                const auto &c = poset.context(w);
                for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                    const auto p = c.lattice_element(bits);
                    CHECK(membership_valuation(daseinise_global(p, poset), to) ==
                          truth_value_r(poset, p, rho, r));
                }
            }
        }
    }
    REQUIRE_KIND(TruthObjectRho::mixed(StateTable(poset, m.state("rho")), 0), ErrorKind::InvalidThreshold);
}

TEST_CASE("pure truth object gives ν(P; ψ)") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto psi = m.pure_state("e1");
    const auto t = truth_object_pure_new(psi, poset);
    for (const auto &prop : m.instance().propositions) {
        const auto p = m.proposition(prop.name);
        CHECK(membership_valuation(daseinise_global(p, poset), t) == truth_value_pure(poset, p, psi));
    }
    ClopenSubobject partial{restrict_to(poset.order(), daseinise_global(m.proposition("P1"), poset).sub, 1)};
    REQUIRE_KIND(membership_valuation(partial, t), ErrorKind::PosetMismatch);
    REQUIRE_KIND(t.member(partial, 0), ErrorKind::StageMismatch);
}

TEST_CASE("monotonicity of T^{ρ,r} in r") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const StateTable t(poset, m.state("rho_tilde"));
    const auto subs = clopen_subobjects(poset.order_ptr());
    for (long a = 1; a <= 10; ++a) {
        for (long b = a; b <= 10; ++b) {
            const auto lo = TruthObjectRho::mixed(t, Rational(a, 10));
            const auto hi = TruthObjectRho::mixed(t, Rational(b, 10));
            for (const auto &s : subs) {
                for (ContextId v = 0; v < poset.size(); ++v) {
                    ClopenSubobject local{restrict_to(poset.order(), s.sub, v)};
                    if (hi.member(local, v)) {
                        CHECK(lo.member(local, v));
                    }
                }
            }
        }
    }
}

TEST_CASE("commuting squares CP1 and CP2") {
    for (const char *name : {"q3", "dim4", "dim2"}) {
        const auto m = load<Q>(name);
        const auto a = check_square_cp1(m.poset());
        const auto b = check_square_cp2(m.poset());
        INFO(name << ": " << a.witness << b.witness);
        CHECK(a.ok);
        CHECK(b.ok);
        CHECK(a.checks > 0);
    }
    CHECK(check_square_cp1(rotated3().poset()).ok);
    CHECK(check_square_cp2(rotated3().poset()).ok);
}
