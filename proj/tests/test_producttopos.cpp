#include "support.hpp"

using namespace testing;

namespace {

// Mutation: answers membership for one subobject wrongly at one stage.
struct CorruptedTruthObject {
    TruthObjectQuantum inner;
    ClopenSubobject target;
    ContextId context;
    Rational r;

    bool member(const ClopenSubobject &local, const ProductStage &st) const {
        const bool honest = inner.member(local, st);
        if (st.context == context && st.r == r && local == target) {
            return !honest;
        }
        return honest;
    }
};

} // namespace

TEST_CASE("stages and product sieves") {
    const auto &o = q3().poset().order();
    CHECK(stage_leq(o, {1, Rational(1, 2)}, {0, 1}));
    CHECK_FALSE(stage_leq(o, {0, Rational(1, 2)}, {1, 1}));
    CHECK_FALSE(stage_leq(o, {1, 1}, {0, Rational(1, 2)}));
    const auto ell = ell_quantum(q3().poset().order_ptr(),
                                 GammaSection{{Rational(1, 2), Rational(1, 2), Rational(1, 2), 1}});
    const auto s = ell.at({0, Rational(3, 4)});
    CHECK(is_product_sieve(o, s));
    CHECK(s.threshold(0) == Rational(1, 2));
    CHECK(s.threshold(3) == Rational(3, 4));
    CHECK(s.contains({3, Rational(3, 4)}));
    CHECK_FALSE(s.contains({0, Rational(3, 4)}));
    const auto r = restrict_sieve(o, s, {3, Rational(1, 2)});
    CHECK(r.domain == bit(3));
    CHECK(r.threshold(3) == Rational(1, 2));
    REQUIRE_KIND(restrict_sieve(o, s, {0, 1}), ErrorKind::StageMismatch);
    REQUIRE_KIND(product_join(s, r), ErrorKind::StageMismatch);
    REQUIRE_KIND(ell.at({9, 1}), ErrorKind::UnknownContext);
    REQUIRE_KIND(ell.at({0, 2}), ErrorKind::OutOfRange);
    REQUIRE_KIND(ell_quantum(q3().poset().order_ptr(), GammaSection{{1}}), ErrorKind::PosetMismatch);
    ProductSieve bad = s;
    bad.thresholds[3] = Rational(1, 4);
    CHECK_FALSE(is_product_sieve(o, bad));
}

TEST_CASE("T̆^ρ membership") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const StateTable t(poset, m.state("rho"));
    const auto to = truth_object_quantum(t);
    const auto s = daseinise_global(m.proposition("P1"), poset);
    CHECK(to.member(s, {0, Rational(1, 2)}));
    CHECK_FALSE(to.member(s, {0, Rational(3, 4)}));
    CHECK(to.member(s, {3, 1}));
    REQUIRE_KIND(to.member(s, {0, 0}), ErrorKind::InvalidThreshold);
    CHECK(truth_object_quantum(t, true).member(s, {0, 0}));
    ClopenSubobject local{restrict_to(poset.order(), s.sub, 1)};
    REQUIRE_KIND(to.member(local, {0, Rational(1, 2)}), ErrorKind::StageMismatch);
}

TEST_CASE("ξ^ρ on the separating example") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto s = daseinise_global(m.proposition("P1"), poset);
    const auto a = xi_rho(truth_object_quantum(StateTable(poset, m.state("rho"))), s);
    const auto b = xi_rho(truth_object_quantum(StateTable(poset, m.state("rho_tilde"))), s);
    const ProductStage st{0, Rational(3, 4)};
    CHECK(a.at(st).threshold(0) == Rational(1, 2));
    CHECK(b.at(st).threshold(0) == Rational(3, 4));
    CHECK(a.at({0, 0}).empty_at(0));
}

TEST_CASE("pullback along the first projection ignores r") {
    const auto &poset = q3().poset();
    const auto subs = clopen_subobjects(poset.order_ptr());
    const auto pb = pullback_p1(poset.order_ptr(), subs[40]);
    CHECK(pb.component({1, Rational(1, 3)}) == pb.component({1, 1}));
    CHECK(pb.component({0, 1}).sub == subs[40].sub);
    CHECK(pb.base() == subs[40]);
}

TEST_CASE("quantum diagram commutes on Q3 for the fixture states") {
    const auto &m = q3();
    for (const char *state : {"rho", "rho_tilde", "e1", "mix"}) {
        const auto rep = check_quantum_diagram(StateTable(m.poset(), m.state(state)), 5);
        INFO(state << ": " << rep.witness);
        CHECK(rep.ok);
        CHECK(rep.subobjects == 95);
    }
    REQUIRE_KIND(check_quantum_diagram(StateTable(m.poset(), m.state("rho")), 0, 10),
                 ErrorKind::TooLarge);
}

TEST_CASE("a corrupted truth object is caught with a witness") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const StateTable t(poset, m.state("rho"));
    const auto target = daseinise_global(m.proposition("P1"), poset);
    // Flip membership of δ(P1)↓V3 at <V3, 1>.
    const ContextId v3 = poset.order().id_of("V3");
    CorruptedTruthObject bad{truth_object_quantum(t),
                             ClopenSubobject{restrict_to(poset.order(), target.sub, v3)}, v3,
                             Rational(1)};
    const auto rep = check_quantum_diagram(t, bad, 0);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.witness.empty());
    CHECK(rep.witness.find(", 1>") != std::string::npos);
}

TEST_CASE("quantum diagram in float mode on the rotated instance") {
    const auto &m = rotated3();
    for (const char *state : {"rho", "rho_tilde", "psi"}) {
        const auto rep = check_quantum_diagram(StateTable(m.poset(), m.state(state)), 2);
        INFO(state << ": " << rep.witness);
        CHECK(rep.ok);
    }
}

TEST_CASE("state separation") {
    const auto &m = q3();
    const auto &poset = m.poset();
    const auto w = separate_states(poset, m.state("rho"), m.state("rho_tilde"));
    REQUIRE(w.has_value());
    CHECK(w->stage.r == Rational(3, 4));
    CHECK(w->first != w->second);
    CHECK_FALSE(separate_states_naive(poset, m.state("rho"), m.state("rho_tilde")).has_value());
    CHECK_FALSE(separate_states(poset, m.state("rho_tilde"), m.state("mix")).has_value());
    const auto &rot = rotated3();
    CHECK(separate_states(rot.poset(), rot.state("rho"), rot.state("rho_tilde")).has_value());
}

TEST_CASE("product join of assignments") {
    const auto order = q3().poset().order_ptr();
    const auto a = ell_quantum(order, GammaSection{{Rational(1, 4), Rational(1, 4), Rational(1, 2), 1}});
    const auto b = ell_quantum(order, GammaSection{{Rational(1, 3), Rational(1, 2), Rational(1, 3), 1}});
    const auto j = product_join(a, b, order);
    const auto s = j.at({0, 1});
    CHECK(s.threshold(0) == Rational(1, 3));
    CHECK(s.threshold(1) == Rational(1, 2));
    CHECK(s.threshold(2) == Rational(1, 2));
}
