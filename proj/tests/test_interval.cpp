#include "support.hpp"

using namespace testing;

namespace {

FiniteMeasureSpace three() {
    return FiniteMeasureSpace({"a", "b", "c"}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
}

} // namespace

TEST_CASE("lower opens") {
    const LowerOpen a{Rational(1, 3)}, b{Rational(1, 2)};
    CHECK(a.subset_of(b));
    CHECK((a | b) == b);
    CHECK((a & b) == a);
    CHECK(beta(Rational(1, 4)).threshold == Rational(1, 4));
    REQUIRE_KIND(beta(Rational(2)), ErrorKind::OutOfRange);
}

TEST_CASE("ℓ on [0,1]") {
    const auto l = ell_classical(Rational(1, 2));
    CHECK(l.at(Rational(1, 4)).value == Rational(1, 4));
    CHECK(l.at(Rational(1, 2)).value == Rational(1, 2));
    CHECK(l.at(Rational(3, 4)).value == Rational(1, 2));
    CHECK(l.at(Rational(3, 4)).contains(Rational(1, 2)));
    CHECK_FALSE(l.at(Rational(3, 4)).contains(Rational(2, 3)));
    CHECK(ell_classical(0).at(Rational(1, 2)).empty());
    REQUIRE_KIND(ell_classical(Rational(-1)), ErrorKind::OutOfRange);
    REQUIRE_KIND(l.at(Rational(2)), ErrorKind::OutOfRange);
}

TEST_CASE("ℓ is injective on a grid of values") {
    std::vector<Rational> ps;
    for (long k = 0; k <= 12; ++k) {
        Rational p(k, 12);
        p.canonicalize();
        ps.push_back(p);
    }
    for (const auto &p : ps) {
        for (const auto &q : ps) {
            bool same = true;
            for (const auto &r : ps) {
                same = same && ell_classical(p).at(r) == ell_classical(q).at(r);
            }
            CHECK(same == (p == q));
        }
    }
}

TEST_CASE("finite measure spaces") {
    const auto x = three();
    CHECK(measure_of(x, {"a", "c"}) == Rational(2, 3));
    CHECK(measure_of(x, x.all()) == 1);
    CHECK(measure_of(x, PointSet{0}) == 0);
    REQUIRE_KIND(x.subset({"d"}), ErrorKind::UnknownPoint);
    REQUIRE_KIND(measure_of(x, PointSet{8}), ErrorKind::UnknownPoint);
    REQUIRE_KIND(FiniteMeasureSpace({"a"}, {Rational(1, 2)}), ErrorKind::WeightsNotNormalized);
    REQUIRE_KIND(FiniteMeasureSpace({"a", "b"}, {Rational(3, 2), Rational(-1, 2)}),
                 ErrorKind::WeightsNotNormalized);
    REQUIRE_KIND(FiniteMeasureSpace({"a", "b"}, {Rational(1)}), ErrorKind::InvalidArgument);
    REQUIRE_KIND(FiniteMeasureSpace({}, {}), ErrorKind::TooLarge);
}

TEST_CASE("classical truth object and ξ^μ") {
    const auto x = three();
    const auto t = truth_object_classical(x);
    const PointSet ab = x.subset({"a", "b"});
    CHECK(t.member(ab, Rational(5, 6)));
    CHECK_FALSE(t.member(ab, Rational(6, 7)));
    REQUIRE_KIND(t.member(ab, Rational(2)), ErrorKind::OutOfRange);
    std::vector<PointSet> all;
    for (PointSet s = 0; s < 8; ++s) {
        all.push_back(s);
    }
    const auto grid = classical_breakpoints(x, all);
    CHECK(grid.size() == 7); // 0, 1/6, 1/3, 1/2, 2/3, 5/6, 1
    for (PointSet s : all) {
        const auto xi = xi_mu(t, s, grid);
        const auto l = ell_classical(measure_of(x, s));
        for (const auto &r : grid) {
            CHECK(xi.at(r) == l.at(r));
        }
    }
    REQUIRE_KIND(xi_mu(t, PointSet{16}, grid), ErrorKind::UnknownPoint);
}

TEST_CASE("classical diagram check") {
    const auto rep = check_classical_diagram(three(), 1);
    CHECK(rep.ok);
    CHECK(rep.checks > 56);
    CHECK(rep.witness.empty());
    // The sampled branch for larger spaces.
    std::vector<std::string> pts;
    std::vector<Rational> ws;
    for (int i = 0; i < 16; ++i) {
        pts.push_back("p" + std::to_string(i));
        ws.emplace_back(1, 16);
    }
    CHECK(check_classical_diagram(FiniteMeasureSpace(pts, ws), 3).ok);
}

TEST_CASE("interval join is stagewise maximum") {
    const auto j = interval_join({ell_classical(Rational(1, 4)), ell_classical(Rational(1, 2))});
    CHECK(j.at(Rational(1)).value == Rational(1, 2));
    CHECK(j.at(Rational(1, 3)).value == Rational(1, 3));
}
