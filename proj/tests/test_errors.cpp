#include "support.hpp"

#include <functional>
#include <map>

using namespace testing;

namespace {

Context<Q> diag3() {
    return Context<Q>::from_frame({qproj(3, {0}), qproj(3, {1}), qproj(3, {2})}, "D");
}

const std::map<ErrorKind, std::function<void()>> &triggers() {
    static const std::map<ErrorKind, std::function<void()>> t{
        {ErrorKind::DimensionMismatch, [] { (void)Matrix<Q>(0); }},
        {ErrorKind::ModeMismatch,
         [] {
             auto off = Matrix<Q>::from_rows({{Q(0), Q(1)}, {Q(1), Q(0)}});
             (void)spectral_projector(off, BorelSet{{Interval{}}});
         }},
        {ErrorKind::NonOrthogonalInput, [] { (void)projector_from_vectors<Q>({qvec({1, 0}), qvec({1, 1})}); }},
        {ErrorKind::ZeroVector, [] { (void)PureState<Q>::from_vector(qvec({0, 0})); }},
        {ErrorKind::NumericalInstability, [] { (void)rationalize(1.0 / 0.0); }},
        {ErrorKind::NotHermitian,
         [] { (void)Projection<Q>::from_matrix(Matrix<Q>::from_rows({{Q(0), Q(1)}, {Q(0), Q(0)}})); }},
        {ErrorKind::NoConvergence,
         [] {
             auto a = Matrix<F>::from_rows({{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}});
             (void)eigendecompose_hermitian(a, kDefaultEpsilon, kClusterThreshold, 0);
         }},
        {ErrorKind::NotAResolution, [] { (void)Context<Q>::from_frame({qproj(3, {0}), qproj(3, {1})}); }},
        {ErrorKind::Overlapping, [] { (void)Context<Q>::from_frame({qproj(2, {0}), qproj(2, {0, 1})}); }},
        {ErrorKind::TrivialContext, [] { (void)Context<Q>::from_frame({qproj(2, {0, 1})}); }},
        {ErrorKind::PosetTooLarge, [] { (void)build_poset(std::vector<Context<Q>>{diag3()}, 2); }},
        {ErrorKind::MixedDimensions,
         [] {
             (void)build_poset(std::vector<Context<Q>>{
                 diag3(), Context<Q>::from_frame({qproj(2, {0}), qproj(2, {1})})});
         }},
        {ErrorKind::UnknownContext, [] { (void)q3().poset().order().id_of("nope"); }},
        {ErrorKind::NotAFunctor, [] { (void)Presheaf(q3().poset().order_ptr(), {1, 1, 1, 1}).restrict(0, 1, 0); }},
        {ErrorKind::StageMismatch,
         [] {
             const auto &o = q3().poset().order();
             (void)sieve_meet(o, Sieve{0, 0}, Sieve{1, 0});
         }},
        {ErrorKind::EnumerationTooLarge,
         [] { (void)enumerate_subobjects(spectral_presheaf(q3().poset().order_ptr()), {1, false}); }},
        {ErrorKind::ParentMismatch,
         [] {
             const auto sigma = spectral_presheaf(q3().poset().order_ptr());
             Subobject a{q3().poset().order().all(), {0, 0, 0, 0}};
             Subobject b{1, {0, 0, 0, 0}};
             (void)valuation_subseteq(sigma, a, b);
         }},
        {ErrorKind::NotInContext, [] { (void)alpha(q3().poset().context(1), qproj(3, {1})); }},
        {ErrorKind::UnsupportedSetShape,
         [] { BorelSet{{Interval{Rational(2), Rational(1), true, true}}}.validate(); }},
        {ErrorKind::WeightsNotNormalized, [] { (void)FiniteMeasureSpace({"a"}, {Rational(1, 2)}); }},
        {ErrorKind::InvalidThreshold, [] { require_threshold(Rational(0)); }},
        {ErrorKind::PosetMismatch, [] { (void)gamma_leq(GammaSection{{1}}, GammaSection{}); }},
        {ErrorKind::NotIncreasing,
         [] {
             const auto subs = clopen_subobjects(q3().poset().order_ptr());
             (void)check_sigma_additivity(StateTable(q3().poset(), q3().state("rho")), {subs.back(), subs.front()});
         }},
        {ErrorKind::OutOfRange, [] { (void)beta(Rational(-1)); }},
        {ErrorKind::UnknownPoint,
         [] { (void)FiniteMeasureSpace({"a"}, {Rational(1)}).subset({"b"}); }},
        {ErrorKind::TooLarge,
         [] { (void)enumerate_hyper_elements(outer_presheaf(q3().poset()), q3().poset().order().all(), 1); }},
        {ErrorKind::EmptyComponent, [] { (void)c_map(OuterSubobject{1, {0}}); }},
        {ErrorKind::InvalidArgument, [] { (void)(ComplexQ(1) / ComplexQ(0)); }},
        {ErrorKind::ParseError, [] { (void)parse_instance("{"); }},
        {ErrorKind::UnknownReference, [] { (void)fixture("none"); }},
    };
    return t;
}

} // namespace

TEST_CASE("every error kind is reachable through the public API") {
    const auto &t = triggers();
    CHECK(t.size() == static_cast<std::size_t>(ErrorKind::UnknownReference) + 1);
    for (const auto &[kind, fn] : t) {
        INFO(to_string(kind));
        REQUIRE_KIND(fn(), kind);
    }
}

TEST_CASE("error messages carry the kind name") {
    try {
        fail(ErrorKind::StageMismatch, "detail text");
    } catch (const Error &e) {
        CHECK(std::string(e.what()) == "StageMismatch: detail text");
        CHECK(std::string(e.detail()) == "detail text");
        CHECK(e.kind() == ErrorKind::StageMismatch);
    }
    CHECK_NOTHROW(require(true, ErrorKind::OutOfRange, "fine"));
}
