#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "toposprob/toposprob.hpp"

namespace testing {

using namespace toposprob;
using Q = ExactScalar;
using F = FloatScalar;

template <Scalar S> Materialized<S> load(const std::string &name, double eps = kDefaultEpsilon) {
    return Materialized<S>(parse_instance(std::string(fixture(name).text)), eps);
}

inline const Materialized<Q> &q3() {
    static const auto m = load<Q>("q3");
    return m;
}

inline const Materialized<F> &rotated3() {
    static const auto m = load<F>("rotated3");
    return m;
}

/// Matches an Error of the given kind.
struct KindIs : Catch::Matchers::MatcherGenericBase {
    explicit KindIs(ErrorKind k) : kind(k) {}
    bool match(const Error &e) const { return e.kind() == kind; }
    std::string describe() const override { return "has kind " + std::string(to_string(kind)); }
    ErrorKind kind;
};

#define REQUIRE_KIND(expr, k) REQUIRE_THROWS_MATCHES(expr, ::toposprob::Error, ::testing::KindIs(k))

inline Matrix<Q> qdiag(std::vector<Rational> d) {
    std::vector<Q> e;
    for (auto &x : d) {
        e.emplace_back(x);
    }
    return Matrix<Q>::diagonal(e);
}

inline Vec<Q> qvec(std::initializer_list<long> xs) {
    Vec<Q> v;
    for (long x : xs) {
        v.emplace_back(x);
    }
    return v;
}

/// Diagonal projection onto the listed coordinates.
inline Projection<Q> qproj(std::size_t dim, std::initializer_list<std::size_t> coords) {
    std::vector<Rational> d(dim, Rational(0));
    for (auto c : coords) {
        d[c] = 1;
    }
    return Projection<Q>::from_matrix(qdiag(d));
}

/// Random diagonal density matrix with denominators up to 12.
inline DensityMatrix<Q> random_diagonal_state(std::mt19937_64 &rng, std::size_t dim) {
    std::vector<long> w(dim);
    long total = 0;
    for (auto &x : w) {
        x = static_cast<long>(rng() % 5);
        total += x;
    }
    if (total == 0) {
        w[0] = total = 1;
    }
    std::vector<Rational> d;
    for (long x : w) {
        d.emplace_back(x, total);
    }
    for (auto &x : d) {
        x.canonicalize();
    }
    return DensityMatrix<Q>::from_matrix(qdiag(d));
}

/// Every clopen subobject of Σ, enumerated by the library.
inline std::vector<ClopenSubobject> clopen_subobjects(const std::shared_ptr<const PosetOrder> &order) {
    std::vector<ClopenSubobject> out;
    for (auto &s : enumerate_subobjects(spectral_presheaf(order))) {
        out.push_back({std::move(s)});
    }
    return out;
}

inline Rational random_threshold(std::mt19937_64 &rng) {
    Rational r(static_cast<long>(1 + rng() % 20), 20);
    r.canonicalize();
    return r;
}

} // namespace testing
