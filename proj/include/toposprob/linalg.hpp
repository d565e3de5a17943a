#pragma once

// Small dense complex linear algebra over two scalar fields: exact complex
// rationals and IEEE doubles. Dimensions are capped at kMaxDimension; nothing
// here is tuned for speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toposprob/error.hpp"
#include "toposprob/rational.hpp"

namespace toposprob {

inline constexpr std::size_t kMaxDimension = 5;
inline constexpr double kDefaultEpsilon = 1e-9;
inline constexpr double kClusterThreshold = 1e-7;
inline constexpr int kJacobiSweepCap = 100;

enum class ArithmeticMode { exact, floating };

inline std::string_view to_string(ArithmeticMode mode) {
    return mode == ArithmeticMode::exact ? "exact" : "float";
}

/// Complex number with rational parts.
struct ComplexQ {
    Rational re;
    Rational im;

    ComplexQ() = default;
    ComplexQ(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
    ComplexQ(long r) : re(r), im(0) {}

    friend ComplexQ operator+(const ComplexQ &a, const ComplexQ &b) {
        return {Rational(a.re + b.re), Rational(a.im + b.im)};
    }
    friend ComplexQ operator-(const ComplexQ &a, const ComplexQ &b) {
        return {Rational(a.re - b.re), Rational(a.im - b.im)};
    }
    friend ComplexQ operator-(const ComplexQ &a) { return {Rational(-a.re), Rational(-a.im)}; }
    friend ComplexQ operator*(const ComplexQ &a, const ComplexQ &b) {
        return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
    }
    friend ComplexQ operator/(const ComplexQ &a, const ComplexQ &b) {
        Rational n = b.re * b.re + b.im * b.im;
        require(n != 0, ErrorKind::InvalidArgument, "division by zero");
        ComplexQ num = a * ComplexQ(b.re, Rational(-b.im));
        return {Rational(num.re / n), Rational(num.im / n)};
    }
    ComplexQ &operator+=(const ComplexQ &b) { return *this = *this + b; }
    ComplexQ &operator-=(const ComplexQ &b) { return *this = *this - b; }
    friend bool operator==(const ComplexQ &a, const ComplexQ &b) {
        return a.re == b.re && a.im == b.im;
    }
};

template <class S> struct scalar_traits;

template <> struct scalar_traits<ComplexQ> {
    static constexpr ArithmeticMode mode = ArithmeticMode::exact;
    static ComplexQ zero() { return ComplexQ(0); }
    static ComplexQ one() { return ComplexQ(1); }
    static ComplexQ from_rational(const Rational &re, const Rational &im = Rational(0)) {
        return {re, im};
    }
    static ComplexQ conj(const ComplexQ &a) { return {a.re, Rational(-a.im)}; }
    static bool near_zero(const ComplexQ &a, double /*eps*/) { return a.re == 0 && a.im == 0; }
    static double magnitude(const ComplexQ &a) {
        return std::hypot(a.re.get_d(), a.im.get_d());
    }
    static std::string encode(const ComplexQ &a) { return a.re.get_str() + "," + a.im.get_str(); }
};

template <> struct scalar_traits<std::complex<double>> {
    using C = std::complex<double>;
    static constexpr ArithmeticMode mode = ArithmeticMode::floating;
    static C zero() { return {0.0, 0.0}; }
    static C one() { return {1.0, 0.0}; }
    static C from_rational(const Rational &re, const Rational &im = Rational(0)) {
        return {re.get_d(), im.get_d()};
    }
    static C conj(const C &a) { return std::conj(a); }
    static bool near_zero(const C &a, double eps) { return std::abs(a) <= eps; }
    static double magnitude(const C &a) { return std::abs(a); }
    // Rounded to 1e-7 so that floating frames obtained by different routes
    // fingerprint identically.
    static std::string encode(const C &a) {
        auto q = [](double x) {
            long long v = std::llround(x * 1e7);
            return std::to_string(v);
        };
        return q(a.real()) + "," + q(a.imag());
    }
};

template <class S>
concept Scalar = requires { scalar_traits<S>::mode; };

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::mode == ArithmeticMode::exact;

using ExactScalar = ComplexQ;
using FloatScalar = std::complex<double>;

template <Scalar S> using Vec = std::vector<S>;

/// Row-major square matrix.
template <Scalar S> class Matrix {
  public:
    using traits = scalar_traits<S>;

    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, traits::zero()) {
        require(dim >= 1 && dim <= kMaxDimension, ErrorKind::DimensionMismatch,
                "dimension must lie in 1.." + std::to_string(kMaxDimension));
    }

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = traits::one();
        }
        return m;
    }

    static Matrix diagonal(std::span<const S> entries) {
        Matrix m(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            m(i, i) = entries[i];
        }
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<S>> &rows) {
        Matrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            require(rows[i].size() == rows.size(), ErrorKind::DimensionMismatch,
                    "matrix rows must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    /// |u><v|
    static Matrix outer(std::span<const S> u, std::span<const S> v) {
        require(u.size() == v.size(), ErrorKind::DimensionMismatch, "outer product sizes differ");
        Matrix m(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                m(i, j) = u[i] * traits::conj(v[j]);
            }
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    S &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const S &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    friend Matrix operator+(const Matrix &a, const Matrix &b) {
        a.check_same(b);
        Matrix r(a.dim_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            r.data_[k] = a.data_[k] + b.data_[k];
        }
        return r;
    }

    friend Matrix operator-(const Matrix &a, const Matrix &b) {
        a.check_same(b);
        Matrix r(a.dim_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            r.data_[k] = a.data_[k] - b.data_[k];
        }
        return r;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        a.check_same(b);
        Matrix r(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const S &aik = a(i, k);
                if (traits::near_zero(aik, 0.0)) {
                    continue;
                }
                for (std::size_t j = 0; j < a.dim_; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }

    friend Matrix operator*(const S &s, const Matrix &a) {
        Matrix r(a.dim_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            r.data_[k] = s * a.data_[k];
        }
        return r;
    }

    [[nodiscard]] Matrix adjoint() const {
        Matrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r(j, i) = traits::conj((*this)(i, j));
            }
        }
        return r;
    }

    [[nodiscard]] S trace() const {
        S t = traits::zero();
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    /// Largest entrywise modulus, used as the tolerance norm in float mode.
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto &x : data_) {
            m = std::max(m, traits::magnitude(x));
        }
        return m;
    }

    [[nodiscard]] bool near(const Matrix &other, double eps) const {
        check_same(other);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!traits::near_zero(data_[k] - other.data_[k], eps)) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool near_zero(double eps) const {
        return std::all_of(data_.begin(), data_.end(),
                           [eps](const S &x) { return traits::near_zero(x, eps); });
    }

    [[nodiscard]] bool is_hermitian(double eps) const { return near(adjoint(), eps); }

    [[nodiscard]] bool is_diagonal(double eps) const {
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                if (i != j && !traits::near_zero((*this)(i, j), eps)) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Canonical byte encoding; equal encodings mean equal matrices (exact)
    /// or matrices equal after 1e-7 rounding (float).
    [[nodiscard]] std::string encode() const {
        std::string out;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (k != 0) {
                out += ';';
            }
            out += traits::encode(data_[k]);
        }
        return out;
    }

    [[nodiscard]] std::span<const S> data() const noexcept { return data_; }

    friend bool operator==(const Matrix &a, const Matrix &b) {
        return a.dim_ == b.dim_ && a.data_ == b.data_;
    }

  private:
    void check_same(const Matrix &b) const {
        require(dim_ == b.dim_, ErrorKind::DimensionMismatch,
                "dimensions " + std::to_string(dim_) + " and " + std::to_string(b.dim_));
    }

    std::size_t dim_ = 0;
    std::vector<S> data_;
};

template <Scalar S> S inner(std::span<const S> u, std::span<const S> v) {
    require(u.size() == v.size(), ErrorKind::DimensionMismatch, "inner product sizes differ");
    S acc = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += scalar_traits<S>::conj(u[i]) * v[i];
    }
    return acc;
}

/// Hermitian idempotent matrix.
template <Scalar S> class Projection {
  public:
    Projection() = default;

    /// Validates P = P† and P·P = P (exactly, or within eps in float mode).
    static Projection from_matrix(Matrix<S> m, double eps = kDefaultEpsilon) {
        require(m.is_hermitian(eps), ErrorKind::NotHermitian, "projection must be Hermitian");
        require((m * m).near(m, eps), ErrorKind::InvalidArgument, "matrix is not idempotent");
        return Projection(std::move(m));
    }

    static Projection zero(std::size_t dim) { return Projection(Matrix<S>(dim)); }
    static Projection identity(std::size_t dim) { return Projection(Matrix<S>::identity(dim)); }

    /// Trusted constructor for sums of mutually orthogonal projections.
    static Projection unchecked(Matrix<S> m) { return Projection(std::move(m)); }

    [[nodiscard]] const Matrix<S> &matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }

    [[nodiscard]] std::size_t rank() const {
        if constexpr (is_exact_v<S>) {
            return static_cast<std::size_t>(m_.trace().re.get_d() + 0.5);
        } else {
            return static_cast<std::size_t>(std::llround(m_.trace().real()));
        }
    }

    [[nodiscard]] bool is_zero(double eps = kDefaultEpsilon) const { return m_.near_zero(eps); }

    [[nodiscard]] bool near(const Projection &o, double eps = kDefaultEpsilon) const {
        return m_.near(o.m_, eps);
    }

    /// 1 - P
    [[nodiscard]] Projection complement() const {
        return Projection(Matrix<S>::identity(dim()) - m_);
    }

  private:
    explicit Projection(Matrix<S> m) : m_(std::move(m)) {}
    Matrix<S> m_;
};

namespace detail {

/// Determinant by Gaussian elimination, exact field only.
inline ComplexQ determinant(Matrix<ComplexQ> a) {
    const std::size_t n = a.dim();
    ComplexQ det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r) {
            if (!(a(r, col) == ComplexQ(0))) {
                pivot = r;
                break;
            }
        }
        if (pivot == n) {
            return ComplexQ(0);
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
            }
            det = -det;
        }
        det = det * a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            ComplexQ f = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) {
                a(r, j) -= f * a(col, j);
            }
        }
    }
    return det;
}

/// Sylvester's criterion over every principal minor.
inline bool is_positive_semidefinite_exact(const Matrix<ComplexQ> &m) {
    const std::size_t n = m.dim();
    for (unsigned subset = 1; subset < (1u << n); ++subset) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (subset & (1u << i)) {
                idx.push_back(i);
            }
        }
        Matrix<ComplexQ> minor(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                minor(i, j) = m(idx[i], idx[j]);
            }
        }
        if (determinant(minor).re < 0) {
            return false;
        }
    }
    return true;
}

} // namespace detail

struct EigenPair {
    double value;
    Projection<FloatScalar> projector;
};

/// Cyclic complex Jacobi. Eigenvalues closer than `cluster` are merged into
/// one eigenprojector; output is sorted by increasing eigenvalue.
inline std::vector<EigenPair> eigendecompose_hermitian(const Matrix<FloatScalar> &input,
                                                       double eps = kDefaultEpsilon,
                                                       double cluster = kClusterThreshold,
                                                       int sweep_cap = kJacobiSweepCap) {
    using C = FloatScalar;
    require(input.is_hermitian(eps), ErrorKind::NotHermitian, "eigendecomposition input");
    const std::size_t n = input.dim();
    // Symmetrize so tiny anti-Hermitian noise does not bias the rotations.
    Matrix<C> a = C(0.5, 0.0) * (input + input.adjoint());
    Matrix<C> v = Matrix<C>::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    s += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > eps * 1e-3) {
        if (++sweep > sweep_cap) {
            fail(ErrorKind::NoConvergence, "Jacobi sweep cap reached");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                // Phase so that a(p,q) becomes real and positive.
                const C phase = a(p, q) / mag;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // J = D R with D = diag(1, conj(phase)) on (p, q).
                Matrix<C> j = Matrix<C>::identity(n);
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * std::conj(phase);
                j(q, q) = c * std::conj(phase);
                a = j.adjoint() * a * j;
                v = v * j;
            }
        }
    }

    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < n; ++i) {
        order.emplace_back(a(i, i).real(), i);
    }
    std::sort(order.begin(), order.end());

    std::vector<EigenPair> out;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && order[end].first - order[end - 1].first < cluster) {
            ++end;
        }
        Matrix<C> proj(n);
        double sum = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            std::vector<C> col(n);
            for (std::size_t r = 0; r < n; ++r) {
                col[r] = v(r, order[k].second);
            }
            proj = proj + Matrix<C>::outer(col, col);
            sum += order[k].first;
        }
        out.push_back({sum / static_cast<double>(end - start), Projection<C>::unchecked(proj)});
        start = end;
    }
    return out;
}

/// Positive semidefinite Hermitian matrix with unit trace.
template <Scalar S> class DensityMatrix {
  public:
    DensityMatrix() = default;

    static DensityMatrix from_matrix(Matrix<S> m, double eps = kDefaultEpsilon) {
        using traits = scalar_traits<S>;
        require(m.is_hermitian(eps), ErrorKind::NotHermitian, "density matrix");
        require(traits::near_zero(m.trace() - traits::one(), eps), ErrorKind::InvalidArgument,
                "density matrix must have unit trace");
        if constexpr (is_exact_v<S>) {
            require(detail::is_positive_semidefinite_exact(m), ErrorKind::InvalidArgument,
                    "density matrix must be positive semidefinite");
        } else {
            for (const auto &e : eigendecompose_hermitian(m, eps)) {
                require(e.value >= -eps, ErrorKind::InvalidArgument,
                        "density matrix must be positive semidefinite");
            }
        }
        return DensityMatrix(std::move(m));
    }

    [[nodiscard]] const Matrix<S> &matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }

  private:
    explicit DensityMatrix(Matrix<S> m) : m_(std::move(m)) {}
    Matrix<S> m_;
};

/// Orthogonal projection onto the span of mutually orthogonal vectors;
/// vectors need not be normalized.
template <Scalar S>
Projection<S> projector_from_vectors(const std::vector<Vec<S>> &vectors,
                                     double eps = kDefaultEpsilon) {
    using traits = scalar_traits<S>;
    require(!vectors.empty(), ErrorKind::InvalidArgument, "no vectors given");
    const std::size_t dim = vectors.front().size();
    std::vector<S> norms;
    for (const auto &v : vectors) {
        require(v.size() == dim, ErrorKind::DimensionMismatch, "vectors of unequal length");
        S n = inner<S>(v, v);
        if constexpr (is_exact_v<S>) {
            require(!(n == traits::zero()), ErrorKind::ZeroVector, "zero vector");
        } else {
            require(std::sqrt(n.real()) > eps, ErrorKind::ZeroVector, "zero vector");
        }
        norms.push_back(n);
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            S g = inner<S>(vectors[i], vectors[j]);
            if constexpr (is_exact_v<S>) {
                require(g == traits::zero(), ErrorKind::NonOrthogonalInput,
                        "vectors " + std::to_string(i) + " and " + std::to_string(j));
            } else {
                double cos = std::abs(g) / std::sqrt(norms[i].real() * norms[j].real());
                require(cos <= eps, ErrorKind::NonOrthogonalInput,
                        "vectors " + std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
    Matrix<S> p(dim);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        p = p + (traits::one() / norms[i]) * Matrix<S>::outer(vectors[i], vectors[i]);
    }
    return Projection<S>::unchecked(std::move(p));
}

/// P ⪯ Q, i.e. Q·P = P.
template <Scalar S>
bool projector_leq(const Projection<S> &p, const Projection<S> &q, double eps = kDefaultEpsilon) {
    require(p.dim() == q.dim(), ErrorKind::DimensionMismatch, "projector_leq");
    return (q.matrix() * p.matrix()).near(p.matrix(), eps);
}

/// tr(ρP) as a rational probability. Float results are rationalized onto the
/// 1e-9 grid after clamping overshoot smaller than eps.
template <Scalar S>
Rational trace_pairing(const DensityMatrix<S> &rho, const Projection<S> &p,
                       double eps = kDefaultEpsilon) {
    require(rho.dim() == p.dim(), ErrorKind::DimensionMismatch, "trace_pairing");
    S t = (rho.matrix() * p.matrix()).trace();
    if constexpr (is_exact_v<S>) {
        require(t.im == 0 && t.re >= 0 && t.re <= 1, ErrorKind::NumericalInstability,
                "trace outside [0,1]");
        return t.re;
    } else {
        double x = t.real();
        require(x >= -eps && x <= 1.0 + eps && std::abs(t.imag()) <= eps,
                ErrorKind::NumericalInstability, "trace outside [-eps, 1+eps]");
        return rationalize(std::clamp(x, 0.0, 1.0));
    }
}

} // namespace toposprob
