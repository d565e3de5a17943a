#pragma once

// Classical probability in sheaves over (0,1) with the lower topology. Opens
// are (0,r); a truth value at stage r is a sieve {(0,r') : r' ≤ t}, kept as
// its threshold t, with t = 0 standing for the empty sieve.

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "toposprob/error.hpp"
#include "toposprob/rational.hpp"

namespace toposprob {

/// The open (0, r); (0, 0) is the empty set.
struct LowerOpen {
    Rational threshold;

    friend bool operator==(const LowerOpen &, const LowerOpen &) = default;
    [[nodiscard]] bool subset_of(const LowerOpen &o) const { return threshold <= o.threshold; }
    friend LowerOpen operator|(const LowerOpen &a, const LowerOpen &b) {
        return {max(a.threshold, b.threshold)};
    }
    friend LowerOpen operator&(const LowerOpen &a, const LowerOpen &b) {
        return {min(a.threshold, b.threshold)};
    }
};

/// r ↦ (0, r).
inline LowerOpen beta(const Rational &r) {
    require(r >= 0 && r <= 1, ErrorKind::OutOfRange, "beta expects r in [0,1]");
    return {r};
}

struct IntervalTruthValue {
    Rational stage;
    Rational value;

    [[nodiscard]] bool empty() const { return value == 0; }
    /// (0, r') belongs to the sieve.
    [[nodiscard]] bool contains(const Rational &r_prime) const {
        return r_prime <= value && r_prime <= stage;
    }
    friend bool operator==(const IntervalTruthValue &, const IntervalTruthValue &) = default;
};

/// Global section of Ω over (0,1)_L, queried stage by stage.
class IntervalSection {
  public:
    explicit IntervalSection(std::function<Rational(const Rational &)> value_at)
        : value_at_(std::move(value_at)) {}

    [[nodiscard]] IntervalTruthValue at(const Rational &stage) const {
        require(stage >= 0 && stage <= 1, ErrorKind::OutOfRange, "stage outside [0,1]");
        return {stage, value_at_(stage)};
    }

  private:
    std::function<Rational(const Rational &)> value_at_;
};

/// ℓ(p): [0,r] if p ≥ r, [0,p] if 0 < p < r, empty if p = 0.
inline IntervalSection ell_classical(const Rational &p) {
    require(p >= 0 && p <= 1, ErrorKind::OutOfRange, "ell expects p in [0,1]");
    return IntervalSection([p](const Rational &r) -> Rational {
        if (p >= r) {
            return r;
        }
        if (p > 0) {
            return p;
        }
        return Rational(0);
    });
}

/// Stagewise join (union of sieves).
inline IntervalSection interval_join(std::vector<IntervalSection> family) {
    return IntervalSection([family = std::move(family)](const Rational &r) {
        Rational out = 0;
        for (const auto &s : family) {
            out = max(out, s.at(r).value);
        }
        return out;
    });
}

using PointSet = std::uint64_t;

class FiniteMeasureSpace {
  public:
    FiniteMeasureSpace(std::vector<std::string> points, std::vector<Rational> weights)
        : points_(std::move(points)), weights_(std::move(weights)) {
        require(points_.size() == weights_.size(), ErrorKind::InvalidArgument,
                "one weight per point");
        require(!points_.empty() && points_.size() <= 64, ErrorKind::TooLarge,
                "between 1 and 64 points supported");
        Rational total = 0;
        for (const auto &w : weights_) {
            require(w >= 0, ErrorKind::WeightsNotNormalized, "negative weight");
            total += w;
        }
        require(total == 1, ErrorKind::WeightsNotNormalized, "weights sum to " + to_string(total));
    }

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const std::vector<std::string> &points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<Rational> &weights() const noexcept { return weights_; }
    [[nodiscard]] PointSet all() const {
        return size() == 64 ? ~PointSet{0} : (PointSet{1} << size()) - 1;
    }

    [[nodiscard]] PointSet subset(const std::vector<std::string> &names) const {
        PointSet s = 0;
        for (const auto &n : names) {
            auto it = std::find(points_.begin(), points_.end(), n);
            require(it != points_.end(), ErrorKind::UnknownPoint, "no point named '" + n + "'");
            s |= PointSet{1} << (it - points_.begin());
        }
        return s;
    }

  private:
    std::vector<std::string> points_;
    std::vector<Rational> weights_;
};

inline Rational measure_of(const FiniteMeasureSpace &x, PointSet s) {
    require((s & ~x.all()) == 0, ErrorKind::UnknownPoint, "subset mentions unknown points");
    Rational total = 0;
    while (s) {
        total += x.weights()[static_cast<std::size_t>(std::countr_zero(s))];
        s &= s - 1;
    }
    return total;
}

inline Rational measure_of(const FiniteMeasureSpace &x, const std::vector<std::string> &names) {
    return measure_of(x, x.subset(names));
}

/// T^μ_r = {S : μ(S) ≥ r}; restrictions are inclusions.
class ClassicalTruthObject {
  public:
    explicit ClassicalTruthObject(FiniteMeasureSpace x) : x_(std::move(x)) {}

    [[nodiscard]] bool member(PointSet s, const Rational &r) const {
        require(r >= 0 && r <= 1, ErrorKind::OutOfRange, "stage outside [0,1]");
        return measure_of(x_, s) >= r;
    }

    [[nodiscard]] const FiniteMeasureSpace &space() const noexcept { return x_; }

  private:
    FiniteMeasureSpace x_;
};

inline ClassicalTruthObject truth_object_classical(const FiniteMeasureSpace &x) {
    return ClassicalTruthObject(x);
}

/// Membership thresholds worth probing: {0, 1} and every μ(S).
inline std::vector<Rational> classical_breakpoints(const FiniteMeasureSpace &x,
                                                   const std::vector<PointSet> &subsets) {
    std::vector<Rational> grid{Rational(0), Rational(1)};
    for (PointSet s : subsets) {
        grid.push_back(measure_of(x, s));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// ξ^μ(ΔS) = ⟦ΔS ∈ T^μ⟧, built from membership queries alone. Membership is
/// a threshold predicate whose threshold lies on `grid`, so the supremum of
/// admissible r' ≤ r is r itself or the largest admissible grid point.
inline IntervalSection xi_mu(const ClassicalTruthObject &t, PointSet s, std::vector<Rational> grid) {
    require((s & ~t.space().all()) == 0, ErrorKind::UnknownPoint, "subset mentions unknown points");
    return IntervalSection([t, s, grid = std::move(grid)](const Rational &r) -> Rational {
        if (t.member(s, r)) {
            return r;
        }
        Rational best = 0;
        for (const auto &b : grid) {
            if (b < r && t.member(s, b)) {
                best = max(best, b);
            }
        }
        return best;
    });
}

struct DiagramReport {
    bool ok = true;
    std::size_t checks = 0;
    std::string witness;
};

inline constexpr std::size_t kExhaustiveClassicalPoints = 12;

/// ℓ∘μ = ξ^μ∘Δ over all subsets (sampled above twelve points), at every
/// breakpoint stage, plus join preservation of ℓ∘μ on increasing chains.
inline DiagramReport check_classical_diagram(const FiniteMeasureSpace &x, std::uint64_t seed = 0) {
    DiagramReport report;
    std::vector<PointSet> subsets;
    std::mt19937_64 rng(seed);
    if (x.size() <= kExhaustiveClassicalPoints) {
        for (PointSet s = 0; s <= x.all(); ++s) {
            subsets.push_back(s);
        }
    } else {
        for (int i = 0; i < 4096; ++i) {
            subsets.push_back(rng() & x.all());
        }
    }
    const auto grid = classical_breakpoints(x, subsets);
    const auto t = truth_object_classical(x);
    for (PointSet s : subsets) {
        const auto upper = ell_classical(measure_of(x, s));
        const auto lower = xi_mu(t, s, grid);
        for (const auto &r : grid) {
            ++report.checks;
            const auto a = upper.at(r);
            const auto b = lower.at(r);
            bool same = a == b;
            // The sieves must agree as sets of opens, not only in threshold.
            for (const auto &rp : grid) {
                if (rp <= r) {
                    same = same && (a.contains(rp) == t.member(s, rp));
                }
            }
            if (!same && report.ok) {
                report.ok = false;
                report.witness = "subset mask " + std::to_string(s) + " at stage " + to_string(r);
            }
        }
    }

    // Increasing chains: all maximal-length chains for small spaces through
    // every subset pair, random chains otherwise.
    auto check_chain = [&](const std::vector<PointSet> &chain) {
        PointSet uni = 0;
        std::vector<IntervalSection> parts;
        for (PointSet s : chain) {
            uni |= s;
            parts.push_back(ell_classical(measure_of(x, s)));
        }
        const auto lhs = ell_classical(measure_of(x, uni));
        const auto rhs = interval_join(parts);
        for (const auto &r : grid) {
            ++report.checks;
            if (!(lhs.at(r) == rhs.at(r)) && report.ok) {
                report.ok = false;
                report.witness = "chain ending at mask " + std::to_string(uni) + " at stage " +
                                 to_string(r);
            }
        }
    };
    if (x.size() <= 4) {
        // Every strictly increasing chain of subsets.
        std::vector<PointSet> chain;
        auto rec = [&](auto &&self, PointSet last) -> void {
            check_chain(chain);
            for (PointSet s = last + 1; s <= x.all(); ++s) {
                if ((last & ~s) == 0 && s != last) {
                    chain.push_back(s);
                    self(self, s);
                    chain.pop_back();
                }
            }
        };
        for (PointSet s = 0; s <= x.all(); ++s) {
            chain = {s};
            rec(rec, s);
        }
    } else {
        for (int i = 0; i < 2000; ++i) {
            std::vector<PointSet> chain;
            PointSet cur = rng() & x.all();
            const int len = 1 + static_cast<int>(rng() % 6);
            for (int k = 0; k < len; ++k) {
                chain.push_back(cur);
                cur |= rng() & x.all();
            }
            check_chain(chain);
        }
    }
    return report;
}

} // namespace toposprob
