#pragma once

// Contexts (resolutions of the identity standing for commutative subalgebras)
// and the finite poset they generate under coarse-graining.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposprob/error.hpp"
#include "toposprob/linalg.hpp"

namespace toposprob {

inline constexpr std::size_t kDefaultPosetCap = 64;
inline constexpr std::size_t kMaxPosetSize = 64;

using ContextId = std::size_t;
using ContextMask = std::uint64_t;
/// Bit b set means frame block b.
using BlockMask = std::uint32_t;

constexpr ContextMask bit(ContextId v) { return ContextMask{1} << v; }

/// Frame of a commutative algebra: mutually orthogonal nonzero projections
/// summing to the identity, at least two of them.
template <Scalar S> class Context {
  public:
    static Context from_frame(std::vector<Projection<S>> frame, std::string name = {},
                              double eps = kDefaultEpsilon) {
        require(frame.size() >= 2, ErrorKind::TrivialContext,
                "a context needs at least two frame projections");
        const std::size_t dim = frame.front().dim();
        Matrix<S> sum(dim);
        for (std::size_t i = 0; i < frame.size(); ++i) {
            require(frame[i].dim() == dim, ErrorKind::DimensionMismatch, "frame dimensions");
            require(!frame[i].is_zero(eps), ErrorKind::NotAResolution,
                    "frame projection " + std::to_string(i) + " is zero");
            for (std::size_t j = i + 1; j < frame.size(); ++j) {
                require((frame[i].matrix() * frame[j].matrix()).near_zero(eps),
                        ErrorKind::Overlapping,
                        "frame projections " + std::to_string(i) + " and " + std::to_string(j));
            }
            sum = sum + frame[i].matrix();
        }
        require(sum.near(Matrix<S>::identity(dim), eps), ErrorKind::NotAResolution,
                "frame does not sum to the identity");
        return Context(std::move(frame), std::move(name));
    }

    [[nodiscard]] std::size_t dim() const { return frame_.front().dim(); }
    [[nodiscard]] std::size_t blocks() const noexcept { return frame_.size(); }
    [[nodiscard]] const std::vector<Projection<S>> &frame() const noexcept { return frame_; }
    [[nodiscard]] const Projection<S> &block(std::size_t b) const { return frame_.at(b); }
    [[nodiscard]] const std::string &fingerprint() const noexcept { return fingerprint_; }
    [[nodiscard]] const std::string &name() const noexcept { return name_; }

    /// Sum of the selected frame blocks: an element of the projection lattice.
    [[nodiscard]] Projection<S> lattice_element(BlockMask bits) const {
        require(bits < (BlockMask{1} << blocks()), ErrorKind::NotInContext, "block mask");
        Matrix<S> m(dim());
        for (std::size_t b = 0; b < blocks(); ++b) {
            if (bits & (BlockMask{1} << b)) {
                m = m + frame_[b].matrix();
            }
        }
        return Projection<S>::unchecked(std::move(m));
    }

    [[nodiscard]] BlockMask full_mask() const { return (BlockMask{1} << blocks()) - 1; }

  private:
    Context(std::vector<Projection<S>> frame, std::string name)
        : frame_(std::move(frame)), name_(std::move(name)) {
        std::vector<std::string> codes;
        for (const auto &p : frame_) {
            codes.push_back(p.matrix().encode());
        }
        std::sort(codes.begin(), codes.end());
        for (const auto &c : codes) {
            fingerprint_ += c;
            fingerprint_ += '|';
        }
    }

    std::vector<Projection<S>> frame_;
    std::string fingerprint_;
    std::string name_;
};

/// Restricted growth strings of length n, i.e. all set partitions of n items.
inline std::vector<std::vector<std::size_t>> set_partitions(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> rgs(n, 0);
    auto rec = [&](auto &&self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            out.push_back(rgs);
            return;
        }
        for (std::size_t c = 0; c <= used && c < n; ++c) {
            rgs[i] = c;
            self(self, i + 1, std::max(used, c + 1));
        }
    };
    if (n == 0) {
        return {{}};
    }
    rgs[0] = 0;
    rec(rec, 1, 1);
    return out;
}

/// Every context obtained by merging frame blocks, except the context itself
/// and the trivial one-block algebra. Finer results come first.
template <Scalar S> std::vector<Context<S>> coarsenings(const Context<S> &v) {
    const std::size_t k = v.blocks();
    auto parts = set_partitions(k);
    std::erase_if(parts, [&](const auto &rgs) {
        std::size_t groups = *std::max_element(rgs.begin(), rgs.end()) + 1;
        return groups == 1 || groups == k;
    });
    std::stable_sort(parts.begin(), parts.end(), [](const auto &a, const auto &b) {
        auto ga = *std::max_element(a.begin(), a.end());
        auto gb = *std::max_element(b.begin(), b.end());
        if (ga != gb) {
            return ga > gb;
        }
        return a > b;
    });
    std::vector<Context<S>> out;
    for (const auto &rgs : parts) {
        std::size_t groups = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<Projection<S>> frame;
        std::string label;
        for (std::size_t g = 0; g < groups; ++g) {
            BlockMask bits = 0;
            for (std::size_t b = 0; b < k; ++b) {
                if (rgs[b] == g) {
                    bits |= BlockMask{1} << b;
                    label += std::to_string(b + 1);
                }
            }
            if (g + 1 < groups) {
                label += '|';
            }
            frame.push_back(v.lattice_element(bits));
        }
        out.push_back(Context<S>::from_frame(std::move(frame), v.name() + "/" + label));
    }
    return out;
}

/// Combinatorial skeleton of a context poset. Context ids are a linear
/// extension from coarse-graining maxima downwards: V' < V implies id(V) < id(V').
class PosetOrder {
  public:
    struct Node {
        std::string name;
        std::size_t blocks;
    };

    PosetOrder(std::vector<Node> nodes, std::vector<ContextMask> down,
               std::vector<std::vector<std::vector<std::size_t>>> block_map)
        : nodes_(std::move(nodes)), down_(std::move(down)), block_map_(std::move(block_map)) {}

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] const Node &node(ContextId v) const { return nodes_.at(v); }
    [[nodiscard]] std::size_t blocks(ContextId v) const { return nodes_.at(v).blocks; }
    [[nodiscard]] const std::string &name(ContextId v) const { return nodes_.at(v).name; }
    [[nodiscard]] ContextMask all() const {
        return size() == 64 ? ~ContextMask{0} : (ContextMask{1} << size()) - 1;
    }

    /// ↓V, always containing V.
    [[nodiscard]] ContextMask down(ContextId v) const { return down_.at(v); }

    [[nodiscard]] bool leq(ContextId lower, ContextId upper) const {
        return (down_.at(upper) & bit(lower)) != 0;
    }

    /// For lower ≤ upper: index of the block of `lower` containing block b of `upper`.
    [[nodiscard]] std::size_t block_of(ContextId upper, ContextId lower, std::size_t b) const {
        require(leq(lower, upper), ErrorKind::UnknownContext, "block_of needs lower <= upper");
        return block_map_.at(upper).at(lower).at(b);
    }

    [[nodiscard]] ContextId id_of(const std::string &name) const {
        for (ContextId v = 0; v < size(); ++v) {
            if (nodes_[v].name == name) {
                return v;
            }
        }
        fail(ErrorKind::UnknownContext, "no context named '" + name + "'");
    }

    [[nodiscard]] std::vector<ContextId> members(ContextMask mask) const {
        std::vector<ContextId> out;
        for (ContextId v = 0; v < size(); ++v) {
            if (mask & bit(v)) {
                out.push_back(v);
            }
        }
        return out;
    }

    [[nodiscard]] std::vector<ContextId> maximal() const {
        std::vector<ContextId> out;
        for (ContextId v = 0; v < size(); ++v) {
            bool covered = false;
            for (ContextId u = 0; u < size(); ++u) {
                covered = covered || (u != v && leq(v, u));
            }
            if (!covered) {
                out.push_back(v);
            }
        }
        return out;
    }

    friend bool operator==(const PosetOrder &a, const PosetOrder &b) {
        return a.down_ == b.down_ && a.block_map_ == b.block_map_;
    }

  private:
    std::vector<Node> nodes_;
    std::vector<ContextMask> down_;
    std::vector<std::vector<std::vector<std::size_t>>> block_map_;
};

/// Contexts together with their frames. The combinatorial order is shared so
/// that presheaves and sections can refer to it cheaply.
template <Scalar S> class ContextPoset {
  public:
    ContextPoset(std::vector<Context<S>> contexts, std::shared_ptr<const PosetOrder> order)
        : contexts_(std::move(contexts)), order_(std::move(order)) {}

    [[nodiscard]] std::size_t size() const noexcept { return contexts_.size(); }
    [[nodiscard]] std::size_t dim() const { return contexts_.front().dim(); }
    [[nodiscard]] const Context<S> &context(ContextId v) const { return contexts_.at(v); }
    [[nodiscard]] const std::vector<Context<S>> &contexts() const noexcept { return contexts_; }
    [[nodiscard]] const PosetOrder &order() const noexcept { return *order_; }
    [[nodiscard]] std::shared_ptr<const PosetOrder> order_ptr() const noexcept { return order_; }

    [[nodiscard]] ContextId id_of(const Context<S> &v) const {
        for (ContextId i = 0; i < size(); ++i) {
            if (contexts_[i].fingerprint() == v.fingerprint()) {
                return i;
            }
        }
        fail(ErrorKind::UnknownContext, "context '" + v.name() + "' is not in the poset");
    }

  private:
    std::vector<Context<S>> contexts_;
    std::shared_ptr<const PosetOrder> order_;
};

/// Closure of the given contexts under coarse-graining, deduplicated by
/// fingerprint. The order is algebra inclusion: V' ≤ V iff every block of V'
/// is a sum of blocks of V.
template <Scalar S>
ContextPoset<S> build_poset(const std::vector<Context<S>> &maximal,
                            std::size_t cap = kDefaultPosetCap, double eps = kDefaultEpsilon) {
    require(!maximal.empty(), ErrorKind::InvalidArgument, "no contexts given");
    require(cap <= kMaxPosetSize, ErrorKind::PosetTooLarge,
            "poset cap cannot exceed " + std::to_string(kMaxPosetSize));
    const std::size_t dim = maximal.front().dim();
    std::vector<Context<S>> all;
    std::map<std::string, std::size_t> seen;
    auto add = [&](const Context<S> &c) {
        require(c.dim() == dim, ErrorKind::MixedDimensions, "contexts of different dimensions");
        if (seen.emplace(c.fingerprint(), all.size()).second) {
            all.push_back(c);
            require(all.size() <= cap, ErrorKind::PosetTooLarge,
                    "more than " + std::to_string(cap) + " contexts after closure");
        }
    };
    for (const auto &m : maximal) {
        add(m);
    }
    for (const auto &m : maximal) {
        for (const auto &c : coarsenings(m)) {
            add(c);
        }
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const auto &a, const auto &b) { return a.blocks() > b.blocks(); });

    const std::size_t n = all.size();
    std::vector<ContextMask> down(n, 0);
    std::vector<std::vector<std::vector<std::size_t>>> block_map(
        n, std::vector<std::vector<std::size_t>>(n));
    for (ContextId upper = 0; upper < n; ++upper) {
        for (ContextId lower = 0; lower < n; ++lower) {
            const auto &u = all[upper];
            const auto &l = all[lower];
            std::vector<std::size_t> map(u.blocks(), l.blocks());
            bool ok = true;
            for (std::size_t b = 0; b < u.blocks() && ok; ++b) {
                for (std::size_t c = 0; c < l.blocks(); ++c) {
                    if (projector_leq(u.block(b), l.block(c), eps)) {
                        map[b] = c;
                        break;
                    }
                }
                ok = map[b] != l.blocks();
            }
            if (ok) {
                // Each block of the lower context must be exactly the sum of
                // the blocks mapped into it.
                for (std::size_t c = 0; c < l.blocks() && ok; ++c) {
                    BlockMask bits = 0;
                    for (std::size_t b = 0; b < u.blocks(); ++b) {
                        if (map[b] == c) {
                            bits |= BlockMask{1} << b;
                        }
                    }
                    ok = bits != 0 && u.lattice_element(bits).near(l.block(c), eps);
                }
            }
            if (ok) {
                down[upper] |= bit(lower);
                block_map[upper][lower] = std::move(map);
            }
        }
    }
    std::vector<PosetOrder::Node> nodes;
    for (const auto &c : all) {
        nodes.push_back({c.name(), c.blocks()});
    }
    auto order = std::make_shared<const PosetOrder>(std::move(nodes), std::move(down),
                                                    std::move(block_map));
    return ContextPoset<S>(std::move(all), std::move(order));
}

/// ↓V as context ids.
template <Scalar S>
std::vector<ContextId> lower_set(const ContextPoset<S> &poset, const Context<S> &v) {
    return poset.order().members(poset.order().down(poset.id_of(v)));
}

} // namespace toposprob
