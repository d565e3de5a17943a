#pragma once

// JSON encodings of library values for reports. Contexts are referred to by
// id; a report carries the id -> name legend separately.

#include <cstdio>
#include <string>
#include <vector>

#include "toposprob/instance.hpp"
#include "toposprob/measures.hpp"
#include "toposprob/producttopos.hpp"
#include "toposprob/sheafcore.hpp"
#include "toposprob/spectral.hpp"

namespace toposprob::report {

inline Json ids(const PosetOrder &order, ContextMask mask) {
    Json out = Json::array();
    for (ContextId v : order.members(mask)) {
        out.push_back(v);
    }
    return out;
}

inline Json blocks(std::uint64_t mask) {
    Json out = Json::array();
    for (std::size_t b = 0; mask; ++b, mask >>= 1) {
        if (mask & 1) {
            out.push_back(b);
        }
    }
    return out;
}

inline Json legend(const PosetOrder &order) {
    Json out = Json::array();
    for (ContextId v = 0; v < order.size(); ++v) {
        Json c;
        c["id"] = v;
        c["name"] = order.name(v);
        c["blocks"] = order.blocks(v);
        out.push_back(c);
    }
    return out;
}

inline Json section(const PosetOrder &order, const GlobalSieveSection &s) {
    Json out = Json::array();
    for (ContextId v = 0; v < s.at.size(); ++v) {
        Json e;
        e["stage"] = v;
        e["sieve"] = ids(order, s.at[v]);
        out.push_back(e);
    }
    return out;
}

inline Json gamma(const GammaSection &g) {
    Json out = Json::array();
    for (ContextId v = 0; v < g.values.size(); ++v) {
        Json e;
        e["context"] = v;
        e["value"] = to_string(g.values[v]);
        out.push_back(e);
    }
    return out;
}

inline Json clopen(const PosetOrder &order, const ClopenSubobject &s) {
    Json out = Json::array();
    for (ContextId v : order.members(s.sub.domain)) {
        Json e;
        e["context"] = v;
        e["characters"] = blocks(s.sub.parts[v]);
        out.push_back(e);
    }
    return out;
}

inline Json stage(const ProductStage &st) {
    Json out;
    out["context"] = st.context;
    out["r"] = to_string(st.r);
    return out;
}

inline Json product_sieve(const PosetOrder &order, const ProductSieve &s) {
    Json out;
    out["stage"] = stage(s.stage);
    Json t = Json::array();
    for (ContextId v : order.members(s.domain)) {
        Json e;
        e["context"] = v;
        e["tau"] = to_string(s.thresholds[v]);
        e["empty"] = s.thresholds[v] == 0;
        t.push_back(e);
    }
    out["thresholds"] = t;
    return out;
}

inline Json rationals(const std::vector<Rational> &values) {
    Json out = Json::array();
    for (const auto &q : values) {
        out.push_back(to_string(q));
    }
    return out;
}

/// Matrix entries: "p/q" or [re, im] in exact mode, twelve significant
/// digits in float mode.
template <Scalar S> Json matrix(const Matrix<S> &m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            const auto &x = m(i, j);
            if constexpr (is_exact_v<S>) {
                if (x.im == 0) {
                    row.push_back(to_string(x.re));
                } else {
                    row.push_back(Json::array({to_string(x.re), to_string(x.im)}));
                }
            } else {
                auto fmt = [](double d) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.12g", d == 0.0 ? 0.0 : d);
                    return std::string(buf);
                };
                if (std::abs(x.imag()) < 1e-15) {
                    row.push_back(fmt(x.real()));
                } else {
                    row.push_back(Json::array({fmt(x.real()), fmt(x.imag())}));
                }
            }
        }
        out.push_back(row);
    }
    return out;
}

/// Indented plain-text rendering of a report.
inline void human(const Json &j, std::string &out, int depth = 0) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    auto scalar = [](const Json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto flat = [&](const Json &v) {
        if (!v.is_array()) {
            return false;
        }
        return std::all_of(v.begin(), v.end(), [](const Json &e) {
            return e.is_primitive() || (e.is_array() && std::all_of(e.begin(), e.end(),
                                                                    [](const Json &x) { return x.is_primitive(); }));
        });
    };
    auto line = [&](const Json &v) {
        if (v.is_primitive()) {
            return scalar(v);
        }
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? ", " : "") + (v[i].is_primitive() ? scalar(v[i]) : v[i].dump());
        }
        return s + "]";
    };
    if (j.is_object()) {
        for (const auto &[key, value] : j.items()) {
            if (value.is_primitive() || flat(value)) {
                out += pad + key + ": " + line(value) + "\n";
            } else {
                out += pad + key + ":\n";
                human(value, out, depth + 1);
            }
        }
    } else if (j.is_array()) {
        for (const auto &e : j) {
            if (e.is_object()) {
                // One-line summary when every field is short.
                bool compact = std::all_of(e.begin(), e.end(),
                                           [&](const Json &x) { return x.is_primitive() || flat(x); });
                if (compact) {
                    std::string s;
                    for (const auto &[key, value] : e.items()) {
                        s += (s.empty() ? "" : "  ") + key + "=" + line(value);
                    }
                    out += pad + "- " + s + "\n";
                } else {
                    out += pad + "-\n";
                    human(e, out, depth + 1);
                }
            } else if (e.is_primitive() || flat(e)) {
                out += pad + "- " + line(e) + "\n";
            } else {
                human(e, out, depth + 1);
            }
        }
    } else {
        out += pad + scalar(j) + "\n";
    }
}

inline std::string human(const Json &j) {
    std::string out;
    human(j, out, 0);
    return out;
}

} // namespace toposprob::report
