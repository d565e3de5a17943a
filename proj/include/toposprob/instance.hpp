#pragma once

// JSON instance files. Rationals are written as "p/q" strings, complex
// entries as [re, im] pairs. JSON floating-point literals are accepted as
// floating entries and force float mode. Serialization is canonical, so
// parse -> serialize is stable and serialize -> parse -> serialize is the
// identity.

#include <complex>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "toposprob/contextlab.hpp"
#include "toposprob/error.hpp"
#include "toposprob/interval.hpp"
#include "toposprob/linalg.hpp"
#include "toposprob/rational.hpp"
#include "toposprob/spectral.hpp"
#include "toposprob/states.hpp"

namespace toposprob {

using Json = nlohmann::ordered_json;

inline constexpr const char *kInstanceFormat = "toposprob-instance/1";

/// One matrix or vector entry. `literal` holds the value of a JSON floating
/// literal; `value` is its exact decimal expansion.
struct Entry {
    ComplexQ value;
    std::optional<std::complex<double>> literal;

    friend bool operator==(const Entry &a, const Entry &b) {
        return a.value == b.value && a.literal == b.literal;
    }
};

using EntryVector = std::vector<Entry>;
using EntryMatrix = std::vector<EntryVector>;

struct BlockSpec {
    /// Spanning vectors (mutually orthogonal), or an explicit projection.
    std::vector<EntryVector> vectors;
    std::optional<EntryMatrix> projection;

    friend bool operator==(const BlockSpec &, const BlockSpec &) = default;
};

struct ContextSpec {
    std::string name;
    std::vector<BlockSpec> blocks;

    friend bool operator==(const ContextSpec &, const ContextSpec &) = default;
};

struct MixtureComponentSpec {
    EntryVector vector;
    Rational weight;

    friend bool operator==(const MixtureComponentSpec &, const MixtureComponentSpec &) = default;
};

struct StateSpec {
    enum class Kind { density, vector, mixture };
    std::string name;
    Kind kind = Kind::density;
    EntryMatrix density;
    EntryVector vector;
    std::vector<MixtureComponentSpec> mixture;

    friend bool operator==(const StateSpec &, const StateSpec &) = default;
};

struct PropositionSpec {
    enum class Kind { projection, vectors, observable };
    std::string name;
    Kind kind = Kind::projection;
    EntryMatrix matrix; // projection or observable
    std::vector<EntryVector> vectors;
    BorelSet set;

    friend bool operator==(const PropositionSpec &a, const PropositionSpec &b) {
        auto same_set = [](const BorelSet &x, const BorelSet &y) {
            if (x.pieces.size() != y.pieces.size()) {
                return false;
            }
            for (std::size_t i = 0; i < x.pieces.size(); ++i) {
                const auto &p = x.pieces[i];
                const auto &q = y.pieces[i];
                if (p.lo != q.lo || p.hi != q.hi || p.lo_closed != q.lo_closed ||
                    p.hi_closed != q.hi_closed) {
                    return false;
                }
            }
            return true;
        };
        return a.name == b.name && a.kind == b.kind && a.matrix == b.matrix &&
               a.vectors == b.vectors && same_set(a.set, b.set);
    }
};

struct MeasureSpaceSpec {
    std::string name;
    std::vector<std::string> points;
    std::vector<Rational> weights;

    friend bool operator==(const MeasureSpaceSpec &, const MeasureSpaceSpec &) = default;
};

struct Instance {
    std::string name;
    std::string description;
    std::size_t dimension = 0;
    ArithmeticMode mode = ArithmeticMode::exact;
    std::vector<ContextSpec> contexts;
    std::vector<StateSpec> states;
    std::vector<PropositionSpec> propositions;
    std::vector<MeasureSpaceSpec> measure_spaces;

    friend bool operator==(const Instance &, const Instance &) = default;

    [[nodiscard]] bool has_float_literals() const;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string &where, const std::string &what) {
    fail(ErrorKind::ParseError, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

inline Rational json_rational(const Json &j, const std::string &where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error &e) {
            parse_fail(where, e.detail());
        }
    }
    if (j.is_number_integer()) {
        return Rational(j.dump());
    }
    parse_fail(where, "expected a rational as a \"p/q\" string or an integer");
}

/// A real part or imaginary part: rational, or a floating literal.
inline std::pair<Rational, std::optional<double>> json_real(const Json &j, const std::string &where) {
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (!std::isfinite(d)) {
            parse_fail(where, "non-finite number");
        }
        return {parse_rational(Json(d).dump()), d};
    }
    return {json_rational(j, where), std::nullopt};
}

inline Entry json_entry(const Json &j, const std::string &where) {
    if (j.is_array()) {
        if (j.size() != 2) {
            parse_fail(where, "complex entries are [re, im] pairs");
        }
        auto [re, fre] = json_real(j[0], where + "/0");
        auto [im, fim] = json_real(j[1], where + "/1");
        Entry e{ComplexQ(re, im), std::nullopt};
        if (fre || fim) {
            e.literal = std::complex<double>(fre.value_or(re.get_d()), fim.value_or(im.get_d()));
        }
        return e;
    }
    auto [re, fre] = json_real(j, where);
    Entry e{ComplexQ(re), std::nullopt};
    if (fre) {
        e.literal = std::complex<double>(*fre, 0.0);
    }
    return e;
}

inline EntryVector json_vector(const Json &j, const std::string &where, std::size_t dim) {
    if (!j.is_array()) {
        parse_fail(where, "expected a vector");
    }
    if (j.size() != dim) {
        parse_fail(where, "vector length " + std::to_string(j.size()) + " does not match dimension " +
                              std::to_string(dim));
    }
    EntryVector out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(json_entry(j[i], where + "/" + std::to_string(i)));
    }
    return out;
}

inline EntryMatrix json_matrix(const Json &j, const std::string &where, std::size_t dim) {
    if (!j.is_array() || j.size() != dim) {
        parse_fail(where, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    }
    EntryMatrix out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(json_vector(j[i], where + "/" + std::to_string(i), dim));
    }
    return out;
}

inline std::vector<EntryVector> json_vectors(const Json &j, const std::string &where,
                                             std::size_t dim) {
    if (!j.is_array() || j.empty()) {
        parse_fail(where, "expected a nonempty list of vectors");
    }
    std::vector<EntryVector> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(json_vector(j[i], where + "/" + std::to_string(i), dim));
    }
    return out;
}

inline void check_keys(const Json &j, const std::string &where,
                       std::initializer_list<const char *> allowed) {
    if (!j.is_object()) {
        parse_fail(where, "expected an object");
    }
    for (const auto &[key, value] : j.items()) {
        bool ok = false;
        for (const char *a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            parse_fail(where, "unknown key '" + key + "'");
        }
    }
}

inline const Json &required(const Json &j, const std::string &where, const char *key) {
    if (!j.contains(key)) {
        parse_fail(where, std::string("missing key '") + key + "'");
    }
    return j.at(key);
}

inline std::string json_name(const Json &j, const std::string &where) {
    const Json &n = required(j, where, "name");
    if (!n.is_string() || n.get<std::string>().empty()) {
        parse_fail(where + "/name", "expected a nonempty string");
    }
    return n.get<std::string>();
}

inline Json entry_json(const Entry &e) {
    auto part = [](const Rational &q, std::optional<double> lit) -> Json {
        if (lit) {
            return Json(*lit);
        }
        return Json(to_string(q));
    };
    const std::optional<double> lre = e.literal ? std::optional<double>(e.literal->real()) : std::nullopt;
    const std::optional<double> lim = e.literal ? std::optional<double>(e.literal->imag()) : std::nullopt;
    const bool complex_valued = e.value.im != 0 || (lim && *lim != 0.0);
    if (!complex_valued) {
        return part(e.value.re, lre);
    }
    return Json::array({part(e.value.re, lre), part(e.value.im, lim)});
}

inline Json vector_json(const EntryVector &v) {
    Json out = Json::array();
    for (const auto &e : v) {
        out.push_back(entry_json(e));
    }
    return out;
}

inline Json matrix_json(const EntryMatrix &m) {
    Json out = Json::array();
    for (const auto &row : m) {
        out.push_back(vector_json(row));
    }
    return out;
}

inline Json vectors_json(const std::vector<EntryVector> &vs) {
    Json out = Json::array();
    for (const auto &v : vs) {
        out.push_back(vector_json(v));
    }
    return out;
}

inline bool any_literal(const EntryVector &v) {
    return std::any_of(v.begin(), v.end(), [](const Entry &e) { return e.literal.has_value(); });
}

inline bool any_literal(const EntryMatrix &m) {
    return std::any_of(m.begin(), m.end(), [](const EntryVector &v) { return any_literal(v); });
}

/// 1-based line and column of a byte offset.
inline std::string locate(const std::string &text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

inline bool Instance::has_float_literals() const {
    for (const auto &c : contexts) {
        for (const auto &b : c.blocks) {
            if ((b.projection && detail::any_literal(*b.projection)) ||
                std::any_of(b.vectors.begin(), b.vectors.end(),
                            [](const EntryVector &v) { return detail::any_literal(v); })) {
                return true;
            }
        }
    }
    for (const auto &s : states) {
        if (detail::any_literal(s.density) || detail::any_literal(s.vector)) {
            return true;
        }
        for (const auto &m : s.mixture) {
            if (detail::any_literal(m.vector)) {
                return true;
            }
        }
    }
    for (const auto &p : propositions) {
        if (detail::any_literal(p.matrix)) {
            return true;
        }
        for (const auto &v : p.vectors) {
            if (detail::any_literal(v)) {
                return true;
            }
        }
    }
    return false;
}

inline Instance instance_from_json(const Json &j) {
    using namespace detail;
    check_keys(j, "", {"format", "name", "description", "dimension", "mode", "contexts", "states",
                       "propositions", "measure_spaces"});
    const Json &fmt = required(j, "", "format");
    if (!fmt.is_string() || fmt.get<std::string>() != kInstanceFormat) {
        parse_fail("/format", std::string("expected \"") + kInstanceFormat + "\"");
    }
    Instance inst;
    inst.name = json_name(j, "");
    if (j.contains("description")) {
        if (!j["description"].is_string()) {
            parse_fail("/description", "expected a string");
        }
        inst.description = j["description"].get<std::string>();
    }
    const Json &mode = required(j, "", "mode");
    if (mode == "exact") {
        inst.mode = ArithmeticMode::exact;
    } else if (mode == "float") {
        inst.mode = ArithmeticMode::floating;
    } else {
        parse_fail("/mode", "expected \"exact\" or \"float\"");
    }
    if (j.contains("dimension")) {
        const Json &d = j["dimension"];
        if (!d.is_number_unsigned() || d.get<std::size_t>() < 1 ||
            d.get<std::size_t>() > kMaxDimension) {
            parse_fail("/dimension", "expected an integer between 1 and " +
                                         std::to_string(kMaxDimension));
        }
        inst.dimension = d.get<std::size_t>();
    }
    const bool quantum = j.contains("contexts") || j.contains("states") || j.contains("propositions");
    if (quantum && inst.dimension == 0) {
        parse_fail("", "contexts, states and propositions need a dimension");
    }
    const std::size_t dim = inst.dimension;

    auto list = [&](const char *key) -> const Json & {
        static const Json empty = Json::array();
        if (!j.contains(key)) {
            return empty;
        }
        if (!j[key].is_array()) {
            parse_fail(std::string("/") + key, "expected a list");
        }
        return j[key];
    };
    auto unique_name = [](auto &items, const std::string &where) {
        for (std::size_t a = 0; a < items.size(); ++a) {
            for (std::size_t b = a + 1; b < items.size(); ++b) {
                if (items[a].name == items[b].name) {
                    parse_fail(where, "duplicate name '" + items[a].name + "'");
                }
            }
        }
    };

    const Json &contexts = list("contexts");
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const std::string where = "/contexts/" + std::to_string(i);
        check_keys(contexts[i], where, {"name", "blocks"});
        ContextSpec c{json_name(contexts[i], where), {}};
        const Json &blocks = required(contexts[i], where, "blocks");
        if (!blocks.is_array()) {
            parse_fail(where + "/blocks", "expected a list");
        }
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const std::string bw = where + "/blocks/" + std::to_string(b);
            check_keys(blocks[b], bw, {"span", "projection"});
            BlockSpec spec;
            if (blocks[b].contains("span") == blocks[b].contains("projection")) {
                parse_fail(bw, "a block has exactly one of 'span' or 'projection'");
            }
            if (blocks[b].contains("span")) {
                spec.vectors = json_vectors(blocks[b]["span"], bw + "/span", dim);
            } else {
                spec.projection = json_matrix(blocks[b]["projection"], bw + "/projection", dim);
            }
            c.blocks.push_back(std::move(spec));
        }
        inst.contexts.push_back(std::move(c));
    }
    unique_name(inst.contexts, "/contexts");

    const Json &states = list("states");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string where = "/states/" + std::to_string(i);
        check_keys(states[i], where, {"name", "density", "vector", "mixture"});
        StateSpec s;
        s.name = json_name(states[i], where);
        const int kinds = int(states[i].contains("density")) + int(states[i].contains("vector")) +
                          int(states[i].contains("mixture"));
        if (kinds != 1) {
            parse_fail(where, "a state has exactly one of 'density', 'vector' or 'mixture'");
        }
        if (states[i].contains("density")) {
            s.kind = StateSpec::Kind::density;
            s.density = json_matrix(states[i]["density"], where + "/density", dim);
        } else if (states[i].contains("vector")) {
            s.kind = StateSpec::Kind::vector;
            s.vector = json_vector(states[i]["vector"], where + "/vector", dim);
        } else {
            s.kind = StateSpec::Kind::mixture;
            const Json &m = states[i]["mixture"];
            if (!m.is_array() || m.empty()) {
                parse_fail(where + "/mixture", "expected a nonempty list");
            }
            for (std::size_t k = 0; k < m.size(); ++k) {
                const std::string mw = where + "/mixture/" + std::to_string(k);
                check_keys(m[k], mw, {"vector", "weight"});
                s.mixture.push_back({json_vector(required(m[k], mw, "vector"), mw + "/vector", dim),
                                     json_rational(required(m[k], mw, "weight"), mw + "/weight")});
            }
        }
        inst.states.push_back(std::move(s));
    }
    unique_name(inst.states, "/states");

    const Json &props = list("propositions");
    for (std::size_t i = 0; i < props.size(); ++i) {
        const std::string where = "/propositions/" + std::to_string(i);
        check_keys(props[i], where, {"name", "projection", "span", "observable", "set"});
        PropositionSpec p;
        p.name = json_name(props[i], where);
        const int kinds = int(props[i].contains("projection")) + int(props[i].contains("span")) +
                          int(props[i].contains("observable"));
        if (kinds != 1) {
            parse_fail(where, "a proposition has exactly one of 'projection', 'span' or 'observable'");
        }
        if (props[i].contains("set") != props[i].contains("observable")) {
            parse_fail(where, "'set' goes with 'observable'");
        }
        if (props[i].contains("projection")) {
            p.kind = PropositionSpec::Kind::projection;
            p.matrix = json_matrix(props[i]["projection"], where + "/projection", dim);
        } else if (props[i].contains("span")) {
            p.kind = PropositionSpec::Kind::vectors;
            p.vectors = json_vectors(props[i]["span"], where + "/span", dim);
        } else {
            p.kind = PropositionSpec::Kind::observable;
            p.matrix = json_matrix(props[i]["observable"], where + "/observable", dim);
            const Json &set = props[i]["set"];
            if (!set.is_array()) {
                parse_fail(where + "/set", "expected a list of intervals");
            }
            for (std::size_t k = 0; k < set.size(); ++k) {
                const std::string sw = where + "/set/" + std::to_string(k);
                check_keys(set[k], sw, {"lo", "hi", "lo_closed", "hi_closed"});
                Interval iv;
                if (set[k].contains("lo")) {
                    iv.lo = json_rational(set[k]["lo"], sw + "/lo");
                }
                if (set[k].contains("hi")) {
                    iv.hi = json_rational(set[k]["hi"], sw + "/hi");
                }
                for (const char *flag : {"lo_closed", "hi_closed"}) {
                    if (set[k].contains(flag)) {
                        if (!set[k][flag].is_boolean()) {
                            parse_fail(sw + "/" + flag, "expected a boolean");
                        }
                        (std::string(flag) == "lo_closed" ? iv.lo_closed : iv.hi_closed) =
                            set[k][flag].get<bool>();
                    }
                }
                p.set.pieces.push_back(iv);
            }
            try {
                p.set.validate();
            } catch (const Error &e) {
                parse_fail(where + "/set", e.detail());
            }
        }
        inst.propositions.push_back(std::move(p));
    }
    unique_name(inst.propositions, "/propositions");

    const Json &spaces = list("measure_spaces");
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        const std::string where = "/measure_spaces/" + std::to_string(i);
        check_keys(spaces[i], where, {"name", "points", "weights"});
        MeasureSpaceSpec m;
        m.name = json_name(spaces[i], where);
        const Json &pts = required(spaces[i], where, "points");
        const Json &ws = required(spaces[i], where, "weights");
        if (!pts.is_array() || !ws.is_array() || pts.size() != ws.size()) {
            parse_fail(where, "'points' and 'weights' are lists of equal length");
        }
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (!pts[k].is_string()) {
                parse_fail(where + "/points/" + std::to_string(k), "expected a string");
            }
            m.points.push_back(pts[k].get<std::string>());
            m.weights.push_back(json_rational(ws[k], where + "/weights/" + std::to_string(k)));
        }
        inst.measure_spaces.push_back(std::move(m));
    }
    unique_name(inst.measure_spaces, "/measure_spaces");

    if (inst.has_float_literals() && inst.mode == ArithmeticMode::exact) {
        fail(ErrorKind::ModeMismatch, "instance has floating literals but declares exact mode");
    }
    if (!inst.has_float_literals() && inst.mode == ArithmeticMode::floating) {
        fail(ErrorKind::ModeMismatch,
             "instance entries are all rational, so exact mode is required");
    }
    return inst;
}

/// Parses instance text; syntax errors carry line and column.
inline Instance parse_instance(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &e) {
        fail(ErrorKind::ParseError,
             detail::locate(text, e.byte) + ": " + std::string(e.what()));
    }
    return instance_from_json(j);
}

inline Json instance_to_json(const Instance &inst) {
    using namespace detail;
    Json j;
    j["format"] = kInstanceFormat;
    j["name"] = inst.name;
    if (!inst.description.empty()) {
        j["description"] = inst.description;
    }
    if (inst.dimension != 0) {
        j["dimension"] = inst.dimension;
    }
    j["mode"] = std::string(to_string(inst.mode));
    if (!inst.contexts.empty()) {
        Json cs = Json::array();
        for (const auto &c : inst.contexts) {
            Json blocks = Json::array();
            for (const auto &b : c.blocks) {
                Json bj;
                if (b.projection) {
                    bj["projection"] = matrix_json(*b.projection);
                } else {
                    bj["span"] = vectors_json(b.vectors);
                }
                blocks.push_back(bj);
            }
            Json cj;
            cj["name"] = c.name;
            cj["blocks"] = blocks;
            cs.push_back(cj);
        }
        j["contexts"] = cs;
    }
    if (!inst.states.empty()) {
        Json ss = Json::array();
        for (const auto &s : inst.states) {
            Json sj;
            sj["name"] = s.name;
            switch (s.kind) {
            case StateSpec::Kind::density: sj["density"] = matrix_json(s.density); break;
            case StateSpec::Kind::vector: sj["vector"] = vector_json(s.vector); break;
            case StateSpec::Kind::mixture: {
                Json m = Json::array();
                for (const auto &c : s.mixture) {
                    Json cj;
                    cj["vector"] = vector_json(c.vector);
                    cj["weight"] = to_string(c.weight);
                    m.push_back(cj);
                }
                sj["mixture"] = m;
                break;
            }
            }
            ss.push_back(sj);
        }
        j["states"] = ss;
    }
    if (!inst.propositions.empty()) {
        Json ps = Json::array();
        for (const auto &p : inst.propositions) {
            Json pj;
            pj["name"] = p.name;
            switch (p.kind) {
            case PropositionSpec::Kind::projection: pj["projection"] = matrix_json(p.matrix); break;
            case PropositionSpec::Kind::vectors: pj["span"] = vectors_json(p.vectors); break;
            case PropositionSpec::Kind::observable: {
                pj["observable"] = matrix_json(p.matrix);
                Json set = Json::array();
                for (const auto &iv : p.set.pieces) {
                    Json ij;
                    if (iv.lo) {
                        ij["lo"] = to_string(*iv.lo);
                    }
                    if (iv.hi) {
                        ij["hi"] = to_string(*iv.hi);
                    }
                    ij["lo_closed"] = iv.lo_closed;
                    ij["hi_closed"] = iv.hi_closed;
                    set.push_back(ij);
                }
                pj["set"] = set;
                break;
            }
            }
            ps.push_back(pj);
        }
        j["propositions"] = ps;
    }
    if (!inst.measure_spaces.empty()) {
        Json ms = Json::array();
        for (const auto &m : inst.measure_spaces) {
            Json mj;
            mj["name"] = m.name;
            mj["points"] = m.points;
            Json ws = Json::array();
            for (const auto &w : m.weights) {
                ws.push_back(to_string(w));
            }
            mj["weights"] = ws;
            ms.push_back(mj);
        }
        j["measure_spaces"] = ms;
    }
    return j;
}

namespace detail {

inline bool has_object(const Json &j) {
    if (j.is_object()) {
        return true;
    }
    if (j.is_array()) {
        return std::any_of(j.begin(), j.end(), [](const Json &e) { return has_object(e); });
    }
    return false;
}

inline void pretty(const Json &j, std::string &out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t i = 0;
        for (const auto &[key, value] : j.items()) {
            out += pad + Json(key).dump() + ": ";
            pretty(value, out, depth + 1);
            out += ++i < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
    } else if (j.is_array() && has_object(j)) {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad;
            pretty(j[i], out, depth + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
    } else {
        out += j.dump(-1, ' ', false, Json::error_handler_t::strict);
    }
}

} // namespace detail

/// Objects one key per line; arrays without objects inside on one line.
inline std::string pretty_json(const Json &j) {
    std::string out;
    detail::pretty(j, out, 0);
    return out + "\n";
}

inline std::string serialize_instance(const Instance &inst) {
    return pretty_json(instance_to_json(inst));
}

/// An instance turned into library values for scalar type S.
template <Scalar S> class Materialized {
  public:
    Materialized(const Instance &inst, double eps = kDefaultEpsilon,
                 std::size_t poset_cap = kDefaultPosetCap)
        : inst_(inst), eps_(eps) {
        require(scalar_traits<S>::mode == inst.mode, ErrorKind::ModeMismatch,
                "instance mode is " + std::string(to_string(inst.mode)));
        std::vector<Context<S>> contexts;
        for (std::size_t i = 0; i < inst.contexts.size(); ++i) {
            const auto &c = inst.contexts[i];
            contexts.push_back(located("/contexts/" + std::to_string(i), [&] {
                std::vector<Projection<S>> frame;
                for (const auto &b : c.blocks) {
                    frame.push_back(b.projection
                                        ? Projection<S>::from_matrix(matrix(*b.projection), eps_)
                                        : projector_from_vectors<S>(vectors(b.vectors), eps_));
                }
                return Context<S>::from_frame(std::move(frame), c.name, eps_);
            }));
        }
        if (!contexts.empty()) {
            poset_.emplace(build_poset(contexts, poset_cap, eps_));
        }
    }

    [[nodiscard]] const Instance &instance() const noexcept { return inst_; }
    [[nodiscard]] double epsilon() const noexcept { return eps_; }
    [[nodiscard]] bool has_poset() const noexcept { return poset_.has_value(); }

    [[nodiscard]] const ContextPoset<S> &poset() const {
        require(poset_.has_value(), ErrorKind::UnknownReference, "instance declares no contexts");
        return *poset_;
    }

    [[nodiscard]] ContextId context(const std::string &name) const {
        const auto &o = poset().order();
        for (ContextId v = 0; v < o.size(); ++v) {
            if (o.name(v) == name) {
                return v;
            }
        }
        fail(ErrorKind::UnknownReference, "no context named '" + name + "'");
    }

    [[nodiscard]] const StateSpec &state_spec(const std::string &name) const {
        for (const auto &s : inst_.states) {
            if (s.name == name) {
                return s;
            }
        }
        fail(ErrorKind::UnknownReference, "no state named '" + name + "'");
    }

    [[nodiscard]] DensityMatrix<S> state(const std::string &name) const {
        const auto &s = state_spec(name);
        return located("state '" + name + "'", [&] {
            switch (s.kind) {
            case StateSpec::Kind::density: return DensityMatrix<S>::from_matrix(matrix(s.density), eps_);
            case StateSpec::Kind::vector: return PureState<S>::from_vector(vec(s.vector), eps_).density(eps_);
            case StateSpec::Kind::mixture: {
                MixtureSpec<S> m;
                for (const auto &c : s.mixture) {
                    m.components.emplace_back(PureState<S>::from_vector(vec(c.vector), eps_), c.weight);
                }
                return density_from_mixture(m, eps_);
            }
            }
            fail(ErrorKind::InvalidArgument, "unknown state kind");
        });
    }

    [[nodiscard]] bool is_pure(const std::string &name) const {
        return state_spec(name).kind == StateSpec::Kind::vector;
    }

    [[nodiscard]] PureState<S> pure_state(const std::string &name) const {
        const auto &s = state_spec(name);
        require(s.kind == StateSpec::Kind::vector, ErrorKind::InvalidArgument,
                "state '" + name + "' is not given by a vector");
        return located("state '" + name + "'",
                       [&] { return PureState<S>::from_vector(vec(s.vector), eps_); });
    }

    [[nodiscard]] Projection<S> proposition(const std::string &name) const {
        for (const auto &p : inst_.propositions) {
            if (p.name != name) {
                continue;
            }
            return located("proposition '" + name + "'", [&] {
                switch (p.kind) {
                case PropositionSpec::Kind::projection: return Projection<S>::from_matrix(matrix(p.matrix), eps_);
                case PropositionSpec::Kind::vectors: return projector_from_vectors<S>(vectors(p.vectors), eps_);
                case PropositionSpec::Kind::observable: return spectral_projector(matrix(p.matrix), p.set, eps_);
                }
                fail(ErrorKind::InvalidArgument, "unknown proposition kind");
            });
        }
        fail(ErrorKind::UnknownReference, "no proposition named '" + name + "'");
    }

    [[nodiscard]] FiniteMeasureSpace measure_space(const std::string &name) const {
        for (const auto &m : inst_.measure_spaces) {
            if (m.name == name) {
                return located("measure space '" + name + "'",
                               [&] { return FiniteMeasureSpace(m.points, m.weights); });
            }
        }
        fail(ErrorKind::UnknownReference, "no measure space named '" + name + "'");
    }

  private:
    template <class F> static auto located(const std::string &where, F &&f) -> decltype(f()) {
        try {
            return f();
        } catch (const Error &e) {
            fail(e.kind(), where + ": " + e.detail());
        }
    }

    static S scalar(const Entry &e) {
        if constexpr (is_exact_v<S>) {
            return e.value;
        } else {
            if (e.literal) {
                return *e.literal;
            }
            return {e.value.re.get_d(), e.value.im.get_d()};
        }
    }
    static Vec<S> vec(const EntryVector &v) {
        Vec<S> out;
        for (const auto &e : v) {
            out.push_back(scalar(e));
        }
        return out;
    }
    static std::vector<Vec<S>> vectors(const std::vector<EntryVector> &vs) {
        std::vector<Vec<S>> out;
        for (const auto &v : vs) {
            out.push_back(vec(v));
        }
        return out;
    }
    static Matrix<S> matrix(const EntryMatrix &m) {
        std::vector<std::vector<S>> rows;
        for (const auto &r : m) {
            rows.push_back(vec(r));
        }
        return Matrix<S>::from_rows(rows);
    }

    Instance inst_;
    double eps_;
    std::optional<ContextPoset<S>> poset_;
};

} // namespace toposprob
