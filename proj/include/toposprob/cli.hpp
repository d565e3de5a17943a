#pragma once

// Command-line front end: compute, verify, list-fixtures, dump-poset.
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 scale error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "toposprob/fixtures.hpp"
#include "toposprob/instance.hpp"
#include "toposprob/interval.hpp"
#include "toposprob/measures.hpp"
#include "toposprob/producttopos.hpp"
#include "toposprob/report.hpp"
#include "toposprob/truthobjects.hpp"

namespace toposprob::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kScale = 3 };

inline int exit_code_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::PosetTooLarge:
    case ErrorKind::EnumerationTooLarge:
    case ErrorKind::TooLarge: return kScale;
    default: return kUsage;
    }
}

struct Options {
    std::string instance_path;
    std::string fixture_name;
    std::string mode;
    double epsilon = kDefaultEpsilon;
    std::size_t cap_poset = kDefaultPosetCap;
    std::size_t cap_enum = kDefaultEnumerationCap;
    std::uint64_t seed = 0;
    bool allow_r_zero = false;
    std::string format = "human";
    bool timings = false;

    std::string query;
    std::string state;
    std::string state2;
    std::string proposition;
    std::string r;
    std::string context;
    std::string space;
    std::string subset;

    std::string suite = "all";
    std::string dump_dir;
};

inline Instance load_instance(const Options &o) {
    std::string text;
    if (!o.fixture_name.empty()) {
        text = std::string(fixture(o.fixture_name).text);
    } else {
        std::ifstream f(o.instance_path);
        require(f.good(), ErrorKind::ParseError, "cannot read '" + o.instance_path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    Instance inst = parse_instance(text);
    if (!o.mode.empty()) {
        require(o.mode == std::string(to_string(inst.mode)), ErrorKind::ModeMismatch,
                "--mode " + o.mode + " requested but the instance is " +
                    std::string(to_string(inst.mode)));
    }
    return inst;
}

/// Accumulates named checks with verdicts.
class CheckList {
  public:
    explicit CheckList(bool timings) : timings_(timings) {}

    template <class F> void run(const std::string &name, F &&body) {
        const auto start = std::chrono::steady_clock::now();
        Json details = Json::object();
        bool pass = body(details);
        Json c;
        c["name"] = name;
        c["pass"] = pass;
        if (!details.empty()) {
            c["details"] = details;
        }
        if (timings_) {
            c["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
        }
        all_pass_ = all_pass_ && pass;
        checks_.push_back(std::move(c));
    }

    [[nodiscard]] bool all_pass() const noexcept { return all_pass_; }
    [[nodiscard]] const Json &json() const noexcept { return checks_; }

  private:
    bool timings_;
    bool all_pass_ = true;
    Json checks_ = Json::array();
};

inline std::vector<Rational> tenths() {
    std::vector<Rational> out;
    for (int k = 1; k <= 10; ++k) {
        out.emplace_back(k, 10);
    }
    return out;
}

template <Scalar S> class Runner {
  public:
    Runner(const Instance &inst, const Options &o)
        : m_(inst, o.epsilon, o.cap_poset), o_(o) {}

    Json header(const std::string &command) const {
        Json j;
        j["tool"] = "toposprob";
        j["command"] = command;
        j["instance"] = m_.instance().name;
        j["mode"] = std::string(to_string(m_.instance().mode));
        if (m_.has_poset()) {
            j["contexts"] = report::legend(m_.poset().order());
        }
        return j;
    }

    Json dump_poset() const {
        Json j = header("dump-poset");
        const auto &poset = m_.poset();
        const auto &order = poset.order();
        Json nodes = Json::array();
        for (ContextId v = 0; v < poset.size(); ++v) {
            Json n;
            n["id"] = v;
            n["name"] = order.name(v);
            n["below"] = report::ids(order, order.down(v) & ~bit(v));
            Json frame = Json::array();
            for (const auto &b : poset.context(v).frame()) {
                frame.push_back(report::matrix(b.matrix()));
            }
            n["frame"] = frame;
            nodes.push_back(n);
        }
        j["dimension"] = poset.dim();
        j["size"] = poset.size();
        j["poset"] = nodes;
        return j;
    }

    Json compute() const {
        Json j = header("compute");
        Json q;
        q["query"] = o_.query;
        Json result;
        const std::string &query = o_.query;
        auto need = [&](const std::string &value, const char *flag) {
            require(!value.empty(), ErrorKind::InvalidArgument,
                    "query '" + query + "' needs " + flag);
            return value;
        };
        auto r_value = [&](const char *fallback) {
            Rational r = parse_rational(o_.r.empty() ? fallback : o_.r);
            require_threshold(r, o_.allow_r_zero);
            return r;
        };
        const double eps = m_.epsilon();

        if (query == "xi-mu") {
            q["space"] = need(o_.space, "--space");
            const auto x = m_.measure_space(o_.space);
            const auto names = split(o_.subset);
            q["subset"] = names;
            const Rational r = r_value("1");
            q["r"] = to_string(r);
            const PointSet s = x.subset(names);
            std::vector<PointSet> all;
            for (PointSet t = 0; t <= x.all() && all.size() < 4096; ++t) {
                all.push_back(t);
            }
            const auto grid = classical_breakpoints(x, all);
            result["measure"] = to_string(measure_of(x, s));
            result["ell"] = to_string(ell_classical(measure_of(x, s)).at(r).value);
            result["xi"] = to_string(xi_mu(truth_object_classical(x), s, grid).at(r).value);
            j["query"] = q;
            j["result"] = result;
            return j;
        }

        const auto &poset = m_.poset();
        const auto &order = poset.order();
        if (query == "nu-pure" || query == "pseudo-state" || query == "truth-object-org") {
            q["state"] = need(o_.state, "--state");
            const auto psi = m_.pure_state(o_.state);
            if (query == "nu-pure") {
                q["proposition"] = need(o_.proposition, "--proposition");
                result["section"] = report::section(
                    order, truth_value_pure(poset, m_.proposition(o_.proposition), psi, eps));
            } else if (query == "pseudo-state") {
                result["subobject"] = report::clopen(order, pseudo_state(psi, poset, eps));
            } else {
                const auto t = truth_object_org(psi, poset, eps);
                Json comps = Json::array();
                for (ContextId v = 0; v < poset.size(); ++v) {
                    Json c;
                    c["context"] = v;
                    Json members = Json::array();
                    for (std::size_t x = 0; x < 64; ++x) {
                        if (t.parts[v] >> x & 1) {
                            members.push_back(report::blocks(x));
                        }
                    }
                    c["members"] = members;
                    comps.push_back(c);
                }
                result["components"] = comps;
            }
        } else if (query == "daseinise") {
            q["proposition"] = need(o_.proposition, "--proposition");
            result["subobject"] =
                report::clopen(order, daseinise_global(m_.proposition(o_.proposition), poset, eps));
        } else if (query == "nu-r" || query == "nu-naive") {
            q["state"] = need(o_.state, "--state");
            q["proposition"] = need(o_.proposition, "--proposition");
            const auto rho = m_.state(o_.state);
            const auto p = m_.proposition(o_.proposition);
            if (query == "nu-r") {
                const Rational r = r_value("1");
                q["r"] = to_string(r);
                result["section"] =
                    report::section(order, truth_value_r(poset, p, rho, r, eps, o_.allow_r_zero));
            } else {
                result["section"] = report::section(order, truth_value_mixed_naive(poset, p, rho, eps));
            }
        } else if (query == "mu" || query == "born" || query == "ell" || query == "xi-rho" ||
                   query == "main-truth-value") {
            q["state"] = need(o_.state, "--state");
            q["proposition"] = need(o_.proposition, "--proposition");
            const auto rho = m_.state(o_.state);
            const auto p = m_.proposition(o_.proposition);
            const StateTable table(poset, rho, eps);
            const auto s = daseinise_global(p, poset, eps);
            const auto g = mu_rho(table, s);
            if (query == "mu") {
                result["subobject"] = report::clopen(order, s);
                result["gamma"] = report::gamma(g);
                const auto b = min_expectation(g);
                result["minimum"] = to_string(b.minimum);
                result["argmin"] = b.argmin;
            } else if (query == "born") {
                const auto b = born_rule_check(poset, rho, p, eps);
                result["minimum"] = to_string(b.minimum);
                result["argmin"] = b.argmin;
                result["expectation"] = to_string(b.expectation);
                result["covered"] = b.covered;
                result["equal"] = b.equal;
            } else {
                const ContextId v = o_.context.empty() ? ContextId{0} : m_.context(o_.context);
                const Rational r = r_value("1");
                const ProductStage st{v, r};
                q["stage"] = report::stage(st);
                if (query == "ell") {
                    result["gamma"] = report::gamma(g);
                    result["sieve"] = report::product_sieve(order, ell_quantum(poset.order_ptr(), g).at(st));
                } else {
                    const auto t = truth_object_quantum(table, o_.allow_r_zero);
                    result["breakpoints"] = report::rationals(quantum_breakpoints(table));
                    result["sieve"] = report::product_sieve(order, xi_rho(t, s).at(st));
                }
            }
        } else {
            fail(ErrorKind::InvalidArgument, "unknown query '" + query + "'");
        }
        j["query"] = q;
        j["result"] = result;
        return j;
    }

    /// Returns the report and the exit code.
    std::pair<Json, int> verify() const {
        Json j = header("verify");
        j["suite"] = o_.suite;
        j["seed"] = o_.seed;
        CheckList checks(o_.timings);
        const std::string &suite = o_.suite;
        const bool all = suite == "all";
        require(all || suite == "appendix" || suite == "classical-diagram" ||
                    suite == "quantum-diagram" || suite == "separation" || suite == "lemmas",
                ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
        if (!all && suite != "classical-diagram") {
            (void)m_.poset();
        }
        // Under "all", a suite that outgrows the caps is recorded and skipped.
        Json skipped = Json::array();
        auto guarded = [&](const char *name, auto &&body) {
            if (!all) {
                body();
                return;
            }
            try {
                body();
            } catch (const Error &e) {
                if (exit_code_for(e.kind()) != kScale) {
                    throw;
                }
                Json sk;
                sk["suite"] = name;
                sk["reason"] = e.detail();
                skipped.push_back(sk);
            }
        };
        if (m_.has_poset() && (all || suite == "appendix")) {
            guarded("appendix", [&] { appendix(checks); });
        }
        if (all || suite == "classical-diagram") {
            const auto &spaces = m_.instance().measure_spaces;
            require(all || !spaces.empty(), ErrorKind::UnknownReference,
                    "instance declares no measure spaces");
            for (const auto &sp : spaces) {
                if (!o_.space.empty() && sp.name != o_.space) {
                    continue;
                }
                checks.run("classical-diagram[" + sp.name + "]", [&](Json &d) {
                    const auto rep = check_classical_diagram(m_.measure_space(sp.name), o_.seed);
                    d["checks"] = rep.checks;
                    if (!rep.ok) {
                        d["witness"] = rep.witness;
                    }
                    return rep.ok;
                });
            }
        }
        if (m_.has_poset() && (all || suite == "quantum-diagram")) {
            guarded("quantum-diagram", [&] { quantum(checks); });
        }
        if (m_.has_poset() && (all || suite == "separation")) {
            guarded("separation", [&] { separation(checks); });
        }
        if (m_.has_poset() && (all || suite == "lemmas")) {
            guarded("lemmas", [&] { lemmas(checks); });
        }
        j["checks"] = checks.json();
        if (!skipped.empty()) {
            j["skipped"] = skipped;
        }
        j["verdict"] = !checks.all_pass() ? "fail" : skipped.empty() ? "pass" : "incomplete";
        return {j, !checks.all_pass() ? kCheckFailure : skipped.empty() ? kPass : kScale};
    }

  private:
    static std::vector<std::string> split(const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                out.push_back(item);
            }
        }
        return out;
    }

    std::vector<std::string> state_names() const {
        std::vector<std::string> names;
        for (const auto &s : m_.instance().states) {
            if (o_.state.empty() || s.name == o_.state || s.name == o_.state2) {
                names.push_back(s.name);
            }
        }
        require(!names.empty() || o_.state.empty(), ErrorKind::UnknownReference,
                "no state named '" + o_.state + "'");
        return names;
    }

    void appendix(CheckList &checks) const {
        const auto &poset = m_.poset();
        const auto &order = poset.order();
        const auto rep = check_appendix(poset, m_.epsilon(), o_.cap_enum);
        checks.run("appendix:counts", [&](Json &d) {
            d["hyper_elements"] = rep.hyper_elements;
            d["clopen_subobjects"] = rep.clopen_subobjects;
            d["distinct_c_images"] = rep.c_images;
            d["outer_subobjects_in_image_of_d"] = rep.outer_ideal;
            d["outer_subobjects_nonempty"] = rep.outer_subobjects;
            return rep.counts_agree();
        });
        checks.run("appendix:k-j-round-trips", [&](Json &d) {
            d["k_after_j"] = rep.kj_identity;
            d["j_after_k"] = rep.jk_identity;
            if (!rep.witness.empty()) {
                d["witness"] = rep.witness;
            }
            return rep.kj_identity && rep.jk_identity && rep.outputs_valid;
        });
        checks.run("appendix:c-after-d", [&](Json &) { return rep.cd_identity; });
        checks.run("appendix:d-after-c-on-image-of-d", [&](Json &) { return rep.dc_identity_on_ideal; });
        checks.run("appendix:d-after-c-on-all-nonempty-subobjects", [&](Json &d) {
            d["failures"] = rep.dc_failures;
            d["subobjects"] = rep.outer_subobjects;
            return rep.dc_identity_all;
        });
        for (ContextId v = 0; v < poset.size(); ++v) {
            const auto loc = power_object_local(poset, v, m_.epsilon(), o_.cap_enum);
            checks.run("power-object[" + order.name(v) + "]:bijection-on-image-of-d", [&](Json &d) {
                d["clopen_subobjects"] = loc.clopen_subobjects;
                d["outer_subobjects_in_image_of_d"] = loc.outer_ideal;
                d["distinct_f_images"] = loc.f_images;
                return loc.bijection_on_ideal();
            });
            checks.run("power-object[" + order.name(v) + "]:bijection-on-all-nonempty", [&](Json &d) {
                d["outer_subobjects_nonempty"] = loc.outer_subobjects;
                d["clopen_subobjects"] = loc.clopen_subobjects;
                return loc.bijection_on_ideal() && loc.gf_identity_all &&
                       loc.outer_subobjects == loc.clopen_subobjects;
            });
            checks.run("power-object[" + order.name(v) + "]:naturality", [&](Json &d) {
                if (!loc.witness.empty()) {
                    d["witness"] = loc.witness;
                }
                return loc.naturality;
            });
        }
    }

    void quantum(CheckList &checks) const {
        const auto &poset = m_.poset();
        const auto &order = poset.order();
        const double eps = m_.epsilon();
        for (const auto &name : state_names()) {
            const StateTable table(poset, m_.state(name), eps);
            checks.run("quantum-diagram[" + name + "]", [&](Json &d) {
                const auto rep = check_quantum_diagram(table, o_.seed, o_.cap_enum);
                d["subobjects"] = rep.subobjects;
                d["checks"] = rep.checks;
                if (!rep.ok) {
                    d["witness"] = rep.witness;
                }
                return rep.ok;
            });
            if (m_.is_pure(name)) {
                // Stage ⟨V,1⟩ slices reproduce ν(P;ψ).
                checks.run("quantum-diagram[" + name + "]:pure-slices", [&](Json &d) {
                    const auto psi = m_.pure_state(name);
                    const auto t = truth_object_quantum(table);
                    std::size_t n = 0;
                    for (ContextId w = 0; w < poset.size(); ++w) {
                        const auto &c = poset.context(w);
                        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                            const auto p = c.lattice_element(bits);
                            const auto nu = truth_value_pure(poset, p, psi, eps);
                            const auto xi = xi_rho(t, daseinise_global(p, poset, eps));
                            for (ContextId v = 0; v < poset.size(); ++v) {
                                ++n;
                                const auto sv = xi.at({v, Rational(1)});
                                ContextMask full = 0;
                                for (ContextId u : order.members(sv.domain)) {
                                    if (sv.thresholds[u] == 1) {
                                        full |= bit(u);
                                    }
                                }
                                if (full != nu.at[v]) {
                                    d["witness"] = "P mask " + std::to_string(bits) + " of " +
                                                   order.name(w) + " at " + order.name(v);
                                    return false;
                                }
                            }
                        }
                    }
                    d["checks"] = n;
                    return true;
                });
            }
        }
    }

    void separation(CheckList &checks) const {
        const auto &poset = m_.poset();
        const auto &order = poset.order();
        const double eps = m_.epsilon();
        const auto names = state_names();
        for (std::size_t a = 0; a < names.size(); ++a) {
            for (std::size_t b = a + 1; b < names.size(); ++b) {
                const auto r1 = m_.state(names[a]);
                const auto r2 = m_.state(names[b]);
                checks.run("separation[" + names[a] + "," + names[b] + "]", [&](Json &d) {
                    const StateTable t1(poset, r1, eps), t2(poset, r2, eps);
                    bool differ = false;
                    for (ContextId v = 0; v < poset.size() && !differ; ++v) {
                        for (BlockMask bits = 0; bits < (BlockMask{1} << order.blocks(v)); ++bits) {
                            differ = differ || t1.trace(v, {bits}) != t2.trace(v, {bits});
                        }
                    }
                    const auto w = separate_states(poset, r1, r2, eps);
                    const auto naive = separate_states_naive(poset, r1, r2, eps);
                    d["distinguishable_on_poset"] = differ;
                    d["naive_r1_separates"] = naive.has_value();
                    if (w) {
                        Json wj;
                        wj["proposition_context"] = w->proposition_context;
                        wj["proposition_blocks"] = report::blocks(w->proposition.bits);
                        wj["stage"] = report::stage(w->stage);
                        wj["tau_first"] = to_string(w->first);
                        wj["tau_second"] = to_string(w->second);
                        d["witness"] = wj;
                    }
                    return w.has_value() == differ;
                });
            }
        }
    }

    void lemmas(CheckList &checks) const {
        const auto &poset = m_.poset();
        const auto &order = poset.order();
        const double eps = m_.epsilon();
        checks.run("square-cp1", [&](Json &d) {
            const auto rep = check_square_cp1(poset, eps);
            d["checks"] = rep.checks;
            if (!rep.ok) {
                d["witness"] = rep.witness;
            }
            return rep.ok;
        });
        checks.run("square-cp2", [&](Json &d) {
            const auto rep = check_square_cp2(poset, eps);
            d["checks"] = rep.checks;
            if (!rep.ok) {
                d["witness"] = rep.witness;
            }
            return rep.ok;
        });

        // Subobjects to test against: all of Sub_cl(Σ) when enumerable,
        // otherwise the daseinised lattice elements.
        std::vector<ClopenSubobject> subs;
        std::string scope = "all clopen subobjects";
        try {
            for (auto &s : enumerate_subobjects(spectral_presheaf(poset.order_ptr()),
                                                EnumerationOptions{o_.cap_enum, false})) {
                subs.push_back({std::move(s)});
            }
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::EnumerationTooLarge) {
                throw;
            }
            subs.clear();
            scope = "daseinised lattice elements";
            for (ContextId w = 0; w < poset.size(); ++w) {
                for (BlockMask bits = 0; bits <= poset.context(w).full_mask(); ++bits) {
                    subs.push_back(daseinise_global(poset.context(w).lattice_element(bits), poset, eps));
                }
            }
        }

        for (const auto &name : state_names()) {
            const auto rho = m_.state(name);
            const StateTable table(poset, rho, eps);
            checks.run("monotonicity[" + name + "]", [&](Json &d) {
                d["scope"] = scope;
                const auto grid = tenths();
                std::vector<TruthObjectRho> ts;
                for (const auto &r : grid) {
                    ts.push_back(TruthObjectRho::mixed(table, r));
                }
                std::size_t n = 0;
                for (const auto &s : subs) {
                    for (ContextId v = 0; v < poset.size(); ++v) {
                        const ClopenSubobject local{restrict_to(order, s.sub, v)};
                        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                            ++n;
                            if (ts[k + 1].member(local, v) && !ts[k].member(local, v)) {
                                d["witness"] = "r = " + to_string(grid[k + 1]) + " at " + order.name(v);
                                return false;
                            }
                        }
                    }
                }
                d["checks"] = n;
                return true;
            });
            checks.run("membership-equals-nu-r[" + name + "]", [&](Json &d) {
                std::size_t n = 0;
                for (const auto &r : tenths()) {
                    const auto t = TruthObjectRho::mixed(table, r);
                    for (ContextId w = 0; w < poset.size(); ++w) {
                        const auto &c = poset.context(w);
                        for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                            ++n;
                            const auto p = c.lattice_element(bits);
                            if (!(membership_valuation(daseinise_global(p, poset, eps), t) ==
                                  truth_value_r(poset, p, rho, r, eps))) {
                                d["witness"] = "P mask " + std::to_string(bits) + " of " +
                                               order.name(w) + " at r = " + to_string(r);
                                return false;
                            }
                        }
                    }
                }
                d["checks"] = n;
                return true;
            });
            checks.run("born-minimum[" + name + "]", [&](Json &d) {
                std::size_t n = 0, uncovered = 0;
                for (ContextId w = 0; w < poset.size(); ++w) {
                    const auto &c = poset.context(w);
                    for (BlockMask bits = 0; bits <= c.full_mask(); ++bits) {
                        ++n;
                        const auto b = born_rule_check(poset, rho, c.lattice_element(bits), eps);
                        if (!b.equal) {
                            d["witness"] = "P mask " + std::to_string(bits) + " of " + order.name(w);
                            return false;
                        }
                    }
                }
                for (const auto &p : m_.instance().propositions) {
                    const auto b = born_rule_check(poset, rho, m_.proposition(p.name), eps);
                    if (!b.covered) {
                        ++uncovered;
                    }
                }
                d["checks"] = n;
                d["declared_propositions_outside_every_context"] = uncovered;
                return true;
            });
        }
    }

    Materialized<S> m_;
    const Options &o_;
};

inline void emit(std::ostream &out, const Options &o, const Json &j) {
    out << (o.format == "machine" ? pretty_json(j) : report::human(j));
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Truth values of states and propositions over context posets", "toposprob"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--instance", o.instance_path, "instance file (JSON)");
        sub->add_option("--fixture", o.fixture_name, "bundled fixture name");
        sub->add_option("--mode", o.mode, "arithmetic mode the instance must have")
            ->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--epsilon", o.epsilon, "float tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--cap-poset", o.cap_poset, "maximum number of contexts");
        sub->add_option("--cap-enum", o.cap_enum, "maximum size of an enumeration");
        sub->add_option("--seed", o.seed, "seed for sampled checks");
        sub->add_flag("--allow-r-zero", o.allow_r_zero, "accept threshold r = 0");
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"human", "machine"}));
        sub->add_flag("--timings", o.timings, "add wall-clock timings to checks");
    };
    auto *compute = app.add_subcommand("compute", "evaluate one query");
    common(compute);
    compute->add_option("--query", o.query,
                        "nu-pure | nu-r | nu-naive | mu | ell | xi-rho | main-truth-value | born | "
                        "daseinise | pseudo-state | truth-object-org | xi-mu")
        ->required();
    compute->add_option("--state", o.state, "state name");
    compute->add_option("--proposition", o.proposition, "proposition name");
    compute->add_option("--r", o.r, "threshold, as p/q or decimal");
    compute->add_option("--context", o.context, "stage context name");
    compute->add_option("--space", o.space, "measure space name");
    compute->add_option("--subset", o.subset, "comma-separated point names");
    auto *verify = app.add_subcommand("verify", "run a verification suite");
    common(verify);
    verify->add_option("--suite", o.suite,
                       "appendix | classical-diagram | quantum-diagram | separation | lemmas | all");
    verify->add_option("--state", o.state, "restrict to one state");
    verify->add_option("--state2", o.state2, "second state for separation");
    verify->add_option("--space", o.space, "restrict to one measure space");
    auto *list = app.add_subcommand("list-fixtures", "list bundled fixtures");
    list->add_option("--dump", o.dump_dir, "write every fixture into this directory");
    list->add_option("--format", o.format, "output format")->check(CLI::IsMember({"human", "machine"}));
    auto *dump = app.add_subcommand("dump-poset", "print the context poset of an instance");
    common(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (list->parsed()) {
            Json j;
            j["tool"] = "toposprob";
            j["command"] = "list-fixtures";
            Json fx = Json::array();
            for (const auto &f : fixtures()) {
                Json e;
                e["name"] = std::string(f.name);
                e["description"] = std::string(f.description);
                fx.push_back(e);
                if (!o.dump_dir.empty()) {
                    std::filesystem::create_directories(o.dump_dir);
                    std::ofstream file(std::filesystem::path(o.dump_dir) / (std::string(f.name) + ".json"));
                    require(file.good(), ErrorKind::InvalidArgument, "cannot write into " + o.dump_dir);
                    file << f.text;
                }
            }
            j["fixtures"] = fx;
            emit(out, o, j);
            return kPass;
        }
        require(o.instance_path.empty() != o.fixture_name.empty(), ErrorKind::InvalidArgument,
                "give exactly one of --instance or --fixture");
        const Instance inst = load_instance(o);
        auto go = [&]<class S>(std::type_identity<S>) -> int {
            Runner<S> runner(inst, o);
            if (dump->parsed()) {
                emit(out, o, runner.dump_poset());
                return kPass;
            }
            if (compute->parsed()) {
                emit(out, o, runner.compute());
                return kPass;
            }
            auto [j, code] = runner.verify();
            emit(out, o, j);
            return code;
        };
        return inst.mode == ArithmeticMode::exact ? go(std::type_identity<ExactScalar>{})
                                                  : go(std::type_identity<FloatScalar>{});
    } catch (const Error &e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.detail() << "\n";
        return exit_code_for(e.kind());
    }
}

} // namespace toposprob::cli
