#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace testing;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string minimal(const std::string &extra) {
    return R"({"format": "toposprob-instance/1", "name": "t", "mode": "exact", "dimension": 2)" +
           extra + "}";
}

} // namespace

TEST_CASE("embedded fixtures equal the files on disk") {
    for (const auto &f : fixtures()) {
        INFO(f.name);
        CHECK(read_file(std::string(TOPOSPROB_FIXTURE_DIR) + "/" + std::string(f.name) + ".json") ==
              f.text);
    }
    REQUIRE_KIND(fixture("nope"), ErrorKind::UnknownReference);
}

TEST_CASE("fixtures round-trip byte for byte") {
    for (const auto &f : fixtures()) {
        INFO(f.name);
        const auto inst = parse_instance(std::string(f.text));
        CHECK(serialize_instance(inst) == f.text);
        CHECK(parse_instance(serialize_instance(inst)) == inst);
        CHECK(inst.name == f.name);
        CHECK(inst.description == f.description);
    }
}

TEST_CASE("float literals are kept and force float mode") {
    const auto inst = parse_instance(std::string(fixture("rotated3").text));
    CHECK(inst.mode == ArithmeticMode::floating);
    CHECK(inst.has_float_literals());
    const auto &psi = inst.states[2];
    REQUIRE(psi.vector[1].literal.has_value());
    CHECK(psi.vector[1].literal->imag() == 0.8);
    CHECK(psi.vector[0].value.re == Rational(3, 5));
    REQUIRE_KIND(Materialized<Q>(inst), ErrorKind::ModeMismatch);
    REQUIRE_KIND(Materialized<F>(parse_instance(std::string(fixture("q3").text))), ErrorKind::ModeMismatch);
}

TEST_CASE("mode declarations must match the entries") {
    std::string text = std::string(fixture("rotated3").text);
    text.replace(text.find("\"float\""), 7, "\"exact\"");
    REQUIRE_KIND(parse_instance(text), ErrorKind::ModeMismatch);
    std::string q = std::string(fixture("q3").text);
    q.replace(q.find("\"exact\""), 7, "\"float\"");
    REQUIRE_KIND(parse_instance(q), ErrorKind::ModeMismatch);
}

TEST_CASE("parse errors are located") {
    auto message = [](const std::string &text) {
        try {
            parse_instance(text);
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            return std::string(e.detail());
        }
        return std::string("no error");
    };
    CHECK(message("{\n  \"format\": \n}").find("line 3") != std::string::npos);
    CHECK(message(minimal(R"(, "bogus": 1)")).find("unknown key 'bogus'") != std::string::npos);
    CHECK(message(R"({"name": "t", "mode": "exact"})").find("missing key 'format'") != std::string::npos);
    CHECK(message(R"({"format": "v0", "name": "t", "mode": "exact"})").find("/format") != std::string::npos);
    CHECK(message(minimal(R"(, "states": [{"name": "s", "vector": ["1"]}])"))
              .find("/states/0/vector") != std::string::npos);
    CHECK(message(minimal(R"(, "states": [{"name": "s", "vector": ["1", "x"]}])"))
              .find("/states/0/vector/1") != std::string::npos);
    CHECK(message(minimal(R"(, "states": [{"name": "s", "vector": ["1", "0"]}, {"name": "s", "vector": ["0", "1"]}])"))
              .find("duplicate name 's'") != std::string::npos);
    CHECK(message(minimal(R"(, "states": [{"name": "s"}])")).find("exactly one") != std::string::npos);
    CHECK(message(minimal(R"(, "propositions": [{"name": "p", "observable": [["1","0"],["0","2"]], "set": [{"lo": "2", "hi": "1"}]}])"))
              .find("/propositions/0/set") != std::string::npos);
    CHECK(message(R"({"format": "toposprob-instance/1", "name": "t", "mode": "exact", "states": []})")
              .find("dimension") != std::string::npos);
    CHECK(message(minimal(R"(, "contexts": [{"name": "c", "blocks": [{"span": [["1","0"]], "projection": [["1","0"],["0","0"]]}]}])"))
              .find("exactly one of 'span' or 'projection'") != std::string::npos);
    CHECK(message(R"({"format": "toposprob-instance/1", "name": "t", "mode": "exact", "dimension": 9})")
              .find("/dimension") != std::string::npos);
    CHECK(message(R"({"format": "toposprob-instance/1", "name": "t", "mode": "fuzzy"})").find("/mode") !=
          std::string::npos);
}

TEST_CASE("materialized errors name the item") {
    const auto inst = parse_instance(
        minimal(R"(, "contexts": [{"name": "c", "blocks": [{"span": [["1","0"]]}, {"span": [["1","1"]]}]}])"));
    try {
        Materialized<Q> m(inst);
        FAIL("overlapping frame accepted");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Overlapping);
        CHECK(std::string(e.detail()).find("/contexts/0") == 0);
    }
    const auto bad_state = parse_instance(minimal(R"(, "states": [{"name": "s", "density": [["1","0"],["0","1"]]}])"));
    try {
        (void)Materialized<Q>(bad_state).state("s");
        FAIL("trace-two density accepted");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
        CHECK(std::string(e.detail()).find("state 's'") == 0);
    }
}

TEST_CASE("materializing the Q3 fixture") {
    const auto &m = q3();
    CHECK(m.has_poset());
    CHECK(m.context("V2") == m.poset().order().id_of("V2"));
    REQUIRE_KIND(m.context("W"), ErrorKind::UnknownReference);
    REQUIRE_KIND(m.state("sigma"), ErrorKind::UnknownReference);
    REQUIRE_KIND(m.proposition("Q"), ErrorKind::UnknownReference);
    REQUIRE_KIND(m.measure_space("X"), ErrorKind::UnknownReference);
    REQUIRE_KIND(m.pure_state("rho"), ErrorKind::InvalidArgument);
    CHECK(m.is_pure("e1"));
    CHECK(m.proposition("A_le_2").near(qproj(3, {0, 1})));
    CHECK(m.proposition("P12").near(qproj(3, {0, 1})));
    const auto c = load<Q>("classical3");
    CHECK_FALSE(c.has_poset());
    REQUIRE_KIND((void)c.poset(), ErrorKind::UnknownReference);
    CHECK(c.measure_space("X").size() == 3);
}
