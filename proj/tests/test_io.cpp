#include <doctest.h>

#include "conefactor/io.hpp"
#include "support.hpp"

using namespace conefactor;

namespace {

std::string pointer_of(const std::string& text, int kind) {
    try {
        json j = parse_json_text(text);
        if (kind == 0) multimeter_from_json({j, ""});
        if (kind == 1) ns_from_json({j, ""});
        if (kind == 2) assemblage_from_json({j, ""});
        if (kind == 3) gpt_from_json({j, ""});
    } catch (const ParseError& e) {
        return e.pointer();
    }
    return "<none>";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("rationals serialize as num/den") {
    CHECK(to_json(rat(-2, 5)) == "-2/5");
    CHECK(to_json(Rational(3)) == "3");
    CHECK(to_json(RatVec{rat(1, 2), 0}).dump() == R"(["1/2","0"])");
    json j = json::parse(R"(["7/14", 3, "-1"])");
    CHECK(io::Node{j, ""}.vec() == RatVec{rat(1, 2), 3, -1});
}

TEST_CASE("round trips") {
    Multimeter cube = cube_face_multimeter();
    json jm = to_json(cube);
    Multimeter back = multimeter_from_json({json::parse(jm.dump()), ""});
    CHECK(back.effects == cube.effects);
    CHECK(back.space.cone.generators() == cube.space.cone.generators());
    CHECK(back.space.unit == cube.space.unit);

    Assemblage oc = octahedron_counterexample();
    Assemblage ob = assemblage_from_json({json::parse(to_json(oc).dump()), ""});
    CHECK(ob.sigma == oc.sigma);

    std::mt19937 rng(31);
    for (int t = 0; t < 10; ++t) {
        NsDistribution d = oracle::random_local(rng, {2, 3}, {3, 2}, 2, 5);
        NsDistribution e = ns_from_json({json::parse(to_json(d).dump()), ""});
        CHECK(e.probs == d.probs);
        CHECK(e.ks == d.ks);
        CHECK(e.gs == d.gs);
    }

    json named = json::parse(R"({"gpt": "polysimplex:2,2", "k": 2, "g": 1, "effects": [[["0","1","0"],["1","-1","0"]]]})");
    Multimeter m = multimeter_from_json({named, ""});
    CHECK(m.space.dim == 3);
    json shared = json::parse(R"({"parties": 2, "k": 2, "g": 1, "probs": ["1/4","1/4","1/4","1/4"]})");
    CHECK(ns_from_json({shared, ""}).num_outcomes() == 4);
}

TEST_CASE("errors point at the offending field") {
    CHECK(pointer_of(R"({"space": 3})", 0) == "/space");
    CHECK(pointer_of(R"({"k": 2, "g": 1, "effects": []})", 0) == "/gpt");
    CHECK(pointer_of(R"({"gpt": "cube", "k": 2, "g": 1, "effects": [[["1","0","0","x"],["0","0","0","0"]]]})", 0) ==
          "/effects/0/0/3");
    CHECK(pointer_of(R"({"gpt": "cube", "k": 2, "g": 1, "effects": [[["1","0","0"],["0","0","0","0"]]]})", 0) == "/effects/0/0");
    // effects that do not sum to the unit
    CHECK(pointer_of(R"({"gpt": "cube", "k": 2, "g": 1, "effects": [[["0","0","0","0"],["0","0","0","0"]]]})", 0) == "/effects");
    CHECK(pointer_of(R"({"gpt": "hexagon", "k": 2, "g": 1, "effects": []})", 0) == "/gpt");
    CHECK(pointer_of(R"({"parties": 2, "k": [2], "g": 1, "probs": []})", 1) == "/k");
    CHECK(pointer_of(R"({"parties": 1, "k": 2, "g": 1, "probs": ["1/2", "2/3"]})", 1) == "/probs");
    CHECK(pointer_of(R"({"parties": 1, "k": 2, "g": 1, "probs": ["1/2"]})", 1) == "/probs");
    CHECK(pointer_of(R"({"gpt": "square", "k": -1, "g": 1, "sigma": []})", 2) == "/k");
    CHECK(pointer_of(R"({"dim": 2, "cone": {"dim": 2, "generators": [["1","0"],["0","1"]]}, "unit": ["1","-1"]})", 3) == "/unit");
    CHECK(pointer_of(R"({"dim": 2, "cone": {"dim": 2, "generators": [["1","0"],["-1","0"]]}, "unit": ["1","1"]})", 3) ==
          "/cone/generators");
    CHECK(pointer_of("{not json", 0) == "");
}

TEST_CASE("keyword inputs") {
    CHECK(load_multimeter("cube-multimeter").g == 3);
    CHECK(load_multimeter("octa-faces").g == 4);
    CHECK(load_assemblage("octa-counterexample").g == 3);
    CHECK(load_behavior("pr-box").num_outcomes() == 4);
    CHECK(load_multimeter(R"({"gpt": "square", "k": 2, "g": 1, "effects": [[["0","1","0"],["1","-1","0"]]]})").k == 2);
    CHECK_THROWS_AS(load_multimeter("/nonexistent/file.json"), ParseError);
}

}  // TEST_SUITE
