#pragma once
// JSON reading and writing. Rationals travel as "num/den" strings; parse
// errors carry a JSON pointer to the offending field.

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conefactor/bell.hpp"
#include "conefactor/factor.hpp"
#include "conefactor/steering.hpp"

namespace conefactor {

using json = nlohmann::ordered_json;

class ParseError : public std::invalid_argument {
public:
    ParseError(std::string pointer, const std::string& message)
        : std::invalid_argument(message + " at " + (pointer.empty() ? "/" : pointer)), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

namespace io {

// A json value plus its pointer, for error reporting.
struct Node {
    const json& j;
    std::string ptr;

    Node at(const std::string& key) const {
        if (!j.is_object()) throw ParseError(ptr, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) throw ParseError(ptr + "/" + key, "missing field");
        return {*it, ptr + "/" + key};
    }
    Node at(std::size_t i) const { return {j.at(i), ptr + "/" + std::to_string(i)}; }
    bool has(const std::string& key) const { return j.is_object() && j.contains(key); }

    const json& array() const {
        if (!j.is_array()) throw ParseError(ptr, "expected an array");
        return j;
    }
    std::size_t size() const { return array().size(); }

    // Reject keys outside `allowed`.
    void only(std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) throw ParseError(ptr, "expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!ok.count(it.key())) throw ParseError(ptr + "/" + it.key(), "unexpected field");
    }

    std::size_t count() const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
            throw ParseError(ptr, "expected a non-negative integer");
        return j.get<std::size_t>();
    }
    std::string str() const {
        if (!j.is_string()) throw ParseError(ptr, "expected a string");
        return j.get<std::string>();
    }
    Rational rational() const {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (!j.is_string()) throw ParseError(ptr, "expected a rational as \"num/den\"");
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(ptr, e.what());
        }
    }
    RatVec vec() const {
        RatVec v;
        for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).rational());
        return v;
    }
    std::vector<RatVec> vecs() const {
        std::vector<RatVec> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).vec());
        return out;
    }
    std::vector<std::size_t> counts() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).count());
        return out;
    }
};

// Library errors raised while building an object from a field are re-raised
// against that field.
template <class F>
auto at_field(const std::string& ptr, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(ptr, e.what());
    }
}

}  // namespace io

inline json to_json(const Rational& q) { return to_string(q); }

inline json to_json(const RatVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline json to_json(const std::vector<RatVec>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(to_json(v));
    return a;
}

inline json to_json(const RatMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
    return a;
}

inline json to_json(const PolyhedralCone& c) {
    return json{{"dim", c.dim()}, {"generators", to_json(c.generators())}, {"facets", to_json(c.facets())}};
}

inline json to_json(const Gpt& G) { return json{{"dim", G.dim}, {"cone", to_json(G.cone)}, {"unit", to_json(G.unit)}}; }

inline json to_json(const TensorElement& t) { return json{{"factors", t.factors}, {"coeffs", to_json(t.coeffs)}}; }

inline json to_json(const EffectTable& e) {
    json a = json::array();
    for (const auto& row : e) a.push_back(to_json(row));
    return a;
}

inline json to_json(const Multimeter& M) {
    return json{{"gpt", to_json(M.space)}, {"k", M.k}, {"g", M.g}, {"effects", to_json(M.effects)}};
}

inline json to_json(const Assemblage& s) {
    return json{{"gpt", to_json(s.space)}, {"k", s.k}, {"g", s.g}, {"sigma", to_json(s.sigma)}};
}

inline json to_json(const NsDistribution& d) {
    return json{{"parties", d.parties}, {"k", d.ks}, {"g", d.gs}, {"probs", to_json(d.probs)}};
}

inline json to_json(const WitnessTensor& W) {
    return json{{"name", W.name}, {"shape", {{W.a.k, W.a.g}, {W.b.k, W.b.g}}}, {"coeffs", to_json(W.coeffs.as_matrix())}};
}

inline json to_json(const GptMap& f) {
    return json{{"source_dim", f.source.dim}, {"target_dim", f.target.dim}, {"matrix", to_json(f.matrix)}};
}

inline json to_json(const JointMeasurement& J) {
    json out = json::array();
    for (std::size_t i = 0; i < J.tuples.size(); ++i) out.push_back({{"outcomes", J.tuples[i]}, {"effect", to_json(J.effects[i])}});
    return out;
}

inline json to_json(const LhsModel& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.tuples.size(); ++i) out.push_back({{"outcomes", m.tuples[i]}, {"state", to_json(m.ensemble[i])}});
    return out;
}

inline json to_json(const LhvModel& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.weights.size(); ++i)
        out.push_back({{"alice", m.strategies[i].first}, {"bob", m.strategies[i].second}, {"weight", to_string(m.weights[i])}});
    return out;
}

inline json to_json(const SimulationData& d) {
    json pi = json::array(), nu = json::array();
    for (const auto& row : d.pi) pi.push_back(to_json(row));
    for (const auto& a : d.nu) {
        json ja = json::array();
        for (const auto& b : a) ja.push_back(to_json(b));
        nu.push_back(ja);
    }
    return json{{"source", {d.source.k, d.source.g}}, {"target", {d.target.k, d.target.g}}, {"pi", pi}, {"nu", nu}};
}

inline json to_json(const FactorizationCertificate& c) {
    return json{{"name", c.name}, {"source", to_json(c.source)}, {"middle", to_json(c.middle)}, {"phi", to_json(c.phi)},
                {"psi", to_json(c.psi)}};
}

inline json to_json(const InclusionCertificate& c) { return json{{"affine", to_json(c.affine)}, {"projection", to_json(c.projection)}}; }

// ---------------------------------------------------------------------------
// Readers

inline PolyhedralCone cone_from_json(const io::Node& n) {
    n.only({"dim", "generators", "facets"});
    std::size_t dim = n.at("dim").count();
    bool g = n.has("generators"), f = n.has("facets");
    if (!g && !f) throw ParseError(n.ptr + "/generators", "missing field (need generators or facets)");
    if (g) {
        auto gens = n.at("generators").vecs();
        return io::at_field(n.ptr + "/generators", [&] { return PolyhedralCone::from_generators(dim, gens); });
    }
    auto facets = n.at("facets").vecs();
    return io::at_field(n.ptr + "/facets", [&] { return PolyhedralCone::from_facets(dim, facets); });
}

inline Gpt gpt_from_json(const io::Node& n) {
    if (n.j.is_string()) return io::at_field(n.ptr, [&] { return builtin_gpt(n.str()); });
    n.only({"dim", "cone", "unit"});
    std::size_t dim = n.at("dim").count();
    PolyhedralCone c = cone_from_json(n.at("cone"));
    if (c.dim() != dim) throw ParseError(n.ptr + "/cone/dim", "cone dimension differs from the GPT dimension");
    RatVec u = n.at("unit").vec();
    Gpt G = io::at_field(n.ptr + "/unit", [&] { return Gpt(c, u); });
    if (!G.unit_is_interior()) throw ParseError(n.ptr + "/unit", "unit is not strictly positive on the cone");
    return G;
}

namespace io {

inline EffectTable table_from(const Node& n, std::size_t k, std::size_t g, std::size_t dim) {
    if (n.size() != g) throw ParseError(n.ptr, "expected " + std::to_string(g) + " rows");
    EffectTable e;
    for (std::size_t x = 0; x < g; ++x) {
        Node row = n.at(x);
        if (row.size() != k) throw ParseError(row.ptr, "expected " + std::to_string(k) + " entries");
        e.emplace_back();
        for (std::size_t a = 0; a < k; ++a) {
            RatVec v = row.at(a).vec();
            if (v.size() != dim) throw ParseError(row.at(a).ptr, "expected a vector of length " + std::to_string(dim));
            e.back().push_back(std::move(v));
        }
    }
    return e;
}

}  // namespace io

inline Multimeter multimeter_from_json(const io::Node& n) {
    n.only({"gpt", "k", "g", "effects"});
    Gpt G = gpt_from_json(n.at("gpt"));
    std::size_t k = n.at("k").count(), g = n.at("g").count();
    EffectTable e = io::table_from(n.at("effects"), k, g, G.dim);
    Multimeter M = io::at_field(n.ptr + "/effects", [&] { return Multimeter(G, e); });
    if (auto p = multimeter_problem(M); !p.empty()) throw ParseError(n.ptr + "/effects", p);
    return M;
}

inline Assemblage assemblage_from_json(const io::Node& n) {
    n.only({"gpt", "k", "g", "sigma"});
    Gpt G = gpt_from_json(n.at("gpt"));
    std::size_t k = n.at("k").count(), g = n.at("g").count();
    EffectTable s = io::table_from(n.at("sigma"), k, g, G.dim);
    Assemblage A = io::at_field(n.ptr + "/sigma", [&] { return Assemblage(G, s); });
    if (auto p = assemblage_problem(A); !p.empty()) throw ParseError(n.ptr + "/sigma", p);
    return A;
}

// k and g are either per-party arrays or a single count shared by all parties.
inline NsDistribution ns_from_json(const io::Node& n) {
    n.only({"parties", "k", "g", "probs"});
    std::size_t parties = n.at("parties").count();
    auto per_party = [&](const char* key) {
        io::Node v = n.at(key);
        if (v.j.is_array()) {
            auto c = v.counts();
            if (c.size() != parties) throw ParseError(v.ptr, "expected one entry per party");
            return c;
        }
        return std::vector<std::size_t>(parties, v.count());
    };
    auto ks = per_party("k"), gs = per_party("g");
    RatVec p = n.at("probs").vec();
    NsDistribution d = io::at_field(n.ptr + "/probs", [&] { return NsDistribution(ks, gs, p); });
    if (auto e = ns_problem(d); !e.empty()) throw ParseError(n.ptr + "/probs", e);
    return d;
}

// ---------------------------------------------------------------------------
// Inputs by keyword, inline JSON text or file path

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
}

inline json load_json_input(const std::string& input) {
    auto first = input.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (input[first] == '{' || input[first] == '[')) return parse_json_text(input);
    std::ifstream in(input);
    if (!in) throw ParseError("", "cannot open input file '" + input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

inline Multimeter load_multimeter(const std::string& input) {
    if (input == "cube-multimeter") return cube_face_multimeter();
    if (input == "octa-faces") return octahedron_face_multimeter();
    json j = load_json_input(input);
    return multimeter_from_json({j, ""});
}

inline Assemblage load_assemblage(const std::string& input) {
    if (input == "octa-counterexample") return octahedron_counterexample();
    json j = load_json_input(input);
    return assemblage_from_json({j, ""});
}

inline Behavior load_behavior(const std::string& input) {
    if (input == "pr-box") return pr_box();
    json j = load_json_input(input);
    return ns_from_json({j, ""});
}

}  // namespace conefactor
