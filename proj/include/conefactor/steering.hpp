#pragma once
// Assemblages on polyhedral GPTs: tensor codec, LHS models, steering
// robustness, classical simulation and realization checks.

#include "conefactor/meters.hpp"

namespace conefactor {

struct Assemblage {
    Gpt space;
    std::size_t k = 0, g = 0;
    EffectTable sigma;  // sigma[x][a] = σ_{a|x}

    Assemblage() = default;
    Assemblage(Gpt s, EffectTable e) : space(std::move(s)), sigma(std::move(e)) {
        g = sigma.size();
        k = g ? sigma[0].size() : 0;
        if (g == 0 || k == 0) throw DimensionError("Assemblage: need at least one input and one outcome");
        for (const auto& row : sigma) {
            if (row.size() != k) throw DimensionError("Assemblage: inputs have different outcome counts");
            for (const auto& v : row)
                if (v.size() != space.dim) throw DimensionError("Assemblage: element length differs from the GPT dimension");
        }
    }
    PolyShape shape() const { return {k, g}; }
    RatVec sigma_bar() const {
        RatVec s(space.dim);
        for (const auto& v : sigma[0]) s = add(s, v);
        return s;
    }
};

inline std::string assemblage_problem(const Assemblage& s) {
    RatVec bar = s.sigma_bar();
    for (std::size_t x = 0; x < s.g; ++x) {
        RatVec sum(s.space.dim);
        for (std::size_t a = 0; a < s.k; ++a) {
            if (!s.space.cone.contains(s.sigma[x][a]))
                return "element " + std::to_string(a + 1) + "|" + std::to_string(x + 1) + " is outside the cone";
            sum = add(sum, s.sigma[x][a]);
        }
        if (sum != bar) return "marginal state depends on the input (input " + std::to_string(x + 1) + ")";
    }
    if (dot(s.space.unit, bar) != 1) return "marginal state is not normalized";
    return "";
}

inline void require_valid(const Assemblage& s, const char* who) {
    if (auto e = assemblage_problem(s); !e.empty()) throw Error("invalid_assemblage", std::string(who) + ": " + e);
}

// ξ in V(CS_{k,g}) ⊗ V(K): row 0 is σ̄, row idx(x,a) is σ_{a|x}.
inline TensorElement assemblage_to_tensor(const Assemblage& s) {
    require_valid(s, "assemblage_to_tensor");
    PolyShape P = s.shape();
    TensorElement t = TensorElement::zeros({P.dim(), s.space.dim});
    RatVec bar = s.sigma_bar();
    for (std::size_t c = 0; c < s.space.dim; ++c) t.at(0, c) = bar[c];
    for (std::size_t x = 0; x < s.g; ++x)
        for (std::size_t a = 0; a + 1 < s.k; ++a)
            for (std::size_t c = 0; c < s.space.dim; ++c) t.at(P.idx(x, a), c) = s.sigma[x][a][c];
    return t;
}

inline Assemblage assemblage_from_tensor(const TensorElement& xi, const Gpt& G, std::size_t k, std::size_t g) {
    PolyShape P{k, g};
    Gpt cs = make_polysimplex(k, g);
    check_tensor_shape(xi, cs.cone, G.cone, "assemblage_from_tensor");
    if (auto v = max_violation(xi, cs.cone, G.cone))
        throw Error("not_in_max_tensor", "assemblage_from_tensor: tensor fails facet product " + std::to_string(v->first) +
                                             " x " + std::to_string(v->second));
    RatMatrix m = xi.as_matrix();
    EffectTable e(g);
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t a = 0; a < k; ++a) e[x].push_back(left_multiply(poly_effect(P, x, a), m));
    return Assemblage(G, e);
}

struct LhsModel {
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<RatVec> ensemble;                  // B_λ
    std::vector<std::vector<RatVec>> response;     // p[x][λ][a]
};

inline std::optional<LhsModel> has_lhs(const Assemblage& s) {
    require_valid(s, "has_lhs");
    auto dd = detail::det_decompose(s.space.cone.generators(), s.sigma, s.k, s.g, s.space.dim, nullptr);
    if (dd.lp.status != LPStatus::Optimal) return std::nullopt;
    return LhsModel{dd.tuples, dd.members, detail::deterministic_response(dd.tuples, s.k, s.g)};
}

inline bool verify_lhs(const Assemblage& s, const LhsModel& m) {
    for (const auto& b : m.ensemble)
        if (!s.space.cone.contains(b)) return false;
    for (std::size_t x = 0; x < s.g; ++x)
        for (std::size_t a = 0; a < s.k; ++a) {
            RatVec t(s.space.dim);
            for (std::size_t l = 0; l < m.ensemble.size(); ++l) t = add(t, scale(m.response[x][l][a], m.ensemble[l]));
            if (t != s.sigma[x][a]) return false;
        }
    return true;
}

struct SteeringRobustness {
    Rational value;
    std::vector<RatVec> noise;  // q̃_{a|x}
    LhsModel model;             // of value·σ + q̃·σ̄
};

inline SteeringRobustness steering_robustness_full(const Assemblage& s) {
    require_valid(s, "steering_robustness");
    RatVec bar = s.sigma_bar();
    auto dd = detail::det_decompose(s.space.cone.generators(), s.sigma, s.k, s.g, s.space.dim, &bar);
    if (dd.lp.status != LPStatus::Optimal) throw std::logic_error("steering_robustness: LP not optimal");
    SteeringRobustness r;
    r.value = dd.t;
    r.noise.assign(s.g, RatVec(s.k));
    for (std::size_t x = 0; x < s.g; ++x)
        for (std::size_t a = 0; a < s.k; ++a) r.noise[x][a] = dd.q[x * s.k + a];
    r.model = {dd.tuples, dd.members, detail::deterministic_response(dd.tuples, s.k, s.g)};
    return r;
}

inline Rational steering_robustness(const Assemblage& s) { return steering_robustness_full(s).value; }

// σ read as a multimeter on the dual state space (K)*_{σ̄}.
inline Multimeter assemblage_as_multimeter(const Assemblage& s) {
    require_valid(s, "assemblage_as_multimeter");
    return Multimeter(dual_state_space(s.space, s.sigma_bar()), s.sigma);
}

// σ_{a|x} = (E_{a|x} ⊗ id)(w) for w ∈ V(K_A) ⊗ V(K_B) in the max tensor.
inline bool verify_realization(const Assemblage& s, const TensorElement& w, const Multimeter& E) {
    if (E.g != s.g || E.k != s.k) throw DimensionError("verify_realization: multimeter and assemblage shapes differ");
    check_tensor_shape(w, E.space.cone, s.space.cone, "verify_realization");
    if (!member_max(w, E.space.cone, s.space.cone))
        throw Error("not_in_max_tensor", "verify_realization: state is not in the max tensor product");
    RatMatrix m = w.as_matrix();
    for (std::size_t x = 0; x < s.g; ++x)
        for (std::size_t a = 0; a < s.k; ++a)
            if (left_multiply(E.effects[x][a], m) != s.sigma[x][a]) return false;
    return true;
}

// Does `source` classically simulate `target`? Requires equal marginal states.
inline std::optional<SimulationData> classical_simulates_assemblage(const Assemblage& target, const Assemblage& source) {
    require_valid(target, "classical_simulates_assemblage");
    require_valid(source, "classical_simulates_assemblage");
    if (target.space.dim != source.space.dim || target.sigma_bar() != source.sigma_bar())
        throw Error("marginal_mismatch", "classical_simulates_assemblage: assemblages have different marginal states");
    return detail::simulation_lp(source.sigma, target.sigma, source.space.dim);
}

inline Assemblage apply_simulation(const SimulationData& d, const Assemblage& s) {
    if (!(d.source == s.shape())) throw DimensionError("apply_simulation: simulation source shape differs");
    if (auto e = sim_problem(d); !e.empty()) throw Error("invalid_simulation", "apply_simulation: " + e);
    EffectTable out(d.target.g, std::vector<RatVec>(d.target.k, RatVec(s.space.dim)));
    for (std::size_t x = 0; x < d.target.g; ++x)
        for (std::size_t a = 0; a < d.target.k; ++a)
            for (std::size_t y = 0; y < d.source.g; ++y)
                for (std::size_t b = 0; b < d.source.k; ++b) {
                    Rational w = d.pi[x][y] * d.nu[x][y][b][a];
                    if (sgn(w) != 0) out[x][a] = add(out[x][a], scale(w, s.sigma[y][b]));
                }
    return Assemblage(s.space, out);
}

inline Assemblage trivial_assemblage(const Gpt& G, const RatVec& state, const std::vector<RatVec>& q) {
    EffectTable e;
    for (const auto& col : q) {
        e.emplace_back();
        for (const auto& p : col) e.back().push_back(scale(p, state));
    }
    return Assemblage(G, e);
}

// Three dichotomic inputs on the octahedron: σ_{1|x}, σ_{2|x} = ½(±e, 1)
// with e running over the x, z and y axes in that order.
inline Assemblage octahedron_counterexample() {
    const std::size_t axis[3] = {0, 2, 1};
    EffectTable e(3);
    for (std::size_t x = 0; x < 3; ++x)
        for (int s : {1, -1}) {
            RatVec v(4);
            v[axis[x]] = rat(s, 2);
            v[3] = rat(1, 2);
            e[x].push_back(v);
        }
    return Assemblage(make_octahedron(), e);
}

}  // namespace conefactor
