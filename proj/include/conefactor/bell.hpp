#pragma once
// Bipartite behaviors: LHV models, Bell witnesses, the CHSH family and the
// reduction of (2,2)x(k,g) witnesses to CHSH.

#include "conefactor/polysimplex.hpp"

namespace conefactor {

using Behavior = NsDistribution;

inline void require_behavior(const Behavior& P, const char* who) {
    if (P.parties != 2) throw DimensionError(std::string(who) + ": behavior must have 2 parties, got " + std::to_string(P.parties));
    if (auto e = ns_problem(P); !e.empty()) throw Error("invalid_ns", std::string(who) + ": " + e);
}

// Deterministic strategy pairs (α, β) with weights; α[x] is Alice's outcome on x.
struct LhvModel {
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> strategies;
    RatVec weights;
};

inline std::optional<LhvModel> has_lhv(const Behavior& P) {
    require_behavior(P, "has_lhv");
    const std::size_t k = P.ks[0], g = P.gs[0], l = P.ks[1], r = P.gs[1];
    auto alphas = all_tuples(std::vector<std::size_t>(g, k));
    auto betas = all_tuples(std::vector<std::size_t>(r, l));
    LpBuilder b;
    std::size_t first = b.add_vars(alphas.size() * betas.size());
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t y = 0; y < r; ++y)
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t o = 0; o < l; ++o) {
                    LpBuilder::Row row;
                    for (std::size_t i = 0; i < alphas.size(); ++i) {
                        if (alphas[i][x] != a) continue;
                        for (std::size_t j = 0; j < betas.size(); ++j)
                            if (betas[j][y] == o) row[first + i * betas.size() + j] = 1;
                    }
                    b.add_eq(std::move(row), P.p({x, y}, {a, o}));
                }
    LPResult res = lp_solve(b.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    LhvModel m;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < betas.size(); ++j) {
            const Rational& w = res.primal[first + i * betas.size() + j];
            if (sgn(w) == 0) continue;
            m.strategies.emplace_back(alphas[i], betas[j]);
            m.weights.push_back(w);
        }
    return m;
}

inline bool verify_lhv(const Behavior& P, const LhvModel& m) {
    if (m.strategies.size() != m.weights.size()) return false;
    NsDistribution q(P.ks, P.gs, RatVec(P.probs.size()));
    for (std::size_t s = 0; s < m.weights.size(); ++s) {
        if (sgn(m.weights[s]) < 0) return false;
        const auto& [al, be] = m.strategies[s];
        if (al.size() != P.gs[0] || be.size() != P.gs[1]) return false;
        for (std::size_t x = 0; x < P.gs[0]; ++x)
            for (std::size_t y = 0; y < P.gs[1]; ++y) {
                if (al[x] >= P.ks[0] || be[y] >= P.ks[1]) return false;
                q.p({x, y}, {al[x], be[y]}) += m.weights[s];
            }
    }
    return q.probs == P.probs;
}

// Functional on V(CS_{k,g}) ⊗ V(CS_{l,r}), coefficients in the dual coordinate basis.
struct WitnessTensor {
    PolyShape a, b;
    TensorElement coeffs;
    std::string name;
};

inline std::optional<std::string> witness_problem(const WitnessTensor& W) {
    if (W.coeffs.factors != std::vector<std::size_t>{W.a.dim(), W.b.dim()}) return "coefficient shape does not match the polysimplices";
    RatMatrix m = W.coeffs.as_matrix();
    for (const auto& u : all_tuples(std::vector<std::size_t>(W.a.g, W.a.k))) {
        RatVec row = left_multiply(poly_vertex(W.a, u), m);
        for (const auto& v : all_tuples(std::vector<std::size_t>(W.b.g, W.b.k))) {
            Rational val = dot(row, poly_vertex(W.b, v));
            if (sgn(val) < 0) return "negative value " + to_string(val) + " on a deterministic product";
        }
    }
    return std::nullopt;
}

inline bool is_witness(const WitnessTensor& W) { return !witness_problem(W); }

inline Rational evaluate_witness(const WitnessTensor& W, const Behavior& P) {
    require_behavior(P, "evaluate_witness");
    if (!(PolyShape{P.ks[0], P.gs[0]} == W.a) || !(PolyShape{P.ks[1], P.gs[1]} == W.b))
        throw DimensionError("evaluate_witness: behavior shape differs from the witness shape");
    return pair(W.coeffs, ns_encode(P));
}

// Witness from a product of effects: f ⊗ h.
inline TensorElement functional_product(const RatVec& f, const RatVec& h) { return TensorElement::product({f, h}); }

namespace detail {

// p_{a|x} on the square, 0-based labels.
inline RatVec square_effect(std::size_t a, std::size_t x) { return poly_effect({2, 2}, x, a); }

// d_1..d_3 span the functionals; F_1..F_4 run around the square's facets.
inline std::vector<RatVec> chsh_basis() {
    return {square_effect(0, 1), sub(square_effect(0, 0), square_effect(0, 1)), square_effect(1, 0)};
}
inline std::vector<RatVec> chsh_facets() {  // index j mod 4 is F_j
    return {square_effect(0, 0), square_effect(1, 1), square_effect(1, 0), square_effect(0, 1)};
}

inline WitnessTensor chsh_member(bool reflect, std::size_t j) {
    auto d = chsh_basis();
    auto F = chsh_facets();
    TensorElement t = TensorElement::zeros({3, 3});
    for (std::size_t i = 1; i <= 3; ++i) {
        std::size_t s = reflect ? (j + 4 - i) % 4 : (i + j) % 4;
        t.coeffs = add(t.coeffs, functional_product(d[i - 1], F[s]).coeffs);
    }
    std::string name = reflect ? "s(i)=" + std::to_string(j) + "-i" : "s(i)=i+" + std::to_string(j);
    return WitnessTensor{{2, 2}, {2, 2}, t, name};
}

}  // namespace detail

// Base member first: s(i) = i+1. Then the other rotations, then reflections.
inline std::vector<WitnessTensor> chsh_family() {
    std::vector<WitnessTensor> out;
    for (std::size_t j : {1, 2, 3, 0}) out.push_back(detail::chsh_member(false, j));
    for (std::size_t j = 0; j < 4; ++j) out.push_back(detail::chsh_member(true, j));
    return out;
}

inline WitnessTensor chsh_base() { return detail::chsh_member(false, 1); }

// Ξ* : V(CS_{k,g}) -> V(CS_{2,2}) with ⟨W, P⟩ = ⟨ξ_L, (id ⊗ Ξ*)(P)⟩.
inline GptMap reduce_to_chsh(const WitnessTensor& W) {
    if (!(W.a == PolyShape{2, 2})) throw DimensionError("reduce_to_chsh: first factor must be CS_{2,2}");
    if (auto e = witness_problem(W)) throw Error("not_a_witness", "reduce_to_chsh: " + *e);
    RatMatrix L = chsh_base().coeffs.as_matrix();
    RatMatrix xs = inverse(L).value() * W.coeffs.as_matrix();
    GptMap m(make_polysimplex(W.b.k, W.b.g), make_polysimplex(2, 2), xs);

    auto va = all_tuples({2, 2});
    auto vb = all_tuples(std::vector<std::size_t>(W.b.g, W.b.k));
    for (const auto& u : va)
        for (const auto& v : vb) {
            RatVec pu = poly_vertex(W.a, u), pv = poly_vertex(W.b, v);
            Rational lhs = pair(W.coeffs, TensorElement::product({pu, pv}));
            Rational rhs = pair(chsh_base().coeffs, TensorElement::product({pu, xs * pv}));
            if (lhs != rhs) throw std::logic_error("reduce_to_chsh: pairing identity fails");
        }
    if (!is_positive(m)) throw std::logic_error("reduce_to_chsh: reduced map is not positive");
    return m;
}

// (id ⊗ Ψ)(ξ_L) for a linear Ψ : V(CS_{k,g}) -> V(CS_{2,2}).
inline WitnessTensor witness_from_map(const GptMap& psi, PolyShape b) {
    if (psi.matrix.rows() != 3 || psi.matrix.cols() != b.dim()) throw DimensionError("witness_from_map: map shape mismatch");
    RatMatrix w = chsh_base().coeffs.as_matrix() * psi.matrix;
    TensorElement t = TensorElement::zeros({3, b.dim()});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) t.at(i, j) = w(i, j);
    return WitnessTensor{{2, 2}, b, t, "reduced"};
}

inline Behavior pr_box() {
    Behavior pr = NsDistribution::uniform_shape(2, 2, 2, RatVec(16));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t o = 0; o < 2; ++o)
                    if ((a ^ o) == (x & y)) pr.p({x, y}, {a, o}) = rat(1, 2);
    return pr;
}

// v·P + (1-v)·uniform.
inline Behavior with_visibility(const Behavior& P, const Rational& v) {
    Behavior q = P;
    Rational u = (1 - v) / static_cast<long>(P.num_outcomes());
    for (auto& p : q.probs) p = v * p + u;
    return q;
}

}  // namespace conefactor
