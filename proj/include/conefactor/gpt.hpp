#pragma once
// GPTs as (cone, order unit) pairs, maps between them, the maximally
// entangled tensor and the tensor/map correspondence.

#include "conefactor/cone.hpp"

namespace conefactor {

struct Gpt {
    std::size_t dim = 0;
    PolyhedralCone cone;
    RatVec unit;

    Gpt() = default;
    Gpt(PolyhedralCone c, RatVec u) : dim(c.dim()), cone(std::move(c)), unit(std::move(u)) {
        if (unit.size() != dim)
            throw DimensionError("Gpt: unit has length " + std::to_string(unit.size()) + ", cone dimension is " +
                                 std::to_string(dim));
    }

    // Unit strictly positive on every extreme ray.
    bool unit_is_interior() const {
        for (const auto& g : cone.generators())
            if (sgn(dot(unit, g)) <= 0) return false;
        return true;
    }
};

inline std::vector<RatVec> state_vertices(const Gpt& G) {
    std::vector<RatVec> out;
    for (const auto& g : G.cone.generators()) {
        Rational u = dot(G.unit, g);
        if (sgn(u) <= 0)
            throw Error("unit_not_interior", "state_vertices: generator " + to_string(g) + " has unit value " +
                                                 to_string(u) + "; the unit is not interior to the dual cone");
        out.push_back(scale(1 / u, g));
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

inline Gpt make_simplex(std::size_t k) {
    if (k == 0) throw DimensionError("simplex of size 0");
    return Gpt(orthant(k), RatVec(k, 1));
}

// Cube state space {(x,y,z,1) : |x|,|y|,|z| <= 1}.
inline Gpt make_cube() {
    std::vector<RatVec> gens, facets;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) gens.push_back({a, b, c, 1});
    for (std::size_t i = 0; i < 3; ++i)
        for (int s : {-1, 1}) {
            RatVec f(4);
            f[i] = s;
            f[3] = 1;
            facets.push_back(f);
        }
    return Gpt(PolyhedralCone::from_both(4, gens, facets), {0, 0, 0, 1});
}

// Octahedron state space {(x,y,z,1) : |x|+|y|+|z| <= 1}.
inline Gpt make_octahedron() {
    Gpt cube = make_cube();
    return Gpt(PolyhedralCone::from_both(4, cube.cone.facets(), cube.cone.generators()), {0, 0, 0, 1});
}

struct GptMap {
    Gpt source, target;
    RatMatrix matrix;  // target.dim x source.dim

    GptMap() = default;
    GptMap(Gpt s, Gpt t, RatMatrix m) : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
        if (matrix.rows() != target.dim || matrix.cols() != source.dim)
            throw DimensionError("GptMap: matrix is " + std::to_string(matrix.rows()) + "x" +
                                 std::to_string(matrix.cols()) + ", expected " + std::to_string(target.dim) + "x" +
                                 std::to_string(source.dim));
    }
    RatVec operator()(const RatVec& v) const { return matrix * v; }
};

inline GptMap identity_map(const Gpt& G) { return GptMap(G, G, RatMatrix::identity(G.dim)); }

// g ∘ f
inline GptMap compose(const GptMap& g, const GptMap& f) {
    if (f.target.dim != g.source.dim) throw DimensionError("compose: inner target and outer source dimensions differ");
    return GptMap(f.source, g.target, g.matrix * f.matrix);
}

inline bool is_positive(const GptMap& f) {
    for (const auto& g : f.source.cone.generators())
        if (!f.target.cone.contains(f.matrix * g)) return false;
    return true;
}

inline bool is_unital(const GptMap& f) { return left_multiply(f.target.unit, f.matrix) == f.source.unit; }

inline bool is_channel(const GptMap& f) { return is_positive(f) && is_unital(f); }

// χ = Σ a_i ⊗ e_i in the standard basis: the identity coefficient array.
inline TensorElement chi_tensor(const Gpt& G) {
    TensorElement t = TensorElement::zeros({G.dim, G.dim});
    for (std::size_t i = 0; i < G.dim; ++i) t.at(i, i) = 1;
    return t;
}

// ξ_Φ = Σ a_i ⊗ Φ(e_i), an element of A(source) ⊗ V(target).
inline TensorElement map_to_tensor(const GptMap& f) {
    TensorElement t = TensorElement::zeros({f.source.dim, f.target.dim});
    for (std::size_t i = 0; i < f.source.dim; ++i)
        for (std::size_t j = 0; j < f.target.dim; ++j) t.at(i, j) = f.matrix(j, i);
    return t;
}

inline GptMap tensor_to_map(const TensorElement& xi, const Gpt& source, const Gpt& target) {
    if (xi.factors != std::vector<std::size_t>{source.dim, target.dim})
        throw DimensionError("tensor_to_map: tensor shape does not match " + std::to_string(source.dim) + " x " +
                             std::to_string(target.dim));
    RatMatrix m(target.dim, source.dim);
    for (std::size_t i = 0; i < source.dim; ++i)
        for (std::size_t j = 0; j < target.dim; ++j) m(j, i) = xi.at(i, j);
    return GptMap(source, target, m);
}

// The GPT whose states are positive functionals f with f(ρ) = 1.
inline Gpt dual_state_space(const Gpt& G, const RatVec& rho) {
    if (rho.size() != G.dim) throw DimensionError("dual_state_space: rho has the wrong length");
    for (const auto& f : G.cone.facets())
        if (sgn(dot(f, rho)) <= 0)
            throw Error("unbounded_dual", "dual state space is unbounded: rho lies on the boundary (facet " +
                                              to_string(f) + " evaluates to " + to_string(dot(f, rho)) + ")");
    return Gpt(dual_cone(G.cone), rho);
}

struct MinFactorization {
    GptMap psi1;  // source -> simplex
    GptMap psi2;  // simplex -> target
    std::vector<SeparableTerm> terms;
};

// Factor a positive map through a simplex when its tensor is separable.
inline std::optional<MinFactorization> min_factor(const GptMap& f) {
    TensorElement xi = map_to_tensor(f);
    PolyhedralCone dual_src = dual_cone(f.source.cone);
    if (!member_max(xi, dual_src, f.target.cone)) return std::nullopt;
    SeparabilityResult sep = member_min(xi, dual_src, f.target.cone);
    if (!sep.separable) return std::nullopt;
    // Terms sharing a target generator are merged into one simplex vertex.
    std::vector<RatVec> heads, funcs;
    for (const auto& t : sep.decomposition) {
        Rational u = dot(f.target.unit, t.b);
        RatVec fa = scale(t.weight * u, t.a);
        auto it = std::find(heads.begin(), heads.end(), t.b);
        if (it == heads.end()) {
            heads.push_back(t.b);
            funcs.push_back(fa);
        } else {
            auto& acc = funcs[static_cast<std::size_t>(it - heads.begin())];
            acc = add(acc, fa);
        }
    }
    if (heads.empty()) {  // zero map
        heads.push_back(f.target.cone.generators().front());
        funcs.push_back(RatVec(f.source.dim));
    }
    const std::size_t L = heads.size();
    Gpt simplex = make_simplex(L);
    RatMatrix p1(L, f.source.dim), p2(f.target.dim, L);
    for (std::size_t l = 0; l < L; ++l) {
        Rational u = dot(f.target.unit, heads[l]);
        p1.set_row(l, funcs[l]);
        for (std::size_t r = 0; r < f.target.dim; ++r) p2(r, l) = heads[l][r] / u;
    }
    return MinFactorization{GptMap(f.source, simplex, p1), GptMap(simplex, f.target, p2), sep.decomposition};
}

}  // namespace conefactor
