#pragma once
// Test-side oracles and random generators. The oracles here deliberately avoid
// the library's own algorithms (no double description, no simplex).

#include <random>
#include <set>

#include "conefactor/bell.hpp"
#include "conefactor/steering.hpp"

namespace oracle {

using namespace conefactor;

// Extreme rays of {x : a·x >= 0} by brute force over (d-1)-subsets of rows.
inline std::vector<RatVec> brute_extreme_rays(const std::vector<RatVec>& rows, std::size_t d) {
    std::set<RatVec, bool (*)(const RatVec&, const RatVec&)> found(lex_less);
    for (const auto& S : subsets(rows.size(), d - 1)) {
        std::vector<RatVec> sub;
        for (auto i : S) sub.push_back(rows[i]);
        RatMatrix m = RatMatrix::from_rows(sub, d);
        if (rank(m) != d - 1) continue;
        auto ns = nullspace(m);
        if (ns.size() != 1) continue;
        for (int sgnv : {1, -1}) {
            RatVec r = scale(Rational(sgnv), ns[0]);
            bool ok = true;
            for (const auto& a : rows)
                if (sgn(dot(a, r)) < 0) { ok = false; break; }
            if (ok) found.insert(canonical_ray(r));
        }
    }
    return std::vector<RatVec>(found.begin(), found.end());
}

// Random vector in the cone: nonnegative integer mix of generators.
template <class Rng>
RatVec random_cone_element(Rng& rng, const std::vector<RatVec>& gens, int maxw = 3) {
    std::uniform_int_distribution<int> w(0, maxw);
    RatVec v(gens.at(0).size());
    for (const auto& g : gens) v = add(v, scale(Rational(w(rng)), g));
    return v;
}

inline bool same_rays(std::vector<RatVec> a, std::vector<RatVec> b) {
    return canonical_rays(a) == canonical_rays(b);
}

}  // namespace oracle

namespace oracle {

// Random local NS distribution: mixture of products of per-party conditional
// distributions p_i(a|x), each entry a multiple of 1/denom.
template <class Rng>
NsDistribution random_local(Rng& rng, const std::vector<std::size_t>& ks, const std::vector<std::size_t>& gs,
                            int terms = 2, long denom = 4) {
    std::size_t n = ks.size();
    std::size_t cells = 1;
    for (std::size_t i = 0; i < n; ++i) cells *= ks[i] * gs[i];
    NsDistribution d(ks, gs, RatVec(cells));
    RatVec w = random_distribution(rng, terms, denom);
    for (int t = 0; t < terms; ++t) {
        if (sgn(w[t]) == 0) continue;
        std::vector<std::vector<RatVec>> local(n);  // local[i][x][a]
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t x = 0; x < gs[i]; ++x) local[i].push_back(random_distribution(rng, ks[i], denom));
        for (const auto& x : all_tuples(gs))
            for (const auto& a : all_tuples(ks)) {
                Rational p = w[t];
                for (std::size_t i = 0; i < n && sgn(p) != 0; ++i) p *= local[i][x[i]][a[i]];
                d.p(x, a) += p;
            }
    }
    return d;
}


}  // namespace oracle

namespace oracle {

// Pentagon state space at height 1; a non-simplicial, non-polysimplex 3D GPT.
inline Gpt pentagon() {
    std::vector<RatVec> v{{2, 0, 1}, {1, 2, 1}, {-1, 2, 1}, {-2, 0, 1}, {0, -2, 1}};
    return Gpt(PolyhedralCone::from_generators(3, v), {0, 0, 1});
}

// Random k-outcome measurement: k-1 random dual-cone elements, scaled to fit
// under the unit, plus the complement.
template <class Rng>
std::vector<RatVec> random_measurement(Rng& rng, const Gpt& G, std::size_t k, int maxw = 3) {
    std::vector<RatVec> eff;
    RatVec sum(G.dim);
    for (std::size_t a = 0; a + 1 < k; ++a) {
        RatVec f = random_cone_element(rng, G.cone.facets(), maxw);
        eff.push_back(f);
        sum = add(sum, f);
    }
    Rational mx = 0;
    for (const auto& v : state_vertices(G)) mx = std::max(mx, dot(sum, v));
    std::uniform_int_distribution<int> c(1, 4);
    Rational s = sgn(mx) > 0 ? rat(c(rng), 4) / mx : Rational(0);
    RatVec rest = G.unit;
    for (auto& e : eff) {
        e = scale(s, e);
        rest = sub(rest, e);
    }
    eff.push_back(rest);
    return eff;
}

template <class Rng>
Multimeter random_multimeter(Rng& rng, const Gpt& G, std::size_t k, std::size_t g, int maxw = 3) {
    EffectTable e;
    for (std::size_t x = 0; x < g; ++x) e.push_back(random_measurement(rng, G, k, maxw));
    return Multimeter(G, e);
}

}  // namespace oracle

namespace oracle {

// t·σ + (1-t)·(p_{a|x} σ̄) for the octahedron counterexample σ.
inline Assemblage noisy_counterexample(const Rational& t, const std::vector<RatVec>& p) {
    Assemblage ce = octahedron_counterexample();
    RatVec bar = ce.sigma_bar();
    EffectTable e(3);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t a = 0; a < 2; ++a) e[x].push_back(add(scale(t, ce.sigma[x][a]), scale((1 - t) * p[x][a], bar)));
    return Assemblage(ce.space, e);
}

// Random LHS assemblage on G: random normalized ensemble, random responses.
template <class Rng>
Assemblage random_lhs_assemblage(Rng& rng, const Gpt& G, std::size_t k, std::size_t g, std::size_t members = 3) {
    auto verts = state_vertices(G);
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    RatVec w = random_distribution(rng, members, 6);
    EffectTable e(g, std::vector<RatVec>(k, RatVec(G.dim)));
    for (std::size_t m = 0; m < members; ++m) {
        RatVec state = add(scale(rat(1, 2), verts[pick(rng)]), scale(rat(1, 2), verts[pick(rng)]));
        for (std::size_t x = 0; x < g; ++x) {
            RatVec resp = random_distribution(rng, k, 2);
            for (std::size_t a = 0; a < k; ++a) e[x][a] = add(e[x][a], scale(w[m] * resp[a], state));
        }
    }
    return Assemblage(G, e);
}

}  // namespace oracle

namespace oracle {

inline Multimeter first_inputs(const Multimeter& M, std::size_t g) {
    return Multimeter(M.space, EffectTable(M.effects.begin(), M.effects.begin() + static_cast<long>(g)));
}

// t·M + (1-t)·(uniform coin), effect-wise.
inline Multimeter noisy(const Multimeter& M, const Rational& t) {
    EffectTable e = M.effects;
    for (auto& row : e)
        for (auto& f : row) f = add(scale(t, f), scale((1 - t) / static_cast<long>(M.k), M.space.unit));
    return Multimeter(M.space, e);
}

template <class Rng>
Multimeter random_test_multimeter(Rng& rng, std::size_t which, std::size_t g) {
    std::uniform_int_distribution<int> c(0, 2), tnum(2, 8);
    Multimeter base;
    if (which == 0) base = identity_multimeter(2, 2);
    if (which == 1) base = first_inputs(cube_face_multimeter(), g);
    if (which == 2) base = first_inputs(octahedron_face_multimeter(), g);
    if (which == 0 && g == 3) {
        Multimeter id = identity_multimeter(2, 2);
        EffectTable e = id.effects;
        e.push_back(random_measurement(rng, id.space, 2));
        base = Multimeter(id.space, e);
    }
    if (c(rng) == 0) return random_multimeter(rng, base.space, 2, g);
    return noisy(base, rat(tnum(rng), 8));
}

// NS behavior from relabeled PR inputs mixed with a local part.
template <class Rng>
Behavior random_square_behavior(Rng& rng, std::size_t g) {
    std::uniform_int_distribution<std::size_t> in(0, 1);
    std::uniform_int_distribution<int> wpr(0, 8);
    std::vector<std::size_t> fa(g), fb(g);
    for (std::size_t i = 0; i < g; ++i) {
        fa[i] = i < 2 ? i : in(rng);
        fb[i] = i < 2 ? i : in(rng);
    }
    std::size_t flip = in(rng);
    Behavior loc = random_local(rng, {2, 2}, {g, g}, 3, 6);
    Rational w = rat(wpr(rng), 8);
    Behavior out = loc;
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t y = 0; y < g; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    Rational pr = (a ^ b) == ((fa[x] & fb[y]) ^ flip) ? rat(1, 2) : Rational(0);
                    out.p({x, y}, {a, b}) = w * pr + (1 - w) * loc.p({x, y}, {a, b});
                }
    return out;
}

}  // namespace oracle
