#pragma once
// Multimeters on polyhedral GPTs: compatibility, robustness, classical
// simulation, simulation irreducibility and identity factorization.

#include "conefactor/polysimplex.hpp"

namespace conefactor {

// effects[x][a] = M_{a|x}
using EffectTable = std::vector<std::vector<RatVec>>;

struct Multimeter {
    Gpt space;
    std::size_t k = 0, g = 0;
    EffectTable effects;

    Multimeter() = default;
    Multimeter(Gpt s, EffectTable e) : space(std::move(s)), effects(std::move(e)) {
        g = effects.size();
        k = g ? effects[0].size() : 0;
        if (g == 0 || k == 0) throw DimensionError("Multimeter: need at least one measurement and one outcome");
        for (const auto& row : effects) {
            if (row.size() != k) throw DimensionError("Multimeter: measurements have different outcome counts");
            for (const auto& e : row)
                if (e.size() != space.dim) throw DimensionError("Multimeter: effect length differs from the GPT dimension");
        }
    }
    PolyShape shape() const { return {k, g}; }
};

inline std::string multimeter_problem(const Multimeter& M) {
    const auto& gens = M.space.cone.generators();
    for (std::size_t x = 0; x < M.g; ++x) {
        RatVec sum(M.space.dim);
        for (std::size_t a = 0; a < M.k; ++a) {
            const auto& e = M.effects[x][a];
            for (const auto& v : gens)
                if (sgn(dot(e, v)) < 0)
                    return "effect " + std::to_string(a + 1) + " of measurement " + std::to_string(x + 1) +
                           " is negative on " + to_string(v);
            sum = add(sum, e);
        }
        if (sum != M.space.unit) return "effects of measurement " + std::to_string(x + 1) + " do not sum to the unit";
    }
    return "";
}

inline void require_valid(const Multimeter& M, const char* who) {
    if (auto e = multimeter_problem(M); !e.empty()) throw Error("invalid_multimeter", std::string(who) + ": " + e);
}

// f(ρ) has column x equal to (M_{a|x}(ρ))_a.
inline GptMap as_channel(const Multimeter& M) {
    require_valid(M, "as_channel");
    PolyShape T = M.shape();
    RatMatrix m(T.dim(), M.space.dim);
    m.set_row(0, M.space.unit);
    for (std::size_t x = 0; x < M.g; ++x)
        for (std::size_t a = 0; a + 1 < M.k; ++a) m.set_row(T.idx(x, a), M.effects[x][a]);
    return GptMap(M.space, make_polysimplex(M.k, M.g), m);
}

inline Multimeter multimeter_from_channel(const GptMap& f, PolyShape T) {
    if (f.target.dim != T.dim()) throw DimensionError("multimeter_from_channel: target is not CS_{k,g} of the given shape");
    EffectTable e(T.g);
    for (std::size_t x = 0; x < T.g; ++x)
        for (std::size_t a = 0; a < T.k; ++a) e[x].push_back(left_multiply(poly_effect(T, x, a), f.matrix));
    return Multimeter(f.source, e);
}

// The measurements m^(x) on CS_{k,g}.
inline Multimeter identity_multimeter(std::size_t k, std::size_t g) {
    PolyShape s{k, g};
    EffectTable e(g);
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t a = 0; a < k; ++a) e[x].push_back(poly_effect(s, x, a));
    return Multimeter(make_polysimplex(k, g), e);
}

inline Multimeter trivial_multimeter(const Gpt& G, const std::vector<RatVec>& p) {
    EffectTable e;
    for (const auto& col : p) {
        e.emplace_back();
        for (const auto& q : col) e.back().push_back(scale(q, G.unit));
    }
    return Multimeter(G, e);
}

// ξ_M in A(K) ⊗ V(CS_{k,g}).
inline TensorElement multimeter_tensor(const Multimeter& M) { return map_to_tensor(as_channel(M)); }

struct JointMeasurement {
    std::vector<std::vector<std::size_t>> tuples;  // λ = (a_1..a_g)
    std::vector<RatVec> effects;                   // C_λ
    // p[x][λ][a], deterministic: 1 iff λ_x = a
    std::vector<std::vector<RatVec>> post_processing;
};

namespace detail {

// Deterministic-response decomposition: find μ_{λ,j} >= 0 with
//   Σ_{λ: λ_x=a} Σ_j μ_{λ,j} rays_j = target_{a|x}                (plain), or
//   Σ_{λ: λ_x=a} Σ_j μ_{λ,j} rays_j = t·target_{a|x} + q_{a|x}·noise,
//   Σ_a q_{a|x} + t = 1, maximizing t                              (robust).
struct DetDecomposition {
    LPResult lp;
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<RatVec> members;  // Σ_j μ_{λ,j} rays_j
    RatVec q;                     // q[x*k + a], robust mode
    Rational t;
};

inline DetDecomposition det_decompose(const std::vector<RatVec>& rays, const EffectTable& target, std::size_t k,
                                      std::size_t g, std::size_t dim, const RatVec* noise) {
    DetDecomposition out;
    out.tuples = all_tuples(std::vector<std::size_t>(g, k));
    const std::size_t L = out.tuples.size(), J = rays.size();
    LpBuilder b;
    std::size_t mu0 = b.add_vars(L * J);
    std::size_t tvar = 0, q0 = 0;
    if (noise) {
        tvar = b.add_var(Rational(0), 1);
        q0 = b.add_vars(g * k);
    }
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t c = 0; c < dim; ++c) {
                LpBuilder::Row row;
                for (std::size_t l = 0; l < L; ++l) {
                    if (out.tuples[l][x] != a) continue;
                    for (std::size_t j = 0; j < J; ++j)
                        if (sgn(rays[j][c]) != 0) row[mu0 + l * J + j] = rays[j][c];
                }
                if (noise) {
                    if (sgn(target[x][a][c]) != 0) row[tvar] = -target[x][a][c];
                    if (sgn((*noise)[c]) != 0) row[q0 + x * k + a] = -(*noise)[c];
                    b.add_eq(std::move(row), 0);
                } else {
                    b.add_eq(std::move(row), target[x][a][c]);
                }
            }
    if (noise)
        for (std::size_t x = 0; x < g; ++x) {
            LpBuilder::Row row{{tvar, Rational(1)}};
            for (std::size_t a = 0; a < k; ++a) row[q0 + x * k + a] = 1;
            b.add_eq(std::move(row), 1);
        }
    out.lp = lp_solve(b.build());
    if (out.lp.status != LPStatus::Optimal) return out;
    for (std::size_t l = 0; l < L; ++l) {
        RatVec m(dim);
        for (std::size_t j = 0; j < J; ++j) {
            const Rational& w = out.lp.primal[mu0 + l * J + j];
            if (sgn(w) != 0) m = add(m, scale(w, rays[j]));
        }
        out.members.push_back(std::move(m));
    }
    if (noise) {
        out.t = out.lp.primal[tvar];
        for (std::size_t i = 0; i < g * k; ++i) out.q.push_back(out.lp.primal[q0 + i]);
    }
    return out;
}

inline std::vector<std::vector<RatVec>> deterministic_response(const std::vector<std::vector<std::size_t>>& tuples,
                                                               std::size_t k, std::size_t g) {
    std::vector<std::vector<RatVec>> p(g, std::vector<RatVec>(tuples.size(), RatVec(k)));
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t l = 0; l < tuples.size(); ++l) p[x][l][tuples[l][x]] = 1;
    return p;
}

// γ_{a,b,x,y} >= 0 with Σ_{y,b} γ source_{b|y} = target_{a|x}, Σ_a γ independent
// of b, and Σ_y Σ_a γ_{a,b,x,y} = 1.
inline std::optional<SimulationData> simulation_lp(const EffectTable& source, const EffectTable& target, std::size_t dim) {
    const std::size_t r = source.size(), l = source.at(0).size(), g = target.size(), k = target.at(0).size();
    LpBuilder b;
    auto var = [&](std::size_t a, std::size_t bb, std::size_t x, std::size_t y) { return ((x * r + y) * l + bb) * k + a; };
    b.add_vars(g * r * l * k);
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t c = 0; c < dim; ++c) {
                LpBuilder::Row row;
                for (std::size_t y = 0; y < r; ++y)
                    for (std::size_t bb = 0; bb < l; ++bb)
                        if (sgn(source[y][bb][c]) != 0) row[var(a, bb, x, y)] = source[y][bb][c];
                b.add_eq(std::move(row), target[x][a][c]);
            }
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t y = 0; y < r; ++y)
            for (std::size_t bb = 1; bb < l; ++bb) {
                LpBuilder::Row row;
                for (std::size_t a = 0; a < k; ++a) {
                    row[var(a, bb, x, y)] += 1;
                    row[var(a, 0, x, y)] -= 1;
                }
                b.add_eq(std::move(row), 0);
            }
    for (std::size_t x = 0; x < g; ++x) {
        LpBuilder::Row row;
        for (std::size_t y = 0; y < r; ++y)
            for (std::size_t a = 0; a < k; ++a) row[var(a, 0, x, y)] = 1;
        b.add_eq(std::move(row), 1);
    }
    LPResult res = lp_solve(b.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    SimulationData d{{l, r}, {k, g}, std::vector<RatVec>(g, RatVec(r)),
                     std::vector<std::vector<std::vector<RatVec>>>(g, std::vector<std::vector<RatVec>>(r, std::vector<RatVec>(l, RatVec(k))))};
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t y = 0; y < r; ++y) {
            Rational p = 0;
            for (std::size_t a = 0; a < k; ++a) p += res.primal[var(a, 0, x, y)];
            d.pi[x][y] = p;
            for (std::size_t bb = 0; bb < l; ++bb)
                for (std::size_t a = 0; a < k; ++a)
                    d.nu[x][y][bb][a] = sgn(p) == 0 ? Rational(1, static_cast<unsigned long>(k)) : res.primal[var(a, bb, x, y)] / p;
        }
    return d;
}

}  // namespace detail

inline std::optional<JointMeasurement> is_compatible(const Multimeter& M) {
    require_valid(M, "is_compatible");
    auto dd = detail::det_decompose(M.space.cone.facets(), M.effects, M.k, M.g, M.space.dim, nullptr);
    if (dd.lp.status != LPStatus::Optimal) return std::nullopt;
    return JointMeasurement{dd.tuples, dd.members, detail::deterministic_response(dd.tuples, M.k, M.g)};
}

inline bool verify_joint_measurement(const Multimeter& M, const JointMeasurement& J) {
    RatVec total(M.space.dim);
    for (const auto& c : J.effects) {
        for (const auto& v : M.space.cone.generators())
            if (sgn(dot(c, v)) < 0) return false;
        total = add(total, c);
    }
    if (total != M.space.unit) return false;
    for (std::size_t x = 0; x < M.g; ++x)
        for (std::size_t a = 0; a < M.k; ++a) {
            RatVec s(M.space.dim);
            for (std::size_t l = 0; l < J.effects.size(); ++l) s = add(s, scale(J.post_processing[x][l][a], J.effects[l]));
            if (s != M.effects[x][a]) return false;
        }
    return true;
}

struct RobustnessResult {
    Rational value;
    std::vector<RatVec> noise;  // q_{a|x}, sums to 1 - value per x
    JointMeasurement joint;     // of value·M + q·unit
};

inline RobustnessResult compatibility_robustness_full(const Multimeter& M) {
    require_valid(M, "compatibility_robustness");
    auto dd = detail::det_decompose(M.space.cone.facets(), M.effects, M.k, M.g, M.space.dim, &M.space.unit);
    if (dd.lp.status != LPStatus::Optimal) throw std::logic_error("compatibility_robustness: LP not optimal");
    RobustnessResult r;
    r.value = dd.t;
    r.noise.assign(M.g, RatVec(M.k));
    for (std::size_t x = 0; x < M.g; ++x)
        for (std::size_t a = 0; a < M.k; ++a) r.noise[x][a] = dd.q[x * M.k + a];
    r.joint = {dd.tuples, dd.members, detail::deterministic_response(dd.tuples, M.k, M.g)};
    return r;
}

inline Rational compatibility_robustness(const Multimeter& M) { return compatibility_robustness_full(M).value; }

// Does N classically simulate M? Returns (π, ν) with M = sim ∘ N.
inline std::optional<SimulationData> classical_simulates(const Multimeter& N, const Multimeter& M) {
    if (N.space.dim != M.space.dim || !(N.space.cone == M.space.cone) || N.space.unit != M.space.unit)
        throw Error("gpt_mismatch", "classical_simulates: multimeters live on different GPTs");
    require_valid(N, "classical_simulates");
    require_valid(M, "classical_simulates");
    return detail::simulation_lp(N.effects, M.effects, N.space.dim);
}

// The multimeter obtained by post-processing N with (π, ν).
inline Multimeter apply_simulation(const SimulationData& d, const Multimeter& N) {
    if (!(d.source == N.shape())) throw DimensionError("apply_simulation: simulation source shape differs from N");
    GptMap f = compose(channel_from_sim(d), as_channel(N));
    return multimeter_from_channel(f, d.target);
}

// Extremal simulation irreducibility of a single measurement.
inline bool is_simulation_irreducible(const Gpt& G, const std::vector<RatVec>& effects) {
    std::vector<RatVec> merged;
    for (const auto& e : effects) {
        if (e.size() != G.dim) throw DimensionError("is_simulation_irreducible: effect length mismatch");
        if (is_zero(e)) continue;
        RatVec c = canonical_ray(e);
        if (std::find(merged.begin(), merged.end(), c) == merged.end()) merged.push_back(c);
    }
    const auto& rays = G.cone.facets();
    for (const auto& c : merged)
        if (std::find(rays.begin(), rays.end(), c) == rays.end()) return false;
    return rank(merged, G.dim) == merged.size();
}

struct IdentityFactorization {
    bool possible = false;
    std::optional<GptMap> embed;     // CS_{l,r} -> CS_{k,g} (the multimeter)
    std::optional<GptMap> restrict;  // CS_{k,g} -> CS_{l,r}
};

// Can id on CS_{l,r} be written as restrict ∘ embed through CS_{k,g}?
// CS_{1,r} is a single point, so l = 1 always succeeds.
inline IdentityFactorization can_factor_identity(std::size_t l, std::size_t r, std::size_t k, std::size_t g) {
    if (!l || !r || !k || !g) throw std::invalid_argument("can_factor_identity: all sizes must be >= 1");
    IdentityFactorization out;
    PolyShape S{l, r}, T{k, g};
    auto empty_sim = [](PolyShape src, PolyShape dst) {
        return SimulationData{src, dst, std::vector<RatVec>(dst.g, RatVec(src.g)),
                              std::vector<std::vector<std::vector<RatVec>>>(
                                  dst.g, std::vector<std::vector<RatVec>>(src.g, std::vector<RatVec>(src.k, RatVec(dst.k))))};
    };
    auto fill_uniform = [](SimulationData& d) {
        for (auto& blk : d.nu)
            for (auto& col : blk)
                for (auto& dist : col)
                    if (is_zero(dist)) dist.assign(dist.size(), Rational(1, static_cast<unsigned long>(dist.size())));
    };
    if (l == 1) {
        SimulationData e = empty_sim(S, T), rs = empty_sim(T, S);
        for (std::size_t x = 0; x < g; ++x) {
            e.pi[x][0] = 1;
            e.nu[x][0][0][0] = 1;
        }
        for (std::size_t y = 0; y < r; ++y) {
            rs.pi[y][0] = 1;
            for (std::size_t a = 0; a < k; ++a) rs.nu[y][0][a][0] = 1;
        }
        fill_uniform(e);
        fill_uniform(rs);
        out.possible = true;
        out.embed = channel_from_sim(e);
        out.restrict = channel_from_sim(rs);
        return out;
    }
    if (k < l || g < r) return out;
    SimulationData e = empty_sim(S, T), rs = empty_sim(T, S);
    for (std::size_t x = 0; x < g; ++x) {
        if (x < r) {
            e.pi[x][x] = 1;
            for (std::size_t b = 0; b < l; ++b) e.nu[x][x][b][b] = 1;  // outcomes l..k-1 stay empty
        } else {
            e.pi[x][0] = 1;
            for (std::size_t b = 0; b < l; ++b) e.nu[x][0][b][0] = 1;
        }
    }
    for (std::size_t y = 0; y < r; ++y) {
        rs.pi[y][y] = 1;
        for (std::size_t a = 0; a < k; ++a) rs.nu[y][y][a][std::min(a, l - 1)] = 1;
    }
    fill_uniform(e);
    fill_uniform(rs);
    out.possible = true;
    out.embed = channel_from_sim(e);
    out.restrict = channel_from_sim(rs);
    return out;
}

// M_{a|x} = Σ_λ Φ_λ^*(N_{a|x,λ}); ops[λ]: K -> K_B, N[λ][x][a] effects on K_B.
inline bool verify_kb_simulation(const Multimeter& M, const std::vector<GptMap>& ops,
                                 const std::vector<EffectTable>& N) {
    require_valid(M, "verify_kb_simulation");
    if (ops.empty() || ops.size() != N.size())
        throw Error("invalid_kb_data", "verify_kb_simulation: need one effect table per operation");
    RatMatrix total(ops[0].matrix.rows(), ops[0].matrix.cols());
    for (std::size_t l = 0; l < ops.size(); ++l) {
        const GptMap& op = ops[l];
        if (op.source.dim != M.space.dim || op.target.dim != ops[0].target.dim)
            throw Error("invalid_kb_data", "verify_kb_simulation: operations have inconsistent dimensions");
        if (!is_positive(op)) throw Error("invalid_kb_data", "verify_kb_simulation: operation " + std::to_string(l) + " is not positive");
        total = total + op.matrix;
        if (N[l].size() != M.g) throw Error("invalid_kb_data", "verify_kb_simulation: effect table has the wrong measurement count");
        Multimeter check(op.target, N[l]);
        if (check.k != M.k) throw Error("invalid_kb_data", "verify_kb_simulation: effect table has the wrong outcome count");
        if (auto e = multimeter_problem(check); !e.empty())
            throw Error("invalid_kb_data", "verify_kb_simulation: table " + std::to_string(l) + ": " + e);
    }
    if (!is_channel(GptMap(ops[0].source, ops[0].target, total)))
        throw Error("invalid_kb_data", "verify_kb_simulation: operations do not sum to a channel");
    for (std::size_t x = 0; x < M.g; ++x)
        for (std::size_t a = 0; a < M.k; ++a) {
            RatVec s(M.space.dim);
            for (std::size_t l = 0; l < ops.size(); ++l) s = add(s, left_multiply(N[l][x][a], ops[l].matrix));
            if (s != M.effects[x][a]) return false;
        }
    return true;
}

// The multimeter picking the faces of the cube state space (x, y, z) ↦ ((1±x)/2, ...).
inline Multimeter cube_face_multimeter() {
    EffectTable e(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (int s : {1, -1}) {
            RatVec f(4);
            f[i] = rat(s, 2);
            f[3] = rat(1, 2);
            e[i].push_back(f);
        }
    return Multimeter(make_cube(), e);
}

// Dichotomic face measurements on the octahedron: ½(s, 1) and ½(-s, 1).
inline Multimeter octahedron_face_multimeter() {
    const int signs[4][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
    EffectTable e(4);
    for (std::size_t x = 0; x < 4; ++x) {
        RatVec p(4), m(4);
        for (std::size_t i = 0; i < 3; ++i) {
            p[i] = rat(signs[x][i], 2);
            m[i] = rat(-signs[x][i], 2);
        }
        p[3] = m[3] = rat(1, 2);
        e[x] = {p, m};
    }
    return Multimeter(make_octahedron(), e);
}

}  // namespace conefactor
