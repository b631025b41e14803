#pragma once
// Symmetric extensions: the symmetrizer, the reduction map γ_n with Φ = 𝟙,
// n-extendability LPs for multimeter tensors and behaviors, and their
// no-signaling joint-table counterparts.

#include <map>

#include "conefactor/bell.hpp"
#include "conefactor/meters.hpp"

namespace conefactor {

constexpr std::size_t kMaxExtensionN = 4;
constexpr std::size_t kMaxExtensionKG = 3;

inline void check_extension_caps(std::size_t k, std::size_t g, std::size_t n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be at least 1");
    if (n > kMaxExtensionN || k > kMaxExtensionKG || g > kMaxExtensionKG)
        throw Error("extension_cap", std::string(who) + ": supported up to n = " + std::to_string(kMaxExtensionN) +
                                         " and k, g = " + std::to_string(kMaxExtensionKG) + " (got n = " + std::to_string(n) +
                                         ", k = " + std::to_string(k) + ", g = " + std::to_string(g) + ")");
}

namespace detail {

inline std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

inline std::size_t flat_index(const std::vector<std::size_t>& t, std::size_t base) {
    std::size_t f = 0;
    for (auto v : t) f = f * base + v;
    return f;
}

}  // namespace detail

// (1/n!) Σ_σ U_σ on (R^d)^{⊗n}, first factor most significant.
inline RatMatrix symmetrizer(std::size_t n, std::size_t d) {
    if (n < 1) throw std::invalid_argument("symmetrizer: n must be at least 1");
    const std::size_t N = detail::ipow(d, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::size_t>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    Rational w = rat(1, static_cast<long>(perms.size()));
    RatMatrix P(N, N);
    for_each_tuple(std::vector<std::size_t>(n, d), [&](const std::vector<std::size_t>& beta) {
        std::size_t col = detail::flat_index(beta, d);
        std::vector<std::size_t> img(n);
        for (const auto& s : perms) {
            for (std::size_t i = 0; i < n; ++i) img[i] = beta[s[i]];
            P(detail::flat_index(img, d), col) += w;
        }
    });
    return P;
}

struct ReductionMap {
    std::size_t n = 1;
    PolyShape shape;
    RatMatrix matrix;  // D x D^n

    RatVec operator()(const RatVec& v) const { return matrix * v; }
};

// γ_n = (1/n) Σ_i 𝟙^{⊗ i-1} ⊗ id ⊗ 𝟙^{⊗ n-i}; 𝟙 reads coordinate 0.
inline ReductionMap reduction_map(std::size_t k, std::size_t g, std::size_t n) {
    if (n < 1) throw std::invalid_argument("reduction_map: n must be at least 1");
    PolyShape S{k, g};
    check_shape(S);
    const std::size_t D = S.dim();
    RatMatrix m(D, detail::ipow(D, n));
    Rational w = rat(1, static_cast<long>(n));
    for (std::size_t r = 0; r < D; ++r)
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> beta(n, 0);
            beta[i] = r;
            m(r, detail::flat_index(beta, D)) += w;
        }
    return ReductionMap{n, S, m};
}

enum class ExtensionMode { Symmetric, Full };

namespace detail {

struct ExtensionLp {
    std::size_t dimA = 0, D = 0, n = 1;
    std::vector<std::size_t> cls;  // flat β -> variable class
    std::size_t classes = 0;
};

// Coefficients c[i][β] of ξ^(n) ∈ W ⊗ V(CS)^{⊗n}. Every pos[f] ⊗ (effect product)
// must be nonnegative on ξ^(n), and (id ⊗ γ_n)(ξ^(n)) = target. `inner` is
// strictly positive on every pos[f]; the LP is written around the interior
// point inner ⊗ center^{⊗n} so the start is not degenerate.
inline std::optional<TensorElement> extension_lp(const std::vector<RatVec>& pos, const RatVec& inner, PolyShape S, std::size_t n,
                                                  const TensorElement& target, ExtensionMode mode) {
    const std::size_t dimA = inner.size();
    const std::size_t D = S.dim(), N = ipow(D, n);
    ExtensionLp e{dimA, D, n, std::vector<std::size_t>(N), 0};
    std::map<std::vector<std::size_t>, std::size_t> ids;
    for_each_tuple(std::vector<std::size_t>(n, D), [&](const std::vector<std::size_t>& beta) {
        auto key = beta;
        if (mode == ExtensionMode::Symmetric) std::sort(key.begin(), key.end());
        auto [it, fresh] = ids.emplace(key, ids.size());
        e.cls[flat_index(beta, D)] = it->second;
    });
    e.classes = ids.size();

    const std::size_t nv = dimA * e.classes;
    auto var = [&](std::size_t i, std::size_t c) { return i * e.classes + c; };
    std::vector<LpBuilder::Row> ge, eq;
    RatVec eq_rhs;

    RatVec center(D, rat(1, static_cast<long>(S.k)));
    center[0] = 1;
    RatVec c0(nv);
    for_each_tuple(std::vector<std::size_t>(n, D), [&](const std::vector<std::size_t>& beta) {
        Rational p = 1;
        for (auto v : beta) p *= center[v];
        for (std::size_t i = 0; i < dimA; ++i) c0[var(i, e.cls[flat_index(beta, D)])] = inner[i] * p;
    });
    auto at_c0 = [&](const LpBuilder::Row& row) {
        Rational v = 0;
        for (const auto& [j, a] : row) v += a * c0[j];
        return v;
    };

    // effects and their supports in coordinates
    std::vector<RatVec> eff;
    for (std::size_t x = 0; x < S.g; ++x)
        for (std::size_t a = 0; a < S.k; ++a) eff.push_back(poly_effect(S, x, a));
    std::vector<std::vector<std::size_t>> support(eff.size());
    for (std::size_t t = 0; t < eff.size(); ++t)
        for (std::size_t j = 0; j < D; ++j)
            if (sgn(eff[t][j]) != 0) support[t].push_back(j);

    std::set<std::vector<std::size_t>> done;
    for_each_tuple(std::vector<std::size_t>(n, eff.size()), [&](const std::vector<std::size_t>& et) {
        if (mode == ExtensionMode::Symmetric) {
            auto key = et;
            std::sort(key.begin(), key.end());
            if (!done.insert(key).second) return;
        }
        std::map<std::size_t, Rational> w;
        std::vector<std::size_t> radix;
        for (auto t : et) radix.push_back(support[t].size());
        for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
            std::vector<std::size_t> beta(n);
            Rational p = 1;
            for (std::size_t i = 0; i < n; ++i) {
                beta[i] = support[et[i]][pick[i]];
                p *= eff[et[i]][beta[i]];
            }
            w[e.cls[flat_index(beta, D)]] += p;
        });
        for (const auto& f : pos) {
            LpBuilder::Row row;
            for (std::size_t i = 0; i < dimA; ++i) {
                if (sgn(f[i]) == 0) continue;
                for (const auto& [c, v] : w)
                    if (sgn(v) != 0) row[var(i, c)] += f[i] * v;
            }
            if (!row.empty()) ge.push_back(std::move(row));
        }
    });

    RatMatrix gam = reduction_map(S.k, S.g, n).matrix;
    for (std::size_t i = 0; i < dimA; ++i)
        for (std::size_t r = 0; r < D; ++r) {
            LpBuilder::Row row;
            for (std::size_t col = 0; col < N; ++col)
                if (sgn(gam(r, col)) != 0) row[var(i, e.cls[col])] += gam(r, col);
            eq.push_back(std::move(row));
            eq_rhs.push_back(target.at(i, r));
        }

    LpBuilder b;
    b.add_vars(nv, std::nullopt);
    for (auto& r : ge) {
        Rational v = at_c0(r);
        b.add_ge(std::move(r), -v);
    }
    for (std::size_t s = 0; s < eq.size(); ++s) {
        Rational v = at_c0(eq[s]);
        b.add_eq(std::move(eq[s]), eq_rhs[s] - v);
    }
    LPResult res = lp_solve(b.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    std::vector<std::size_t> factors{dimA};
    for (std::size_t i = 0; i < n; ++i) factors.push_back(D);
    TensorElement out = TensorElement::zeros(factors);
    for (std::size_t i = 0; i < dimA; ++i)
        for (std::size_t col = 0; col < N; ++col) out.coeffs[i * N + col] = c0[var(i, e.cls[col])] + res.primal[var(i, e.cls[col])];
    return out;
}

}  // namespace detail

// Positivity against pos ⊗ (effect products) and the reduction identity.
inline bool verify_extension(const TensorElement& ext, const std::vector<RatVec>& pos, PolyShape S, std::size_t n,
                             const TensorElement& target) {
    const std::size_t D = S.dim(), N = detail::ipow(D, n), dimA = target.factors.at(0);
    if (ext.coeffs.size() != dimA * N) return false;
    RatMatrix gam = reduction_map(S.k, S.g, n).matrix;
    for (std::size_t i = 0; i < dimA; ++i) {
        RatVec row(ext.coeffs.begin() + static_cast<long>(i * N), ext.coeffs.begin() + static_cast<long>((i + 1) * N));
        RatVec red = gam * row;
        for (std::size_t r = 0; r < D; ++r)
            if (red[r] != target.at(i, r)) return false;
    }
    std::vector<RatVec> eff;
    for (std::size_t x = 0; x < S.g; ++x)
        for (std::size_t a = 0; a < S.k; ++a) eff.push_back(poly_effect(S, x, a));
    bool ok = true;
    for_each_tuple(std::vector<std::size_t>(n, eff.size()), [&](const std::vector<std::size_t>& et) {
        if (!ok) return;
        std::vector<RatVec> fs;
        for (auto t : et) fs.push_back(eff[t]);
        RatVec prod = TensorElement::product(fs).coeffs;
        for (const auto& f : pos) {
            Rational v = 0;
            for (std::size_t i = 0; i < dimA; ++i)
                if (sgn(f[i]) != 0)
                    for (std::size_t col = 0; col < N; ++col) v += f[i] * ext.coeffs[i * N + col] * prod[col];
            if (sgn(v) < 0) {
                ok = false;
                return;
            }
        }
    });
    return ok;
}

inline std::optional<TensorElement> multimeter_extension(const Multimeter& M, std::size_t n,
                                                         ExtensionMode mode = ExtensionMode::Symmetric) {
    require_valid(M, "is_n_extendable_multimeter");
    check_extension_caps(M.k, M.g, n, "is_n_extendable_multimeter");
    return detail::extension_lp(M.space.cone.generators(), M.space.unit, M.shape(), n, multimeter_tensor(M), mode);
}

inline bool is_n_extendable_multimeter(const Multimeter& M, std::size_t n, ExtensionMode mode = ExtensionMode::Symmetric) {
    return multimeter_extension(M, n, mode).has_value();
}

inline std::vector<RatVec> all_effects(PolyShape S) {
    std::vector<RatVec> out;
    for (std::size_t x = 0; x < S.g; ++x)
        for (std::size_t a = 0; a < S.k; ++a) out.push_back(poly_effect(S, x, a));
    return out;
}

inline void require_square_behavior(const Behavior& P, const char* who) {
    require_behavior(P, who);
    if (P.ks[0] != P.ks[1] || P.gs[0] != P.gs[1])
        throw DimensionError(std::string(who) + ": both parties need the same (k, g)");
}

inline std::optional<TensorElement> behavior_extension(const Behavior& P, std::size_t n,
                                                       ExtensionMode mode = ExtensionMode::Symmetric) {
    require_square_behavior(P, "is_n_extendable_behavior");
    PolyShape S{P.ks[0], P.gs[0]};
    check_extension_caps(S.k, S.g, n, "is_n_extendable_behavior");
    RatVec center(S.dim(), rat(1, static_cast<long>(S.k)));
    center[0] = 1;
    return detail::extension_lp(all_effects(S), center, S, n, ns_encode(P), mode);
}

inline bool is_n_extendable_behavior(const Behavior& P, std::size_t n, ExtensionMode mode = ExtensionMode::Symmetric) {
    return behavior_extension(P, n, mode).has_value();
}

// One joint table per n-subset of inputs (lexicographic), outcome tuples flat
// with the first position most significant.
struct NwiseJointFamily {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<std::vector<RatVec>> tables;
};

namespace detail {

// Σ over outcome tuples whose restriction to `keep` positions equals `vals`.
inline std::vector<std::size_t> tuples_matching(std::size_t k, std::size_t n, const std::vector<std::size_t>& keep,
                                                const std::vector<std::size_t>& vals) {
    std::vector<std::size_t> out;
    for_each_tuple(std::vector<std::size_t>(n, k), [&](const std::vector<std::size_t>& a) {
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (a[keep[i]] != vals[i]) return;
        out.push_back(flat_index(a, k));
    });
    return out;
}

// Positions of Z's members inside the sorted subset Y.
inline std::vector<std::size_t> positions_in(const std::vector<std::size_t>& Y, const std::vector<std::size_t>& Z) {
    std::vector<std::size_t> pos;
    for (auto z : Z) pos.push_back(static_cast<std::size_t>(std::find(Y.begin(), Y.end(), z) - Y.begin()));
    return pos;
}

inline std::vector<std::size_t> subsets_containing(const std::vector<std::vector<std::size_t>>& Ys, const std::vector<std::size_t>& Z) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < Ys.size(); ++i)
        if (std::includes(Ys[i].begin(), Ys[i].end(), Z.begin(), Z.end())) out.push_back(i);
    return out;
}

}  // namespace detail

inline std::optional<NwiseJointFamily> nwise_compatible_ns(const Multimeter& M, std::size_t n) {
    require_valid(M, "nwise_compatible_ns");
    check_extension_caps(M.k, M.g, n, "nwise_compatible_ns");
    if (n > M.g) throw std::invalid_argument("nwise_compatible_ns: n exceeds the number of inputs");
    const std::size_t k = M.k, dim = M.space.dim, T = detail::ipow(k, n);
    const auto& H = M.space.cone.facets();
    auto Ys = subsets(M.g, n);
    LpBuilder b;
    std::size_t first = b.add_vars(Ys.size() * T * H.size());
    auto mu = [&](std::size_t s, std::size_t t, std::size_t h) { return first + (s * T + t) * H.size() + h; };
    // Σ_{t ∈ ts} G^{Y_s}_t as a row for coordinate c, with sign
    auto accumulate = [&](LpBuilder::Row& row, std::size_t s, const std::vector<std::size_t>& ts, std::size_t c, int sign) {
        for (auto t : ts)
            for (std::size_t h = 0; h < H.size(); ++h)
                if (sgn(H[h][c]) != 0) row[mu(s, t, h)] += sign * H[h][c];
    };
    for (std::size_t s = 0; s < Ys.size(); ++s)
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t a = 0; a < k; ++a) {
                auto ts = detail::tuples_matching(k, n, {p}, {a});
                for (std::size_t c = 0; c < dim; ++c) {
                    LpBuilder::Row row;
                    accumulate(row, s, ts, c, 1);
                    b.add_eq(std::move(row), M.effects[Ys[s][p]][a][c]);
                }
            }
    if (n >= 2)
        for (const auto& Z : subsets(M.g, n - 1)) {
            auto owners = detail::subsets_containing(Ys, Z);
            for (const auto& zv : all_tuples(std::vector<std::size_t>(n - 1, k)))
                for (std::size_t o = 1; o < owners.size(); ++o) {
                    auto t0 = detail::tuples_matching(k, n, detail::positions_in(Ys[owners[0]], Z), zv);
                    auto t1 = detail::tuples_matching(k, n, detail::positions_in(Ys[owners[o]], Z), zv);
                    for (std::size_t c = 0; c < dim; ++c) {
                        LpBuilder::Row row;
                        accumulate(row, owners[0], t0, c, 1);
                        accumulate(row, owners[o], t1, c, -1);
                        b.add_eq_unique(std::move(row), 0);
                    }
                }
        }
    LPResult res = lp_solve(b.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    NwiseJointFamily fam{n, Ys, {}};
    for (std::size_t s = 0; s < Ys.size(); ++s) {
        std::vector<RatVec> tab(T, RatVec(dim));
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t h = 0; h < H.size(); ++h)
                if (sgn(res.primal[mu(s, t, h)]) != 0) tab[t] = add(tab[t], scale(res.primal[mu(s, t, h)], H[h]));
        fam.tables.push_back(std::move(tab));
    }
    return fam;
}

inline bool verify_nwise_family(const Multimeter& M, const NwiseJointFamily& F) {
    const std::size_t k = M.k, n = F.n, dim = M.space.dim;
    if (F.subsets != subsets(M.g, n) || F.tables.size() != F.subsets.size()) return false;
    auto marg = [&](std::size_t s, const std::vector<std::size_t>& pos, const std::vector<std::size_t>& vals) {
        RatVec v(dim);
        for (auto t : detail::tuples_matching(k, n, pos, vals)) v = add(v, F.tables[s][t]);
        return v;
    };
    Gpt dual = Gpt(dual_cone(M.space.cone), M.space.unit);
    for (std::size_t s = 0; s < F.subsets.size(); ++s) {
        for (const auto& G : F.tables[s])
            if (!dual.cone.contains(G)) return false;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t a = 0; a < k; ++a)
                if (marg(s, {p}, {a}) != M.effects[F.subsets[s][p]][a]) return false;
    }
    if (n >= 2)
        for (const auto& Z : subsets(M.g, n - 1)) {
            auto owners = detail::subsets_containing(F.subsets, Z);
            for (const auto& zv : all_tuples(std::vector<std::size_t>(n - 1, k)))
                for (std::size_t o = 1; o < owners.size(); ++o)
                    if (marg(owners[0], detail::positions_in(F.subsets[owners[0]], Z), zv) !=
                        marg(owners[o], detail::positions_in(F.subsets[owners[o]], Z), zv))
                        return false;
        }
    return true;
}

// q^Y over (α ∈ [k]^g, b ∈ [k]^n) for every n-subset Y of Bob's inputs.
struct GnLhvModel {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<RatVec> q;  // q[s][α_flat * k^n + b_flat]
};

inline std::optional<GnLhvModel> gn_lhv_ns_model(const Behavior& P, std::size_t n) {
    require_square_behavior(P, "gn_lhv_ns");
    const std::size_t k = P.ks[0], g = P.gs[0];
    check_extension_caps(k, g, n, "gn_lhv_ns");
    if (n > g) throw std::invalid_argument("gn_lhv_ns: n exceeds the number of inputs");
    const std::size_t A = detail::ipow(k, g), B = detail::ipow(k, n);
    auto Ys = subsets(g, n);
    auto alphas = all_tuples(std::vector<std::size_t>(g, k));
    auto bs = all_tuples(std::vector<std::size_t>(n, k));
    LpBuilder lp;
    std::size_t first = lp.add_vars(Ys.size() * A * B);
    auto var = [&](std::size_t s, std::size_t al, std::size_t bt) { return first + (s * A + al) * B + bt; };

    for (std::size_t s = 0; s < Ys.size(); ++s)
        for (std::size_t x = 0; x < g; ++x)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t o = 0; o < k; ++o) {
                        LpBuilder::Row row;
                        for (std::size_t al = 0; al < A; ++al) {
                            if (alphas[al][x] != a) continue;
                            for (std::size_t bt = 0; bt < B; ++bt)
                                if (bs[bt][j] == o) row[var(s, al, bt)] = 1;
                        }
                        lp.add_eq(std::move(row), P.p({x, Ys[s][j]}, {a, o}));
                    }
    // marginal on (α_i, b_Z) is the same for every Y ⊇ Z
    auto marginal_row = [&](LpBuilder::Row& row, std::size_t s, std::size_t i, std::size_t a, const std::vector<std::size_t>& Z,
                            const std::vector<std::size_t>& zv, int sign) {
        auto pos = detail::positions_in(Ys[s], Z);
        for (std::size_t al = 0; al < A; ++al) {
            if (alphas[al][i] != a) continue;
            for (std::size_t bt = 0; bt < B; ++bt) {
                bool match = true;
                for (std::size_t z = 0; z < pos.size() && match; ++z) match = bs[bt][pos[z]] == zv[z];
                if (match) row[var(s, al, bt)] += sign;
            }
        }
    };
    for (const auto& Z : subsets(g, n - 1)) {
        auto owners = detail::subsets_containing(Ys, Z);
        for (std::size_t o = 1; o < owners.size(); ++o)
            for (std::size_t i = 0; i < g; ++i)
                for (std::size_t a = 0; a < k; ++a)
                    for (const auto& zv : all_tuples(std::vector<std::size_t>(n - 1, k))) {
                        LpBuilder::Row row;
                        marginal_row(row, owners[0], i, a, Z, zv, 1);
                        marginal_row(row, owners[o], i, a, Z, zv, -1);
                        lp.add_eq_unique(std::move(row), 0);
                    }
    }
    LPResult res = lp_solve(lp.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    GnLhvModel m{n, Ys, {}};
    for (std::size_t s = 0; s < Ys.size(); ++s)
        m.q.emplace_back(res.primal.begin() + static_cast<long>(var(s, 0, 0)), res.primal.begin() + static_cast<long>(var(s, 0, 0) + A * B));
    return m;
}

inline bool gn_lhv_ns(const Behavior& P, std::size_t n) { return gn_lhv_ns_model(P, n).has_value(); }

}  // namespace conefactor
