#pragma once
// The column-stochastic GPT CS_{k,g}.
//
// Coordinates: a state (or cone element) v has v[0] = its normalization and
// v[idx(x,a)] = probability of outcome a under measurement x, for a < k-1
// (0-based). The last outcome of each column is implied. Dimension is
// 1 + g(k-1); the unit is e_0 and m_a^(x) = e_idx for a < k-1, while
// m_{k-1}^(x) = e_0 - Σ_{a<k-1} e_idx(x,a).

#include <functional>
#include <numeric>
#include <random>

#include "conefactor/gpt.hpp"

namespace conefactor {

struct PolyShape {
    std::size_t k = 1, g = 1;
    std::size_t dim() const { return 1 + g * (k - 1); }
    std::size_t idx(std::size_t x, std::size_t a) const { return 1 + x * (k - 1) + a; }
    bool operator==(const PolyShape& o) const { return k == o.k && g == o.g; }
};

inline void check_shape(const PolyShape& s) {
    if (s.k < 1 || s.g < 1) throw DimensionError("polysimplex needs k >= 1 and g >= 1");
}

inline RatVec poly_effect(const PolyShape& s, std::size_t x, std::size_t a) {
    if (x >= s.g || a >= s.k) throw DimensionError("poly_effect: index out of range");
    RatVec e(s.dim());
    if (a + 1 < s.k) {
        e[s.idx(x, a)] = 1;
    } else {
        e[0] = 1;
        for (std::size_t b = 0; b + 1 < s.k; ++b) e[s.idx(x, b)] = -1;
    }
    return e;
}

inline RatVec poly_unit(const PolyShape& s) { return unit_vector(s.dim(), 0); }

// Deterministic vertex: choice[x] is the outcome of measurement x.
inline RatVec poly_vertex(const PolyShape& s, const std::vector<std::size_t>& choice) {
    if (choice.size() != s.g) throw DimensionError("poly_vertex: need one outcome per measurement");
    RatVec v(s.dim());
    v[0] = 1;
    for (std::size_t x = 0; x < s.g; ++x)
        if (choice[x] + 1 < s.k) v[s.idx(x, choice[x])] = 1;
    return v;
}

// Calls f on every tuple in [radix_0] x [radix_1] x ..., last index fastest.
inline void for_each_tuple(const std::vector<std::size_t>& radix, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> t(radix.size(), 0);
    for (auto r : radix)
        if (r == 0) return;
    for (;;) {
        f(t);
        std::size_t i = radix.size();
        while (i > 0) {
            --i;
            if (++t[i] < radix[i]) break;
            t[i] = 0;
            if (i == 0) return;
        }
        if (radix.empty()) return;
    }
}

inline std::vector<std::vector<std::size_t>> all_tuples(const std::vector<std::size_t>& radix) {
    std::vector<std::vector<std::size_t>> out;
    for_each_tuple(radix, [&](const std::vector<std::size_t>& t) { out.push_back(t); });
    return out;
}

inline Gpt make_polysimplex(std::size_t k, std::size_t g) {
    PolyShape s{k, g};
    check_shape(s);
    std::vector<RatVec> gens, facets;
    for_each_tuple(std::vector<std::size_t>(g, k), [&](const std::vector<std::size_t>& c) { gens.push_back(poly_vertex(s, c)); });
    for (std::size_t x = 0; x < g; ++x)
        for (std::size_t a = 0; a < k; ++a) facets.push_back(poly_effect(s, x, a));
    return Gpt(PolyhedralCone::from_both(s.dim(), gens, facets), poly_unit(s));
}

// Column-stochastic matrix view: P[a][x].
inline std::vector<RatVec> to_ambient(const PolyShape& s, const RatVec& v) {
    if (v.size() != s.dim()) throw DimensionError("to_ambient: wrong length");
    std::vector<RatVec> P(s.k, RatVec(s.g));
    for (std::size_t x = 0; x < s.g; ++x) {
        Rational rest = v[0];
        for (std::size_t a = 0; a + 1 < s.k; ++a) {
            P[a][x] = v[s.idx(x, a)];
            rest -= v[s.idx(x, a)];
        }
        P[s.k - 1][x] = rest;
    }
    return P;
}

inline RatVec from_ambient(const PolyShape& s, const std::vector<RatVec>& P) {
    if (P.size() != s.k) throw DimensionError("from_ambient: expected " + std::to_string(s.k) + " rows");
    RatVec v(s.dim());
    for (std::size_t x = 0; x < s.g; ++x) {
        Rational col = 0;
        for (std::size_t a = 0; a < s.k; ++a) {
            if (P[a].size() != s.g) throw DimensionError("from_ambient: expected " + std::to_string(s.g) + " columns");
            col += P[a][x];
        }
        if (x == 0) v[0] = col;
        else if (col != v[0])
            throw Error("unequal_columns", "from_ambient: column " + std::to_string(x) + " sums to " + to_string(col) +
                                               " but column 0 sums to " + to_string(v[0]));
        for (std::size_t a = 0; a + 1 < s.k; ++a) v[s.idx(x, a)] = P[a][x];
    }
    return v;
}

// ---------------------------------------------------------------------------
// Noisy polysimplex: each column shrunk by t_x towards the uniform distribution.

inline Gpt noisy_polysimplex(std::size_t k, std::size_t g, const RatVec& t) {
    PolyShape s{k, g};
    check_shape(s);
    if (t.size() != g) throw DimensionError("noisy_polysimplex: need one noise value per measurement");
    for (const auto& tx : t)
        if (tx < 0 || tx > 1) throw std::invalid_argument("noisy_polysimplex: noise " + to_string(tx) + " outside [0,1]");
    std::vector<RatVec> gens, facets;
    for_each_tuple(std::vector<std::size_t>(g, k), [&](const std::vector<std::size_t>& c) {
        RatVec v(s.dim());
        v[0] = 1;
        for (std::size_t x = 0; x < g; ++x)
            for (std::size_t a = 0; a + 1 < k; ++a)
                v[s.idx(x, a)] = (1 - t[x]) / Rational(k) + (c[x] == a ? t[x] : Rational(0));
        gens.push_back(v);
    });
    for (std::size_t x = 0; x < g; ++x) {
        Rational shift = (1 - t[x]) / Rational(k);
        for (std::size_t a = 0; a < k; ++a) {
            RatVec f = poly_effect(s, x, a);
            f[0] -= shift;
            facets.push_back(f);
        }
    }
    return Gpt(PolyhedralCone::from_both(s.dim(), gens, facets), poly_unit(s));
}

// ---------------------------------------------------------------------------
// No-signaling distributions over n parties and their tensor codec

struct NsDistribution {
    std::size_t parties = 0;
    std::vector<std::size_t> ks, gs;  // outcomes and inputs per party
    RatVec probs;                     // x-major, then a; first party most significant

    NsDistribution() = default;
    NsDistribution(std::vector<std::size_t> k, std::vector<std::size_t> g, RatVec p)
        : parties(k.size()), ks(std::move(k)), gs(std::move(g)), probs(std::move(p)) {
        if (gs.size() != parties) throw DimensionError("NsDistribution: ks and gs differ in length");
        if (probs.size() != num_inputs() * num_outcomes())
            throw DimensionError("NsDistribution: expected " + std::to_string(num_inputs() * num_outcomes()) +
                                 " probabilities, got " + std::to_string(probs.size()));
    }
    static NsDistribution uniform_shape(std::size_t n, std::size_t k, std::size_t g, RatVec p) {
        return NsDistribution(std::vector<std::size_t>(n, k), std::vector<std::size_t>(n, g), std::move(p));
    }

    std::size_t num_inputs() const {
        std::size_t r = 1;
        for (auto g : gs) r *= g;
        return r;
    }
    std::size_t num_outcomes() const {
        std::size_t r = 1;
        for (auto k : ks) r *= k;
        return r;
    }
    std::size_t index(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) const {
        std::size_t xi = 0, ai = 0;
        for (std::size_t i = 0; i < parties; ++i) {
            xi = xi * gs[i] + x[i];
            ai = ai * ks[i] + a[i];
        }
        return xi * num_outcomes() + ai;
    }
    const Rational& p(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) const { return probs[index(x, a)]; }
    Rational& p(const std::vector<std::size_t>& x, const std::vector<std::size_t>& a) { return probs[index(x, a)]; }

    std::vector<PolyShape> shapes() const {
        std::vector<PolyShape> s;
        for (std::size_t i = 0; i < parties; ++i) s.push_back({ks[i], gs[i]});
        return s;
    }
};

// Empty string when valid, else a description of the first failure.
inline std::string ns_problem(const NsDistribution& d) {
    for (std::size_t i = 0; i < d.probs.size(); ++i)
        if (sgn(d.probs[i]) < 0) return "negative probability at flat index " + std::to_string(i);
    auto xs = all_tuples(d.gs);
    auto as = all_tuples(d.ks);
    for (const auto& x : xs) {
        Rational s = 0;
        for (const auto& a : as) s += d.p(x, a);
        if (s != 1) return "probabilities for one input tuple sum to " + to_string(s);
    }
    for (std::size_t party = 0; party < d.parties; ++party) {
        std::vector<std::size_t> kr = d.ks;
        kr[party] = 1;
        for (const auto& x : xs) {
            if (x[party] == 0) continue;
            auto x0 = x;
            x0[party] = 0;
            for (const auto& a : all_tuples(kr)) {
                Rational m1 = 0, m0 = 0;
                auto aa = a;
                for (std::size_t o = 0; o < d.ks[party]; ++o) {
                    aa[party] = o;
                    m1 += d.p(x, aa);
                    m0 += d.p(x0, aa);
                }
                if (m1 != m0) return "signaling: marginal of the other parties depends on party " + std::to_string(party + 1) + "'s input";
            }
        }
    }
    return "";
}

inline bool is_ns(const NsDistribution& d) { return ns_problem(d).empty(); }

inline std::size_t binomial(std::size_t n, std::size_t m) {
    if (m > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= m; ++i) r = r * (n - m + i) / i;
    return r;
}

// m-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> s(m);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == m) {
            out.push_back(s);
            return;
        }
        for (std::size_t v = start; v + (m - pos) <= n; ++v) {
            s[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    rec(0, 0);
    return out;
}

// Permutations of {0..n-1} (as image lists) with no descent except possibly
// at position m: π(0..m-1) ascending and π(m..n-1) ascending.
inline std::vector<std::vector<std::size_t>> descent_perms(std::size_t n, std::size_t m) {
    if (m < 1 || m + 1 > n) throw std::invalid_argument("descent_perms: need 1 <= m <= n-1");
    std::vector<std::vector<std::size_t>> out;
    for (const auto& S : subsets(n, m)) {
        std::vector<std::size_t> perm = S;
        std::vector<bool> in(n, false);
        for (auto v : S) in[v] = true;
        for (std::size_t v = 0; v < n; ++v)
            if (!in[v]) perm.push_back(v);
        out.push_back(std::move(perm));
    }
    return out;
}

// Tensor coefficients in the product of state coordinate bases. The
// coefficient at multi-index β pairs ξ with ⊗ φ_{β_i}, where φ_0 = 𝟙 and
// φ_idx(x,a) = m_a^(x); that value is the marginal probability of the
// non-unit parties, taken with input 0 for the marginalized ones.
inline TensorElement ns_encode(const NsDistribution& d) {
    if (auto err = ns_problem(d); !err.empty()) throw Error("invalid_ns", "ns_encode: " + err);
    const std::size_t n = d.parties;
    auto shapes = d.shapes();
    std::vector<std::size_t> dims;
    for (auto& s : shapes) dims.push_back(s.dim());
    TensorElement xi = TensorElement::zeros(dims);
    std::vector<int> written(xi.coeffs.size(), 0);
    auto flat = [&](const std::vector<std::size_t>& beta) {
        std::size_t f = 0;
        for (std::size_t i = 0; i < n; ++i) f = f * dims[i] + beta[i];
        return f;
    };

    auto write_for = [&](const std::vector<std::size_t>& S) {
        std::vector<bool> in(n, false);
        for (auto v : S) in[v] = true;
        // index choices over S: (x_i, a_i) with a_i < k_i - 1
        std::vector<std::size_t> radix;
        for (auto v : S) radix.push_back(d.gs[v] * (d.ks[v] - 1));
        for_each_tuple(radix, [&](const std::vector<std::size_t>& choice) {
            std::vector<std::size_t> beta(n, 0), x(n, 0), afix(n, 0);
            for (std::size_t j = 0; j < S.size(); ++j) {
                std::size_t v = S[j], km = d.ks[v] - 1;
                x[v] = choice[j] / km;
                afix[v] = choice[j] % km;
                beta[v] = shapes[v].idx(x[v], afix[v]);
            }
            std::vector<std::size_t> free_radix;
            for (std::size_t i = 0; i < n; ++i) free_radix.push_back(in[i] ? 1 : d.ks[i]);
            Rational val = 0;
            for_each_tuple(free_radix, [&](const std::vector<std::size_t>& fa) {
                auto a = afix;
                for (std::size_t i = 0; i < n; ++i)
                    if (!in[i]) a[i] = fa[i];
                val += d.p(x, a);
            });
            std::size_t f = flat(beta);
            xi.coeffs[f] = val;
            ++written[f];
        });
    };

    write_for({});  // m = 0: the pure unit term
    for (std::size_t m = 1; m < n; ++m)
        for (const auto& perm : descent_perms(n, m)) write_for(std::vector<std::size_t>(perm.begin(), perm.begin() + m));
    if (n >= 1) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        write_for(all);
    }
    for (auto w : written)
        if (w != 1) throw std::logic_error("ns_encode: basis coverage failure");
    return xi;
}

// Contract factor `party` of a tensor with the rows of `m` (m.cols() = dims[party]).
inline TensorElement contract_factor(const TensorElement& t, std::size_t party, const RatMatrix& m) {
    if (t.factors.at(party) != m.cols()) throw DimensionError("contract_factor: dimension mismatch");
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < party; ++i) outer *= t.factors[i];
    for (std::size_t i = party + 1; i < t.factors.size(); ++i) inner *= t.factors[i];
    auto f = t.factors;
    f[party] = m.rows();
    TensorElement r = TensorElement::zeros(f);
    const std::size_t dold = m.cols(), dnew = m.rows();
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < dold; ++j)
            for (std::size_t in = 0; in < inner; ++in) {
                const Rational& c = t.coeffs[(o * dold + j) * inner + in];
                if (sgn(c) == 0) continue;
                for (std::size_t q = 0; q < dnew; ++q)
                    if (sgn(m(q, j)) != 0) r.coeffs[(o * dnew + q) * inner + in] += m(q, j) * c;
            }
    return r;
}

inline std::string effect_name(std::size_t x, std::size_t a) {
    return "m_" + std::to_string(a + 1) + "^(" + std::to_string(x + 1) + ")";
}

// Evaluates ⊗ m_{a_i}^{(x_i)} on ξ for every (x⃗, a⃗).
inline NsDistribution ns_decode(const TensorElement& xi, const std::vector<PolyShape>& shapes) {
    if (xi.factors.size() != shapes.size()) throw DimensionError("ns_decode: tensor has the wrong number of factors");
    for (std::size_t i = 0; i < shapes.size(); ++i)
        if (xi.factors[i] != shapes[i].dim())
            throw DimensionError("ns_decode: factor " + std::to_string(i) + " has dimension " + std::to_string(xi.factors[i]) +
                                 ", expected " + std::to_string(shapes[i].dim()));
    TensorElement t = xi;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        const auto& s = shapes[i];
        RatMatrix m(s.g * s.k, s.dim());
        for (std::size_t x = 0; x < s.g; ++x)
            for (std::size_t a = 0; a < s.k; ++a) m.set_row(x * s.k + a, poly_effect(s, x, a));
        t = contract_factor(t, i, m);
    }
    std::vector<std::size_t> ks, gs;
    for (auto& s : shapes) {
        ks.push_back(s.k);
        gs.push_back(s.g);
    }
    NsDistribution d(ks, gs, RatVec(t.coeffs.size()));
    std::vector<std::size_t> radix;
    for (auto& s : shapes) radix.push_back(s.g * s.k);
    std::size_t flat = 0;
    for_each_tuple(radix, [&](const std::vector<std::size_t>& c) {
        std::vector<std::size_t> x, a;
        for (std::size_t i = 0; i < shapes.size(); ++i) {
            x.push_back(c[i] / shapes[i].k);
            a.push_back(c[i] % shapes[i].k);
        }
        const Rational& v = t.coeffs[flat++];
        if (sgn(v) < 0) {
            std::string name;
            for (std::size_t i = 0; i < x.size(); ++i) name += (i ? " ⊗ " : "") + effect_name(x[i], a[i]);
            throw Error("facet_violation", "ns_decode: functional " + name + " evaluates to " + to_string(v));
        }
        d.p(x, a) = v;
    });
    if (xi.coeffs[0] != 1) throw Error("not_normalized", "ns_decode: unit evaluates to " + to_string(xi.coeffs[0]));
    return d;
}

// ---------------------------------------------------------------------------
// Classical simulations (π, ν) and channels between polysimplices

// Channel from CS_{l,r} to CS_{k,g}: π[x][y] = π_{y|x}, nu[x][y][b][a] = ν_{a|b,x,y}.
struct SimulationData {
    PolyShape source, target;
    std::vector<RatVec> pi;
    std::vector<std::vector<std::vector<RatVec>>> nu;
};

inline std::string sim_problem(const SimulationData& d) {
    auto [l, r] = d.source;
    auto [k, g] = d.target;
    if (d.pi.size() != g || d.nu.size() != g) return "expected " + std::to_string(g) + " rows in pi and nu";
    for (std::size_t x = 0; x < g; ++x) {
        if (d.pi[x].size() != r || d.nu[x].size() != r) return "pi/nu row has the wrong length";
        Rational s = 0;
        for (std::size_t y = 0; y < r; ++y) {
            if (sgn(d.pi[x][y]) < 0) return "negative pi entry";
            s += d.pi[x][y];
            if (d.nu[x][y].size() != l) return "nu block has the wrong number of source outcomes";
            for (std::size_t b = 0; b < l; ++b) {
                if (d.nu[x][y][b].size() != k) return "nu distribution has the wrong length";
                Rational t = 0;
                for (const auto& v : d.nu[x][y][b]) {
                    if (sgn(v) < 0) return "negative nu entry";
                    t += v;
                }
                if (t != 1) return "nu distribution does not sum to 1";
            }
        }
        if (s != 1) return "pi row does not sum to 1";
    }
    return "";
}

inline GptMap channel_from_sim(const SimulationData& d) {
    if (auto e = sim_problem(d); !e.empty()) throw Error("invalid_simulation", "channel_from_sim: " + e);
    const PolyShape S = d.source, T = d.target;
    RatMatrix m(T.dim(), S.dim());
    m(0, 0) = 1;
    for (std::size_t x = 0; x < T.g; ++x)
        for (std::size_t a = 0; a + 1 < T.k; ++a) {
            RatVec row(S.dim());
            for (std::size_t y = 0; y < S.g; ++y) {
                if (sgn(d.pi[x][y]) == 0) continue;
                for (std::size_t b = 0; b < S.k; ++b) {
                    Rational w = d.pi[x][y] * d.nu[x][y][b][a];
                    if (sgn(w) != 0) row = add(row, scale(w, poly_effect(S, y, b)));
                }
            }
            m.set_row(T.idx(x, a), row);
        }
    return GptMap(make_polysimplex(S.k, S.g), make_polysimplex(T.k, T.g), m);
}

inline SimulationData channel_decompose(const GptMap& phi, PolyShape source, PolyShape target) {
    if (phi.source.dim != source.dim() || phi.target.dim != target.dim())
        throw DimensionError("channel_decompose: map dimensions do not match the polysimplex shapes");
    if (!is_channel(phi)) throw Error("not_a_channel", "channel_decompose: map is not a channel");
    const auto [l, r] = source;
    const auto [k, g] = target;
    SimulationData d{source, target, std::vector<RatVec>(g, RatVec(r)),
                     std::vector<std::vector<std::vector<RatVec>>>(g, std::vector<std::vector<RatVec>>(r, std::vector<RatVec>(l, RatVec(k))))};
    for (std::size_t x = 0; x < g; ++x) {
        // gamma[a][y][b]
        std::vector<std::vector<RatVec>> gamma(k, std::vector<RatVec>(r, RatVec(l)));
        for (std::size_t a = 0; a < k; ++a) {
            RatVec A = left_multiply(poly_effect(target, x, a), phi.matrix);
            Rational c = A[0];
            std::vector<RatVec> f(r, RatVec(l));
            for (std::size_t y = 0; y < r; ++y) {
                for (std::size_t b = 0; b + 1 < l; ++b) f[y][b] = A[source.idx(y, b)];
                Rational mn = *std::min_element(f[y].begin(), f[y].end());
                c += mn;
                for (std::size_t b = 0; b < l; ++b) gamma[a][y][b] = f[y][b] - mn;
            }
            for (std::size_t b = 0; b < l; ++b) gamma[a][0][b] += c;
        }
        for (std::size_t y = 0; y < r; ++y) {
            Rational p = 0;
            for (std::size_t a = 0; a < k; ++a) p += gamma[a][y][l - 1];
            d.pi[x][y] = p;
            for (std::size_t b = 0; b < l; ++b)
                for (std::size_t a = 0; a < k; ++a)
                    d.nu[x][y][b][a] = sgn(p) == 0 ? Rational(1, static_cast<unsigned long>(k)) : gamma[a][y][b] / p;
        }
    }
    return d;
}

// Random (π, ν) with entries that are multiples of 1/denom.
template <class Rng>
RatVec random_distribution(Rng& rng, std::size_t n, long denom, bool sparse = false) {
    std::vector<long> w(n, 0);
    std::uniform_int_distribution<long> pick(0, static_cast<long>(n) - 1);
    if (sparse) {
        w[pick(rng)] = denom;
    } else {
        for (long u = 0; u < denom; ++u) ++w[pick(rng)];
    }
    RatVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rat(w[i], denom);
    return out;
}

template <class Rng>
SimulationData random_simulation(Rng& rng, PolyShape source, PolyShape target, long denom = 6) {
    SimulationData d{source, target, {}, {}};
    std::bernoulli_distribution coin(0.3);
    for (std::size_t x = 0; x < target.g; ++x) {
        d.pi.push_back(random_distribution(rng, source.g, denom, coin(rng)));
        std::vector<std::vector<RatVec>> blk;
        for (std::size_t y = 0; y < source.g; ++y) {
            std::vector<RatVec> col;
            for (std::size_t b = 0; b < source.k; ++b) col.push_back(random_distribution(rng, target.k, denom, coin(rng)));
            blk.push_back(col);
        }
        d.nu.push_back(blk);
    }
    return d;
}

// Built-in GPT names: simplex:k, polysimplex:k,g, square, cube, octahedron.
inline Gpt builtin_gpt(const std::string& name) {
    auto parse_uint = [&](const std::string& s) -> std::size_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad number '" + s + "' in GPT name '" + name + "'");
        return std::stoul(s);
    };
    if (name == "cube") return make_cube();
    if (name == "octahedron") return make_octahedron();
    if (name == "square") return make_polysimplex(2, 2);
    if (name.rfind("simplex:", 0) == 0) return make_simplex(parse_uint(name.substr(8)));
    if (name.rfind("polysimplex:", 0) == 0) {
        std::string rest = name.substr(12);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("polysimplex name needs 'k,g': " + name);
        return make_polysimplex(parse_uint(rest.substr(0, comma)), parse_uint(rest.substr(comma + 1)));
    }
    throw std::invalid_argument("unknown GPT name '" + name + "'");
}

}  // namespace conefactor
