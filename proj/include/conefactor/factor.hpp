#pragma once
// Factorizations of noisy-polysimplex identity maps through a middle
// polysimplex: closed-form constructions, certificate checks, the affine
// inclusion certificates and a see-saw search.

#include <random>

#include "conefactor/polysimplex.hpp"

namespace conefactor {

struct FactorizationCertificate {
    Gpt source, middle, target;
    RatMatrix phi;  // middle.dim x source.dim
    RatMatrix psi;  // target.dim x middle.dim
    std::string name;

    GptMap phi_map() const { return GptMap(source, middle, phi); }
    GptMap psi_map() const { return GptMap(middle, target, psi); }
};

inline void check_certificate_shape(const FactorizationCertificate& c, const char* who) {
    if (c.phi.rows() != c.middle.dim || c.phi.cols() != c.source.dim || c.psi.rows() != c.target.dim ||
        c.psi.cols() != c.middle.dim)
        throw DimensionError(std::string(who) + ": map shapes do not match the spaces");
    if (c.source.dim != c.target.dim) throw DimensionError(std::string(who) + ": source and target dimensions differ");
}

// φ, ψ channels and ψ∘φ fixing every source vertex.
inline bool verify_factorization(const FactorizationCertificate& c) {
    check_certificate_shape(c, "verify_factorization");
    if (!is_channel(c.phi_map()) || !is_channel(c.psi_map())) return false;
    RatMatrix comp = c.psi * c.phi;
    for (const auto& v : state_vertices(c.source))
        if (comp * v != v) return false;
    return true;
}

namespace detail {

// Throws with the first (vertex, facet) pair where the construction leaves the cone.
inline void require_channel(const GptMap& f, const std::string& who, const Rational& t) {
    for (const auto& v : state_vertices(f.source)) {
        RatVec img = f.matrix * v;
        for (const auto& h : f.target.cone.facets()) {
            Rational val = dot(h, img);
            if (sgn(val) < 0)
                throw Error("construction_infeasible", who + " at t = " + to_string(t) + ": vertex " + to_string(v) +
                                                           " maps to " + to_string(img) + ", which has value " +
                                                           to_string(val) + " on facet " + to_string(h));
        }
    }
    if (!is_unital(f)) throw std::logic_error(who + ": map is not unital");
}

inline FactorizationCertificate make_certificate(Gpt src, Gpt mid, Gpt tgt, const std::vector<RatVec>& phi_rows,
                                                 const std::vector<RatVec>& psi_rows, std::string name, const Rational& t) {
    FactorizationCertificate c{std::move(src), std::move(mid), std::move(tgt), RatMatrix::from_rows(phi_rows, phi_rows[0].size()),
                               RatMatrix::from_rows(psi_rows, psi_rows[0].size()), std::move(name)};
    check_certificate_shape(c, c.name.c_str());
    require_channel(c.phi_map(), c.name + " (phi)", t);
    require_channel(c.psi_map(), c.name + " (psi)", t);
    return c;
}

inline void check_noise(const Rational& t, const char* who) {
    if (t < 0 || t > 1) throw std::invalid_argument(std::string(who) + ": noise " + to_string(t) + " outside [0,1]");
}

}  // namespace detail

// CS_{2,2;(t,t)} -> S_3 -> CS_{2,2}. Coordinates (s, x, y) on the square and
// (s, A, B) on S_3: A = y, B = x - y/2; back x = B + A/2, y = A.
inline FactorizationCertificate three_outcome_construction(const Rational& t) {
    detail::check_noise(t, "three_outcome_construction");
    return detail::make_certificate(noisy_polysimplex(2, 2, {t, t}), make_polysimplex(3, 1), make_polysimplex(2, 2),
                                    {{1, 0, 0}, {0, 0, 1}, {0, 1, rat(-1, 2)}}, {{1, 0, 0}, {0, rat(1, 2), 1}, {0, 1, 0}},
                                    "3outcome", t);
}

// S_{3;t} -> CS_{2,2} -> S_3. X_1 = 5/2 A + 5/2 B - s, Y_1 = -5/4 A + 5/4 B + s/2.
inline FactorizationCertificate two_binary_construction(const Rational& t) {
    detail::check_noise(t, "two_binary_construction");
    return detail::make_certificate(noisy_polysimplex(3, 1, {t}), make_polysimplex(2, 2), make_polysimplex(3, 1),
                                    {{1, 0, 0}, {-1, rat(5, 2), rat(5, 2)}, {rat(1, 2), rat(-5, 4), rat(5, 4)}},
                                    {{1, 0, 0}, {rat(2, 5), rat(1, 5), rat(-2, 5)}, {0, rat(1, 5), rat(2, 5)}}, "2binary", t);
}

// CS_{2,2;(t,t)} -> S_4 -> CS_{2,2} via the joint measurement
// G_{ab} = (X_a + Y_b)/2 - 1/4; coordinates (s, G11, G12, G21) on S_4.
inline FactorizationCertificate joint4_construction(const Rational& t) {
    detail::check_noise(t, "joint4_construction");
    const Rational q = rat(1, 4), h = rat(1, 2);
    return detail::make_certificate(noisy_polysimplex(2, 2, {t, t}), make_polysimplex(4, 1), make_polysimplex(2, 2),
                                    {{1, 0, 0}, {-q, h, h}, {q, h, -h}, {q, -h, h}}, {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 0, 1}},
                                    "joint4", t);
}

// CS_{2,2;(t,t)} -> S_3 -> CS_{2,2} through the tilted triangle with vertices
// (0,0), (1,t), (t,1) in the (x, y) square. The triangle holds the noisy
// square while t² + 2t ≤ 1, so this reaches past 1/3.
inline FactorizationCertificate tilted_triangle_construction(const Rational& t) {
    detail::check_noise(t, "tilted_triangle_construction");
    // ψ sends the S_3 vertices (1,1,0), (1,0,1), (1,0,0) to the triangle corners
    RatMatrix psi = RatMatrix::from_rows({{1, 0, 0}, {t, -t, 1 - t}, {1, -1, t - 1}});
    auto inv = inverse(psi);
    if (!inv) throw std::invalid_argument("tilted_triangle_construction: degenerate triangle at t = " + to_string(t));
    std::vector<RatVec> phi_rows, psi_rows;
    for (std::size_t i = 0; i < 3; ++i) {
        phi_rows.push_back(inv->row(i));
        psi_rows.push_back(psi.row(i));
    }
    return detail::make_certificate(noisy_polysimplex(2, 2, {t, t}), make_polysimplex(3, 1), make_polysimplex(2, 2), phi_rows,
                                    psi_rows, "tilted-triangle", t);
}

// ---------------------------------------------------------------------------
// Inclusion certificates: T = A(middle state space) ⊆ R^m and Π : R^m -> R^n.

struct InclusionCertificate {
    RatMatrix affine;      // m x (1+m), applied to middle coordinates (s, v)
    RatMatrix projection;  // n x m
};

namespace detail {

// Is p a convex combination of pts?
inline bool in_hull(const RatVec& p, const std::vector<RatVec>& pts) {
    LpBuilder b;
    std::size_t first = b.add_vars(pts.size());
    LpBuilder::Row sum;
    for (std::size_t j = 0; j < pts.size(); ++j) sum[first + j] = 1;
    b.add_eq(sum, 1);
    for (std::size_t c = 0; c < p.size(); ++c) {
        LpBuilder::Row row;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (sgn(pts[j][c]) != 0) row[first + j] = pts[j][c];
        b.add_eq(std::move(row), p[c]);
    }
    return lp_solve(b.build()).status == LPStatus::Optimal;
}

inline RatVec drop_first(const RatVec& v) { return RatVec(v.begin() + 1, v.end()); }

}  // namespace detail

inline bool verify_inclusion_certificate(const InclusionCertificate& c, const Gpt& source, const Gpt& middle, const Gpt& target) {
    const std::size_t n = target.dim - 1, m = middle.dim - 1;
    if (source.dim != target.dim) throw DimensionError("verify_inclusion_certificate: source and target dimensions differ");
    if (m < n) throw DimensionError("verify_inclusion_certificate: middle space is smaller than the target");
    if (c.affine.rows() != m || c.affine.cols() != m + 1 || c.projection.rows() != n || c.projection.cols() != m)
        throw DimensionError("verify_inclusion_certificate: expected affine " + std::to_string(m) + "x" + std::to_string(m + 1) +
                             " and projection " + std::to_string(n) + "x" + std::to_string(m));
    std::vector<RatVec> T;
    for (const auto& v : state_vertices(middle)) T.push_back(c.affine * v);
    for (const auto& w : state_vertices(source)) {
        RatVec p = detail::drop_first(w);
        p.resize(m);
        if (!detail::in_hull(p, T)) return false;
    }
    std::vector<RatVec> target_pts;
    for (const auto& v : state_vertices(target)) target_pts.push_back(detail::drop_first(v));
    for (const auto& t : T)
        if (!detail::in_hull(c.projection * t, target_pts)) return false;
    return true;
}

// A = ι∘ψ on states, Π the coordinate projection.
inline InclusionCertificate inclusion_from_factorization(const FactorizationCertificate& f) {
    check_certificate_shape(f, "inclusion_from_factorization");
    const std::size_t n = f.target.dim - 1, m = f.middle.dim - 1;
    if (m < n) throw DimensionError("inclusion_from_factorization: middle space is smaller than the target");
    InclusionCertificate c{RatMatrix(m, m + 1), RatMatrix(n, m)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) c.affine(i, j) = f.psi(i + 1, j);
        c.projection(i, i) = 1;
    }
    return c;
}

// φ = Â⁻¹∘ι and ψ = Π∘Â when the homogenized affine map Â is invertible.
inline std::optional<FactorizationCertificate> factorization_from_inclusion(const InclusionCertificate& c, const Gpt& source,
                                                                            const Gpt& middle, const Gpt& target) {
    const std::size_t n = target.dim - 1, m = middle.dim - 1;
    if (c.affine.rows() != m || c.affine.cols() != m + 1 || c.projection.rows() != n || c.projection.cols() != m)
        throw DimensionError("factorization_from_inclusion: certificate shape mismatch");
    RatMatrix Ah(m + 1, m + 1);
    Ah.set_row(0, middle.unit);
    for (std::size_t i = 0; i < m; ++i) Ah.set_row(i + 1, c.affine.row(i));
    auto inv = inverse(Ah);
    if (!inv) return std::nullopt;
    RatMatrix iota(m + 1, n + 1), proj(n + 1, m + 1);
    iota(0, 0) = proj(0, 0) = 1;
    for (std::size_t i = 0; i < n; ++i) iota(i + 1, i + 1) = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) proj(i + 1, j + 1) = c.projection(i, j);
    return FactorizationCertificate{source, middle, target, *inv * iota, proj * Ah, "from-inclusion"};
}

// ---------------------------------------------------------------------------
// See-saw heuristic. Success is a verified certificate; failure proves nothing.

struct SeesawResult {
    std::optional<FactorizationCertificate> certificate;
    std::size_t iterations = 0;
    Rational residual;  // best L1 residual of ψ∘φ - id over source vertices
    std::uint64_t seed = 0;
    static constexpr const char* tag = "heuristic";
};

namespace detail {

// min Σ |ψφv - v| over source vertices with one of the maps fixed.
// solve_phi: variables φ (mid x src); otherwise ψ (tgt x mid).
inline std::optional<std::pair<RatMatrix, Rational>> seesaw_step(const Gpt& src, const Gpt& mid, const Gpt& tgt,
                                                                 const RatMatrix& fixed, bool solve_phi) {
    const Gpt& from = solve_phi ? src : mid;
    const Gpt& to = solve_phi ? mid : tgt;
    const std::size_t R = to.dim, C = from.dim;
    LpBuilder b;
    std::size_t first = b.add_vars(R * C, std::nullopt);
    auto var = [&](std::size_t r, std::size_t c) { return first + r * C + c; };
    for (const auto& g : from.cone.generators())
        for (const auto& h : to.cone.facets()) {
            LpBuilder::Row row;
            for (std::size_t r = 0; r < R; ++r)
                for (std::size_t c = 0; c < C; ++c)
                    if (sgn(h[r]) != 0 && sgn(g[c]) != 0) row[var(r, c)] += h[r] * g[c];
            b.add_ge(std::move(row), 0);
        }
    for (std::size_t c = 0; c < C; ++c) {
        LpBuilder::Row row;
        for (std::size_t r = 0; r < R; ++r)
            if (sgn(to.unit[r]) != 0) row[var(r, c)] = to.unit[r];
        b.add_eq(std::move(row), from.unit[c]);
    }
    for (const auto& v : state_vertices(src)) {
        // the composed image coordinate d as a linear form in the variables
        for (std::size_t d = 0; d < tgt.dim; ++d) {
            LpBuilder::Row row;
            if (solve_phi) {  // (ψ φ v)_d = Σ_r ψ[d][r] Σ_c φ[r][c] v[c]
                for (std::size_t r = 0; r < R; ++r)
                    if (sgn(fixed(d, r)) != 0)
                        for (std::size_t c = 0; c < C; ++c)
                            if (sgn(v[c]) != 0) row[var(r, c)] += fixed(d, r) * v[c];
            } else {  // (ψ w)_d with w = φ v
                RatVec w = fixed * v;
                for (std::size_t c = 0; c < C; ++c)
                    if (sgn(w[c]) != 0) row[var(d, c)] += w[c];
            }
            std::size_t ep = b.add_var(Rational(0), Rational(-1)), em = b.add_var(Rational(0), Rational(-1));
            row[ep] = -1;
            row[em] = 1;
            b.add_eq(std::move(row), v[d]);
        }
    }
    LPResult res = lp_solve(b.build());
    if (res.status != LPStatus::Optimal) return std::nullopt;
    RatMatrix out(R, C);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) out(r, c) = res.primal[var(r, c)];
    return std::make_pair(out, Rational(-res.optimum));
}

}  // namespace detail

// Source CS_{k,g;t}, middle CS_{l,g'}, target CS_{k,g}. φ starts as a random
// classical channel; each iteration re-solves ψ and then φ.
inline SeesawResult seesaw_search(PolyShape shape, const RatVec& t, PolyShape middle, std::size_t iters, std::uint64_t seed) {
    Gpt src = noisy_polysimplex(shape.k, shape.g, t), mid = make_polysimplex(middle.k, middle.g),
        tgt = make_polysimplex(shape.k, shape.g);
    std::mt19937_64 rng(seed);
    auto random_channel = [&] { return channel_from_sim(random_simulation(rng, shape, middle)).matrix; };
    auto mix = [](const RatMatrix& a, const RatMatrix& b, const Rational& w) {
        RatMatrix m = a;
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = (1 - w) * a(r, c) + w * b(r, c);
        return m;
    };
    RatMatrix phi = mix(random_channel(), random_channel(), rat(1, 2));
    SeesawResult out;
    out.seed = seed;
    bool have = false;
    Rational last = 2 * static_cast<long>(src.dim);
    for (std::size_t it = 0; it < iters; ++it) {
        out.iterations = it + 1;
        auto s1 = detail::seesaw_step(src, mid, tgt, phi, false);
        if (!s1) break;
        auto s2 = detail::seesaw_step(src, mid, tgt, s1->first, true);
        if (!s2) break;
        Rational r = s2->second;
        if (!have || r < out.residual) out.residual = r;
        if (sgn(r) == 0) {
            FactorizationCertificate c{src, mid, tgt, s2->first, s1->first, "seesaw"};
            if (verify_factorization(c)) out.certificate = std::move(c);
            break;
        }
        have = true;
        // stalled at an LP vertex: restart from a fresh mixed classical channel
        if (r >= last && it > 0) {
            phi = mix(random_channel(), random_channel(), rat(1, 2));
            last = 2 * static_cast<long>(src.dim);
            continue;
        }
        phi = s2->first;
        last = r;
    }
    return out;
}

}  // namespace conefactor
