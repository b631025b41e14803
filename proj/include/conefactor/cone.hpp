#pragma once
// Polyhedral proper cones in both descriptions, double-description
// conversion, and the minimal/maximal tensor products.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>

#include "conefactor/ratlin.hpp"

namespace conefactor {

inline std::size_t max_cone_dim() {
    if (const char* env = std::getenv("CONEFACTOR_MAX_DIM")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return 24;
}

// Positive rescaling so that the first nonzero entry has absolute value 1.
inline RatVec canonical_ray(const RatVec& v) {
    for (const auto& x : v)
        if (sgn(x) != 0) {
            Rational s = abs(x);
            RatVec r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / s;
            return r;
        }
    return v;
}

inline bool lex_less(const RatVec& a, const RatVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Canonicalize, drop zero rays and duplicates, sort.
inline std::vector<RatVec> canonical_rays(const std::vector<RatVec>& rays) {
    std::vector<RatVec> out;
    out.reserve(rays.size());
    for (const auto& r : rays)
        if (!is_zero(r)) out.push_back(canonical_ray(r));
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

using IntVec = std::vector<mpz_class>;

inline IntVec primitive(const RatVec& v) {
    mpz_class l = 1;
    for (const auto& x : v)
        if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    IntVec r(v.size());
    mpz_class g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational s = v[i] * l;
        r[i] = s.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
    }
    if (g > 1)
        for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
}

inline void make_primitive(IntVec& r) {
    mpz_class g = 0;
    for (const auto& x : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline mpz_class idot(const IntVec& a, const IntVec& b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

class Bits {
public:
    explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i / 64] |= std::uint64_t(1) << (i % 64); }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.w_.resize(w_.size());
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
        return r;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

private:
    std::vector<std::uint64_t> w_;
};

}  // namespace detail

// Extreme rays of {x : a·x >= 0 for every row a}. The rows must span the
// ambient space (otherwise the cone has a lineality space and is not pointed).
inline std::vector<RatVec> extreme_rays(const std::vector<RatVec>& rows, std::size_t dim) {
    using namespace detail;
    if (dim > max_cone_dim())
        throw Error("dimension_cap", "cone dimension " + std::to_string(dim) + " exceeds the cap of " +
                                         std::to_string(max_cone_dim()) + " (set CONEFACTOR_MAX_DIM to raise it)");
    std::vector<RatVec> canon = canonical_rays(rows);
    for (const auto& r : canon)
        if (r.size() != dim) throw DimensionError("extreme_rays: row of length " + std::to_string(r.size()));
    if (rank(canon, dim) < dim)
        throw Error("non_pointed", "inequalities do not span R^" + std::to_string(dim) + "; the cone contains a line");

    // Initial simplicial cone from the first dim independent rows.
    std::vector<std::size_t> order, rest;
    {
        std::vector<RatVec> chosen;
        for (std::size_t i = 0; i < canon.size(); ++i) {
            if (chosen.size() < dim) {
                chosen.push_back(canon[i]);
                if (rank(chosen, dim) == chosen.size()) {
                    order.push_back(i);
                    continue;
                }
                chosen.pop_back();
            }
            rest.push_back(i);
        }
    }
    const std::size_t m = canon.size();
    std::vector<IntVec> A(m);
    for (std::size_t i = 0; i < m; ++i) A[i] = primitive(canon[i]);

    RatMatrix B(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) B.set_row(i, canon[order[i]]);
    RatMatrix Binv = *inverse(B);

    struct Ray {
        IntVec v;
        Bits zeros;
    };
    std::vector<Ray> rays;
    for (std::size_t j = 0; j < dim; ++j) {
        Ray r{primitive(Binv.col(j)), Bits(m)};
        for (std::size_t i = 0; i < dim; ++i)
            if (i != j) r.zeros.set(order[i]);
        rays.push_back(std::move(r));
    }

    for (std::size_t row : rest) {
        const IntVec& a = A[row];
        std::vector<mpz_class> val(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = idot(a, rays[i].v);
            int s = sgn(val[i]);
            if (s > 0) pos.push_back(i);
            else if (s < 0) neg.push_back(i);
        }
        if (neg.empty()) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (sgn(val[i]) == 0) rays[i].zeros.set(row);
            continue;
        }
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (sgn(val[i]) >= 0) {
                next.push_back(rays[i]);
                if (sgn(val[i]) == 0) next.back().zeros.set(row);
            }
        for (std::size_t p : pos)
            for (std::size_t n : neg) {
                Bits common = rays[p].zeros & rays[n].zeros;
                if (dim >= 2 && common.count() < dim - 2) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
                    if (r != p && r != n && common.subset_of(rays[r].zeros)) adjacent = false;
                if (!adjacent) continue;
                Ray nr{IntVec(dim), common};
                for (std::size_t c = 0; c < dim; ++c) nr.v[c] = val[p] * rays[n].v[c] - val[n] * rays[p].v[c];
                make_primitive(nr.v);
                nr.zeros.set(row);
                next.push_back(std::move(nr));
            }
        rays = std::move(next);
    }

    std::vector<RatVec> out;
    out.reserve(rays.size());
    for (const auto& r : rays) {
        RatVec q(dim);
        for (std::size_t c = 0; c < dim; ++c) q[c] = Rational(r.v[c]);
        out.push_back(std::move(q));
    }
    return canonical_rays(out);
}

// A proper cone. Either description may be supplied; the other is computed
// on first access by double description and cached.
class PolyhedralCone {
public:
    PolyhedralCone() = default;

    static PolyhedralCone from_generators(std::size_t dim, const std::vector<RatVec>& gens) {
        check_lengths(dim, gens, "generator");
        auto facets = extreme_rays(gens, dim);
        if (rank(facets, dim) < dim) throw Error("non_pointed", "cone is not pointed: generators contain a line");
        PolyhedralCone c(dim);
        c.state_->facets = facets;
        c.state_->generators = keep_extreme(dim, canonical_rays(gens), facets);
        return c;
    }

    static PolyhedralCone from_facets(std::size_t dim, const std::vector<RatVec>& facets) {
        check_lengths(dim, facets, "facet");
        auto gens = extreme_rays(facets, dim);
        if (rank(gens, dim) < dim) throw Error("non_generating", "cone is not generating: it lies in a proper subspace");
        PolyhedralCone c(dim);
        c.state_->generators = gens;
        c.state_->facets = keep_extreme(dim, canonical_rays(facets), gens);
        return c;
    }

    // Both descriptions given; the caller vouches that they are the extreme
    // rays of the cone and its dual. `validate` checks pairwise positivity.
    static PolyhedralCone from_both(std::size_t dim, const std::vector<RatVec>& gens, const std::vector<RatVec>& facets) {
        check_lengths(dim, gens, "generator");
        check_lengths(dim, facets, "facet");
        PolyhedralCone c(dim);
        c.state_->generators = canonical_rays(gens);
        c.state_->facets = canonical_rays(facets);
        return c;
    }

    // Only generators known (they must be extreme rays); facets computed lazily.
    static PolyhedralCone lazy_from_generators(std::size_t dim, const std::vector<RatVec>& gens) {
        check_lengths(dim, gens, "generator");
        PolyhedralCone c(dim);
        c.state_->generators = canonical_rays(gens);
        return c;
    }
    static PolyhedralCone lazy_from_facets(std::size_t dim, const std::vector<RatVec>& facets) {
        check_lengths(dim, facets, "facet");
        PolyhedralCone c(dim);
        c.state_->facets = canonical_rays(facets);
        return c;
    }

    std::size_t dim() const { return dim_; }

    const std::vector<RatVec>& generators() const {
        std::lock_guard<std::mutex> lock(state_->mu);
        if (!state_->generators) state_->generators = extreme_rays(*state_->facets, dim_);
        return *state_->generators;
    }
    const std::vector<RatVec>& facets() const {
        std::lock_guard<std::mutex> lock(state_->mu);
        if (!state_->facets) state_->facets = extreme_rays(*state_->generators, dim_);
        return *state_->facets;
    }
    bool has_generators() const {
        std::lock_guard<std::mutex> lock(state_->mu);
        return state_->generators.has_value();
    }
    bool has_facets() const {
        std::lock_guard<std::mutex> lock(state_->mu);
        return state_->facets.has_value();
    }

    bool contains(const RatVec& x) const {
        if (x.size() != dim_) throw DimensionError("contains: vector of length " + std::to_string(x.size()) +
                                                   " in a cone of dimension " + std::to_string(dim_));
        for (const auto& f : facets())
            if (sgn(dot(f, x)) < 0) return false;
        return true;
    }

    bool is_pointed() const { return rank(facets(), dim_) == dim_; }
    bool is_generating() const { return rank(generators(), dim_) == dim_; }

    // ⟨f, g⟩ >= 0 for every facet/generator pair.
    bool validate() const {
        for (const auto& f : facets())
            for (const auto& g : generators())
                if (sgn(dot(f, g)) < 0) return false;
        return true;
    }

    bool operator==(const PolyhedralCone& o) const {
        return dim_ == o.dim_ && generators() == o.generators() && facets() == o.facets();
    }

private:
    struct State {
        std::mutex mu;
        std::optional<std::vector<RatVec>> generators, facets;
    };
    explicit PolyhedralCone(std::size_t dim) : dim_(dim), state_(std::make_shared<State>()) {}

    static void check_lengths(std::size_t dim, const std::vector<RatVec>& rays, const char* what) {
        if (dim == 0) throw DimensionError("cone of dimension 0");
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (rays[i].size() != dim)
                throw DimensionError(std::string(what) + " " + std::to_string(i) + " has length " +
                                     std::to_string(rays[i].size()) + ", expected " + std::to_string(dim));
    }

    // A ray r is extreme iff the dual rays vanishing on it span a (dim-1)-space.
    static std::vector<RatVec> keep_extreme(std::size_t dim, const std::vector<RatVec>& rays,
                                            const std::vector<RatVec>& dual) {
        std::vector<RatVec> out;
        for (const auto& r : rays) {
            std::vector<RatVec> tight;
            for (const auto& f : dual)
                if (sgn(dot(f, r)) == 0) tight.push_back(f);
            if (rank(tight, dim) + 1 == dim) out.push_back(r);
        }
        return out;
    }

    std::size_t dim_ = 0;
    std::shared_ptr<State> state_;
};

inline PolyhedralCone dual_cone(const PolyhedralCone& c) {
    if (!c.is_pointed()) throw Error("non_pointed", "dual_cone: input cone is not pointed");
    if (!c.is_generating()) throw Error("non_generating", "dual_cone: input cone is not generating");
    return PolyhedralCone::from_both(c.dim(), c.facets(), c.generators());
}

inline PolyhedralCone orthant(std::size_t d) {
    std::vector<RatVec> e;
    for (std::size_t i = 0; i < d; ++i) e.push_back(unit_vector(d, i));
    return PolyhedralCone::from_both(d, e, e);
}

// ---------------------------------------------------------------------------
// Tensors

// Coefficients are row-major with the first factor varying slowest.
struct TensorElement {
    std::vector<std::size_t> factors;
    RatVec coeffs;

    TensorElement() = default;
    TensorElement(std::vector<std::size_t> f, RatVec c) : factors(std::move(f)), coeffs(std::move(c)) {
        if (coeffs.size() != total()) throw DimensionError("TensorElement: " + std::to_string(coeffs.size()) +
                                                           " coefficients for product dimension " + std::to_string(total()));
    }
    static TensorElement zeros(std::vector<std::size_t> f) {
        TensorElement t;
        t.factors = std::move(f);
        t.coeffs.assign(t.total(), 0);
        return t;
    }
    static TensorElement product(const std::vector<RatVec>& vs) {
        TensorElement t;
        RatVec c{1};
        for (const auto& v : vs) {
            t.factors.push_back(v.size());
            c = kron(c, v);
        }
        t.coeffs = std::move(c);
        return t;
    }
    std::size_t total() const {
        std::size_t n = 1;
        for (auto f : factors) n *= f;
        return n;
    }
    // Two-factor view.
    Rational& at(std::size_t i, std::size_t j) { return coeffs[i * factors.at(1) + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return coeffs[i * factors.at(1) + j]; }
    RatMatrix as_matrix() const {
        if (factors.size() != 2) throw DimensionError("as_matrix: tensor has " + std::to_string(factors.size()) + " factors");
        return RatMatrix(factors[0], factors[1], coeffs);
    }
    bool operator==(const TensorElement& o) const { return factors == o.factors && coeffs == o.coeffs; }
};

inline Rational pair(const TensorElement& a, const TensorElement& b) {
    if (a.factors != b.factors) throw DimensionError("tensor pairing: factor shapes differ");
    return dot(a.coeffs, b.coeffs);
}

inline PolyhedralCone min_tensor(const PolyhedralCone& a, const PolyhedralCone& b) {
    std::vector<RatVec> gens;
    for (const auto& g : a.generators())
        for (const auto& h : b.generators()) gens.push_back(kron(g, h));
    return PolyhedralCone::lazy_from_generators(a.dim() * b.dim(), gens);
}

inline PolyhedralCone max_tensor(const PolyhedralCone& a, const PolyhedralCone& b) {
    std::vector<RatVec> facets;
    for (const auto& f : a.facets())
        for (const auto& h : b.facets()) facets.push_back(kron(f, h));
    return PolyhedralCone::lazy_from_facets(a.dim() * b.dim(), facets);
}

inline void check_tensor_shape(const TensorElement& xi, const PolyhedralCone& a, const PolyhedralCone& b,
                               const char* who) {
    if (xi.factors.size() != 2 || xi.factors[0] != a.dim() || xi.factors[1] != b.dim())
        throw DimensionError(std::string(who) + ": tensor shape does not match cone dimensions " +
                             std::to_string(a.dim()) + " x " + std::to_string(b.dim()));
}

// First facet pair (i, j) with negative value, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> max_violation(const TensorElement& xi, const PolyhedralCone& a,
                                                                        const PolyhedralCone& b) {
    check_tensor_shape(xi, a, b, "member_max");
    RatMatrix m = xi.as_matrix();
    const auto& fa = a.facets();
    const auto& fb = b.facets();
    for (std::size_t i = 0; i < fa.size(); ++i) {
        RatVec row = left_multiply(fa[i], m);
        for (std::size_t j = 0; j < fb.size(); ++j)
            if (sgn(dot(row, fb[j])) < 0) return std::make_pair(i, j);
    }
    return std::nullopt;
}

inline bool member_max(const TensorElement& xi, const PolyhedralCone& a, const PolyhedralCone& b) {
    return !max_violation(xi, a, b).has_value();
}

struct SeparableTerm {
    Rational weight;
    RatVec a, b;  // generators of the two factors
};

struct SeparabilityResult {
    bool separable = false;
    std::vector<SeparableTerm> decomposition;  // ξ = Σ weight·a⊗b
    std::optional<TensorElement> witness;      // ≥ 0 on every a⊗b, < 0 on ξ
};

inline SeparabilityResult member_min(const TensorElement& xi, const PolyhedralCone& a, const PolyhedralCone& b) {
    check_tensor_shape(xi, a, b, "member_min");
    if (!member_max(xi, a, b)) throw Error("not_in_max_tensor", "member_min: tensor is not in ambient tensor cone");
    const auto& ga = a.generators();
    const auto& gb = b.generators();
    const std::size_t da = a.dim(), db = b.dim();
    LinearProgram p;
    std::size_t nv = ga.size() * gb.size();
    p.objective.assign(nv, 0);
    p.lower.assign(nv, Rational(0));
    p.eq_matrix = RatMatrix(da * db, nv);
    p.eq_rhs = xi.coeffs;
    for (std::size_t i = 0; i < ga.size(); ++i)
        for (std::size_t j = 0; j < gb.size(); ++j) {
            std::size_t v = i * gb.size() + j;
            for (std::size_t r = 0; r < da; ++r) {
                if (sgn(ga[i][r]) == 0) continue;
                for (std::size_t s = 0; s < db; ++s)
                    if (sgn(gb[j][s]) != 0) p.eq_matrix(r * db + s, v) = ga[i][r] * gb[j][s];
            }
        }
    LPResult r = lp_solve(p);
    SeparabilityResult out;
    if (r.status == LPStatus::Optimal) {
        out.separable = true;
        for (std::size_t i = 0; i < ga.size(); ++i)
            for (std::size_t j = 0; j < gb.size(); ++j) {
                const Rational& w = r.primal[i * gb.size() + j];
                if (sgn(w) != 0) out.decomposition.push_back({w, ga[i], gb[j]});
            }
    } else {
        TensorElement w({da, db}, scale(Rational(-1), r.dual));
        out.witness = std::move(w);
    }
    return out;
}

// Checks a witness against every generator pair and against ξ.
inline bool verify_witness(const TensorElement& w, const TensorElement& xi, const PolyhedralCone& a,
                           const PolyhedralCone& b) {
    check_tensor_shape(w, a, b, "verify_witness");
    RatMatrix m = w.as_matrix();
    for (const auto& g : a.generators()) {
        RatVec row = left_multiply(g, m);
        for (const auto& h : b.generators())
            if (sgn(dot(row, h)) < 0) return false;
    }
    return sgn(pair(w, xi)) < 0;
}

inline bool verify_decomposition(const std::vector<SeparableTerm>& terms, const TensorElement& xi) {
    RatVec sum(xi.coeffs.size());
    for (const auto& t : terms) {
        if (sgn(t.weight) < 0) return false;
        RatVec k = kron(t.a, t.b);
        if (k.size() != sum.size()) return false;
        for (std::size_t i = 0; i < k.size(); ++i) sum[i] += t.weight * k[i];
    }
    return sum == xi.coeffs;
}

}  // namespace conefactor
