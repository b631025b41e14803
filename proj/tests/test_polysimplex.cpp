#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace conefactor;

TEST_SUITE("polysimplex") {

TEST_CASE("vertex and facet counts") {
    for (std::size_t k = 2; k <= 4; ++k)
        for (std::size_t g = 1; g <= 3; ++g) {
            Gpt P = make_polysimplex(k, g);
            std::size_t kg = 1;
            for (std::size_t i = 0; i < g; ++i) kg *= k;
            CHECK(P.cone.generators().size() == kg);
            CHECK(P.cone.facets().size() == k * g);
            CHECK(P.cone.validate());
            PolyShape s{k, g};
            for (std::size_t x = 0; x < g; ++x) {
                RatVec sum(s.dim());
                for (std::size_t a = 0; a < k; ++a) sum = add(sum, poly_effect(s, x, a));
                CHECK(sum == P.unit);
            }
            if (k * g <= 9) {
                // the directly populated descriptions agree with double description
                auto rec = PolyhedralCone::from_generators(s.dim(), P.cone.generators());
                CHECK(rec.facets() == P.cone.facets());
            }
        }
}

TEST_CASE("small cases: simplex, square, cube") {
    Gpt s = make_polysimplex(3, 1);
    CHECK(s.cone.generators().size() == 3);
    CHECK(s.dim == 3);
    Gpt c = make_polysimplex(2, 3);
    CHECK(c.cone.generators().size() == 8);
    // cube combinatorics: each vertex on exactly 3 facets
    for (const auto& v : c.cone.generators()) {
        int tight = 0;
        for (const auto& f : c.cone.facets()) tight += sgn(dot(f, v)) == 0;
        CHECK(tight == 3);
    }
    CHECK(builtin_gpt("square").cone == make_polysimplex(2, 2).cone);
    CHECK(builtin_gpt("polysimplex:3,2").dim == 5);
    CHECK_THROWS_AS(builtin_gpt("polysimplex:3"), std::invalid_argument);
}

TEST_CASE("ambient view round trip") {
    PolyShape s{3, 2};
    std::vector<RatVec> P{{rat(1, 2), 0}, {rat(1, 4), 1}, {rat(1, 4), 0}};
    RatVec v = from_ambient(s, P);
    CHECK(to_ambient(s, v) == P);
    P[0][1] = 1;
    CHECK_THROWS_AS(from_ambient(s, P), Error);
}

TEST_CASE("descent permutations") {
    CHECK(descent_perms(2, 1) == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 0}});
    CHECK(descent_perms(3, 1).size() == 3);
    auto d42 = descent_perms(4, 2);
    CHECK(d42.size() == 6);
    // brute force: all permutations whose descent set is within {2}
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::vector<std::vector<std::size_t>> brute;
    do {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < 4; ++i)
            if (perm[i] > perm[i + 1] && i + 1 != 2) ok = false;
        if (ok) brute.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(d42.begin(), d42.end());
    CHECK(d42 == brute);
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::size_t m = 1; m < n; ++m) CHECK(descent_perms(n, m).size() == binomial(n, m));
    CHECK_THROWS_AS(descent_perms(3, 0), std::invalid_argument);
}

TEST_CASE("uniform distribution codec") {
    NsDistribution u({2, 3}, {2, 2}, RatVec(24, rat(1, 6)));
    auto xi = ns_encode(u);
    CHECK(xi.factors == std::vector<std::size_t>{3, 5});
    auto back = ns_decode(xi, u.shapes());
    CHECK(back.probs == u.probs);
}

TEST_CASE("two-party coefficients are the four marginal blocks") {
    std::mt19937 rng(2);
    auto p = oracle::random_local(rng, {3, 2}, {2, 3});
    auto xi = ns_encode(p);
    PolyShape A{3, 2}, B{2, 3};
    CHECK(xi.at(0, 0) == 1);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a) {
            Rational pa = 0;
            for (std::size_t b = 0; b < 2; ++b) pa += p.p({x, 0}, {a, b});
            CHECK(xi.at(A.idx(x, a), 0) == pa);
            for (std::size_t y = 0; y < 3; ++y) {
                CHECK(xi.at(A.idx(x, a), B.idx(y, 0)) == p.p({x, y}, {a, 0}));
            }
        }
    for (std::size_t y = 0; y < 3; ++y) {
        Rational pb = 0;
        for (std::size_t a = 0; a < 3; ++a) pb += p.p({0, y}, {a, 0});
        CHECK(xi.at(0, B.idx(y, 0)) == pb);
    }
}

TEST_CASE("property: codecs are mutually inverse for n <= 4, k,g <= 3") {
    std::mt19937 rng(8);
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t k = 2; k <= 3; ++k)
            for (std::size_t g = 1; g <= 3; ++g) {
                if (n == 4 && k * g > 6) continue;  // keep runtime small; biggest cases below
                auto p = oracle::random_local(rng, std::vector<std::size_t>(n, k), std::vector<std::size_t>(n, g));
                auto xi = ns_encode(p);
                CHECK(ns_decode(xi, p.shapes()).probs == p.probs);
            }
    auto p = oracle::random_local(rng, {3, 3, 3, 3}, {3, 3, 3, 3}, 1, 3);
    CHECK(ns_decode(ns_encode(p), p.shapes()).probs == p.probs);
    auto pr = oracle::pr_box();
    CHECK(ns_decode(ns_encode(pr), pr.shapes()).probs == pr.probs);
}

TEST_CASE("decode rejects tensors outside the max tensor") {
    auto pr = oracle::pr_box();
    auto xi = ns_encode(pr);
    xi.at(1, 1) = -1;
    try {
        ns_decode(xi, pr.shapes());
        FAIL("expected facet violation");
    } catch (const Error& e) {
        CHECK(e.code() == "facet_violation");
        CHECK(std::string(e.what()).find("m_1^(1) ⊗ m_1^(1)") != std::string::npos);
    }
}

TEST_CASE("encode requires a valid no-signaling distribution") {
    NsDistribution sig = NsDistribution::uniform_shape(2, 2, 2, RatVec(16));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) sig.p({x, y}, {y, 0}) = 1;  // Alice's outcome equals Bob's input
    CHECK_FALSE(is_ns(sig));
    CHECK_THROWS_AS(ns_encode(sig), Error);
}

TEST_CASE("identity channel decomposes to the identity choice") {
    auto d = channel_decompose(identity_map(make_polysimplex(2, 2)), {2, 2}, {2, 2});
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            CHECK(d.pi[x][y] == (x == y ? 1 : 0));
            if (x == y)
                for (std::size_t b = 0; b < 2; ++b)
                    for (std::size_t a = 0; a < 2; ++a) CHECK(d.nu[x][y][b][a] == (a == b ? 1 : 0));
        }
}

TEST_CASE("constant channel to s_{1..1}") {
    PolyShape S{3, 2}, T{2, 3};
    RatMatrix m(T.dim(), S.dim());
    RatVec v = poly_vertex(T, {0, 0, 0});
    for (std::size_t r = 0; r < T.dim(); ++r) m(r, 0) = v[r];
    GptMap c(make_polysimplex(3, 2), make_polysimplex(2, 3), m);
    REQUIRE(is_channel(c));
    auto d = channel_decompose(c, S, T);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            if (sgn(d.pi[x][y]) > 0)
                for (std::size_t b = 0; b < 3; ++b) CHECK(d.nu[x][y][b][0] == 1);
    CHECK(channel_from_sim(d).matrix == m);
}

TEST_CASE("property: random (pi, nu) round trips") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t u = static_cast<std::size_t>(trial);
        PolyShape S{2 + u % 2, 1 + u % 3}, T{2 + (u / 2) % 2, 1 + (u / 3) % 3};
        auto d = random_simulation(rng, S, T);
        GptMap phi = channel_from_sim(d);
        CHECK(is_channel(phi));
        auto d2 = channel_decompose(phi, S, T);
        CHECK(sim_problem(d2).empty());
        CHECK(channel_from_sim(d2).matrix == phi.matrix);
    }
}

TEST_CASE("decompose rejects non-channels") {
    Gpt sq = make_polysimplex(2, 2);
    RatMatrix m = RatMatrix::identity(3);
    m(1, 1) = -1;
    CHECK_THROWS_AS(channel_decompose(GptMap(sq, sq, m), {2, 2}, {2, 2}), Error);
}

TEST_CASE("noisy polysimplex") {
    CHECK(noisy_polysimplex(3, 2, {1, 1}).cone == make_polysimplex(3, 2).cone);
    auto center = state_vertices(noisy_polysimplex(2, 2, {0, 0}));
    CHECK(canonical_rays(center).size() == 1);
    auto tri = state_vertices(noisy_polysimplex(3, 1, {rat(2, 3)}));
    // ambient vertex 2/3 δ_i + 1/9 (1,1,1)
    PolyShape s{3, 1};
    std::vector<std::vector<Rational>> amb;
    for (const auto& v : tri) {
        auto P = to_ambient(s, v);
        amb.push_back({P[0][0], P[1][0], P[2][0]});
    }
    std::sort(amb.begin(), amb.end());
    CHECK(amb == std::vector<std::vector<Rational>>{{rat(1, 9), rat(1, 9), rat(7, 9)},
                                                    {rat(1, 9), rat(7, 9), rat(1, 9)},
                                                    {rat(7, 9), rat(1, 9), rat(1, 9)}});
    // inclusion, strict unless t = 1
    Gpt big = make_polysimplex(2, 2);
    for (const RatVec& t : std::vector<RatVec>{{rat(1, 2), 1}, {rat(1, 3), rat(2, 3)}}) {
        Gpt nz = noisy_polysimplex(2, 2, t);
        for (const auto& v : nz.cone.generators()) CHECK(big.cone.contains(v));
        bool all_in = true;
        for (const auto& v : big.cone.generators()) all_in = all_in && nz.cone.contains(v);
        CHECK_FALSE(all_in);
        // the facets given directly match double description
        CHECK(PolyhedralCone::from_generators(3, nz.cone.generators()).facets() == nz.cone.facets());
    }
}

}
