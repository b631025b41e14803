#include <doctest.h>

#include <functional>

#include "conefactor/factor.hpp"
#include "support.hpp"

using namespace conefactor;

namespace {

// Smallest facet value over source vertices, for either map.
Rational min_slack(const GptMap& f) {
    Rational mn = 1;
    for (const auto& v : state_vertices(f.source))
        for (const auto& h : f.target.cone.facets()) mn = std::min(mn, dot(h, f.matrix * v));
    return mn;
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_SUITE("factor") {

TEST_CASE("constructions verify up to their thresholds") {
    for (long n = 0; n <= 12; ++n) {
        Rational t = rat(n, 36);  // grid up to 1/3
        auto c = three_outcome_construction(t);
        CHECK(verify_factorization(c));
        CHECK(min_slack(c.phi_map()) == (1 - 3 * t) / 4);
    }
    for (long n = 0; n <= 16; ++n) {
        auto c = two_binary_construction(rat(n, 40));
        CHECK(verify_factorization(c));
    }
    for (long n = 0; n <= 10; ++n) {
        auto c = joint4_construction(rat(n, 20));
        CHECK(verify_factorization(c));
    }
    CHECK(min_slack(two_binary_construction(rat(2, 5)).phi_map()) == 0);
    CHECK(min_slack(joint4_construction(rat(1, 2)).phi_map()) == 0);
}

TEST_CASE("constructions fail above their thresholds") {
    CHECK(error_code([] { three_outcome_construction(rat(1, 3) + rat(1, 100)); }) == "construction_infeasible");
    CHECK(error_code([] { two_binary_construction(rat(2, 5) + rat(1, 1000)); }) == "construction_infeasible");
    CHECK(error_code([] { joint4_construction(rat(51, 100)); }) == "construction_infeasible");
    CHECK(error_code([] { three_outcome_construction(1); }) == "construction_infeasible");
    CHECK_THROWS_AS(three_outcome_construction(rat(-1, 10)), std::invalid_argument);
    try {
        three_outcome_construction(rat(2, 5));
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("-") != std::string::npos);
    }
}

TEST_CASE("the tilted triangle beats 1/3 through S_3") {
    for (long n = 0; n <= 20; ++n) {
        Rational t = rat(n, 50);  // up to 2/5
        auto c = tilted_triangle_construction(t);
        CHECK(verify_factorization(c));
        CHECK(verify_inclusion_certificate(inclusion_from_factorization(c), c.source, c.middle, c.target));
    }
    // t² + 2t ≤ 1 brackets the threshold at √2 - 1
    CHECK(rat(207, 500) * rat(207, 500) + 2 * rat(207, 500) <= 1);
    CHECK_NOTHROW(tilted_triangle_construction(rat(207, 500)));
    CHECK(error_code([] { tilted_triangle_construction(rat(208, 500)); }) == "construction_infeasible");
    auto a = three_outcome_construction(0), b = tilted_triangle_construction(0);
    CHECK(verify_factorization(b));
    CHECK(a.source.dim == b.source.dim);
}

TEST_CASE("perturbed certificates are rejected") {
    auto c = three_outcome_construction(rat(1, 4));
    REQUIRE(verify_factorization(c));
    auto d = c;
    d.psi(1, 1) += rat(1, 100);
    CHECK_FALSE(verify_factorization(d));
    auto e = c;
    e.phi(2, 1) += rat(1, 100);
    CHECK_FALSE(verify_factorization(e));
    auto bad = c;
    bad.phi = RatMatrix(4, 3);
    CHECK_THROWS_AS(verify_factorization(bad), DimensionError);

    // a multiple of the identity is not unital
    FactorizationCertificate id{make_polysimplex(2, 2), make_polysimplex(2, 2), make_polysimplex(2, 2), RatMatrix::identity(3),
                                RatMatrix::identity(3), "id"};
    CHECK(verify_factorization(id));
    id.psi(1, 1) = 2;
    CHECK_FALSE(verify_factorization(id));
}

TEST_CASE("inclusion certificates match factorizations") {
    std::vector<FactorizationCertificate> certs{three_outcome_construction(rat(1, 3)), three_outcome_construction(rat(1, 5)),
                                                joint4_construction(rat(1, 2)), joint4_construction(rat(1, 10)),
                                                two_binary_construction(rat(2, 5))};
    for (const auto& f : certs) {
        InclusionCertificate ic = inclusion_from_factorization(f);
        CHECK(verify_inclusion_certificate(ic, f.source, f.middle, f.target));
        auto back = factorization_from_inclusion(ic, f.source, f.middle, f.target);
        if (f.middle.dim == f.source.dim) {
            // square middle: A is invertible and the round trip gives a valid factorization
            REQUIRE(back);
            CHECK(verify_factorization(*back));
        }
        if (back) CHECK(verify_factorization(*back));
    }

    // an inclusion that misses a source vertex
    auto f = three_outcome_construction(rat(1, 3));
    InclusionCertificate ic = inclusion_from_factorization(f);
    Gpt wider = noisy_polysimplex(2, 2, {rat(1, 2), rat(1, 2)});
    CHECK_FALSE(verify_inclusion_certificate(ic, wider, f.middle, f.target));
    InclusionCertificate skew = ic;
    skew.projection(0, 0) = 2;
    CHECK_FALSE(verify_inclusion_certificate(skew, f.source, f.middle, f.target));
    CHECK_THROWS_AS(verify_inclusion_certificate(InclusionCertificate{RatMatrix(1, 2), RatMatrix(2, 1)}, f.source,
                                                 make_polysimplex(2, 1), f.target),
                    DimensionError);
}

TEST_CASE("trivial certificates") {
    // point state space: everything maps to the center
    Gpt pt = noisy_polysimplex(2, 2, {0, 0}), sq = make_polysimplex(2, 2), s3 = make_polysimplex(3, 1);
    RatMatrix phi(3, 3), psi(3, 3);
    phi(0, 0) = 1;
    phi(1, 0) = phi(2, 0) = rat(1, 3);
    psi(0, 0) = 1;
    psi(1, 0) = psi(2, 0) = rat(1, 2);
    CHECK(verify_factorization({pt, s3, sq, phi, psi, "center"}));

    FactorizationCertificate id{noisy_polysimplex(2, 2, {1, 1}), sq, sq, RatMatrix::identity(3), RatMatrix::identity(3), "id"};
    REQUIRE(verify_factorization(id));
    InclusionCertificate ic = inclusion_from_factorization(id);
    CHECK(verify_inclusion_certificate(ic, id.source, sq, sq));
}

TEST_CASE("inclusion from a hand-built certificate") {
    // S_3 noisy at 1/3 inside a square via the 2binary maps, written directly in affine form
    Gpt src = noisy_polysimplex(3, 1, {rat(2, 5)}), mid = make_polysimplex(2, 2), tgt = make_polysimplex(3, 1);
    auto f = two_binary_construction(rat(2, 5));
    InclusionCertificate ic = inclusion_from_factorization(f);
    CHECK(ic.affine.rows() == 2);
    CHECK(ic.projection == RatMatrix::identity(2));
    auto back = factorization_from_inclusion(ic, src, mid, tgt);
    REQUIRE(back);
    CHECK(verify_factorization(*back));
    CHECK(back->psi == f.psi);
    CHECK(back->phi == f.phi);
}

TEST_CASE("see-saw finds factorizations") {
    auto r0 = seesaw_search({2, 2}, {0, 0}, {3, 1}, 20, 1);
    REQUIRE(r0.certificate);
    CHECK(verify_factorization(*r0.certificate));
    CHECK(r0.residual == 0);

    int found = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto r = seesaw_search({2, 2}, {rat(1, 3), rat(1, 3)}, {3, 1}, 30, seed);
        if (r.certificate) {
            CHECK(verify_factorization(*r.certificate));
            ++found;
        }
    }
    MESSAGE("see-saw successes at t = 1/3: " << found << "/4");
    CHECK(found >= 1);

    // the unit noise square cannot pass through a 2-outcome simplex
    auto r1 = seesaw_search({2, 2}, {1, 1}, {2, 1}, 10, 3);
    CHECK_FALSE(r1.certificate);
    CHECK(r1.residual > 0);
}

}  // TEST_SUITE
