#include <doctest.h>

#include "support.hpp"

using namespace conefactor;

namespace {

// PR variant: a ⊕ b = x·y ⊕ αx ⊕ βy ⊕ γ.
Behavior pr_variant(int al, int be, int ga) {
    Behavior p = NsDistribution::uniform_shape(2, 2, 2, RatVec(16));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    if ((a ^ b) == ((x & y) ^ (al & x) ^ (be & y) ^ ga)) p.p({x, y}, {a, b}) = rat(1, 2);
    return p;
}

template <class Rng>
Behavior random_square_behavior(Rng& rng) {
    std::uniform_int_distribution<int> bit(0, 1), wpr(0, 6);
    Behavior loc = oracle::random_local(rng, {2, 2}, {2, 2}, 3, 6);
    Behavior pr = pr_variant(bit(rng), bit(rng), bit(rng));
    Rational w = rat(wpr(rng), 8);
    Behavior out = loc;
    for (std::size_t i = 0; i < out.probs.size(); ++i) out.probs[i] = w * pr.probs[i] + (1 - w) * loc.probs[i];
    return out;
}

// 1-based p_{a,b|x,y}.
Rational P(const Behavior& p, int a, int b, int x, int y) {
    return p.p({std::size_t(x - 1), std::size_t(y - 1)}, {std::size_t(a - 1), std::size_t(b - 1)});
}

Rational E(const Behavior& p, int x, int y) {
    return P(p, 1, 1, x, y) - P(p, 1, 2, x, y) - P(p, 2, 1, x, y) + P(p, 2, 2, x, y);
}

// Witness members evaluated straight from the probabilities, without the codec.
// A square effect is (a, x) 1-based; d_i and F_j are sums of signed effects, with
// the complement effect expanded through 𝟙 = p_{1|x} + p_{2|x}.
using Lin = std::vector<std::tuple<int, int, int>>;  // (coef, a, x)
Rational oracle_member(const Behavior& p, bool reflect, int j) {
    const Lin d[3] = {{{1, 1, 2}}, {{1, 1, 1}, {-1, 1, 2}}, {{1, 2, 1}}};
    const Lin F[4] = {{{1, 1, 1}}, {{1, 2, 2}}, {{1, 2, 1}}, {{1, 1, 2}}};  // F_4(=F_0), F_1, F_2, F_3
    Rational v = 0;
    for (int i = 1; i <= 3; ++i) {
        int s = reflect ? ((j - i) % 4 + 4) % 4 : (i + j) % 4;
        for (auto [c1, a, x] : d[i - 1])
            for (auto [c2, b, y] : F[s]) v += c1 * c2 * P(p, a, b, x, y);
    }
    return v;
}

std::vector<Rational> oracle_family(const Behavior& p) {
    std::vector<Rational> out;
    for (int j : {1, 2, 3, 0}) out.push_back(oracle_member(p, false, j));
    for (int j = 0; j < 4; ++j) out.push_back(oracle_member(p, true, j));
    return out;
}

}  // namespace

TEST_SUITE("bell") {

TEST_CASE("has_lhv on basic behaviors") {
    Behavior det = NsDistribution::uniform_shape(2, 2, 2, RatVec(16));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) det.p({x, y}, {x, 1}) = 1;
    auto m = has_lhv(det);
    REQUIRE(m);
    CHECK(m->weights.size() == 1);
    CHECK(verify_lhv(det, *m));

    std::mt19937 rng(11);
    for (int t = 0; t < 10; ++t) {
        Behavior prod = oracle::random_local(rng, {3, 2}, {2, 3}, 1, 4);
        auto pm = has_lhv(prod);
        REQUIRE(pm);
        CHECK(verify_lhv(prod, *pm));
    }

    CHECK_FALSE(has_lhv(pr_box()));
    auto half = has_lhv(with_visibility(pr_box(), rat(1, 2)));
    REQUIRE(half);
    CHECK(verify_lhv(with_visibility(pr_box(), rat(1, 2)), *half));
    for (const auto& W : chsh_family()) CHECK(evaluate_witness(W, with_visibility(pr_box(), rat(1, 2))) >= 0);
    CHECK_FALSE(has_lhv(with_visibility(pr_box(), rat(51, 100))));
}

TEST_CASE("has_lhv agrees with separability") {
    std::mt19937 rng(12);
    const std::vector<std::array<std::size_t, 4>> shapes{{2, 2, 2, 2}, {2, 1, 2, 2}, {2, 2, 1, 2}, {1, 2, 2, 2}, {2, 2, 2, 1}};
    int nonlocal = 0;
    for (int t = 0; t < 40; ++t) {
        auto s = shapes[t % shapes.size()];
        Behavior p = (s == shapes[0]) ? random_square_behavior(rng) : oracle::random_local(rng, {s[0], s[2]}, {s[1], s[3]}, 2, 4);
        Gpt A = make_polysimplex(s[0], s[1]), B = make_polysimplex(s[2], s[3]);
        bool sep = member_min(ns_encode(p), A.cone, B.cone).separable;
        auto m = has_lhv(p);
        CHECK(sep == m.has_value());
        if (m) CHECK(verify_lhv(p, *m));
        nonlocal += !sep;
    }
    CHECK(nonlocal > 0);
}

TEST_CASE("CHSH family values") {
    auto fam = chsh_family();
    REQUIRE(fam.size() == 8);
    for (const auto& W : fam) CHECK(is_witness(W));
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) CHECK_FALSE(fam[i].coeffs == fam[j].coeffs);

    // all 16 deterministic products
    for (std::size_t m = 0; m < 16; ++m) {
        Behavior d = NsDistribution::uniform_shape(2, 2, 2, RatVec(16));
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) d.p({x, y}, {(m >> x) & 1, (m >> (2 + y)) & 1}) = 1;
        for (const auto& W : fam) CHECK(evaluate_witness(W, d) >= 0);
    }

    Rational mn = 1;
    for (const auto& W : fam) mn = std::min(mn, evaluate_witness(W, pr_box()));
    CHECK(mn == rat(-1, 2));
    auto ov = oracle_family(pr_box());
    CHECK(*std::min_element(ov.begin(), ov.end()) == rat(-1, 2));
}

TEST_CASE("CHSH members match the probability form") {
    std::mt19937 rng(13);
    auto fam = chsh_family();
    for (int t = 0; t < 30; ++t) {
        Behavior p = random_square_behavior(rng);
        Rational base = evaluate_witness(chsh_base(), p);
        CHECK(base == P(p, 1, 2, 2, 1) + P(p, 2, 1, 1, 1) + P(p, 1, 1, 1, 2) - P(p, 1, 1, 2, 2));
        CHECK(base == (2 - (E(p, 1, 1) + E(p, 2, 1) + E(p, 2, 2) - E(p, 1, 2))) / 4);
        auto ov = oracle_family(p);
        for (std::size_t i = 0; i < 8; ++i) CHECK(evaluate_witness(fam[i], p) == ov[i]);
    }
}

TEST_CASE("uniform behavior pairs with the product of centers") {
    std::mt19937 rng(14);
    Behavior u = NsDistribution(std::vector<std::size_t>{2, 3}, std::vector<std::size_t>{2, 2}, RatVec(24, rat(1, 6)));
    for (int t = 0; t < 5; ++t) {
        GptMap psi = channel_from_sim(random_simulation(rng, {3, 2}, {2, 2}));
        WitnessTensor W = witness_from_map(psi, {3, 2});
        RatVec ca(3), cb(5);
        ca[0] = cb[0] = 1;
        ca[1] = ca[2] = rat(1, 2);
        for (std::size_t i = 1; i < 5; ++i) cb[i] = rat(1, 3);
        CHECK(evaluate_witness(W, u) == pair(W.coeffs, TensorElement::product({ca, cb})));
    }
}

TEST_CASE("witness completeness on the square") {
    std::mt19937 rng(15);
    auto fam = chsh_family();
    int local = 0, nonlocal = 0;
    for (int t = 0; t < 200; ++t) {
        Behavior p = random_square_behavior(rng);
        bool all_ok = true;
        for (const auto& W : fam) all_ok = all_ok && evaluate_witness(W, p) >= 0;
        bool lhv = has_lhv(p).has_value();
        CHECK(all_ok == lhv);
        (lhv ? local : nonlocal)++;
    }
    CHECK(local > 20);
    CHECK(nonlocal > 20);
}

TEST_CASE("reduce_to_chsh") {
    RatMatrix id = reduce_to_chsh(chsh_base()).matrix;
    CHECK(id == RatMatrix::identity(3));

    std::mt19937 rng(16);
    for (const auto& W : chsh_family()) {
        GptMap xs = reduce_to_chsh(W);
        for (int t = 0; t < 5; ++t) {
            Behavior p = random_square_behavior(rng);
            TensorElement xi = ns_encode(p);
            RatMatrix m = xi.as_matrix() * xs.matrix.transpose();
            TensorElement red = TensorElement::zeros({3, 3});
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) red.at(i, j) = m(i, j);
            CHECK(pair(chsh_base().coeffs, red) == evaluate_witness(W, p));
        }
    }

    const std::vector<PolyShape> shapes{{2, 2}, {3, 2}, {2, 3}, {3, 1}};
    for (int t = 0; t < 10; ++t) {
        PolyShape s = shapes[t % shapes.size()];
        GptMap psi = channel_from_sim(random_simulation(rng, s, {2, 2}));
        WitnessTensor W = witness_from_map(psi, s);
        REQUIRE(is_witness(W));
        GptMap xs = reduce_to_chsh(W);
        CHECK(xs.matrix == psi.matrix);
        for (const auto& g : xs.source.cone.generators()) CHECK(xs.target.cone.contains(xs.matrix * g));
    }

    WitnessTensor bad = chsh_base();
    bad.coeffs.coeffs = scale(Rational(-1), bad.coeffs.coeffs);
    try {
        reduce_to_chsh(bad);
        FAIL("expected not_a_witness");
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "not_a_witness");
    }
    CHECK_THROWS_AS(reduce_to_chsh(WitnessTensor{{3, 2}, {2, 2}, TensorElement::zeros({5, 3}), ""}), DimensionError);
}

TEST_CASE("evaluate_witness rejects shape mismatch") {
    Behavior u = NsDistribution(std::vector<std::size_t>{2, 3}, std::vector<std::size_t>{2, 2}, RatVec(24, rat(1, 6)));
    CHECK_THROWS_AS(evaluate_witness(chsh_base(), u), DimensionError);
}

}  // TEST_SUITE
