#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slopelab/zq.hpp"
#include "testutil.hpp"

using namespace slopelab;

TEST_CASE("context validation") {
    CHECK_THROWS_AS(PrecisionContext::create(4, 1, 3), PreconditionError); // not prime
    CHECK_THROWS_AS(PrecisionContext::create(2, 0, 3), PreconditionError);
    CHECK_THROWS_AS(PrecisionContext::create(2, 1, 0), PreconditionError);
    // reducible modulus mod p: x^2 + 1 = (x+1)^2 over F_2
    CHECK_THROWS_AS(PrecisionContext::create(2, 2, 4, {mpz_class(1), mpz_class(0), mpz_class(1)}),
                    PreconditionError);
    // default modulus for p=2, s=2 is x^2 + x + 1
    auto ctx = PrecisionContext::create(2, 2, 4);
    CHECK(ctx->modulus == std::vector<mpz_class>{1, 1, 1});
    // p=3, s=2: x^2 + 1 is the least irreducible
    auto c3 = PrecisionContext::create(3, 2, 4);
    CHECK(c3->modulus == std::vector<mpz_class>{1, 0, 1});
}

TEST_CASE("cross-context operations are rejected") {
    auto a = PrecisionContext::create(5, 1, 3);
    auto b = PrecisionContext::create(5, 1, 4);
    CHECK_THROWS_AS(Zq::one(a) + Zq::one(b), PreconditionError);
    CHECK_THROWS_AS(Zq::one(a) * Zq::one(b), PreconditionError);
}

TEST_CASE("addition examples") {
    auto c5 = PrecisionContext::create(5, 1, 3);
    // 120 + 10 = 5 mod 125
    CHECK((Zq::from_integer(c5, 120) + Zq::from_integer(c5, 10)).rep_equal(Zq::from_integer(c5, 5)));
    // 0 + x = x
    std::mt19937_64 rng(1);
    Zq x = testutil::random_zq(rng, c5);
    CHECK((Zq::zero(c5) + x).rep_equal(x));
    // (1+g) + (1+g) = 2 + 2g over F_4 at N=4
    auto c4 = PrecisionContext::create(2, 2, 4);
    Zq v(c4, {mpz_class(1), mpz_class(1)});
    CHECK((v + v).rep_equal(Zq(c4, {mpz_class(2), mpz_class(2)})));
}

TEST_CASE("multiplication examples and oracle") {
    auto c4 = PrecisionContext::create(2, 2, 4);
    Zq g = Zq::gen(c4);
    CHECK((g * g).rep_equal(Zq(c4, {mpz_class(15), mpz_class(15)})));
    auto c9 = PrecisionContext::create(3, 1, 2);
    CHECK((Zq::from_integer(c9, 4) * Zq::from_integer(c9, 4)).rep_equal(Zq::from_integer(c9, 7)));
    // identity
    std::mt19937_64 rng(2);
    Zq x = testutil::random_zq(rng, c4);
    CHECK((x * Zq::one(c4)).rep_equal(x));
    // cross-check products against the schoolbook oracle on raw vectors
    for (int t = 0; t < 25; ++t) {
        Zq a = testutil::random_zq(rng, c4), b = testutil::random_zq(rng, c4);
        auto expect = oracle::poly_mulmod(a.coords(), b.coords(), c4->modulus, c4->pN());
        CHECK((a * b).coords() == expect);
    }
}

TEST_CASE("valuation") {
    auto c5 = PrecisionContext::create(5, 1, 6);
    Zq x = Zq::from_integer(c5, 125 * 7); // p^3 * unit
    auto v = x.val();
    CHECK(v.certified);
    CHECK(v.v == 3);
    auto vz = Zq::zero(c5).val();
    CHECK_FALSE(vz.certified);
    CHECK(vz.v == 6); // ">= known_prec"
    auto c4 = PrecisionContext::create(2, 2, 4);
    Zq y(c4, {mpz_class(2), mpz_class(2)});
    CHECK(y.val().v == 1);
    CHECK(y.val().certified);
}

TEST_CASE("inverse") {
    auto c5 = PrecisionContext::create(5, 1, 3);
    CHECK(Zq::one(c5).inv().rep_equal(Zq::one(c5)));
    Zq two_inv = Zq::from_integer(c5, 2).inv();
    CHECK(two_inv.rep_equal(Zq::from_integer(c5, 63))); // 2*63 = 126 = 1 mod 125
    auto c22 = PrecisionContext::create(2, 2, 2);
    Zq g = Zq::gen(c22);
    CHECK(g.inv().rep_equal(Zq(c22, {mpz_class(3), mpz_class(3)}))); // g^2 = 3+3g mod 4
    CHECK_THROWS_AS(Zq::from_integer(c5, 5).inv(), PreconditionError);
    // random units on an extension
    auto c49 = PrecisionContext::create(7, 2, 8);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        Zq u = testutil::random_unit(rng, c49);
        CHECK((u * u.inv()).rep_equal(Zq::one(c49)));
    }
}

TEST_CASE("frobenius examples") {
    auto c1 = PrecisionContext::create(7, 1, 5);
    std::mt19937_64 rng(4);
    Zq x = testutil::random_zq(rng, c1);
    CHECK(x.frobenius().rep_equal(x)); // s = 1: sigma = id
    auto c4 = PrecisionContext::create(2, 2, 4);
    Zq g = Zq::gen(c4);
    CHECK(g.frobenius().rep_equal(Zq(c4, {mpz_class(15), mpz_class(15)}))); // sigma(g) = g^2
    Zq y = testutil::random_zq(rng, c4);
    CHECK(y.frobenius(1).frobenius(-1).rep_equal(y));
    CHECK(y.frobenius(-1).frobenius(1).rep_equal(y));
}

TEST_CASE("frobenius is a ring automorphism with sigma^s = 1") {
    for (auto [p, s] : std::vector<std::pair<uint64_t, int>>{{2, 2}, {3, 3}, {5, 2}}) {
        auto ctx = PrecisionContext::create(p, s, 8);
        std::mt19937_64 rng(17 * p + s);
        for (int t = 0; t < 15; ++t) {
            Zq a = testutil::random_zq(rng, ctx), b = testutil::random_zq(rng, ctx);
            CHECK((a * b).frobenius().rep_equal(a.frobenius() * b.frobenius()));
            CHECK((a + b).frobenius().rep_equal(a.frobenius() + b.frobenius()));
            Zq it = a;
            for (int k = 0; k < s; ++k) it = it.frobenius();
            CHECK(it.rep_equal(a));
            CHECK(a.frobenius(s).rep_equal(a));
        }
    }
}

TEST_CASE("ring axioms on random triples") {
    auto ctx = PrecisionContext::create(3, 2, 10);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 25; ++t) {
        Zq a = testutil::random_zq(rng, ctx), b = testutil::random_zq(rng, ctx),
           c = testutil::random_zq(rng, ctx);
        CHECK(((a * b) * c).rep_equal(a * (b * c)));
        CHECK((a * (b + c)).rep_equal(a * b + a * c));
        CHECK((a + b).rep_equal(b + a));
    }
}

TEST_CASE("teichmuller") {
    auto c5 = PrecisionContext::create(5, 1, 3);
    CHECK(teichmuller(c5, {1}).rep_equal(Zq::one(c5)));
    CHECK(teichmuller(c5, {0}).rep_equal(Zq::zero(c5)));
    CHECK(teichmuller(c5, {2}).rep_equal(Zq::from_integer(c5, 57))); // 57^5 = 57 mod 125
    // multiplicativity, exactly
    auto c9 = PrecisionContext::create(3, 2, 6);
    const auto& F = c9->residue_field();
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        ffp::FqEl x = {rng() % 3, rng() % 3};
        ffp::FqEl y = {rng() % 3, rng() % 3};
        Zq lhs = teichmuller(c9, x) * teichmuller(c9, y);
        Zq rhs = teichmuller(c9, ffp::fq_mul(F, x, y));
        CHECK(lhs.rep_equal(rhs));
    }
}

TEST_CASE("valuation is additive on certified products") {
    auto ctx = PrecisionContext::create(5, 2, 10);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        Zq a = testutil::random_unit(rng, ctx).times_pk(rng() % 3);
        Zq b = testutil::random_unit(rng, ctx).times_pk(rng() % 3);
        auto va = a.val(), vb = b.val(), vab = (a * b).val();
        REQUIRE(va.certified);
        REQUIRE(vb.certified);
        CHECK(vab.certified);
        CHECK(vab.v == va.v + vb.v);
    }
}

TEST_CASE("precision bookkeeping") {
    auto ctx = PrecisionContext::create(2, 1, 8);
    Zq x = Zq::from_integer(ctx, 12); // val 2
    Zq y = x.div_pk_exact(2);
    CHECK(y.prec() == 6);
    CHECK(y.rep_equal(Zq::from_integer(ctx, 3)));
    CHECK(x.times_pk(1).prec() == 8);
    Zq a = Zq::from_integer(ctx, 3).with_prec(5);
    Zq b = Zq::from_integer(ctx, 7).with_prec(7);
    CHECK((a * b).prec() == 5);
    CHECK((a + b).prec() == 5);
    CHECK_THROWS_AS(Zq::from_integer(ctx, 3).div_pk_exact(1), PreconditionError);
}

TEST_CASE("solve_sigma_m_pn examples and properties") {
    // s=1, p=2, m=n=1, N=4: x - 2x = 1 -> x = -1 = 15
    auto c2 = PrecisionContext::create(2, 1, 4);
    CHECK(solve_sigma_m_pn(c2, 1, 1, Zq::one(c2)).rep_equal(Zq::from_integer(c2, 15)));
    CHECK(solve_sigma_m_pn(c2, 1, 1, Zq::zero(c2)).rep_equal(Zq::zero(c2)));
    // random substitution checks with valuation bound
    for (auto [p, s] : std::vector<std::pair<uint64_t, int>>{{2, 2}, {3, 1}, {5, 2}}) {
        auto ctx = PrecisionContext::create(p, s, 9);
        std::mt19937_64 rng(11 * p + s);
        for (int t = 0; t < 20; ++t) {
            long m = 1 + static_cast<long>(rng() % 3);
            long n = 1 + static_cast<long>(rng() % 3);
            Zq b = testutil::random_zq(rng, ctx);
            Zq x = solve_sigma_m_pn(ctx, m, n, b);
            Zq resid = x.frobenius(m) - x.times_pk(n) - b;
            CHECK(resid.is_zero_mod(x.prec()));
            CHECK(oracle::raw_val(x) >= oracle::raw_val(b));
        }
    }
}
