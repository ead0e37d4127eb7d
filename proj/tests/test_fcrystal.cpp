#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slopelab/fcrystal.hpp"
#include "slopelab/manin.hpp"
#include "testutil.hpp"

using namespace slopelab;

namespace {

Polygon oracle_newton_polygon(const FCrystal& E) {
    // independent route: cofactor-expansion char poly of F^s, naive hull
    ZqMatrix B = E.A;
    for (int k = 1; k < E.ctx->s; ++k) B = B * E.A.sigma(k);
    auto cp = oracle::naive_charpoly(B);
    std::vector<std::pair<long, long>> pts;
    for (size_t i = 0; i < cp.size(); ++i) pts.push_back({static_cast<long>(i), oracle::raw_val(cp[i])});
    auto hull = oracle::naive_lower_hull(pts);
    std::vector<SlopePart> parts;
    for (size_t i = 0; i + 1 < hull.size(); ++i)
        parts.push_back({rat(hull[i].second - hull[i + 1].second,
                             (hull[i + 1].first - hull[i].first) * E.ctx->s),
                         hull[i + 1].first - hull[i].first});
    return normalize_polygon(parts);
}

} // namespace

TEST_CASE("semilinear_power") {
    auto ctx = PrecisionContext::create(5, 1, 8);
    FCrystal E = standard_module(ctx, 1, 2);
    CHECK(semilinear_power(E, 1).rep_equal(E.A));
    ZqMatrix M2 = semilinear_power(E, 2);
    CHECK(M2.rep_equal(ZqMatrix::identity(ctx, 2).times_pk(1)));
    // s=2: diag(g, 1) squares to diag(Norm(g), 1); for x^2+x+1 over F_4, g^3 = 1
    auto c4 = PrecisionContext::create(2, 2, 4);
    ZqMatrix D(c4, 2, 2);
    D.at(0, 0) = Zq::gen(c4);
    D.at(1, 1) = Zq::one(c4);
    FCrystal Eg = make_fcrystal(c4, D);
    ZqMatrix S2 = semilinear_power(Eg, 2);
    CHECK(S2.at(0, 0).rep_equal(Zq::gen(c4) * Zq::gen(c4).frobenius()));
    CHECK(S2.at(0, 0).rep_equal(Zq::one(c4))); // Norm(g) = g^3 = 1
}

TEST_CASE("newton polygon examples") {
    auto ctx = PrecisionContext::create(5, 1, 8);
    ZqMatrix D(ctx, 2, 2);
    D.at(0, 0) = Zq::one(ctx);
    D.at(1, 1) = Zq::from_integer(ctx, 5);
    CHECK(newton_polygon(make_fcrystal(ctx, D)) == Polygon{{rat(0), 1}, {rat(1), 1}});
    CHECK(newton_polygon(standard_module(ctx, 1, 2)) == Polygon{{rat(1, 2), 2}});
    for (auto [m, n] : std::vector<std::pair<long, long>>{{1, 1}, {0, 1}, {2, 3}}) {
        FCrystal E = standard_module(ctx, m, n);
        CHECK(newton_polygon(E) == Polygon{{rat(m, n), n}});
        CHECK(newton_polygon(E) == oracle_newton_polygon(E));
    }
    // rank 0
    CHECK(newton_polygon(make_fcrystal(ctx, ZqMatrix(ctx, 0, 0))).empty());
}

TEST_CASE("newton polygon precision exhaustion") {
    auto ctx = PrecisionContext::create(2, 1, 3);
    // det = p^4 exceeds certified precision
    ZqMatrix A(ctx, 2, 2);
    A.at(0, 0) = Zq::from_integer(ctx, 4);
    A.at(1, 1) = Zq::from_integer(ctx, 4);
    CHECK_THROWS_AS(newton_polygon(make_fcrystal(ctx, A)), PrecisionExhausted);
}

TEST_CASE("hodge polygon examples") {
    auto ctx = PrecisionContext::create(5, 1, 8);
    ZqMatrix D(ctx, 2, 2);
    D.at(0, 0) = Zq::one(ctx);
    D.at(1, 1) = Zq::from_integer(ctx, 5);
    CHECK(hodge_polygon(make_fcrystal(ctx, D)) == Polygon{{rat(0), 1}, {rat(1), 1}});
    CHECK(hodge_polygon(standard_module(ctx, 1, 2)) == Polygon{{rat(0), 1}, {rat(1), 1}});
    FCrystal P3 = make_fcrystal(ctx, ZqMatrix::identity(ctx, 3).times_pk(1));
    CHECK(hodge_polygon(P3) == Polygon{{rat(1), 3}});
    // oracle cross-check on random small matrices
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        ZqMatrix M(ctx, 3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                M.at(i, j) = testutil::random_zq(rng, ctx).times_pk(rng() % 2);
        SmithForm S = smith(M);
        if (!std::all_of(S.divisors.begin(), S.divisors.end(),
                         [](const SmithDivisor& d) { return d.finite; }))
            continue;
        auto ov = oracle::minor_divisor_valuations(M);
        for (size_t i = 0; i < ov.size(); ++i) CHECK(S.divisors[i].v == ov[i]);
    }
}

TEST_CASE("constructions") {
    auto ctx = PrecisionContext::create(3, 1, 8);
    FCrystal d01 = standard_module(ctx, 0, 1);
    FCrystal d11 = standard_module(ctx, 1, 1);
    CHECK(tate_twist(d01, 1).A.rep_equal(d11.A));
    CHECK(newton_polygon(direct_sum(d11, d01)) == Polygon{{rat(0), 1}, {rat(1), 1}});
    FCrystal t = tensor(d11, d11);
    CHECK(t.rank == 1);
    CHECK(t.A.at(0, 0).rep_equal(Zq::from_integer(ctx, 9)));
    CHECK(newton_polygon(t) == Polygon{{rat(2), 1}});
    // dual twist: D_{1,2} has p A^{-1} integral
    FCrystal d12 = standard_module(ctx, 1, 2);
    FCrystal dual = dual_twist(d12, 1);
    CHECK(newton_polygon(dual) == Polygon{{rat(1, 2), 2}});
    CHECK_THROWS_AS(dual_twist(d12, 0), PreconditionError);
    // negative tate twist needs divisibility
    CHECK_THROWS_AS(tate_twist(d12, -1), PreconditionError);
    CHECK(tate_twist(tate_twist(d12, 1), -1).A.rep_equal(d12.A));
}

TEST_CASE("is_morphism") {
    auto ctx = PrecisionContext::create(3, 1, 8);
    FCrystal d01 = standard_module(ctx, 0, 1);
    FCrystal d11 = standard_module(ctx, 1, 1);
    CHECK(is_morphism(identity_hom(d11)));
    ZqMatrix one = ZqMatrix::identity(ctx, 1);
    CHECK_FALSE(is_morphism(make_hom(d01, d11, one)));
    CHECK(is_morphism(make_hom(d11, d11, one.times_pk(1))));
    // composition adds slack
    auto h1 = make_hom(d11, d11, one.times_pk(1), 0, 1);
    auto h2 = make_hom(d11, d11, one.times_pk(2), 0, 2);
    auto h = compose(h2, h1);
    CHECK(h.slack == 3);
    CHECK(is_morphism(h));
}

TEST_CASE("newton polygon is invariant under semilinear basis change") {
    for (auto [p, s] : std::vector<std::pair<uint64_t, int>>{{2, 1}, {3, 2}}) {
        auto ctx = PrecisionContext::create(p, s, 12);
        std::mt19937_64 rng(100 * p + s);
        std::vector<std::pair<long, long>> pool = {{0, 1}, {1, 1}, {1, 2}, {2, 1}, {1, 3}};
        for (int t = 0; t < 10; ++t) {
            FCrystal E = testutil::random_standard_sum(rng, ctx, pool, 5);
            if (E.rank == 0) continue;
            Polygon P = newton_polygon(E);
            FCrystal E2 = testutil::conjugate(E, testutil::random_unit_matrix(rng, ctx, E.rank));
            CHECK(newton_polygon(E2) == P);
        }
    }
}

TEST_CASE("polygon calculus: sums, tensors, twists") {
    auto ctx = PrecisionContext::create(2, 1, 14);
    FCrystal a = standard_module(ctx, 1, 2);
    FCrystal b = standard_module(ctx, 2, 1);
    CHECK(newton_polygon(direct_sum(a, b)) == merge_polygons(newton_polygon(a), newton_polygon(b)));
    // isoclinic tensor adds slopes: (1/2 + 2) on rank 2*1
    CHECK(newton_polygon(tensor(a, b)) == Polygon{{rat(5, 2), 2}});
    CHECK(newton_polygon(tate_twist(a, 3)) == shift_polygon(newton_polygon(a), 3));
}

TEST_CASE("newton lies on or above hodge with equal endpoints") {
    auto ctx = PrecisionContext::create(3, 1, 12);
    std::mt19937_64 rng(31);
    int done = 0;
    for (int t = 0; t < 40 && done < 15; ++t) {
        ZqMatrix M(ctx, 3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                M.at(i, j) = testutil::random_zq(rng, ctx).times_pk(rng() % 2);
        FCrystal E = make_fcrystal(ctx, M);
        Polygon np, hp;
        try {
            np = newton_polygon(E);
            hp = hodge_polygon(E);
        } catch (const PrecisionExhausted&) {
            continue;
        }
        CHECK(lies_on_or_above(np, hp));
        ++done;
    }
    CHECK(done > 0);
}

TEST_CASE("base_extend") {
    auto ctx = PrecisionContext::create(5, 1, 8);
    FCrystal d12 = standard_module(ctx, 1, 2);
    CHECK(base_extend(d12, 1).rank == 2);
    FCrystal ext = base_extend(d12, 2);
    CHECK(ext.ctx->s == 2);
    CHECK(newton_polygon(ext) == Polygon{{rat(1, 2), 2}});
    // F_4 -> F_16: polygon of a genuinely extension-valued crystal survives
    auto c4 = PrecisionContext::create(2, 2, 8);
    ZqMatrix D(c4, 2, 2);
    D.at(0, 0) = Zq::gen(c4);
    D.at(1, 1) = Zq::one(c4).times_pk(1);
    FCrystal Eg = make_fcrystal(c4, D);
    Polygon P = newton_polygon(Eg);
    FCrystal Eg16 = base_extend(Eg, 2);
    CHECK(Eg16.ctx->s == 4);
    CHECK(newton_polygon(Eg16) == P);
    // the embedding respects multiplication on a random sample
    ContextEmbedding em = make_embedding(c4, Eg16.ctx);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        Zq x = testutil::random_zq(rng, c4), y = testutil::random_zq(rng, c4);
        CHECK(em.apply(x * y).rep_equal(em.apply(x) * em.apply(y)));
        CHECK(em.apply(x + y).rep_equal(em.apply(x) + em.apply(y)));
    }
}

TEST_CASE("rank 0 crystals are legal") {
    auto ctx = PrecisionContext::create(2, 1, 6);
    FCrystal z = make_fcrystal(ctx, ZqMatrix(ctx, 0, 0));
    FCrystal d11 = standard_module(ctx, 1, 1);
    CHECK(direct_sum(z, d11).rank == 1);
    CHECK(newton_polygon(direct_sum(z, d11)) == newton_polygon(d11));
}
