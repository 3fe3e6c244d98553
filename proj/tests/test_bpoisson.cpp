#include <doctest.h>

#include "liejet/bform.hpp"
#include "liejet/poisson.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::Q;

namespace {

// z d/dz ^ d/dt + d/dx ^ d/dy on (z, t, x, y)
BivectorJet<Q> singular_pair_bivector(int order) {
    BivectorJet<Q> p(4, order, 2);
    p.set_coeff({0, 1}, Jet<Q>::variable(4, order, 0));
    p.set_coeff({2, 3}, Jet<Q>::constant(4, order, Q(1)));
    return p;
}

// split fixture on (x, y, z, t): d/dx ^ d/dy + z d/dz ^ d/dt
BivectorJet<Q> split_fixture(int order) {
    BivectorJet<Q> p(4, order, 2);
    p.set_coeff({0, 1}, Jet<Q>::constant(4, order, Q(1)));
    p.set_coeff({2, 3}, Jet<Q>::variable(4, order, 2));
    return p;
}

// random map fixing {z = 0} with identity linear part, on n vars with z last
PolyMap<Q> random_z_preserving_map(std::mt19937& rng, int nvars, int order, int zvar) {
    std::vector<Jet<Q>> comps;
    for (int i = 0; i < nvars; ++i) {
        if (i == zvar) {
            Jet<Q> unit = Jet<Q>::constant(nvars, order, Q(1));
            unit += testutil::random_jet(rng, nvars, order, 2, 1);
            comps.push_back(Jet<Q>::variable(nvars, order, i) * unit);
        } else {
            Jet<Q> c = Jet<Q>::variable(nvars, order, i);
            c += testutil::random_jet(rng, nvars, order, 2, 2);
            comps.push_back(std::move(c));
        }
    }
    return PolyMap<Q>(std::move(comps));
}

} // namespace

TEST_SUITE_BEGIN("bpoisson");

TEST_CASE("the standard singular form is closed and nondegenerate") {
    BForm<Q> w = standard_b_form<Q>(4, 5, 0);
    CHECK(w.log_part().coeff({1}).constant_term() == Q(1));
    CHECK(w.smooth().coeff({2, 3}).constant_term() == Q(1));
    CHECK(b_d(w).is_zero());
    CHECK(b_nondegenerate(w));
}

TEST_CASE("plain forms with no boundary terms round-trip through the split frame") {
    std::mt19937 rng(251);
    FormJet<Q> w = testutil::random_form(rng, 4, 4, 2, 4);
    BForm<Q> b = b_from_form(w, 0);
    CHECK(bform_to_form(b) == w);
}

TEST_CASE("duality golden between the split bivector and the singular form") {
    int N = 4;
    BivectorJet<Q> p = singular_pair_bivector(N);
    BForm<Q> w = bform_of_bivector(p, 0);
    CHECK(w == standard_b_form<Q>(4, N, 0));

    BivectorJet<Q> back = bivector_of_bform(standard_b_form<Q>(4, N, 0));
    CHECK(back == p);
}

TEST_CASE("duality round-trips on a curved singular structure") {
    std::mt19937 rng(257);
    int N = 4;
    BForm<Q> wstd = standard_b_form<Q>(4, N, 0);
    PolyMap<Q> m = random_z_preserving_map(rng, 4, N + 1, 0);
    BForm<Q> w = b_pullback(wstd, m).truncated(N);
    BivectorJet<Q> p = bivector_of_bform(w);
    CHECK(bform_of_bivector(p, 0) == w);
}

TEST_CASE("schouten square goldens") {
    // constant structures are always Poisson
    BivectorJet<Q> p0(4, 4, 2);
    p0.set_coeff({0, 1}, Jet<Q>::constant(4, 4, Q(1)));
    CHECK(schouten_square(p0).is_zero());
    CHECK(is_poisson(p0));
    CHECK(check_poisson(p0) == Q(0));

    // singular split pair
    CHECK(is_poisson(singular_pair_bivector(4)));
    CHECK(is_poisson(split_fixture(4)));

    // a linear structure of Lie-Poisson type: x d/dy ^ d/dz + y d/dz ^ d/dx
    BivectorJet<Q> lp(3, 3, 2);
    lp.set_coeff({1, 2}, Jet<Q>::variable(3, 3, 0));
    lp.set_coeff({0, 2}, -Jet<Q>::variable(3, 3, 1));
    CHECK(is_poisson(lp));

    // and a linear non-example
    BivectorJet<Q> bad(3, 3, 2);
    bad.set_coeff({0, 1}, Jet<Q>::variable(3, 3, 1));
    bad.set_coeff({1, 2}, Jet<Q>::variable(3, 3, 0));
    CHECK(!is_poisson(bad));
    CHECK(check_poisson(bad) != Q(0));
}

TEST_CASE("the schouten square vanishes on pushforwards of Poisson jets") {
    std::mt19937 rng(263);
    BivectorJet<Q> p = split_fixture(4);
    for (int r = 0; r < 4; ++r) {
        PolyMap<Q> m = testutil::random_invertible_map(rng, 4, 4, 2);
        BivectorJet<Q> moved = bivector_pushforward(p, m);
        // pushforward differentiates the map, so the top degree is partial
        CHECK(schouten_square(moved).truncated(2).is_zero());
    }
}

TEST_CASE("bivector Lie derivative detects invariance") {
    // rotation leaves the area bivector invariant
    BivectorJet<Q> area(2, 3, 2);
    area.set_coeff({0, 1}, Jet<Q>::constant(2, 3, Q(1)));
    Matrix<Q> rot(2, 2);
    rot.at(0, 1) = Q(-1);
    rot.at(1, 0) = Q(1);
    CHECK(bivector_lie_derivative(VectorFieldJet<Q>::from_linear(rot, 3), area).is_zero());
    CHECK(is_invariant_bivector(area, std::vector<Matrix<Q>>{rot}));

    // scaling does not
    Matrix<Q> scl = Matrix<Q>::identity(2);
    CHECK(!bivector_lie_derivative(VectorFieldJet<Q>::from_linear(scl, 3), area).is_zero());
}

TEST_CASE("bivector pushforward is functorial") {
    std::mt19937 rng(269);
    BivectorJet<Q> p = split_fixture(5);
    PolyMap<Q> m1 = testutil::random_identity_map(rng, 4, 5, 2);
    PolyMap<Q> m2 = testutil::random_identity_map(rng, 4, 5, 2);
    BivectorJet<Q> a = bivector_pushforward(bivector_pushforward(p, m1), m2);
    BivectorJet<Q> b = bivector_pushforward(p, polymap_compose(m1, m2));
    CHECK(a.truncated(3) == b.truncated(3));
    CHECK(bivector_pushforward(p, PolyMap<Q>::identity(4, 5)) == p);
}

TEST_CASE("an already split structure needs no correction") {
    BivectorJet<Q> p = split_fixture(4);
    auto res = weinstein_split(p);
    CHECK(res.pairs == 1);
    CHECK(res.map == PolyMap<Q>::identity(4, 5));
    CHECK(res.split == p);
    BivectorJet<Q> expect_tail(4, 4, 2);
    expect_tail.set_coeff({2, 3}, Jet<Q>::variable(4, 4, 2));
    CHECK(res.transverse == expect_tail);
}

TEST_CASE("rank zero at the origin leaves everything transverse") {
    BivectorJet<Q> p(3, 3, 2);
    p.set_coeff({1, 2}, Jet<Q>::variable(3, 3, 0));
    p.set_coeff({0, 2}, -Jet<Q>::variable(3, 3, 1)); // Lie-Poisson example again
    auto res = weinstein_split(p);
    CHECK(res.pairs == 0);
    CHECK(res.map == PolyMap<Q>::identity(3, 4));
    CHECK(res.transverse == p);
    CHECK(res.split == p);
}

TEST_CASE("random pushforwards are split back") {
    std::mt19937 rng(271);
    for (int r = 0; r < 4; ++r) {
        int order = 3 + static_cast<int>(rng() % 2);
        BivectorJet<Q> p0 = split_fixture(order);
        PolyMap<Q> m = (r % 2 == 0) ? testutil::random_identity_map(rng, 4, order, 2)
                                    : testutil::random_invertible_map(rng, 4, order, 2);
        BivectorJet<Q> p = bivector_pushforward(p0, m);
        REQUIRE(is_poisson(p));
        auto res = weinstein_split(p);
        CHECK(res.pairs == 1);
        CHECK(bivector_pushforward(p, res.map) == res.split);
        // shape of the result: constant leading block, trailing-only tail
        for (const auto& [idx, f] : res.split.terms()) {
            if (idx[0] == 0 && idx[1] == 1) {
                CHECK(f == Jet<Q>::constant(4, res.split.order(), Q(1)));
            } else {
                CHECK(idx[0] >= 2);
                CHECK(idx[1] >= 2);
                CHECK(f.constant_term() == Q(0));
                CHECK(f.derivative(0).is_zero());
                CHECK(f.derivative(1).is_zero());
            }
        }
    }
}

TEST_CASE("five-variable splits with a two-dimensional leading block") {
    std::mt19937 rng(277);
    // d/dx1 ^ d/dx2 + x5 d/dx3 ^ d/dx4 on 5 vars, trailing var x5 inert
    BivectorJet<Q> p0(5, 3, 2);
    p0.set_coeff({0, 1}, Jet<Q>::constant(5, 3, Q(1)));
    p0.set_coeff({2, 3}, Jet<Q>::variable(5, 3, 4));
    REQUIRE(is_poisson(p0));
    PolyMap<Q> m = testutil::random_identity_map(rng, 5, 3, 2);
    BivectorJet<Q> p = bivector_pushforward(p0, m);
    auto res = weinstein_split(p);
    CHECK(res.pairs == 1);
    CHECK(bivector_pushforward(p, res.map) == res.split);
}

TEST_CASE("non-Poisson inputs are rejected") {
    BivectorJet<Q> bad(3, 3, 2);
    bad.set_coeff({0, 1}, Jet<Q>::variable(3, 3, 1));
    bad.set_coeff({1, 2}, Jet<Q>::variable(3, 3, 0));
    CHECK_THROWS_AS((void)weinstein_split(bad), NotPoissonError);
}

TEST_CASE("defects crossing the block split are reported") {
    // hand the sweep a non-Poisson jet whose tail touches the leading block;
    // the public entry points reject such inputs before this can happen
    BivectorJet<Q> cur(4, 3, 2);
    cur.set_coeff({0, 1}, Jet<Q>::constant(4, 3, Q(1)));
    cur.set_coeff({2, 3}, Jet<Q>::variable(4, 3, 0));
    PolyMap<Q> total = PolyMap<Q>::identity(4, 4);
    CHECK_THROWS_AS(detail::weinstein_sweep(cur, total, 1, static_cast<std::vector<Matrix<Q>>*>(nullptr)),
                    SplitFailureError);
}

TEST_CASE("equivariant splitting keeps the symmetry") {
    std::mt19937 rng(281);
    int N = 4;
    // rotation acting on the transverse plane (x3, x4)
    Matrix<Q> A(4, 4);
    A.at(2, 3) = Q(-1);
    A.at(3, 2) = Q(1);
    std::vector<Matrix<Q>> As{A};

    BivectorJet<Q> p0(4, N, 2);
    p0.set_coeff({0, 1}, Jet<Q>::constant(4, N, Q(1)));
    Jet<Q> f(4, N); // invariant transverse coefficient x3^2 + x4^2
    f.add_term({0, 0, 2, 0}, Q(1));
    f.add_term({0, 0, 0, 2}, Q(1));
    p0.set_coeff({2, 3}, f);
    REQUIRE(is_poisson(p0));
    REQUIRE(is_invariant_bivector(p0, As));

    Jet<Q> inv(4, N);
    inv.add_term({0, 0, 2, 0}, Q(1));
    inv.add_term({0, 0, 0, 2}, Q(1));
    PolyMap<Q> m = testutil::invariant_scaling({inv}, {Q(1, 2)}, 4, N);
    BivectorJet<Q> p = bivector_pushforward(p0, m);
    REQUIRE(is_invariant_bivector(p, As));

    auto res = equivariant_weinstein_split(p, As);
    CHECK(res.pairs == 1);
    CHECK(bivector_pushforward(p, res.map) == res.split);
    REQUIRE(res.action.size() == 1);
    for (const auto& d : intertwine_defect(res.map, As[0], res.action[0])) CHECK(d.is_zero());
    // the transformed action stays block-diagonal for the split
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 4; ++j) {
            CHECK(res.action[0].at(i, j) == Q(0));
            CHECK(res.action[0].at(j, i) == Q(0));
        }
}

TEST_CASE("equivariant splitting rejects non-invariant input") {
    Matrix<Q> A(4, 4);
    A.at(2, 3) = Q(-1);
    A.at(3, 2) = Q(1);
    BivectorJet<Q> p(4, 3, 2);
    p.set_coeff({0, 1}, Jet<Q>::constant(4, 3, Q(1)));
    p.set_coeff({2, 3}, Jet<Q>::variable(4, 3, 2)); // x3 is not invariant
    REQUIRE(is_poisson(p));
    CHECK_THROWS_AS((void)equivariant_weinstein_split(p, {A}), NotEquivariantError);
}

TEST_CASE("normalizing the standard singular form is trivial") {
    int N = 4;
    BForm<Q> w = standard_b_form<Q>(4, N, 0);
    auto res = b_darboux(w);
    CHECK(res.map == PolyMap<Q>::identity(4, N + 1));
    CHECK(res.normalized == w);
}

TEST_CASE("the unit-deformed singular form is normalized with the radial gauge") {
    int N = 5;
    BForm<Q> w(4, N, 2, 0);
    Jet<Q> c = Jet<Q>::constant(4, N, Q(1));
    c.add_term({1, 0, 0, 0}, Q(1)); // (1 + z) dt in the log slot
    w.log_part().set_coeff({1}, c);
    w.smooth().set_coeff({2, 3}, Jet<Q>::constant(4, N, Q(1)));
    REQUIRE(b_d(w).is_zero());

    auto res = b_darboux(w);
    BForm<Q> wstd = standard_b_form<Q>(4, N, 0);
    CHECK(b_pullback(w, res.map) == wstd);
    Jet<Q> mz = res.map.component(0);
    CHECK(mz.divisible_by_var(0));
    // the boundary gauge solves u + u^2/2 = z
    Jet<Q> half_sq = mz * mz;
    half_sq.scale(Q(1, 2));
    CHECK(mz + half_sq == Jet<Q>::variable(4, N + 1, 0));
    // and t is rescaled by the same unit as z
    CHECK(res.map.component(1) == Jet<Q>::variable(4, N + 1, 1) * mz.div_var(0));
}

TEST_CASE("random boundary-preserving deformations are normalized") {
    std::mt19937 rng(283);
    for (int r = 0; r < 4; ++r) {
        int N = 4;
        BForm<Q> wstd = standard_b_form<Q>(4, N, 0);
        PolyMap<Q> m = random_z_preserving_map(rng, 4, N + 1, 0);
        BForm<Q> w = b_pullback(wstd, m).truncated(N);
        REQUIRE(b_d(w).is_zero());
        auto res = b_darboux(w);
        CHECK(b_pullback(w, res.map) == wstd);
        CHECK(res.map.component(0).divisible_by_var(0));
    }
}

TEST_CASE("the boundary variable can sit anywhere") {
    std::mt19937 rng(293);
    int N = 4;
    BForm<Q> wstd = standard_b_form<Q>(4, N, 2); // z is the third variable
    PolyMap<Q> m = random_z_preserving_map(rng, 4, N + 1, 2);
    BForm<Q> w = b_pullback(wstd, m).truncated(N);
    auto res = b_darboux(w);
    CHECK(b_pullback(w, res.map) == wstd);
    CHECK(res.map.component(2).divisible_by_var(2));
}

TEST_CASE("non-closed singular forms are rejected") {
    int N = 3;
    BForm<Q> w(4, N, 2, 0);
    Jet<Q> c = Jet<Q>::constant(4, N, Q(1));
    c.add_term({0, 0, 1, 0}, Q(1)); // (1 + x) dt depends on a smooth variable
    w.log_part().set_coeff({1}, c);
    w.smooth().set_coeff({2, 3}, Jet<Q>::constant(4, N, Q(1)));
    CHECK_THROWS_AS((void)b_darboux(w), NotClosedError);
}

TEST_CASE("equivariant singular normalization without a shear") {
    int N = 4;
    // rotation in the smooth pair (x, y)
    Matrix<Q> A(4, 4);
    A.at(2, 3) = Q(-1);
    A.at(3, 2) = Q(1);
    std::vector<Matrix<Q>> As{A};

    BForm<Q> wstd = standard_b_form<Q>(4, N, 0);
    Jet<Q> inv(4, N + 1); // z t + x^2 + y^2, invariant and z=0 friendly
    inv.add_term({1, 1, 0, 0}, Q(1));
    inv.add_term({0, 0, 2, 0}, Q(1));
    inv.add_term({0, 0, 0, 2}, Q(1));
    PolyMap<Q> m = testutil::invariant_scaling({inv}, {Q(1, 3)}, 4, N + 1);
    REQUIRE(is_equivariant_map(m, As));
    BForm<Q> w = b_pullback(wstd, m).truncated(N);

    auto res = equivariant_b_darboux(w, As);
    CHECK(b_pullback(w, res.map) == wstd);
    CHECK(res.map.component(0).divisible_by_var(0));
    REQUIRE(res.action.size() == 1);
    for (const auto& d : intertwine_defect(res.map, As[0], res.action[0])) CHECK(d.is_zero());
}

TEST_CASE("a boundary shear in the action is absorbed") {
    int N = 4;
    // generator z d/dt: tangent to {z = 0} but with a z-column entry
    Matrix<Q> S(4, 4);
    S.at(1, 0) = Q(1);
    std::vector<Matrix<Q>> As{S};
    BForm<Q> wstd = standard_b_form<Q>(4, N, 0);
    REQUIRE(b_lie_derivative(VectorFieldJet<Q>::from_linear(S, N), wstd).is_zero());

    Jet<Q> inv(4, N + 1); // invariant under the shear: no t dependence
    inv.add_term({2, 0, 0, 0}, Q(1));
    inv.add_term({0, 0, 2, 0}, Q(1));
    PolyMap<Q> m = testutil::invariant_scaling({inv}, {Q(1, 2)}, 4, N + 1);
    REQUIRE(is_equivariant_map(m, As));
    BForm<Q> w = b_pullback(wstd, m).truncated(N);

    auto res = equivariant_b_darboux(w, As);
    CHECK(b_pullback(w, res.map) == wstd);
    CHECK(res.map.component(0).divisible_by_var(0));
    REQUIRE(res.action.size() == 1);
    for (const auto& d : intertwine_defect(res.map, As[0], res.action[0])) CHECK(d.is_zero());
    // after the shear the boundary direction is inert
    for (int i = 0; i < 4; ++i) CHECK(res.action[0].at(i, 0) == Q(0));
}

TEST_CASE("actions crossing the boundary are rejected") {
    Matrix<Q> A(4, 4);
    A.at(0, 2) = Q(1); // moves z along x: not tangent to {z = 0}
    BForm<Q> wstd = standard_b_form<Q>(4, 3, 0);
    CHECK_THROWS_AS((void)equivariant_b_darboux(wstd, {A}), NotEquivariantError);
}

TEST_SUITE_END();
