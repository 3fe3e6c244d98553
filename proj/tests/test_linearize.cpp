#include <doctest.h>

#include "liejet/linearize.hpp"
#include "liejet/sl2.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::Q;

namespace {

// base action moved by (x + y^2, y, z)
Representation<Q> bent_rep(int order) {
    Representation<Q> rep = sl2_base_representation<Q>(order);
    Jet<Q> mx = Jet<Q>::variable(3, order, 0);
    mx.add_term({0, 2, 0}, Q(1));
    PolyMap<Q> m(std::vector<Jet<Q>>{mx, Jet<Q>::variable(3, order, 1),
                                     Jet<Q>::variable(3, order, 2)});
    return pushforward_rep(rep, m);
}

} // namespace

TEST_SUITE_BEGIN("linearize");

TEST_CASE("linear actions have no defect") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    for (int k = 2; k <= 4; ++k) {
        auto dk = cocycle_defect(rep, k);
        CHECK(dk.degree == k);
        for (const auto& p : dk.parts) CHECK(p.is_zero());
    }
}

TEST_CASE("a quadratic bend shows up as a degree-2 defect") {
    Representation<Q> moved = bent_rep(4);
    auto d2 = cocycle_defect(moved, 2);
    bool any = false;
    for (const auto& p : d2.parts) any = any || !p.is_zero();
    CHECK(any);

    // leading defects of a genuine action satisfy the cocycle identity
    auto A = moved.linear_parts();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(cocycle_residual(moved.algebra, A, d2.parts, i, j).is_zero());

    // fields are not linear below degree 3, so that request is rejected
    CHECK_THROWS_AS((void)cocycle_defect(moved, 3), NotPreparedError);
}

TEST_CASE("hand-built defects that are not cocycles are detected") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    auto A = rep.linear_parts();
    // use a single quadratic field for every generator; this cannot satisfy
    // the mixed identity because the structure constants are nonzero
    Jet<Q> q(3, 4);
    q.add_term({2, 0, 0}, Q(1));
    VectorFieldJet<Q> r(std::vector<Jet<Q>>{q, Jet<Q>(3, 4), Jet<Q>(3, 4)});
    std::vector<VectorFieldJet<Q>> Rs{r, r, r};
    bool allzero = true;
    for (int i = 0; i < 3 && allzero; ++i)
        for (int j = 0; j < 3 && allzero; ++j)
            allzero = cocycle_residual(rep.algebra, A, Rs, i, j).is_zero();
    CHECK(!allzero);
}

TEST_CASE("the homological equation reproduces the defect it solves") {
    Representation<Q> moved = bent_rep(4);
    auto A = moved.linear_parts();
    auto d2 = cocycle_defect(moved, 2);
    VectorFieldJet<Q> h = solve_homological(A, d2.parts, 2);
    for (int a = 0; a < 3; ++a) {
        VectorFieldJet<Q> va = VectorFieldJet<Q>::from_linear(A[a], h.order());
        CHECK(bracket_vf(va, h) == d2.parts[a]);
    }
}

TEST_CASE("an abelian linear part gives no solution") {
    // A = 0 makes the bracket action vanish identically
    std::vector<Matrix<Q>> A{Matrix<Q>(2, 2)};
    Jet<Q> q(2, 3);
    q.add_term({2, 0}, Q(1));
    VectorFieldJet<Q> r(std::vector<Jet<Q>>{q, Jet<Q>(2, 3)});
    CHECK_THROWS_AS((void)solve_homological(A, {r}, 2), NoSolutionError);
}

TEST_CASE("linearizing an already linear action is the identity") {
    // a perturbation by a flat function has the same jets as the linear
    // action, so this is also the statement that flat bends linearize
    // trivially at every order
    for (int order = 2; order <= 5; ++order) {
        Representation<Q> rep = sl2_base_representation<Q>(order);
        auto res = linearize_rep(rep);
        CHECK(res.map == PolyMap<Q>::identity(3, order));
        CHECK(res.semisimple);
        for (int a = 0; a < 3; ++a) CHECK(res.linearized.fields[a] == rep.fields[a]);
    }
}

TEST_CASE("the quadratic bend is straightened") {
    Representation<Q> moved = bent_rep(4);
    auto res = linearize_rep(moved);
    auto A = moved.linear_parts();
    for (int a = 0; a < 3; ++a)
        CHECK(res.linearized.fields[a] == VectorFieldJet<Q>::from_linear(A[a], 4));
    // and the result really is the pushforward by the returned map
    Representation<Q> check = pushforward_rep(moved, res.map);
    for (int a = 0; a < 3; ++a) CHECK(check.fields[a] == res.linearized.fields[a]);
}

TEST_CASE("random conjugations are linearized exactly") {
    std::mt19937 rng(193);
    Representation<Q> rep = sl2_base_representation<Q>(5);
    auto A = rep.linear_parts();
    for (int r = 0; r < 5; ++r) {
        PolyMap<Q> m = testutil::random_identity_map(rng, 3, 5);
        Representation<Q> moved = pushforward_rep(rep, m);
        auto res = linearize_rep(moved);
        for (int a = 0; a < 3; ++a)
            CHECK(res.linearized.fields[a] == VectorFieldJet<Q>::from_linear(A[a], 5));
        CHECK(res.map.has_identity_linear_part());
    }
}

TEST_CASE("fields with a constant term are rejected") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    rep.fields[0] += VectorFieldJet<Q>(std::vector<Jet<Q>>{
        Jet<Q>::constant(3, 3, Q(1)), Jet<Q>(3, 3), Jet<Q>(3, 3)});
    CHECK_THROWS_AS((void)linearize_rep(rep), InvalidMapError);
}

TEST_CASE("broken inputs fail the entry check") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    rep.fields[2].scale(Q(-1)); // not a representation any more
    CHECK_THROWS_AS((void)linearize_rep(rep), InvalidMapError);

    // skipping the guard on a valid input changes nothing
    LinearizeOptions opt;
    opt.check_input = false;
    Representation<Q> moved = bent_rep(4);
    CHECK(linearize_rep(moved, opt).map == linearize_rep(moved).map);
}

TEST_CASE("invariant projection on quadratic functions") {
    int N = 3;
    Representation<Q> rep = sl2_base_representation<Q>(N);
    auto A = rep.linear_parts();
    std::vector<Matrix<Q>> acts;
    for (const auto& a : A) acts.push_back(function_action_matrix(a, 2, N));

    Jet<Q> quadric = sl2_invariant_quadric<Q>(N);
    auto qc = poly_coords(quadric, 2);

    // the quadric is invariant: fixed by the projection, killed by each act
    auto pq = invariant_projection(acts, qc);
    CHECK(pq == qc);
    for (const auto& a : acts) {
        auto img = a.apply(qc);
        for (const auto& c : img) CHECK(c == Q(0));
    }

    // projections of arbitrary quadratics land in the span of the quadric
    std::mt19937 rng(197);
    for (int rep2 = 0; rep2 < 5; ++rep2) {
        Jet<Q> w = testutil::random_jet(rng, 3, N, 4, 2).part_of_degree(2);
        auto wc = poly_coords(w, 2);
        auto p = invariant_projection(acts, wc);
        Jet<Q> pf = poly_from_coords<Q>(3, N, 2, p);
        // proportionality: p * q_xx == q * p_xx componentwise
        Jet<Q> lhs = Q(quadric.coeff({2, 0, 0})) * pf;
        Jet<Q> rhs = Q(pf.coeff({2, 0, 0})) * quadric;
        CHECK(lhs == rhs);
        // idempotence and invariance of the image
        CHECK(invariant_projection(acts, p) == p);
        for (const auto& a : acts) {
            auto img = a.apply(p);
            for (const auto& c : img) CHECK(c == Q(0));
        }
    }

    // x^2 projects onto a nonzero multiple of the quadric
    Jet<Q> x2(3, N);
    x2.add_term({2, 0, 0}, Q(1));
    auto px = invariant_projection(acts, poly_coords(x2, 2));
    bool nonzero = false;
    for (const auto& c : px) nonzero = nonzero || c != Q(0);
    CHECK(nonzero);
}

TEST_SUITE_END();
