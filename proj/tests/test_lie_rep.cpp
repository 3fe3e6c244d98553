#include <doctest.h>

#include "liejet/lie.hpp"
#include "liejet/sl2.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::Q;

namespace {

std::vector<Q> sl2_table() {
    // bracket table [X,Y] = -Z, [Z,X] = Y, [Z,Y] = -X in the basis (X, Y, Z)
    std::vector<Q> c(27, Q(0));
    auto set = [&](int i, int j, int k, Q v) {
        c[(i * 3 + j) * 3 + k] = v;
        c[(j * 3 + i) * 3 + k] = -v;
    };
    set(0, 1, 2, Q(-1));
    set(2, 0, 1, Q(1));
    set(2, 1, 0, Q(-1));
    return c;
}

// change of basis e'_i = sum_j P_ji e_j applied to structure constants
std::vector<Q> transform_table(const LieAlgebra<Q>& g, const Matrix<Q>& P) {
    int n = g.dim();
    Matrix<Q> Pinv = inverse_or_throw(P, "basis change must be invertible");
    std::vector<Q> out(static_cast<size_t>(n) * n * n, Q(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Q s(0);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int m = 0; m < n; ++m)
                            s += P.at(a, i) * P.at(b, j) * g.c(a, b, m) * Pinv.at(k, m);
                out[(static_cast<size_t>(i) * n + j) * n + k] = s;
            }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("lie_rep");

TEST_CASE("structure constant validation") {
    CHECK_NOTHROW(LieAlgebra<Q>(3, sl2_table()));
    CHECK_NOTHROW(LieAlgebra<Q>(2, std::vector<Q>(8, Q(0)))); // abelian

    // antisymmetry violation: c_12^1 = c_21^1 = 1
    std::vector<Q> bad(8, Q(0));
    bad[(0 * 2 + 1) * 2 + 0] = Q(1);
    bad[(1 * 2 + 0) * 2 + 0] = Q(1);
    CHECK_THROWS_AS(LieAlgebra<Q>(2, bad), InvalidMapError);

    // Jacobi violation: [e1,e2]=e2, [e1,e3]=e3, [e2,e3]=e1 sums to 2 e1
    std::vector<Q> nj(27, Q(0));
    auto set = [&](int i, int j, int k) {
        nj[(i * 3 + j) * 3 + k] = Q(1);
        nj[(j * 3 + i) * 3 + k] = Q(-1);
    };
    set(0, 1, 1);
    set(0, 2, 2);
    set(1, 2, 0);
    CHECK_THROWS_AS(LieAlgebra<Q>(3, nj), InvalidMapError);

    CHECK_THROWS_AS(LieAlgebra<Q>(3, std::vector<Q>(5, Q(0))), DimensionError);
}

TEST_CASE("Killing form and semisimplicity") {
    LieAlgebra<Q> g = LieAlgebra<Q>::sl2();
    Matrix<Q> B = g.killing();
    CHECK(B.at(2, 2) == Q(-2)); // B(Z,Z) = -2 in this basis
    CHECK(g.is_semisimple());

    LieAlgebra<Q> ab(1, std::vector<Q>(1, Q(0)));
    CHECK(!ab.is_semisimple());

    // direct sum of two copies stays semisimple (block Killing form)
    std::vector<Q> two(216, Q(0));
    auto tab = sl2_table();
    for (int blk = 0; blk < 2; ++blk)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    two[((static_cast<size_t>(i) + 3 * blk) * 6 + (j + 3 * blk)) * 6 + (k + 3 * blk)] =
                        tab[(i * 3 + j) * 3 + k];
    LieAlgebra<Q> gg(6, two);
    CHECK(gg.is_semisimple());

    // 2-dim solvable algebra [e1,e2] = e2 is a valid algebra, not semisimple
    std::vector<Q> solv(8, Q(0));
    solv[(0 * 2 + 1) * 2 + 1] = Q(1);
    solv[(1 * 2 + 0) * 2 + 1] = Q(-1);
    LieAlgebra<Q> s(2, solv);
    CHECK(!s.is_semisimple());
}

TEST_CASE("semisimplicity is invariant under basis change") {
    std::mt19937 rng(157);
    LieAlgebra<Q> g = LieAlgebra<Q>::sl2();
    for (int rep = 0; rep < 3; ++rep) {
        Matrix<Q> P = testutil::random_invertible_matrix(rng, 3);
        LieAlgebra<Q> h(3, transform_table(g, P));
        CHECK(h.is_semisimple());
    }
}

TEST_CASE("vector field bracket goldens") {
    int n = 2, N = 4;
    Jet<Q> zero(n, N);
    Jet<Q> x = Jet<Q>::variable(n, N, 0);
    Jet<Q> y = Jet<Q>::variable(n, N, 1);
    VectorFieldJet<Q> xdy(std::vector<Jet<Q>>{zero, x});
    VectorFieldJet<Q> ydx(std::vector<Jet<Q>>{y, zero});
    VectorFieldJet<Q> b = bracket_vf(xdy, ydx);
    // [x d/dy, y d/dx] = x d/dx - y d/dy
    CHECK(b.component(0) == x);
    CHECK(b.component(1) == -y);

    std::mt19937 rng(163);
    VectorFieldJet<Q> v = testutil::random_field(rng, 3, 4, 4);
    CHECK(bracket_vf(v, v).is_zero());
}

TEST_CASE("bracket is antisymmetric, bilinear and satisfies Jacobi") {
    std::mt19937 rng(167);
    for (int rep = 0; rep < 8; ++rep) {
        VectorFieldJet<Q> a = testutil::random_field(rng, 3, 5, 3);
        VectorFieldJet<Q> b = testutil::random_field(rng, 3, 5, 3);
        VectorFieldJet<Q> c = testutil::random_field(rng, 3, 5, 3);
        CHECK(bracket_vf(a, b) == -bracket_vf(b, a));
        CHECK(bracket_vf(a + b, c) == bracket_vf(a, c) + bracket_vf(b, c));
        // fields vanishing at 0 lose nothing below the top order; the nested
        // brackets are reliable two degrees down
        VectorFieldJet<Q> jac = bracket_vf(a, bracket_vf(b, c)) +
                                bracket_vf(b, bracket_vf(c, a)) +
                                bracket_vf(c, bracket_vf(a, b));
        CHECK(jac.truncated(3).is_zero());
    }
}

TEST_CASE("the rotation-boost action satisfies its bracket table") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    REQUIRE(rep.fields.size() == 3);
    CHECK(check_representation(rep));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(representation_defect(rep, i, j).is_zero());

    // explicit bracket table: [rho(X), rho(Y)] = -rho(Z)
    VectorFieldJet<Q> xy = bracket_vf(rep.fields[0], rep.fields[1]);
    VectorFieldJet<Q> mz = rep.fields[2];
    mz.scale(Q(-1));
    CHECK(xy == mz);
    CHECK(bracket_vf(rep.fields[2], rep.fields[0]) == rep.fields[1]);
    VectorFieldJet<Q> mx = rep.fields[0];
    mx.scale(Q(-1));
    CHECK(bracket_vf(rep.fields[2], rep.fields[1]) == mx);
}

TEST_CASE("a sign flip breaks the bracket table") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    rep.fields[2].scale(Q(-1));
    CHECK(!check_representation(rep));
    CHECK(!representation_defect(rep, 0, 1).is_zero());
}

TEST_CASE("linear part goldens for the base action") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto A = rep.linear_parts();
    Matrix<Q> AX = Matrix<Q>::from_rows(
        {{Q(0), Q(0), Q(0)}, {Q(0), Q(0), Q(1)}, {Q(0), Q(1), Q(0)}});
    Matrix<Q> AY = Matrix<Q>::from_rows(
        {{Q(0), Q(0), Q(1)}, {Q(0), Q(0), Q(0)}, {Q(1), Q(0), Q(0)}});
    Matrix<Q> AZ = Matrix<Q>::from_rows(
        {{Q(0), Q(-1), Q(0)}, {Q(1), Q(0), Q(0)}, {Q(0), Q(0), Q(0)}});
    auto eq = [](const Matrix<Q>& a, const Matrix<Q>& b) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (a.at(i, j) != b.at(i, j)) return false;
        return true;
    };
    CHECK(eq(A[0], AX));
    CHECK(eq(A[1], AY));
    CHECK(eq(A[2], AZ));
}

TEST_CASE("one-field representations of the line always close") {
    std::mt19937 rng(173);
    LieAlgebra<Q> ab(1, std::vector<Q>(1, Q(0)));
    VectorFieldJet<Q> v = testutil::random_field(rng, 2, 4, 3);
    Representation<Q> rep{ab, {v}};
    CHECK(check_representation(rep));
}

TEST_CASE("pushforward by the identity is the identity") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    Representation<Q> moved = pushforward_rep(rep, PolyMap<Q>::identity(3, 4));
    for (int a = 0; a < 3; ++a) CHECK(moved.fields[a] == rep.fields[a]);
}

TEST_CASE("pushforward of a linear action by a linear map conjugates the matrices") {
    std::mt19937 rng(179);
    Representation<Q> rep = sl2_base_representation<Q>(3);
    Matrix<Q> L = testutil::random_invertible_matrix(rng, 3);
    Representation<Q> moved = pushforward_rep(rep, PolyMap<Q>::linear(L, 3));
    Matrix<Q> Linv = inverse_or_throw(L, "invertible by construction");
    auto A = rep.linear_parts();
    for (int a = 0; a < 3; ++a) {
        Matrix<Q> want = L * A[a] * Linv;
        CHECK(moved.fields[a] == VectorFieldJet<Q>::from_linear(want, 3));
    }
}

TEST_CASE("pushforward preserves the bracket table") {
    std::mt19937 rng(181);
    Representation<Q> rep = sl2_base_representation<Q>(5);
    for (int r = 0; r < 5; ++r) {
        PolyMap<Q> m = (r % 2 == 0) ? testutil::random_identity_map(rng, 3, 5)
                                    : testutil::random_invertible_map(rng, 3, 5);
        Representation<Q> moved = pushforward_rep(rep, m);
        CHECK(check_representation(moved));
    }
}

TEST_CASE("pushforward is functorial") {
    std::mt19937 rng(191);
    Representation<Q> rep = sl2_base_representation<Q>(4);
    PolyMap<Q> m1 = testutil::random_identity_map(rng, 3, 4);
    PolyMap<Q> m2 = testutil::random_identity_map(rng, 3, 4);
    Representation<Q> a = pushforward_rep(pushforward_rep(rep, m1), m2);
    Representation<Q> b = pushforward_rep(rep, polymap_compose(m1, m2));
    for (int i = 0; i < 3; ++i) CHECK(a.fields[i] == b.fields[i]);
}

TEST_SUITE_END();
