#include <doctest.h>

#include "liejet/jet.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"
#include "liejet/scalars.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::Q;

namespace {

// Convolution product with hand-rolled truncation, as an independent oracle
// for operator*.
Jet<Q> brute_force_mul(const Jet<Q>& a, const Jet<Q>& b) {
    Jet<Q> out(a.nvars(), a.order());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            Mono m(a.nvars());
            for (int i = 0; i < a.nvars(); ++i) m[i] = ma[i] + mb[i];
            out.add_term(m, ca * cb);
        }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("jet_core");

TEST_CASE("product of 1+x and 1-x truncates to 1-x^2") {
    Jet<Q> one = Jet<Q>::constant(1, 2, Q(1));
    Jet<Q> x = Jet<Q>::variable(1, 2, 0);
    Jet<Q> p = (one + x) * (one - x);
    Jet<Q> expected = one - x * x;
    CHECK(p == expected);
    CHECK(p.coeff({2}) == Q(-1));
    CHECK(p.constant_term() == Q(1));
}

TEST_CASE("square of x+y") {
    Jet<Q> x = Jet<Q>::variable(2, 3, 0);
    Jet<Q> y = Jet<Q>::variable(2, 3, 1);
    Jet<Q> s = (x + y) * (x + y);
    CHECK(s.coeff({2, 0}) == Q(1));
    CHECK(s.coeff({1, 1}) == Q(2));
    CHECK(s.coeff({0, 2}) == Q(1));
    CHECK(s.coeff({1, 0}) == Q(0));
}

TEST_CASE("additive identity and negation") {
    std::mt19937 rng(11);
    Jet<Q> a = testutil::random_jet(rng, 3, 4, 6);
    Jet<Q> z(3, 4);
    CHECK(a + z == a);
    CHECK((a - a).is_zero());
    CHECK((a + (-a)).is_zero());
}

TEST_CASE("multiplication agrees with brute-force convolution") {
    std::mt19937 rng(23);
    for (int nvars = 1; nvars <= 4; ++nvars)
        for (int order = 1; order <= 5; ++order)
            for (int rep = 0; rep < 4; ++rep) {
                Jet<Q> a = testutil::random_jet(rng, nvars, order, 5);
                Jet<Q> b = testutil::random_jet(rng, nvars, order, 5);
                CHECK(a * b == brute_force_mul(a, b));
            }
}

TEST_CASE("multiplication drops terms above the order") {
    Jet<Q> x = Jet<Q>::variable(1, 3, 0);
    Jet<Q> p = (x * x) * (x * x); // degree 4 at order 3
    CHECK(p.is_zero());
}

TEST_CASE("ring axioms on random jets") {
    std::mt19937 rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        Jet<Q> a = testutil::random_jet(rng, 3, 4, 4);
        Jet<Q> b = testutil::random_jet(rng, 3, 4, 4);
        Jet<Q> c = testutil::random_jet(rng, 3, 4, 4);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("composition golden: x^2 after x+x^2 at order 4") {
    Jet<Q> f = Jet<Q>::variable(1, 4, 0);
    f = f * f;
    Jet<Q> m = Jet<Q>::variable(1, 4, 0);
    m.add_term({2}, Q(1));
    Jet<Q> g = f.compose({m});
    Jet<Q> expected(1, 4);
    expected.add_term({2}, Q(1));
    expected.add_term({3}, Q(2));
    expected.add_term({4}, Q(1));
    CHECK(g == expected);
}

TEST_CASE("composition with the identity substitution") {
    std::mt19937 rng(41);
    Jet<Q> f = testutil::random_jet(rng, 3, 4, 6);
    Jet<Q> x0 = Jet<Q>::variable(3, 4, 0);
    Jet<Q> x1 = Jet<Q>::variable(3, 4, 1);
    Jet<Q> x2 = Jet<Q>::variable(3, 4, 2);
    CHECK(f.compose({x0, x1, x2}) == f);
}

TEST_CASE("composition is a ring homomorphism") {
    std::mt19937 rng(43);
    PolyMap<Q> m = testutil::random_identity_map(rng, 2, 4);
    for (int rep = 0; rep < 5; ++rep) {
        Jet<Q> a = testutil::random_jet(rng, 2, 4, 4);
        Jet<Q> b = testutil::random_jet(rng, 2, 4, 4);
        CHECK(jet_compose(a + b, m) == jet_compose(a, m) + jet_compose(b, m));
        CHECK(jet_compose(a * b, m) == jet_compose(a, m) * jet_compose(b, m));
    }
}

TEST_CASE("evaluation agrees with direct term summation") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 5; ++rep) {
        Jet<Q> f = testutil::random_jet(rng, 3, 3, 5);
        auto pt = testutil::random_point(rng, 3);
        Q acc(0);
        for (const auto& [m, c] : f.terms()) {
            Q t = c;
            for (int i = 0; i < 3; ++i)
                for (int e = 0; e < m[i]; ++e) t *= pt[i];
            acc += t;
        }
        CHECK(f.eval(pt) == acc);
    }
}

TEST_CASE("substitutions must fix the origin") {
    Jet<Q> f = Jet<Q>::variable(1, 3, 0);
    CHECK_THROWS_AS((void)f.compose({Jet<Q>::constant(1, 3, Q(1))}), liejet::Error);
}

TEST_CASE("derivative satisfies the product rule") {
    std::mt19937 rng(53);
    for (int rep = 0; rep < 8; ++rep) {
        Jet<Q> a = testutil::random_jet(rng, 3, 5, 5);
        Jet<Q> b = testutil::random_jet(rng, 3, 5, 5);
        for (int i = 0; i < 3; ++i) {
            // the product lives at order 5; its derivative is reliable to order 4
            Jet<Q> lhs = (a * b).derivative(i).truncated(3);
            Jet<Q> rhs = (a.derivative(i) * b + a * b.derivative(i)).truncated(3);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("partial derivatives commute") {
    std::mt19937 rng(59);
    Jet<Q> f = testutil::random_jet(rng, 4, 5, 10);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            CHECK(f.derivative(i).derivative(j) == f.derivative(j).derivative(i));
}

TEST_CASE("reciprocal of a unit") {
    std::mt19937 rng(61);
    for (int rep = 0; rep < 5; ++rep) {
        Jet<Q> u = Jet<Q>::constant(3, 4, testutil::rand_q_nonzero(rng));
        u += testutil::random_jet(rng, 3, 4, 4, 1);
        Jet<Q> inv = jet_reciprocal(u);
        CHECK(u * inv == Jet<Q>::constant(3, 4, Q(1)));
    }
    Jet<Q> nounit(2, 3); // zero constant term
    nounit.add_term({1, 0}, Q(1));
    CHECK_THROWS_AS((void)jet_reciprocal(nounit), NotInvertibleError);
}

TEST_CASE("truncation and graded parts") {
    std::mt19937 rng(67);
    Jet<Q> f = testutil::random_jet(rng, 3, 5, 12);
    Jet<Q> sum(3, 5);
    for (int d = 0; d <= 5; ++d) sum += f.part_of_degree(d);
    CHECK(sum == f);
    CHECK(f.parts_below_degree(3) + (f - f.parts_below_degree(3)) == f);
    CHECK(f.truncated(0).constant_term() == f.constant_term());
}

TEST_CASE("formal inverse golden: x+x^2 at order 3") {
    Jet<Q> c = Jet<Q>::variable(1, 3, 0);
    c.add_term({2}, Q(1));
    PolyMap<Q> m(std::vector<Jet<Q>>{c});
    PolyMap<Q> inv = polymap_inverse(m);
    Jet<Q> expected = Jet<Q>::variable(1, 3, 0);
    expected.add_term({2}, Q(-1));
    expected.add_term({3}, Q(2));
    CHECK(inv.component(0) == expected);
}

TEST_CASE("formal inverse composes to the identity") {
    std::mt19937 rng(71);
    for (int rep = 0; rep < 4; ++rep) {
        PolyMap<Q> m = testutil::random_invertible_map(rng, 3, 4);
        PolyMap<Q> inv = polymap_inverse(m);
        PolyMap<Q> id = PolyMap<Q>::identity(3, 4);
        CHECK(polymap_compose(m, inv) == id);
        CHECK(polymap_compose(inv, m) == id);
    }
}

TEST_CASE("inverse of a linear map matches the matrix inverse") {
    std::mt19937 rng(73);
    Matrix<Q> L = testutil::random_invertible_matrix(rng, 3);
    PolyMap<Q> m = PolyMap<Q>::linear(L, 3);
    Matrix<Q> Linv = inverse_or_throw(L, "not invertible");
    CHECK(polymap_inverse(m) == PolyMap<Q>::linear(Linv, 3));
}

TEST_CASE("inverse rejects a singular linear part") {
    Jet<Q> c0 = Jet<Q>::variable(2, 3, 0);
    Jet<Q> c1 = Jet<Q>::variable(2, 3, 0); // second component repeats the first
    PolyMap<Q> m(std::vector<Jet<Q>>{c0, c1});
    CHECK_THROWS_AS((void)polymap_inverse(m), NotInvertibleError);
}

TEST_CASE("map composition is associative with identity") {
    std::mt19937 rng(79);
    PolyMap<Q> a = testutil::random_identity_map(rng, 2, 4);
    PolyMap<Q> b = testutil::random_identity_map(rng, 2, 4);
    PolyMap<Q> c = testutil::random_identity_map(rng, 2, 4);
    PolyMap<Q> id = PolyMap<Q>::identity(2, 4);
    CHECK(polymap_compose(a, id) == a);
    CHECK(polymap_compose(id, a) == a);
    CHECK(polymap_compose(polymap_compose(a, b), c) == polymap_compose(a, polymap_compose(b, c)));
}

TEST_CASE("canonical serialization goldens") {
    Jet<Q> f(2, 3);
    f.add_term({0, 0}, Q(-3));
    f.add_term({1, 0}, Q(1, 2));
    f.add_term({0, 2}, Q(-1));
    f.add_term({2, 1}, Q(1));
    CHECK(f.to_string() == "-3 + 1/2*x1 - x2^2 + x1^2*x2");
    CHECK(Jet<Q>(2, 3).to_string() == "0");
    CHECK(Jet<Q>::variable(2, 3, 1).to_string({"u", "v"}) == "v");
}

TEST_CASE("path-ring arithmetic evaluates consistently") {
    // (1 + t x) * (1 - t x) = 1 - t^2 x^2 in the polynomial-in-t ring
    using T = TPoly<Q>;
    Jet<T> one = Jet<T>::constant(1, 2, T(Q(1)));
    Jet<T> x = Jet<T>::variable(1, 2, 0);
    T t = T::t();
    Jet<T> tx = x;
    tx.scale(t);
    Jet<T> p = (one + tx) * (one - tx);
    Jet<T> expected = one;
    Jet<T> x2 = x * x;
    x2.scale(t * t);
    expected -= x2;
    CHECK(p == expected);
    CHECK(p.coeff({2}).eval_one() == Q(-1));
}

TEST_CASE("matrix rank, solve, nullspace fixtures") {
    Matrix<Q> A = Matrix<Q>::from_rows({{Q(1), Q(2)}, {Q(2), Q(4)}});
    CHECK(rank(A) == 1);
    auto ns = nullspace(A);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] * Q(1) + ns[0][1] * Q(2) == Q(0));

    Matrix<Q> B = Matrix<Q>::from_rows({{Q(2), Q(1)}, {Q(1), Q(1)}});
    auto x = solve(B, {Q(3), Q(2)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Q(1));
    CHECK((*x)[1] == Q(1));
    CHECK(!solve(A, {Q(1), Q(0)}).has_value());

    Matrix<Q> Binv = inverse_or_throw(B, "singular");
    Matrix<Q> I = B * Binv;
    CHECK(I.at(0, 0) == Q(1));
    CHECK(I.at(0, 1) == Q(0));
    CHECK(det(B) == Q(1));
}

TEST_CASE("skew normal basis brings a skew form to block shape") {
    std::mt19937 rng(83);
    for (int rep = 0; rep < 6; ++rep) {
        int n = 3 + static_cast<int>(rng() % 3);
        Matrix<Q> B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Q c = testutil::rand_q(rng, 3, 2);
                B.at(i, j) = c;
                B.at(j, i) = -c;
            }
        auto [T, pairs] = skew_normal_basis(B);
        Matrix<Q> C = T.transpose() * B * T;
        CHECK(2 * pairs == rank(B));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Q want(0);
                if (i + 1 == j && i % 2 == 0 && j < 2 * pairs) want = Q(1);
                if (j + 1 == i && j % 2 == 0 && i < 2 * pairs) want = Q(-1);
                CHECK(C.at(i, j) == want);
            }
    }
}

TEST_SUITE_END();
