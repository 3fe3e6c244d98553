#include <doctest.h>

#include "liejet/cotangent.hpp"
#include "liejet/sl2.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::Q;

namespace {

// phase-space variable on 2n vars
Jet<Q> var(int nvars, int order, int i) { return Jet<Q>::variable(nvars, order, i); }

} // namespace

TEST_SUITE_BEGIN("cotangent");

TEST_CASE("lifting a constant translation field") {
    // d/dq1 on the line lifts to itself, with moment p1
    VectorFieldJet<Q> xi(std::vector<Jet<Q>>{Jet<Q>::constant(1, 3, Q(1))});
    VectorFieldJet<Q> lifted = cotangent_lift(xi);
    CHECK(lifted.nvars() == 2);
    CHECK(lifted.component(0) == Jet<Q>::constant(2, 3, Q(1)));
    CHECK(lifted.component(1).is_zero());

    auto mu = moment_map(std::vector<VectorFieldJet<Q>>{xi});
    REQUIRE(mu.size() == 1);
    CHECK(mu[0] == var(2, 4, 1));
}

TEST_CASE("lift golden for the rotation generator") {
    // rho(Z) = x d/dy - y d/dx lifts with fiber part -b d/da + a d/db
    Representation<Q> rep = sl2_base_representation<Q>(3);
    VectorFieldJet<Q> lifted = cotangent_lift(rep.fields[2]);
    int n = 6, N = 3;
    CHECK(lifted.component(0) == -var(n, N, 1)); // -y
    CHECK(lifted.component(1) == var(n, N, 0));  // x
    CHECK(lifted.component(2).is_zero());
    CHECK(lifted.component(3) == -var(n, N, 4)); // -b
    CHECK(lifted.component(4) == var(n, N, 3));  // a
    CHECK(lifted.component(5).is_zero());
}

TEST_CASE("the lifted action keeps the bracket table") {
    Representation<Q> rep = sl2_base_representation<Q>(4);
    std::vector<VectorFieldJet<Q>> lifted;
    for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
    Representation<Q> up{rep.algebra, lifted};
    CHECK(check_representation(up));
}

TEST_CASE("lifting is a bracket homomorphism") {
    std::mt19937 rng(211);
    for (int rep = 0; rep < 8; ++rep) {
        VectorFieldJet<Q> a = testutil::random_field(rng, 3, 5, 3);
        VectorFieldJet<Q> b = testutil::random_field(rng, 3, 5, 3);
        VectorFieldJet<Q> lhs = cotangent_lift(bracket_vf(a, b));
        VectorFieldJet<Q> rhs = bracket_vf(cotangent_lift(a), cotangent_lift(b));
        // the lift multiplies a first derivative by p, so the top jet order
        // of the input is not fully represented; compare one degree down
        CHECK(lhs.truncated(4) == rhs.truncated(4));
    }
}

TEST_CASE("lifts preserve the tautological one-form") {
    std::mt19937 rng(223);
    for (int rep = 0; rep < 8; ++rep) {
        VectorFieldJet<Q> a = testutil::random_field(rng, 3, 5, 3);
        VectorFieldJet<Q> lifted = cotangent_lift(a);
        FormJet<Q> theta = liouville_form<Q>(3, 5);
        CHECK(lie_derivative(lifted, theta).truncated(4).is_zero());
    }
}

TEST_CASE("moment map golden for the rotation-boost action") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    REQUIRE(mu.size() == 3);
    int n = 6, N = 4;
    // with phase coordinates (x, y, z, a, b, c):
    CHECK(mu[0] == var(n, N, 1) * var(n, N, 5) + var(n, N, 2) * var(n, N, 4)); // y c + z b
    CHECK(mu[1] == var(n, N, 0) * var(n, N, 5) + var(n, N, 2) * var(n, N, 3)); // x c + z a
    CHECK(mu[2] == var(n, N, 0) * var(n, N, 4) - var(n, N, 1) * var(n, N, 3)); // x b - y a
}

TEST_CASE("moment components generate the lifted fields") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    FormJet<Q> w = cotangent_form<Q>(3, 4);
    for (int a = 0; a < 3; ++a) {
        VectorFieldJet<Q> lifted = cotangent_lift(rep.fields[a]);
        CHECK(check_hamiltonian(lifted, mu[a], w));
        CHECK(hamiltonian_residual(lifted, mu[a], w).is_zero());
    }
}

TEST_CASE("a perturbed moment component fails the Hamiltonian check") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    FormJet<Q> w = cotangent_form<Q>(3, 4);
    VectorFieldJet<Q> lifted = cotangent_lift(rep.fields[0]);
    Jet<Q> bad = mu[0] + var(6, 4, 0); // + q1
    CHECK(!check_hamiltonian(lifted, bad, w));
    CHECK(!hamiltonian_residual(lifted, bad, w).is_zero());
}

TEST_CASE("orbit dimensions of the lifted action at marked points") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    std::vector<VectorFieldJet<Q>> lifted;
    for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
    auto mu = moment_map(rep.fields);

    std::vector<Q> origin(6, Q(0));
    CHECK(orbit_dimension(lifted, origin) == 0);
    CHECK(dmu_rank(mu, origin) == 0);

    std::vector<Q> fiber{Q(0), Q(0), Q(0), Q(1), Q(0), Q(0)};
    CHECK(orbit_dimension(lifted, fiber) == 2);
    CHECK(dmu_rank(mu, fiber) == 2);

    std::vector<Q> generic{Q(1), Q(2), Q(3), Q(1), Q(1), Q(1)};
    CHECK(orbit_dimension(lifted, generic) == 3);
    CHECK(dmu_rank(mu, generic) == 3);
}

TEST_CASE("lifted orbits are at least as large as base orbits") {
    std::mt19937 rng(227);
    Representation<Q> rep = sl2_base_representation<Q>(3);
    std::vector<VectorFieldJet<Q>> lifted;
    for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
    for (int r = 0; r < 10; ++r) {
        auto q = testutil::random_point(rng, 3);
        auto qp = q;
        auto p = testutil::random_point(rng, 3);
        qp.insert(qp.end(), p.begin(), p.end());
        CHECK(orbit_dimension(lifted, qp) >= orbit_dimension(rep.fields, q));
    }
}

TEST_CASE("the rank of d mu matches the lifted orbit dimension") {
    std::mt19937 rng(229);
    Representation<Q> rep = sl2_base_representation<Q>(3);
    std::vector<VectorFieldJet<Q>> lifted;
    for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
    auto mu = moment_map(rep.fields);
    for (int r = 0; r < 10; ++r) {
        auto pt = testutil::random_point(rng, 6);
        CHECK(dmu_rank(mu, pt) == orbit_dimension(lifted, pt));
    }
}

TEST_CASE("rank witnesses certify themselves") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    std::mt19937 rng(233);
    for (int r = 0; r < 5; ++r) {
        auto pt = testutil::random_point(rng, 6);
        Matrix<Q> M = dmu_matrix(mu, pt);
        auto w = rank_witness(M);
        CHECK(w.verified);
        CHECK(w.rank == rank(M));
        if (w.rank > 0) CHECK(w.minor_value != Q(0));
    }
}

TEST_CASE("scans over the singular planes stay at rank two or less") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    // sample {p = 0} and {q = 0} on a small rational grid
    std::vector<std::vector<Q>> pts;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            for (int c = -2; c <= 2; ++c) {
                std::vector<Q> q{Q(a), Q(b), Q(c), Q(0), Q(0), Q(0)};
                std::vector<Q> p{Q(0), Q(0), Q(0), Q(a), Q(b), Q(c)};
                pts.push_back(q);
                pts.push_back(p);
            }
    auto scan = strata_scan(mu, pts);
    CHECK(scan.rows.size() == pts.size());
    for (const auto& [r, count] : scan.histogram) {
        CHECK((r == 0 || r == 2));
        CHECK(count > 0);
    }
    // the origin is in the sample, so rank 0 must appear
    CHECK(scan.histogram.count(0) == 1);
    CHECK(scan.histogram.count(2) == 1);
    for (const auto& [r, w] : scan.witnesses) {
        CHECK(w.second.verified);
        CHECK(w.second.rank == r);
    }
}

TEST_CASE("generic samples have full rank") {
    Representation<Q> rep = sl2_base_representation<Q>(3);
    auto mu = moment_map(rep.fields);
    std::mt19937 rng(239);
    std::vector<std::vector<Q>> pts;
    for (int r = 0; r < 200; ++r) pts.push_back(testutil::random_point(rng, 6, 40, 10));
    auto scan = strata_scan(mu, pts);
    long full = scan.histogram.count(3) ? scan.histogram[3] : 0;
    CHECK(full > 190); // rank 3 off a measure-zero set
}

TEST_CASE("the zero action scans at rank zero everywhere") {
    std::vector<VectorFieldJet<Q>> zero{VectorFieldJet<Q>::zero(3, 3)};
    auto mu = moment_map(zero);
    std::mt19937 rng(241);
    std::vector<std::vector<Q>> pts;
    for (int r = 0; r < 20; ++r) pts.push_back(testutil::random_point(rng, 6));
    auto scan = strata_scan(mu, pts);
    CHECK(scan.histogram.size() == 1);
    CHECK(scan.histogram.count(0) == 1);
    CHECK(scan.histogram[0] == 20);
}

TEST_SUITE_END();
