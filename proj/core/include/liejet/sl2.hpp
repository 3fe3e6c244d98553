#pragma once
// The worked sl(2,R) example: the linear action on R^3 whose orbits are the
// level sets of x^2 + y^2 - z^2, two flat radial deformations of it supported
// outside the cone {x^2 + y^2 <= z^2}, and their cotangent lifts. Exact jet
// builders live alongside double-precision expression fields, since the
// deformations are flat and invisible to every jet.
#include "liejet/cotangent.hpp"
#include "liejet/expr.hpp"
#include "liejet/jet.hpp"
#include "liejet/lie.hpp"
#include "liejet/rank_float.hpp"
#include "liejet/vector_field.hpp"

#include <cmath>
#include <vector>

namespace liejet {

// Generators on the basis with [X,Y] = -Z, [Z,X] = Y, [Z,Y] = -X:
//   X -> y d_z + z d_y,  Y -> x d_z + z d_x,  Z -> x d_y - y d_x
template <class R>
Representation<R> sl2_base_representation(int order) {
    auto V = [&](int i) { return Jet<R>::variable(3, order, i); };
    Jet<R> zero(3, order);
    std::vector<VectorFieldJet<R>> fields;
    fields.emplace_back(std::vector<Jet<R>>{zero, V(2), V(1)});
    fields.emplace_back(std::vector<Jet<R>>{V(2), zero, V(0)});
    fields.emplace_back(std::vector<Jet<R>>{-V(1), V(0), zero});
    return Representation<R>{LieAlgebra<R>::sl2(), std::move(fields)};
}

// x^2 + y^2 - z^2, constant on every orbit of the linear action
template <class R>
Jet<R> sl2_invariant_quadric(int order) {
    auto V = [&](int i) { return Jet<R>::variable(3, order, i); };
    return V(0) * V(0) + V(1) * V(1) - V(2) * V(2);
}

// Lift of the linear generators to T*R^3 (variables x,y,z,a,b,c)
template <class R>
Representation<R> sl2_lifted_representation(int order) {
    Representation<R> base = sl2_base_representation<R>(order);
    std::vector<VectorFieldJet<R>> lifted;
    lifted.reserve(base.fields.size());
    for (const auto& f : base.fields) lifted.push_back(cotangent_lift(f));
    return Representation<R>{base.algebra, std::move(lifted)};
}

// ---- double-precision expression fields ----

namespace detail {

inline std::vector<Expr> sl2_expr_x() {
    Expr x = Expr::var(0), y = Expr::var(1), z = Expr::var(2);
    (void)x;
    return {Expr::constant(0.0), z, y};
}
inline std::vector<Expr> sl2_expr_y() {
    Expr x = Expr::var(0), z = Expr::var(2);
    return {z, Expr::constant(0.0), x};
}
inline std::vector<Expr> sl2_expr_z() {
    Expr x = Expr::var(0), y = Expr::var(1);
    return {Expr::constant(0.0) - y, x, Expr::constant(0.0)};
}

} // namespace detail

inline std::vector<ExprField> sl2_linear_fields_expr() {
    return {ExprField(3, detail::sl2_expr_x()), ExprField(3, detail::sl2_expr_y()),
            ExprField(3, detail::sl2_expr_z())};
}

// Radial deformation that keeps the rotation generator untouched:
//   X -> X + f R, Y -> Y + g R, Z -> Z,
// f = x a(r^2 - z^2)/r^2, g = -y a(r^2 - z^2)/r^2 with a the flat factor
// exp(-1/s) on s > 0. The action agrees with the linear one on the cone.
inline std::vector<ExprField> flat_deformation_fixed_z() {
    Expr x = Expr::var(0), y = Expr::var(1), z = Expr::var(2);
    Expr r2 = x * x + y * y;
    Expr s = r2 - z * z;
    Expr A = Expr::flat(0, s) / r2;
    Expr f = x * A, g = Expr::constant(0.0) - y * A;
    auto X = detail::sl2_expr_x(), Y = detail::sl2_expr_y(), Z = detail::sl2_expr_z();
    std::vector<Expr> pt{x, y, z};
    for (int i = 0; i < 3; ++i) {
        X[i] = X[i] + f * pt[i];
        Y[i] = Y[i] + g * pt[i];
    }
    return {ExprField(3, std::move(X)), ExprField(3, std::move(Y)), ExprField(3, std::move(Z))};
}

// Radial deformation moving all three generators:
//   X -> X + (xz/r^2) a(r^2-z^2) R, Y -> Y - (yz/r^2) a(r^2-z^2) R,
//   Z -> Z + a(r^2-z^2) R;  the Z-orbits spiral outside the cone.
inline std::vector<ExprField> flat_deformation_full() {
    Expr x = Expr::var(0), y = Expr::var(1), z = Expr::var(2);
    Expr r2 = x * x + y * y;
    Expr u = Expr::flat(0, r2 - z * z);
    Expr p = (x * z * u) / r2, q = (y * z * u) / r2;
    auto X = detail::sl2_expr_x(), Y = detail::sl2_expr_y(), Z = detail::sl2_expr_z();
    std::vector<Expr> pt{x, y, z};
    for (int i = 0; i < 3; ++i) {
        X[i] = X[i] + p * pt[i];
        Y[i] = Y[i] - q * pt[i];
        Z[i] = Z[i] + u * pt[i];
    }
    return {ExprField(3, std::move(X)), ExprField(3, std::move(Y)), ExprField(3, std::move(Z))};
}

// Lift of a field on R^n to T*R^n: (xi(q), -(D xi)^t p), symbolically.
inline ExprField expr_cotangent_lift(const ExprField& xi) {
    int n = xi.nvars;
    std::vector<Expr> comps = xi.comps;
    for (int i = 0; i < n; ++i) {
        Expr s = Expr::constant(0.0);
        for (int j = 0; j < n; ++j) s = s - Expr::var(n + j) * xi.comps[j].diff(i);
        comps.push_back(s);
    }
    return ExprField(2 * n, std::move(comps));
}

inline std::vector<ExprField> expr_cotangent_lift_all(const std::vector<ExprField>& fields) {
    std::vector<ExprField> out;
    out.reserve(fields.size());
    for (const auto& f : fields) out.push_back(expr_cotangent_lift(f));
    return out;
}

// Defect fields of the sl2 relations: [F0,F1] + F2, [F2,F0] - F1, [F2,F1] + F0
inline std::vector<ExprField> sl2_bracket_defects(const std::vector<ExprField>& F) {
    if (F.size() != 3) throw DimensionError("three generators expected");
    int n = F[0].nvars;
    auto combine = [&](ExprField b, const ExprField& lin, bool plus) {
        for (size_t i = 0; i < b.comps.size(); ++i)
            b.comps[i] = plus ? b.comps[i] + lin.comps[i] : b.comps[i] - lin.comps[i];
        return ExprField(n, std::move(b.comps));
    };
    std::vector<ExprField> out;
    out.push_back(combine(expr_bracket(F[0], F[1]), F[2], true));
    out.push_back(combine(expr_bracket(F[2], F[0]), F[1], false));
    out.push_back(combine(expr_bracket(F[2], F[1]), F[0], true));
    return out;
}

inline double max_abs_eval(const ExprField& f, const std::vector<double>& x) {
    double m = 0.0;
    for (double v : f.eval(x)) m = std::max(m, std::fabs(v));
    return m;
}

// largest violation of the sl2 relations over the sample points
inline double sl2_bracket_residual(const std::vector<ExprField>& F,
                                   const std::vector<std::vector<double>>& pts) {
    auto defects = sl2_bracket_defects(F);
    double worst = 0.0;
    for (const auto& p : pts)
        for (const auto& d : defects) worst = std::max(worst, max_abs_eval(d, p));
    return worst;
}

// rank of the span of the field values at a point, by singular values
inline int orbit_dimension_numeric(const std::vector<ExprField>& fields,
                                   const std::vector<double>& pt, double rel_tol = 1e-9) {
    if (fields.empty()) return 0;
    Matrix<double> M(static_cast<int>(fields.size()), fields[0].nvars);
    for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        auto v = fields[i].eval(pt);
        for (int j = 0; j < fields[i].nvars; ++j) M.at(i, j) = v[j];
    }
    return svd_rank(M, rel_tol).rank;
}

} // namespace liejet
