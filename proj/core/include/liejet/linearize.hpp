#pragma once

#include <vector>

#include "liejet/jet.hpp"
#include "liejet/lie.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

// --- coordinates on the space of homogeneous vector fields -----------------
// Basis of degree-k fields on R^n: x^m d_i, component index outer, monomials
// of degree k in grlex order inner. All graded solves use this ordering.

inline int homogeneous_dim(int nvars, int k) {
    return static_cast<int>(monomials_of_degree(nvars, k).size());
}

template <class R>
std::vector<R> field_coords(const VectorFieldJet<R>& v, int k) {
    auto monos = monomials_of_degree(v.nvars(), k);
    std::vector<R> out;
    out.reserve(v.nvars() * monos.size());
    for (int i = 0; i < v.nvars(); ++i)
        for (const auto& m : monos) out.push_back(v.component(i).coeff(m));
    return out;
}

template <class R>
VectorFieldJet<R> field_from_coords(int nvars, int order, int k, const std::vector<R>& coords) {
    auto monos = monomials_of_degree(nvars, k);
    if (coords.size() != static_cast<size_t>(nvars) * monos.size())
        throw DimensionError("coordinate vector has wrong length");
    VectorFieldJet<R> v = VectorFieldJet<R>::zero(nvars, order);
    size_t t = 0;
    for (int i = 0; i < nvars; ++i)
        for (const auto& m : monos) v.component(i).set_coeff(m, coords[t++]);
    return v;
}

// Matrix of h -> [v_A, h] on degree-k homogeneous fields, v_A(x) = Ax.
template <class R>
Matrix<R> bracket_action_matrix(const Matrix<R>& A, int k, int order) {
    int n = A.rows();
    auto monos = monomials_of_degree(n, k);
    int M = n * static_cast<int>(monos.size());
    VectorFieldJet<R> va = VectorFieldJet<R>::from_linear(A, order);
    Matrix<R> L(M, M);
    int col = 0;
    for (int i = 0; i < n; ++i)
        for (const auto& m : monos) {
            VectorFieldJet<R> h = VectorFieldJet<R>::zero(n, order);
            h.component(i).set_coeff(m, ScalarTraits<R>::one());
            auto img = field_coords(bracket_vf(va, h), k);
            for (int r = 0; r < M; ++r) L.at(r, col) = img[r];
            ++col;
        }
    return L;
}

// --- coordinates on homogeneous polynomials ---------------------------------

template <class R>
std::vector<R> poly_coords(const Jet<R>& f, int k) {
    auto monos = monomials_of_degree(f.nvars(), k);
    std::vector<R> out;
    out.reserve(monos.size());
    for (const auto& m : monos) out.push_back(f.coeff(m));
    return out;
}

template <class R>
Jet<R> poly_from_coords(int nvars, int order, int k, const std::vector<R>& coords) {
    auto monos = monomials_of_degree(nvars, k);
    if (coords.size() != monos.size()) throw DimensionError("coordinate vector has wrong length");
    Jet<R> f(nvars, order);
    for (size_t i = 0; i < monos.size(); ++i) f.set_coeff(monos[i], coords[i]);
    return f;
}

// Matrix of f -> v_A(f) on degree-k homogeneous polynomials.
template <class R>
Matrix<R> function_action_matrix(const Matrix<R>& A, int k, int order) {
    int n = A.rows();
    auto monos = monomials_of_degree(n, k);
    int M = static_cast<int>(monos.size());
    VectorFieldJet<R> va = VectorFieldJet<R>::from_linear(A, order);
    Matrix<R> L(M, M);
    for (int col = 0; col < M; ++col) {
        Jet<R> f = Jet<R>::monomial(n, order, monos[col], ScalarTraits<R>::one());
        auto img = poly_coords(va.apply(f), k);
        for (int r = 0; r < M; ++r) L.at(r, col) = img[r];
    }
    return L;
}

// --- homological equation ---------------------------------------------------

// The degree-k defect of an action that is already linear below degree k:
// one homogeneous field per generator.
template <class R>
struct HomogeneousCochain {
    int degree;
    std::vector<VectorFieldJet<R>> parts;
};

// Extract the degree-k parts of an action whose fields are linear through
// degree k-1. This is the defect the homological equation removes next.
template <class R>
HomogeneousCochain<R> cocycle_defect(const Representation<R>& rep, int k) {
    if (k < 2 || k > rep.order()) throw DimensionError("cochain degree out of range");
    auto A = rep.linear_parts();
    for (size_t a = 0; a < rep.fields.size(); ++a) {
        VectorFieldJet<R> low = rep.fields[a].truncated(k - 1);
        if (!(low == VectorFieldJet<R>::from_linear(A[a], k - 1)))
            throw NotPreparedError("fields are not linear below the requested degree");
    }
    HomogeneousCochain<R> out;
    out.degree = k;
    out.parts.reserve(rep.fields.size());
    for (const auto& f : rep.fields) out.parts.push_back(f.part_of_degree(k));
    return out;
}

// delta R(e_i, e_j) = [v_{A_i}, R_j] - [v_{A_j}, R_i] - sum_m c(i,j,m) R_m.
// Vanishes when the R_i arise as the leading defect of a genuine action.
template <class R>
VectorFieldJet<R> cocycle_residual(const LieAlgebra<R>& g, const std::vector<Matrix<R>>& A,
                                   const std::vector<VectorFieldJet<R>>& Rs, int i, int j) {
    int order = Rs[0].order();
    VectorFieldJet<R> vi = VectorFieldJet<R>::from_linear(A[i], order);
    VectorFieldJet<R> vj = VectorFieldJet<R>::from_linear(A[j], order);
    VectorFieldJet<R> d = bracket_vf(vi, Rs[j]) - bracket_vf(vj, Rs[i]);
    for (int m = 0; m < g.dim(); ++m) {
        const R& cm = g.c(i, j, m);
        if (ScalarTraits<R>::is_zero(cm)) continue;
        VectorFieldJet<R> t = Rs[m];
        t.scale(cm);
        d -= t;
    }
    return d;
}

// Solve the joint system [v_{A_i}, h] = R_i for one homogeneous field h of
// degree k. The stacked graded system is solved exactly; free directions
// (centralizer fields) are pinned to zero by the first-pivot rule, so the
// answer is deterministic. Throws NoSolutionError when the R_i are not a
// coboundary.
template <class R>
VectorFieldJet<R> solve_homological(const std::vector<Matrix<R>>& A,
                                    const std::vector<VectorFieldJet<R>>& Rs, int k) {
    if (A.empty() || A.size() != Rs.size()) throw DimensionError("need one defect per generator");
    int n = A[0].rows(), order = Rs[0].order();
    int M = n * homogeneous_dim(n, k);
    int r = static_cast<int>(A.size());
    Matrix<R> S(r * M, M);
    std::vector<R> b;
    b.reserve(static_cast<size_t>(r) * M);
    for (int a = 0; a < r; ++a) {
        Matrix<R> L = bracket_action_matrix(A[a], k, order);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) S.at(a * M + i, j) = L.at(i, j);
        auto rhs = field_coords(Rs[a], k);
        b.insert(b.end(), rhs.begin(), rhs.end());
    }
    auto x = solve(S, b);
    if (!x)
        throw NoSolutionError("homological equation has no solution at degree " + std::to_string(k));
    return field_from_coords<R>(n, order, k, *x);
}

struct LinearizeOptions {
    bool check_input = true; // verify the fields actually represent first
};

template <class R>
struct LinearizeResult {
    PolyMap<R> map;               // m with pushforward of the action by m linear
    Representation<R> linearized; // the conjugated action, equal to its linear parts
    bool semisimple = true;       // false: no guarantee the graded solves succeed
};

// Degree-by-degree removal of nonlinear terms of a semisimple action: at each
// degree k the joint homological equation is solved and the coordinate change
// x -> x - h is applied. Terms of degree below k never reappear because h is
// homogeneous of degree k. A non-semisimple algebra is not rejected up front
// (the caller is warned through the result flag); the graded solves then
// either succeed or raise NoSolutionError at the failing degree.
template <class R>
LinearizeResult<R> linearize_rep(const Representation<R>& rep, const LinearizeOptions& opt = {}) {
    static_assert(ScalarTraits<R>::exact, "linearization solves exact graded systems");
    bool semisimple = rep.algebra.is_semisimple();
    if (opt.check_input && !check_representation(rep))
        throw InvalidMapError("fields do not satisfy the bracket relations");
    int n = rep.nvars(), N = rep.order();
    for (const auto& f : rep.fields)
        if (!f.is_zero() && f.min_degree() < 1)
            throw InvalidMapError("action fields must vanish at the origin");
    auto A = rep.linear_parts();
    Representation<R> cur = rep;
    PolyMap<R> total = PolyMap<R>::identity(n, N);
    for (int k = 2; k <= N; ++k) {
        std::vector<VectorFieldJet<R>> Rs;
        Rs.reserve(rep.fields.size());
        bool any = false;
        for (const auto& f : cur.fields) {
            Rs.push_back(f.part_of_degree(k));
            if (!Rs.back().is_zero()) any = true;
        }
        if (!any) continue;
        VectorFieldJet<R> h = solve_homological(A, Rs, k);
        PolyMap<R> mk = PolyMap<R>::identity(n, N);
        std::vector<Jet<R>> comps;
        comps.reserve(n);
        for (int i = 0; i < n; ++i) comps.push_back(mk.component(i) - h.component(i));
        mk = PolyMap<R>(std::move(comps));
        cur = pushforward_rep(cur, mk);
        total = polymap_compose(total, mk);
    }
    for (int a = 0; a < rep.algebra.dim(); ++a) {
        VectorFieldJet<R> lin = VectorFieldJet<R>::from_linear(A[a], N);
        if (!(cur.fields[a] == lin)) throw NoSolutionError("nonlinear terms survived linearization");
    }
    return {total, cur, semisimple};
}

// --- invariant projection ---------------------------------------------------

// For a reductive action by operators a_i on a finite-dimensional space,
// W = ker(all a_i) (+) sum im(a_i). Returns the invariant component of w.
// The fast path covers the common case where w is already invariant; the
// generic path solves one exact linear system and is only meant for small
// spaces.
template <class R>
std::vector<R> invariant_projection(const std::vector<Matrix<R>>& acts, const std::vector<R>& w) {
    if (acts.empty()) return w;
    int W = acts[0].rows();
    if (static_cast<int>(w.size()) != W) throw DimensionError("vector/operator size mismatch");
    bool invariant = true;
    for (const auto& a : acts) {
        auto img = a.apply(w);
        for (const auto& x : img)
            if (!ScalarTraits<R>::is_zero(x)) {
                invariant = false;
                break;
            }
        if (!invariant) break;
    }
    if (invariant) return w;
    // kernel basis of the stacked operators
    int r = static_cast<int>(acts.size());
    Matrix<R> stacked(r * W, W);
    for (int a = 0; a < r; ++a)
        for (int i = 0; i < W; ++i)
            for (int j = 0; j < W; ++j) stacked.at(a * W + i, j) = acts[a].at(i, j);
    auto K = nullspace(stacked);
    // w = K y + [a_1|...|a_r] z
    int cols = static_cast<int>(K.size()) + r * W;
    Matrix<R> S(W, cols);
    for (size_t c = 0; c < K.size(); ++c)
        for (int i = 0; i < W; ++i) S.at(i, static_cast<int>(c)) = K[c][i];
    for (int a = 0; a < r; ++a)
        for (int i = 0; i < W; ++i)
            for (int j = 0; j < W; ++j) S.at(i, static_cast<int>(K.size()) + a * W + j) = acts[a].at(i, j);
    auto sol = solve(S, w);
    if (!sol) throw NotReductiveError("space does not split into invariants plus image");
    std::vector<R> out(W, ScalarTraits<R>::zero());
    for (size_t c = 0; c < K.size(); ++c)
        for (int i = 0; i < W; ++i) out[i] += (*sol)[c] * K[c][i];
    return out;
}

// Invariant part of a homogeneous degree-k field under the linear action with
// matrices A_i, acting on fields by h -> [v_{A_i}, h].
template <class R>
VectorFieldJet<R> invariant_field_part(const std::vector<Matrix<R>>& A, const VectorFieldJet<R>& v, int k) {
    std::vector<Matrix<R>> acts;
    acts.reserve(A.size());
    for (const auto& a : A) acts.push_back(bracket_action_matrix(a, k, v.order()));
    auto out = invariant_projection(acts, field_coords(v, k));
    return field_from_coords<R>(v.nvars(), v.order(), k, out);
}

} // namespace liejet
