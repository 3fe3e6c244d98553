#pragma once

#include <vector>

#include "liejet/form.hpp"
#include "liejet/lie.hpp"
#include "liejet/linearize.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

// antisymmetric matrix of the value at the origin of a 2-form
template <class R>
Matrix<R> form_constant_matrix(const FormJet<R>& w) {
    if (w.degree() != 2) throw DimensionError("expected a 2-form");
    int n = w.nvars();
    Matrix<R> W(n, n);
    for (const auto& [idx, f] : w.terms()) {
        R c = f.constant_term();
        W.at(idx[0], idx[1]) = c;
        W.at(idx[1], idx[0]) = -c;
    }
    return W;
}

// sum dx_1^dx_2 + dx_3^dx_4 + ... on 2*pairs variables
template <class R>
FormJet<R> standard_symplectic_form(int pairs, int order) {
    FormJet<R> w(2 * pairs, order, 2);
    for (int i = 0; i < pairs; ++i)
        w.set_coeff({2 * i, 2 * i + 1}, Jet<R>::constant(2 * pairs, order, ScalarTraits<R>::one()));
    return w;
}

template <class R>
bool is_closed(const FormJet<R>& w) {
    return exterior_d(w).is_zero();
}

// closed and nondegenerate at the origin
template <class R>
bool check_symplectic(const FormJet<R>& w) {
    if (w.degree() != 2 || w.nvars() % 2 != 0) return false;
    if (!is_closed(w)) return false;
    return !ScalarTraits<R>::is_zero(det(form_constant_matrix(w)));
}

// Linear coordinate change whose pullback gives the 2-form a standard value
// at the origin (skew Gram-Schmidt on the constant part).
template <class R>
PolyMap<R> linear_darboux(const FormJet<R>& w) {
    Matrix<R> W = form_constant_matrix(w);
    auto [T, pairs] = skew_normal_basis(W);
    if (2 * pairs != w.nvars()) throw IllPosedError("2-form is degenerate at the origin");
    return PolyMap<R>::linear(T, w.order());
}

template <class R>
FormJet<TPoly<R>> form_to_path_ring(const FormJet<R>& w) {
    FormJet<TPoly<R>> out(w.nvars(), w.order(), w.degree());
    for (const auto& [idx, f] : w.terms())
        out.set_coeff(idx, f.map_coeffs([](const R& c) { return TPoly<R>(c); }));
    return out;
}

// Time-dependent field X_t with i_{X_t} w_t = -alpha along the straight path
// w_t = w0 + t (w1 - w0), where alpha is the radial primitive of w1 - w0.
// Both forms must be symplectic with the same value at the origin, otherwise
// the path can degenerate and no polynomial-in-t solution exists.
template <class R>
VectorFieldJet<TPoly<R>> moser_field(const FormJet<R>& w0, const FormJet<R>& w1) {
    if (!check_symplectic(w0) || !check_symplectic(w1))
        throw IllPosedError("moser path needs two symplectic forms");
    FormJet<R> dif = w1 - w0;
    if (!dif.is_zero() && dif.min_coeff_degree() < 1)
        throw NormalizeFirstError("moser path needs forms agreeing at the origin");
    int n = w0.nvars(), N = w0.order();
    using T = TPoly<R>;
    FormJet<R> alpha_r = poincare_primitive(dif);
    FormJet<T> alpha = form_to_path_ring(alpha_r);
    // w_t = w0 + t * dif
    FormJet<T> wt = form_to_path_ring(w0);
    {
        FormJet<T> d2 = form_to_path_ring(dif);
        d2.scale(T::t());
        wt += d2;
    }
    // split w_t = W (constant scalar part, t-free) + P (vanishing at 0)
    Matrix<R> W = form_constant_matrix(w0);
    Matrix<R> Winv = inverse_or_throw(W, "constant part not invertible");
    auto full_entry = [&](int i, int j) -> Jet<T> {
        if (i == j) return Jet<T>(n, N);
        FormIndex idx{i < j ? i : j, i < j ? j : i};
        Jet<T> f = wt.coeff(idx);
        if (i > j) f = -f;
        return f;
    };
    std::vector<std::vector<Jet<T>>> P(n, std::vector<Jet<T>>(n, Jet<T>(n, N)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet<T> e = full_entry(i, j);
            Jet<T> c = Jet<T>::constant(n, N, T(W.at(i, j)));
            P[i][j] = e - c;
        }
    // solve (W + P) X = alpha by the terminating Neumann iteration
    // X <- Winv (alpha - P X)
    std::vector<Jet<T>> alph(n, Jet<T>(n, N));
    for (int j = 0; j < n; ++j) alph[j] = alpha.coeff({j});
    std::vector<Jet<T>> X(n, Jet<T>(n, N));
    for (int it = 0; it <= N; ++it) {
        std::vector<Jet<T>> rhs(n, Jet<T>(n, N));
        for (int i = 0; i < n; ++i) {
            rhs[i] = alph[i];
            for (int j = 0; j < n; ++j) {
                if (P[i][j].is_zero() || X[j].is_zero()) continue;
                rhs[i] -= P[i][j] * X[j];
            }
        }
        std::vector<Jet<T>> nx(n, Jet<T>(n, N));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (ScalarTraits<R>::is_zero(Winv.at(i, j)) || rhs[j].is_zero()) continue;
                Jet<T> t = rhs[j];
                t.scale(T(Winv.at(i, j)));
                nx[i] += t;
            }
        if (nx == X) break;
        X = std::move(nx);
    }
    // X solves (W+P) X = alpha, i.e. i_X w_t = -alpha with our sign bookkeeping:
    // (i_X w)_j = sum_i X^i w_ij = -(w X)_j, so w X = alpha gives i_X w = -alpha.
    return VectorFieldJet<TPoly<R>>(std::move(X));
}

// Time-1 flow as a formal map with polynomial time dependence. Requires the
// field to vanish to second order; flows of linear parts are not polynomial
// in t and do not belong to this ring.
template <class R>
PolyMap<TPoly<R>> formal_flow(const VectorFieldJet<TPoly<R>>& X) {
    int n = X.nvars(), N = X.order();
    if (!X.is_zero() && X.min_degree() < 2)
        throw IllPosedError("formal flow needs a field vanishing to second order");
    using T = TPoly<R>;
    PolyMap<T> phi = PolyMap<T>::identity(n, N);
    for (int it = 0; it <= N; ++it) {
        std::vector<const Jet<T>*> xc;
        xc.reserve(n);
        for (int i = 0; i < n; ++i) xc.push_back(&X.component(i));
        auto sub = Jet<T>::compose_many(xc, phi.components());
        std::vector<Jet<T>> comps;
        comps.reserve(n);
        for (int i = 0; i < n; ++i) {
            Jet<T> integ = sub[i].map_coeffs([](const T& c) { return c.integrate(); });
            comps.push_back(Jet<T>::variable(n, N, i) + integ);
        }
        PolyMap<T> next(std::move(comps));
        if (next == phi) break;
        phi = next;
    }
    return phi;
}

template <class R>
PolyMap<R> polymap_at_time_one(const PolyMap<TPoly<R>>& m) {
    std::vector<Jet<R>> comps;
    comps.reserve(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        comps.push_back(m.component(i).map_coeffs([](const TPoly<R>& c) { return c.eval_one(); }));
    return PolyMap<R>(std::move(comps));
}

namespace detail {

// One graded correction sweep shared by the Darboux pipelines: given
// w = w_std + D with D of coefficient degree >= k, returns id + h killing the
// degree-k defect, where i_h w_std = -primitive(D_k). Maps live one order
// above the forms so the top correction degree N+1 is representable.
template <class R>
PolyMap<R> darboux_step(const FormJet<R>& w, const FormJet<R>& w_std, const Matrix<R>& Wstd_inv, int k) {
    int n = w.nvars(), N = w.order();
    FormJet<R> Dk = (w - w_std).coeff_part_of_degree(k);
    PolyMap<R> id = PolyMap<R>::identity(n, N + 1);
    if (Dk.is_zero()) return id;
    FormJet<R> alpha = poincare_primitive(Dk.truncated(N + 1));
    // h = Wstd^{-1} alpha gives i_h w_std = -alpha (same bookkeeping as the
    // Moser solve: w_std h = alpha)
    std::vector<Jet<R>> comps;
    comps.reserve(n);
    for (int i = 0; i < n; ++i) {
        Jet<R> hi(n, N + 1);
        for (int j = 0; j < n; ++j) {
            if (ScalarTraits<R>::is_zero(Wstd_inv.at(i, j))) continue;
            Jet<R> t = alpha.coeff({j});
            t.scale(Wstd_inv.at(i, j));
            hi += t;
        }
        comps.push_back(id.component(i) + hi);
    }
    return PolyMap<R>(std::move(comps));
}

} // namespace detail

template <class R>
struct DarbouxResult {
    PolyMap<R> map;        // pullback of the input by map is the standard form
    FormJet<R> normalized; // the standard form, returned for convenience
};

// Formal Darboux normalization: one linear step, then degree-by-degree Moser
// corrections. The sign convention makes the new defect start one degree
// higher at every sweep, so the loop runs at most order+1 times.
template <class R>
DarbouxResult<R> darboux(const FormJet<R>& w) {
    static_assert(ScalarTraits<R>::exact, "darboux normalization is an exact computation");
    if (w.degree() != 2) throw DimensionError("darboux needs a 2-form");
    if (!is_closed(w)) throw NotClosedError("darboux needs a closed form");
    int n = w.nvars(), N = w.order();
    if (n % 2 != 0) throw IllPosedError("odd-dimensional space has no symplectic form");
    PolyMap<R> lin = linear_darboux(w).truncated(N + 1);
    FormJet<R> cur = pullback(w, lin);
    FormJet<R> w_std = standard_symplectic_form<R>(n / 2, N);
    Matrix<R> Wstd_inv = inverse_or_throw(form_constant_matrix(w_std), "standard form degenerate");
    PolyMap<R> total = lin;
    for (int k = 1; k <= N; ++k) {
        FormJet<R> D = cur - w_std;
        if (D.is_zero()) break;
        int kd = D.min_coeff_degree();
        if (kd > k) continue;
        PolyMap<R> mk = detail::darboux_step(cur, w_std, Wstd_inv, kd);
        cur = pullback(cur, mk);
        total = polymap_compose(mk, total);
    }
    if (!(cur == w_std)) throw NoSolutionError("darboux sweeps left a defect");
    return {total, cur};
}

// Dm(x) A x - A m(x), one field per generator; zero iff m commutes with the
// linear action (no inverse needed).
template <class R>
std::vector<Jet<R>> equivariance_defect(const PolyMap<R>& m, const Matrix<R>& A) {
    int n = m.nvars(), N = m.order();
    VectorFieldJet<R> va = VectorFieldJet<R>::from_linear(A, N);
    std::vector<Jet<R>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Jet<R> lhs = va.apply(m.component(i)); // sum_j (Ax)_j d_j m_i = (Dm Ax)_i
        Jet<R> rhs(n, N);
        for (int j = 0; j < n; ++j) {
            if (ScalarTraits<R>::is_zero(A.at(i, j))) continue;
            Jet<R> t = m.component(j);
            t.scale(A.at(i, j));
            rhs += t;
        }
        out.push_back(lhs - rhs);
    }
    return out;
}

template <class R>
bool is_equivariant_map(const PolyMap<R>& m, const std::vector<Matrix<R>>& As) {
    for (const auto& A : As)
        for (const auto& d : equivariance_defect(m, A))
            if (!d.is_zero()) return false;
    return true;
}

// L_{v_i} w = 0 for every generator field
template <class R>
bool is_invariant_form(const FormJet<R>& w, const Representation<R>& rep) {
    for (const auto& v : rep.fields)
        if (!lie_derivative(v, w).is_zero()) return false;
    return true;
}

// same, for a linear action given by its matrices
template <class R>
bool is_invariant_form(const FormJet<R>& w, const std::vector<Matrix<R>>& As) {
    for (const auto& A : As)
        if (!lie_derivative(VectorFieldJet<R>::from_linear(A, w.order()), w).is_zero()) return false;
    return true;
}

// Equivariant Darboux for a linear action (given by its matrices) preserving
// w. The action is expected to come from a semisimple algebra, already
// linearized, and the value of w at the origin must be the standard pairing,
// which pins down the linear freedom; then radial primitives and pointwise
// solves commute with the action, so every correction is equivariant for
// free. A projection guard enforces this and repairs the correction if
// exactness is ever violated.
template <class R>
DarbouxResult<R> equivariant_darboux(const FormJet<R>& w, const std::vector<Matrix<R>>& As) {
    static_assert(ScalarTraits<R>::exact, "darboux normalization is an exact computation");
    if (w.degree() != 2) throw DimensionError("darboux needs a 2-form");
    for (const auto& A : As)
        if (A.rows() != w.nvars() || A.cols() != w.nvars())
            throw DimensionError("action/form arity mismatch");
    if (!is_closed(w)) throw NotClosedError("darboux needs a closed form");
    if (!is_invariant_form(w, As)) throw NotEquivariantError("form is not invariant under the action");
    int n = w.nvars(), N = w.order();
    if (n % 2 != 0) throw IllPosedError("odd-dimensional space has no symplectic form");
    FormJet<R> w_std = standard_symplectic_form<R>(n / 2, N);
    if (!(form_constant_matrix(w) == form_constant_matrix(w_std)))
        throw NormalizeFirstError("constant part is not the standard pairing; apply a linear change first");
    Matrix<R> Wstd_inv = inverse_or_throw(form_constant_matrix(w_std), "standard form degenerate");
    FormJet<R> cur = w;
    PolyMap<R> total = PolyMap<R>::identity(n, N + 1);
    for (int k = 1; k <= N; ++k) {
        FormJet<R> D = cur - w_std;
        if (D.is_zero()) break;
        int kd = D.min_coeff_degree();
        if (kd > k) continue;
        PolyMap<R> mk = detail::darboux_step(cur, w_std, Wstd_inv, kd);
        if (!is_equivariant_map(mk, As)) {
            // exact invariant input makes this unreachable; kept as a repair
            // path for near-invariant data produced upstream
            std::vector<Jet<R>> comps;
            comps.reserve(n);
            VectorFieldJet<R> h = VectorFieldJet<R>::zero(n, N + 1);
            for (int i = 0; i < n; ++i)
                h.component(i) = mk.component(i) - Jet<R>::variable(n, N + 1, i);
            VectorFieldJet<R> hp = invariant_field_part(As, h, kd + 1);
            for (int i = 0; i < n; ++i)
                comps.push_back(Jet<R>::variable(n, N + 1, i) + hp.component(i));
            mk = PolyMap<R>(std::move(comps));
            if (!is_equivariant_map(mk, As)) throw NotEquivariantError("correction cannot be made equivariant");
        }
        cur = pullback(cur, mk);
        total = polymap_compose(mk, total);
    }
    if (!(cur == w_std)) throw NoSolutionError("darboux sweeps left a defect");
    if (!is_equivariant_map(total, As)) throw NotEquivariantError("normalization broke equivariance");
    return {total, cur};
}

} // namespace liejet
