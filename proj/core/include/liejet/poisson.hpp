#pragma once
// Bivector jets: Schouten-square residual, pushforward along coordinate
// changes, duality with (b-)forms, and the formal splitting of a Poisson jet
// into a constant symplectic block plus a transverse block that depends only
// on the trailing variables.
#include "liejet/bform.hpp"
#include "liejet/form.hpp"
#include "liejet/linearize.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"
#include "liejet/symplectic.hpp"
#include "liejet/vector_field.hpp"

#include <string>
#include <utility>
#include <vector>

namespace liejet {

// Same antisymmetric-slot container as forms; the slots are the upper indices
// of Pi = sum_{i<j} Pi^{ij} d_i ^ d_j.
template <class R>
using BivectorJet = FormJet<R>;

namespace detail {

// Entry Pi^{ij} for arbitrary index order (antisymmetric lookup).
template <class R>
Jet<R> bivector_entry(const BivectorJet<R>& p, int i, int j) {
    if (i == j) return Jet<R>(p.nvars(), p.order());
    if (i < j) return p.coeff({i, j});
    Jet<R> f = p.coeff({j, i});
    return f.is_zero() ? f : -f;
}

// Part of f supported on monomials that avoid the first twk variables.
template <class R>
Jet<R> trailing_only_part(const Jet<R>& f, int twk) {
    Jet<R> out(f.nvars(), f.order());
    for (const auto& [m, c] : f.terms()) {
        bool trailing = true;
        for (int i = 0; i < twk && trailing; ++i)
            if (m[i] != 0) trailing = false;
        if (trailing) out.set_coeff(m, c);
    }
    return out;
}

} // namespace detail

// [Pi, Pi]^{ijk} = 2 sum_l (Pi^{li} d_l Pi^{jk} + Pi^{lj} d_l Pi^{ki}
//                           + Pi^{lk} d_l Pi^{ij}).
// The degree-d part of the bracket draws on degree d+1 of Pi, so an order-N
// jet only determines the bracket through order N-1; the result is truncated
// to that honest order.
template <class R>
FormJet<R> schouten_square(const BivectorJet<R>& p) {
    if (p.degree() != 2) throw DimensionError("schouten square expects a bivector");
    int n = p.nvars(), N = p.order();
    int M = N > 0 ? N - 1 : 0;
    FormJet<R> out(n, M, 3);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Jet<R> s(n, N);
                for (int l = 0; l < n; ++l) {
                    Jet<R> a = detail::bivector_entry(p, l, i);
                    if (!a.is_zero()) s += a * detail::bivector_entry(p, j, k).derivative(l);
                    Jet<R> b = detail::bivector_entry(p, l, j);
                    if (!b.is_zero()) s += b * detail::bivector_entry(p, k, i).derivative(l);
                    Jet<R> c = detail::bivector_entry(p, l, k);
                    if (!c.is_zero()) s += c * detail::bivector_entry(p, i, j).derivative(l);
                }
                out.add_term({i, j, k}, (s + s).truncated(M));
            }
    return out;
}

// Largest absolute coefficient of the Schouten square; exactly zero for a
// Poisson jet.
template <class R>
R check_poisson(const BivectorJet<R>& p) {
    FormJet<R> sq = schouten_square(p);
    R best = ScalarTraits<R>::zero();
    for (const auto& [idx, f] : sq.terms()) {
        (void)idx;
        R m = max_abs_coeff(f);
        if (best < m) best = m;
    }
    return best;
}

template <class R>
bool is_poisson(const BivectorJet<R>& p) {
    return schouten_square(p).is_zero();
}

// (L_v Pi)^{ij} = v(Pi^{ij}) - Pi^{aj} d_a v^i - Pi^{ia} d_a v^j
template <class R>
BivectorJet<R> bivector_lie_derivative(const VectorFieldJet<R>& v, const BivectorJet<R>& p) {
    if (p.degree() != 2) throw DimensionError("lie derivative expects a bivector");
    if (v.nvars() != p.nvars()) throw DimensionError("bivector/field arity mismatch");
    int n = p.nvars(), N = p.order();
    BivectorJet<R> out(n, N, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Jet<R> s = v.apply(detail::bivector_entry(p, i, j)).truncated(N);
            for (int a = 0; a < n; ++a) {
                Jet<R> paj = detail::bivector_entry(p, a, j);
                if (!paj.is_zero()) s -= paj * v.component(i).truncated(N).derivative(a);
                Jet<R> pia = detail::bivector_entry(p, i, a);
                if (!pia.is_zero()) s -= pia * v.component(j).truncated(N).derivative(a);
            }
            out.add_term({i, j}, s);
        }
    return out;
}

template <class R>
bool is_invariant_bivector(const BivectorJet<R>& p, const std::vector<Matrix<R>>& As) {
    for (const auto& A : As)
        if (!bivector_lie_derivative(VectorFieldJet<R>::from_linear(A, p.order() + 1), p).is_zero())
            return false;
    return true;
}

// (m_* Pi)^{ij}(y) = [sum_{a<b} (J_ia J_jb - J_ib J_ja) Pi^{ab}](x) at
// x = m^{-1}(y), J = Dm.
template <class R>
BivectorJet<R> bivector_pushforward(const BivectorJet<R>& p, const PolyMap<R>& m) {
    if (p.degree() != 2) throw DimensionError("pushforward expects a bivector");
    if (m.dim() != m.nvars() || m.nvars() != p.nvars())
        throw DimensionError("pushforward arity mismatch");
    if (m.order() < p.order()) throw DimensionError("map order too low for pushforward");
    int n = p.nvars(), N = p.order();
    PolyMap<R> minv = polymap_inverse(m).truncated(N);
    auto J = m.jacobian();
    std::vector<std::vector<Jet<R>>> Jt(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Jt[i].push_back(J[i][j].truncated(N));
    std::vector<Jet<R>> accs;
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Jet<R> acc(n, N);
            for (const auto& [idx, f] : p.terms()) {
                int a = idx[0], b = idx[1];
                Jet<R> g = Jt[i][a] * Jt[j][b] - Jt[i][b] * Jt[j][a];
                if (!g.is_zero()) acc += g * f;
            }
            if (acc.is_zero()) continue;
            accs.push_back(std::move(acc));
            slots.emplace_back(i, j);
        }
    std::vector<const Jet<R>*> ap;
    ap.reserve(accs.size());
    for (const auto& a : accs) ap.push_back(&a);
    auto comp = Jet<R>::compose_many(ap, minv.components());
    BivectorJet<R> out(n, N, 2);
    for (size_t t = 0; t < comp.size(); ++t)
        out.add_term({slots[t].first, slots[t].second}, comp[t]);
    return out;
}

namespace detail {

// X with P X = I for a jet matrix whose constant part is invertible
// (geometric-series correction on top of the constant inverse).
template <class R>
std::vector<std::vector<Jet<R>>> jet_matrix_inverse(const std::vector<std::vector<Jet<R>>>& P,
                                                    int nvars, int order, const char* msg) {
    int n = static_cast<int>(P.size());
    Matrix<R> C(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C.at(i, j) = P[i][j].constant_term();
    Matrix<R> Cinv = inverse_or_throw(C, msg);
    std::vector<std::vector<Jet<R>>> P1(n), X(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet<R> h = P[i][j];
            if (!ScalarTraits<R>::is_zero(C.at(i, j)))
                h -= Jet<R>::constant(nvars, order, C.at(i, j));
            P1[i].push_back(std::move(h));
            X[i].push_back(Jet<R>::constant(nvars, order, Cinv.at(i, j)));
        }
    for (int round = 0; round <= order; ++round) {
        // X <- Cinv (I - P1 X)
        std::vector<std::vector<Jet<R>>> PX(n);
        bool higher = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet<R> s(nvars, order);
                for (int l = 0; l < n; ++l)
                    if (!P1[i][l].is_zero() && !X[l][j].is_zero()) s += P1[i][l] * X[l][j];
                if (!s.is_zero()) higher = true;
                PX[i].push_back(std::move(s));
            }
        if (!higher) break;
        std::vector<std::vector<Jet<R>>> nx(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet<R> s = Jet<R>::constant(nvars, order, Cinv.at(i, j));
                for (int l = 0; l < n; ++l)
                    if (!ScalarTraits<R>::is_zero(Cinv.at(i, l)) && !PX[l][j].is_zero())
                        s -= Cinv.at(i, l) * PX[l][j];
                nx[i].push_back(std::move(s));
            }
        if (nx == X) break;
        X = std::move(nx);
    }
    return X;
}

} // namespace detail

// Dual b-form of a bivector that is tangent to {z = 0} and b-nondegenerate:
// in the frame (z d_z, d_other) the matrix is inverted with an overall sign,
// mirroring W = -P^{-1} for the nondegenerate smooth case.
template <class R>
BForm<R> bform_of_bivector(const BivectorJet<R>& p, int zvar) {
    if (p.degree() != 2) throw DimensionError("duality expects a bivector");
    int n = p.nvars(), N = p.order();
    if (zvar < 0 || zvar >= n) throw DimensionError("boundary variable out of range");
    std::vector<std::vector<Jet<R>>> Pb(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet<R> e = detail::bivector_entry(p, i, j);
            if (i == zvar && !e.is_zero()) {
                if (!e.divisible_by_var(zvar))
                    throw IllPosedError("bivector is not tangent to the hypersurface");
                e = e.div_var(zvar);
            } else if (j == zvar && !e.is_zero()) {
                if (!e.divisible_by_var(zvar))
                    throw IllPosedError("bivector is not tangent to the hypersurface");
                e = e.div_var(zvar);
            }
            Pb[i].push_back(std::move(e));
        }
    std::vector<std::vector<Jet<R>>> X;
    try {
        X = detail::jet_matrix_inverse(Pb, n, N, "bivector is not b-nondegenerate");
    } catch (const NotInvertibleError&) {
        throw IllPosedError("bivector is not b-nondegenerate");
    }
    BForm<R> out(n, N, 2, zvar);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Jet<R> wij = -X[i][j];
            if (wij.is_zero()) continue;
            if (i == zvar || j == zvar) {
                int other = (i == zvar) ? j : i;
                out.log_part().add_term({other}, (i == zvar) ? wij : -wij);
            } else {
                out.smooth().add_term({i, j}, wij);
            }
        }
    return out;
}

// Inverse duality: bivector of a b-nondegenerate closed-or-not b-form.
template <class R>
BivectorJet<R> bivector_of_bform(const BForm<R>& w) {
    if (w.degree() != 2) throw DimensionError("duality expects a 2-form");
    int n = w.nvars(), N = w.order(), zv = w.zvar();
    std::vector<std::vector<Jet<R>>> Wm(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == zv)
                Wm[i].push_back(j == zv ? Jet<R>(n, N) : w.log_part().coeff({j}));
            else if (j == zv) {
                Jet<R> f = w.log_part().coeff({i});
                Wm[i].push_back(f.is_zero() ? f : -f);
            } else {
                Jet<R> f = detail::bivector_entry(w.smooth(), i, j);
                Wm[i].push_back(std::move(f));
            }
        }
    std::vector<std::vector<Jet<R>>> X;
    try {
        X = detail::jet_matrix_inverse(Wm, n, N, "b-form is not b-nondegenerate");
    } catch (const NotInvertibleError&) {
        throw IllPosedError("b-form is not b-nondegenerate");
    }
    BivectorJet<R> out(n, N, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Jet<R> pij = -X[i][j];
            if (pij.is_zero()) continue;
            if (i == zv || j == zv) pij = pij.mul_var(zv);
            out.add_term({i, j}, pij);
        }
    return out;
}

// sum_c d_{2c} ^ d_{2c+1} plus nothing on the trailing variables.
template <class R>
BivectorJet<R> standard_split_bivector(int nvars, int order, int pairs) {
    if (2 * pairs > nvars) throw DimensionError("too many pairs");
    BivectorJet<R> p(nvars, order, 2);
    for (int c = 0; c < pairs; ++c)
        p.add_term({2 * c, 2 * c + 1}, Jet<R>::constant(nvars, order, ScalarTraits<R>::one()));
    return p;
}

template <class R>
struct WeinsteinResult {
    PolyMap<R> map;            // pushforward of the input along map is split
    int pairs = 0;             // symplectic pairs in the leading block
    BivectorJet<R> split;      // constant block + transverse part
    BivectorJet<R> transverse; // the part on the trailing variables only
};

namespace detail {

// Degree-by-degree corrections on top of an already linearly normalized jet
// (constant part J (+) 0). When `As` is nonnull the corrections are projected
// back onto their invariant part whenever the raw step fails the invariance
// guard; `As` must act block-diagonally for the two variable groups.
template <class R>
void weinstein_sweep(BivectorJet<R>& cur, PolyMap<R>& total, int k,
                     const std::vector<Matrix<R>>* As) {
    int n = cur.nvars(), N = cur.order();
    int twk = 2 * k;
    std::vector<char> activeU(n, 0);
    for (int i = 0; i < twk; ++i) activeU[i] = 1;
    // J_{i, i^1} = +1 for even i, -1 for odd i
    auto psign = [](int i) { return i % 2 == 0; };
    for (int d = 1; d <= N; ++d) {
        // transverse defect must live on the trailing variables alone
        for (const auto& [idx, f] : cur.terms()) {
            if (idx[0] < twk) continue;
            Jet<R> fd = f.part_of_degree(d);
            if (!(fd - trailing_only_part(fd, twk)).is_zero())
                throw SplitFailureError("transverse defect mixes the symplectic block at degree " +
                                            std::to_string(d),
                                        d);
        }
        // leading-block defect as a 2-form: beta = J D J; one order above the
        // forms so the degree-(d+1) primitive at the top degree is retained
        FormJet<R> beta(n, N + 1, 2);
        for (int i = 0; i < twk; ++i)
            for (int j = i + 1; j < twk; ++j) {
                Jet<R> dd = bivector_entry(cur, i ^ 1, j ^ 1).part_of_degree(d);
                if (dd.is_zero()) continue;
                bool neg = psign(i) == psign(j); // s_i * s'_j with s'_j = -s_j
                beta.add_term({i, j}, (neg ? -dd : dd).truncated(N + 1));
            }
        // mixed defect as gradient rows: d_a h^tau = sum_i J_{ai} D^{i tau}
        std::vector<FormJet<R>> gamma;
        bool mixed = false;
        for (int tau = twk; tau < n; ++tau) {
            FormJet<R> g(n, N + 1, 1);
            for (int a = 0; a < twk; ++a) {
                Jet<R> dd = bivector_entry(cur, a ^ 1, tau).part_of_degree(d);
                if (dd.is_zero()) continue;
                g.add_term({a}, (psign(a) ? dd : -dd).truncated(N + 1));
            }
            if (!g.is_zero()) mixed = true;
            gamma.push_back(std::move(g));
        }
        if (beta.is_zero() && !mixed) continue;
        std::vector<Jet<R>> h(n, Jet<R>(n, N + 1));
        try {
            if (!beta.is_zero()) {
                FormJet<R> alpha = poincare_primitive_masked(beta, activeU);
                for (int i = 0; i < twk; ++i) {
                    Jet<R> ai = alpha.coeff({i ^ 1});
                    if (ai.is_zero()) continue;
                    h[i] = (psign(i) ? ai : -ai).truncated(N + 1);
                }
            }
            for (int tau = twk; tau < n; ++tau) {
                if (gamma[tau - twk].is_zero()) continue;
                FormJet<R> prim = poincare_primitive_masked(gamma[tau - twk], activeU);
                h[tau] = prim.coeff(FormIndex{}).truncated(N + 1);
            }
        } catch (const NotClosedError&) {
            throw NoSolutionError("split defect failed to be closed; input is not Poisson "
                                  "to the working order");
        }
        VectorFieldJet<R> hv{std::vector<Jet<R>>(h)};
        std::vector<Jet<R>> comps;
        comps.reserve(n);
        for (int i = 0; i < n; ++i)
            comps.push_back(Jet<R>::variable(n, N + 1, i) + hv.component(i));
        PolyMap<R> mk(std::move(comps));
        if (As != nullptr && !is_equivariant_map(mk, *As)) {
            // unreachable for exactly invariant input; repair near-invariant data
            VectorFieldJet<R> hp = invariant_field_part(*As, hv, d + 1);
            std::vector<Jet<R>> cs;
            cs.reserve(n);
            for (int i = 0; i < n; ++i)
                cs.push_back(Jet<R>::variable(n, N + 1, i) + hp.component(i));
            mk = PolyMap<R>(std::move(cs));
            if (!is_equivariant_map(mk, *As))
                throw NotEquivariantError("correction cannot be made equivariant");
        }
        cur = bivector_pushforward(cur, mk);
        total = polymap_compose(total, mk);
    }
}

// Columns of A spanning its image (pivot columns of the row echelon form).
template <class R>
std::vector<int> independent_columns(const Matrix<R>& A) {
    return echelonize(A, A.cols()).pivot_cols;
}

} // namespace detail

// Split a Poisson jet: coordinates in which it is a constant symplectic block
// on the leading pair variables plus a bivector in the trailing variables
// alone. The input must be Poisson to the retained order; a defect tying the
// blocks together at some degree reports that degree.
template <class R>
WeinsteinResult<R> weinstein_split(const BivectorJet<R>& pin) {
    static_assert(ScalarTraits<R>::exact, "splitting needs exact coefficients");
    if (pin.degree() != 2) throw DimensionError("weinstein split expects a bivector");
    int n = pin.nvars(), N = pin.order();
    if (!is_poisson(pin)) throw NotPoissonError("schouten square of the input does not vanish");
    Matrix<R> P0 = form_constant_matrix(pin);
    auto [T, k] = skew_normal_basis(P0);
    PolyMap<R> lin = PolyMap<R>::linear(T.transpose(), N + 1);
    BivectorJet<R> cur = bivector_pushforward(pin, lin);
    PolyMap<R> total = lin;
    detail::weinstein_sweep(cur, total, k, static_cast<const std::vector<Matrix<R>>*>(nullptr));
    WeinsteinResult<R> res;
    res.map = std::move(total);
    res.pairs = k;
    res.split = cur;
    res.transverse = BivectorJet<R>(n, N, 2);
    for (const auto& [idx, f] : cur.terms())
        if (idx[0] >= 2 * k) res.transverse.add_term(idx, f);
    BivectorJet<R> expected = standard_split_bivector<R>(n, N, k) + res.transverse;
    if (!(cur == expected))
        throw NoSolutionError("split corrections did not stabilize");
    return res;
}

template <class R>
struct EquivariantWeinsteinResult {
    PolyMap<R> map;
    int pairs = 0;
    BivectorJet<R> split;
    BivectorJet<R> transverse;
    std::vector<Matrix<R>> action; // the linear action seen in the new coordinates
};

// Equivariant splitting: the starting linear frame is adapted to the image of
// Pi(0) together with an action-invariant complement, so the coordinate change
// commutes with the (linearly acting) symmetries and preserves both blocks.
template <class R>
EquivariantWeinsteinResult<R> equivariant_weinstein_split(const BivectorJet<R>& pin,
                                                          const std::vector<Matrix<R>>& As) {
    static_assert(ScalarTraits<R>::exact, "splitting needs exact coefficients");
    if (pin.degree() != 2) throw DimensionError("weinstein split expects a bivector");
    int n = pin.nvars(), N = pin.order();
    for (const auto& A : As)
        if (A.rows() != n || A.cols() != n) throw DimensionError("action arity mismatch");
    if (!is_poisson(pin)) throw NotPoissonError("schouten square of the input does not vanish");
    if (!is_invariant_bivector(pin, As))
        throw NotEquivariantError("bivector is not invariant under the action");

    Matrix<R> P0 = form_constant_matrix(pin);
    std::vector<int> ucols = detail::independent_columns(P0);
    int twk = static_cast<int>(ucols.size());
    int k = twk / 2, r = n - twk;

    Matrix<R> M = Matrix<R>::identity(n);
    if (twk > 0) {
        Matrix<R> C(n, twk);
        for (int j = 0; j < twk; ++j)
            for (int i = 0; i < n; ++i) C.at(i, j) = P0.at(i, ucols[j]);
        // complete C to a basis by standard vectors; [C | I] pivots past the
        // first twk give the completion
        Matrix<R> CI(n, twk + n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < twk; ++j) CI.at(i, j) = C.at(i, j);
            CI.at(i, twk + i) = ScalarTraits<R>::one();
        }
        std::vector<int> piv = detail::independent_columns(CI);
        Matrix<R> F(n, n);
        for (int j = 0; j < twk; ++j)
            for (int i = 0; i < n; ++i) F.at(i, j) = C.at(i, j);
        int col = twk;
        for (int pc : piv) {
            if (pc < twk) continue;
            F.at(pc - twk, col) = ScalarTraits<R>::one();
            ++col;
        }
        if (col != n) throw NoSolutionError("failed to complete a basis");
        Matrix<R> Finv = inverse_or_throw(F, "degenerate adapted frame");

        Matrix<R> Bw(n, r);
        if (r > 0) {
            // projector Q0 onto im Pi(0) along the naive complement
            Matrix<R> Q0(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    R s = ScalarTraits<R>::zero();
                    for (int l = 0; l < twk; ++l) s += F.at(i, l) * Finv.at(l, j);
                    Q0.at(i, j) = s;
                }
            // correct by X = C Y Rw (image in im Pi(0), vanishing there) so
            // that Q0 + X commutes with every generator
            Matrix<R> Rw(r, n);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < n; ++j) Rw.at(i, j) = Finv.at(twk + i, j);
            int nun = twk * r;
            int neq = static_cast<int>(As.size()) * n * n;
            Matrix<R> S(neq, nun);
            std::vector<R> rhs(neq, ScalarTraits<R>::zero());
            int row = 0;
            for (const auto& A : As) {
                Matrix<R> AC(n, twk), RA(r, n), AQ(n, n);
                for (int i = 0; i < n; ++i)
                    for (int q = 0; q < twk; ++q) {
                        R s = ScalarTraits<R>::zero();
                        for (int l = 0; l < n; ++l) s += A.at(i, l) * C.at(l, q);
                        AC.at(i, q) = s;
                    }
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < n; ++j) {
                        R s = ScalarTraits<R>::zero();
                        for (int l = 0; l < n; ++l) s += Rw.at(i, l) * A.at(l, j);
                        RA.at(i, j) = s;
                    }
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        R s = ScalarTraits<R>::zero();
                        for (int l = 0; l < n; ++l)
                            s += A.at(i, l) * Q0.at(l, j) - Q0.at(i, l) * A.at(l, j);
                        AQ.at(i, j) = s;
                    }
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        for (int pq = 0; pq < nun; ++pq) {
                            int pp = pq / r, qq = pq % r;
                            // coefficient of Y_{pp qq} in [A, C Y Rw]_{ij}
                            S.at(row, pq) = AC.at(i, pp) * Rw.at(qq, j) - C.at(i, pp) * RA.at(qq, j);
                        }
                        rhs[row] = -AQ.at(i, j);
                        ++row;
                    }
            }
            auto ysol = solve(S, rhs);
            if (!ysol)
                throw NotReductiveError("no invariant complement to the symplectic directions");
            Matrix<R> Q = Q0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    R s = ScalarTraits<R>::zero();
                    for (int pq = 0; pq < nun; ++pq)
                        s += C.at(i, pq / r) * (*ysol)[pq] * Rw.at(pq % r, j);
                    Q.at(i, j) += s;
                }
            auto kerq = nullspace(Q);
            if (static_cast<int>(kerq.size()) != r)
                throw NoSolutionError("projector correction lost rank");
            for (int j = 0; j < r; ++j)
                for (int i = 0; i < n; ++i) Bw.at(i, j) = kerq[j][i];
        }

        // pairing of Pi(0) expressed on the image basis, then skew-normalized
        Matrix<R> L(twk, n);
        for (int i = 0; i < twk; ++i)
            for (int j = 0; j < n; ++j) L.at(i, j) = Finv.at(i, j);
        Matrix<R> G(twk, twk);
        for (int i = 0; i < twk; ++i)
            for (int j = 0; j < twk; ++j) {
                R s = ScalarTraits<R>::zero();
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += L.at(i, a) * P0.at(a, b) * L.at(j, b);
                G.at(i, j) = s;
            }
        auto [Sg, kg] = skew_normal_basis(G);
        if (kg != k) throw NoSolutionError("pairing rank mismatch on the image");
        Matrix<R> Z = inverse_or_throw(Sg.transpose(), "degenerate pairing basis");
        Matrix<R> B(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < twk; ++j) {
                R s = ScalarTraits<R>::zero();
                for (int l = 0; l < twk; ++l) s += C.at(i, l) * Z.at(l, j);
                B.at(i, j) = s;
            }
            for (int j = 0; j < r; ++j) B.at(i, twk + j) = Bw.at(i, j);
        }
        M = inverse_or_throw(B, "adapted frame is singular");
    }

    PolyMap<R> lin = PolyMap<R>::linear(M, N + 1);
    BivectorJet<R> cur = bivector_pushforward(pin, lin);
    PolyMap<R> total = lin;
    std::vector<Matrix<R>> As2;
    As2.reserve(As.size());
    Matrix<R> Minv = inverse_or_throw(M, "adapted frame is singular");
    for (const auto& A : As) {
        Matrix<R> Ap(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                R s = ScalarTraits<R>::zero();
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += M.at(i, a) * A.at(a, b) * Minv.at(b, j);
                Ap.at(i, j) = s;
            }
        As2.push_back(std::move(Ap));
    }
    detail::weinstein_sweep(cur, total, k, &As2);

    EquivariantWeinsteinResult<R> res;
    res.pairs = k;
    res.split = cur;
    res.transverse = BivectorJet<R>(n, N, 2);
    for (const auto& [idx, f] : cur.terms())
        if (idx[0] >= twk) res.transverse.add_term(idx, f);
    BivectorJet<R> expected = standard_split_bivector<R>(n, N, k) + res.transverse;
    if (!(cur == expected)) throw NoSolutionError("split corrections did not stabilize");
    for (size_t a = 0; a < As.size(); ++a)
        for (const auto& dft : intertwine_defect(total, As[a], As2[a]))
            if (!dft.is_zero())
                throw NotEquivariantError("coordinate change failed to commute with the action");
    res.map = std::move(total);
    res.action = std::move(As2);
    return res;
}

} // namespace liejet
