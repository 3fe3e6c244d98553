#pragma once

#include <vector>

#include "liejet/jet.hpp"
#include "liejet/matrix.hpp"

namespace liejet {

// Formal coordinate change germ at 0: m(0) = 0, components are jets.
// Only maps R^n -> R^n with invertible linear part get inverted/composed here.
template <class R>
class PolyMap {
  public:
    PolyMap() = default;
    explicit PolyMap(std::vector<Jet<R>> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) throw InvalidMapError("empty map");
        for (const auto& c : comps_) {
            if (c.nvars() != comps_[0].nvars() || c.order() != comps_[0].order())
                throw DimensionError("map components disagree on nvars/order");
            if (!ScalarTraits<R>::is_zero(c.constant_term()))
                throw InvalidMapError("map must fix the origin");
        }
    }

    static PolyMap identity(int nvars, int order) {
        std::vector<Jet<R>> c;
        c.reserve(nvars);
        for (int i = 0; i < nvars; ++i) c.push_back(Jet<R>::variable(nvars, order, i));
        return PolyMap(std::move(c));
    }

    static PolyMap linear(const Matrix<R>& A, int order) {
        if (A.rows() != A.cols()) throw InvalidMapError("linear map must be square");
        int n = A.rows();
        std::vector<Jet<R>> c;
        c.reserve(n);
        for (int i = 0; i < n; ++i) {
            Jet<R> ji(n, order);
            for (int j = 0; j < n; ++j) {
                if (ScalarTraits<R>::is_zero(A.at(i, j))) continue;
                Mono m(n, 0);
                m[j] = 1;
                ji.add_term(m, A.at(i, j));
            }
            c.push_back(std::move(ji));
        }
        return PolyMap(std::move(c));
    }

    int nvars() const { return comps_[0].nvars(); }
    int dim() const { return static_cast<int>(comps_.size()); }
    int order() const { return comps_[0].order(); }
    const std::vector<Jet<R>>& components() const { return comps_; }
    const Jet<R>& component(int i) const { return comps_[i]; }

    Matrix<R> linear_matrix() const {
        int n = nvars();
        Matrix<R> A(dim(), n);
        for (int i = 0; i < dim(); ++i) {
            for (int j = 0; j < n; ++j) {
                Mono m(n, 0);
                m[j] = 1;
                A.at(i, j) = comps_[i].coeff(m);
            }
        }
        return A;
    }

    bool has_identity_linear_part() const {
        if (dim() != nvars()) return false;
        Matrix<R> A = linear_matrix();
        return A == Matrix<R>::identity(nvars());
    }

    // entries d(comps_[i])/dx_j
    std::vector<std::vector<Jet<R>>> jacobian() const {
        std::vector<std::vector<Jet<R>>> J(dim());
        for (int i = 0; i < dim(); ++i) {
            J[i].reserve(nvars());
            for (int j = 0; j < nvars(); ++j) J[i].push_back(comps_[i].derivative(j));
        }
        return J;
    }

    friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.comps_ == b.comps_; }

    // this, then g: x -> g(this(x))
    PolyMap then(const PolyMap& g) const {
        if (g.nvars() != dim()) throw DimensionError("pipeline arity mismatch");
        std::vector<const Jet<R>*> fs;
        fs.reserve(g.dim());
        for (int i = 0; i < g.dim(); ++i) fs.push_back(&g.comps_[i]);
        return PolyMap(Jet<R>::compose_many(fs, comps_));
    }

    PolyMap truncated(int order) const {
        std::vector<Jet<R>> c;
        c.reserve(comps_.size());
        for (const auto& j : comps_) c.push_back(j.truncated(order));
        return PolyMap(std::move(c));
    }

  private:
    std::vector<Jet<R>> comps_;
};

// Spec order: apply m1 first, then m2.
template <class R>
PolyMap<R> polymap_compose(const PolyMap<R>& m1, const PolyMap<R>& m2) {
    return m1.then(m2);
}

template <class R>
Jet<R> jet_compose(const Jet<R>& f, const PolyMap<R>& m) {
    if (m.dim() != f.nvars()) throw DimensionError("composition arity mismatch");
    return f.compose(m.components());
}

// Formal inverse of a square map with invertible linear part: with
// m(x) = Lx + g(x), iterate n(x) = Linv(x - g(n(x))); converges in order()
// steps since g starts at degree 2.
template <class R>
PolyMap<R> polymap_inverse(const PolyMap<R>& m) {
    if (m.dim() != m.nvars()) throw NotInvertibleError("inverse needs a square map");
    int n = m.nvars(), N = m.order();
    Matrix<R> L = m.linear_matrix();
    Matrix<R> Linv = inverse_or_throw(L, "map has singular linear part");
    PolyMap<R> linv = PolyMap<R>::linear(Linv, N);
    // g = m - L
    PolyMap<R> lin = PolyMap<R>::linear(L, N);
    std::vector<Jet<R>> g;
    g.reserve(n);
    for (int i = 0; i < n; ++i) g.push_back(m.component(i) - lin.component(i));
    std::vector<const Jet<R>*> gp;
    gp.reserve(n);
    for (int i = 0; i < n; ++i) gp.push_back(&g[i]);
    PolyMap<R> inv = linv;
    for (int it = 0; it < N; ++it) {
        // x - g(inv(x)), then apply Linv
        auto gofinv = Jet<R>::compose_many(gp, inv.components());
        std::vector<Jet<R>> c;
        c.reserve(n);
        for (int i = 0; i < n; ++i)
            c.push_back(Jet<R>::variable(n, N, i) - gofinv[i]);
        PolyMap<R> next = PolyMap<R>(std::move(c)).then(linv);
        if (next == inv) break;
        inv = next;
    }
    return inv;
}

} // namespace liejet
