#pragma once

#include <vector>

#include "liejet/jet.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"

namespace liejet {

// Polynomial vector field germ on R^n, components truncated at a fixed order.
// No constraint at the origin: v(0) may be nonzero (fields vanishing at 0 are
// the interesting case, but evaluation and brackets make sense regardless).
template <class R>
class VectorFieldJet {
  public:
    VectorFieldJet() = default;
    explicit VectorFieldJet(std::vector<Jet<R>> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) throw DimensionError("empty vector field");
        for (const auto& c : comps_)
            if (c.nvars() != static_cast<int>(comps_.size()) || c.order() != comps_[0].order())
                throw DimensionError("field components disagree on nvars/order");
    }

    static VectorFieldJet zero(int nvars, int order) {
        return VectorFieldJet(std::vector<Jet<R>>(nvars, Jet<R>(nvars, order)));
    }
    // v(x) = A x
    static VectorFieldJet from_linear(const Matrix<R>& A, int order) {
        if (A.rows() != A.cols()) throw DimensionError("linear field matrix must be square");
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
        return VectorFieldJet(std::move(c));
    }

    int nvars() const { return static_cast<int>(comps_.size()); }
    int order() const { return comps_[0].order(); }
    const std::vector<Jet<R>>& components() const { return comps_; }
    const Jet<R>& component(int i) const { return comps_[i]; }
    Jet<R>& component(int i) { return comps_[i]; }

    bool is_zero() const {
        for (const auto& c : comps_)
            if (!c.is_zero()) return false;
        return true;
    }

    // coefficient matrix of the degree-1 part, v = Ax + higher order
    Matrix<R> linear_part_matrix() const {
        int n = nvars();
        Matrix<R> A(n, n);
        Mono m(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                m[j] = 1;
                A.at(i, j) = comps_[i].coeff(m);
                m[j] = 0;
            }
        return A;
    }

    VectorFieldJet& operator+=(const VectorFieldJet& o) {
        check_same(o);
        for (int i = 0; i < nvars(); ++i) comps_[i] += o.comps_[i];
        return *this;
    }
    VectorFieldJet& operator-=(const VectorFieldJet& o) {
        check_same(o);
        for (int i = 0; i < nvars(); ++i) comps_[i] -= o.comps_[i];
        return *this;
    }
    friend VectorFieldJet operator+(VectorFieldJet a, const VectorFieldJet& b) { return a += b; }
    friend VectorFieldJet operator-(VectorFieldJet a, const VectorFieldJet& b) { return a -= b; }
    friend VectorFieldJet operator-(const VectorFieldJet& a) {
        VectorFieldJet r = a;
        for (auto& c : r.comps_) c = -c;
        return r;
    }
    VectorFieldJet& scale(const R& c) {
        for (auto& j : comps_) j.scale(c);
        return *this;
    }
    // function multiple f * v
    VectorFieldJet& jet_scale(const Jet<R>& f) {
        for (auto& j : comps_) j = f * j;
        return *this;
    }
    friend bool operator==(const VectorFieldJet& a, const VectorFieldJet& b) { return a.comps_ == b.comps_; }

    // directional derivative v(f) = sum v^i d_i f
    Jet<R> apply(const Jet<R>& f) const {
        if (f.nvars() != nvars()) throw DimensionError("field/function arity mismatch");
        Jet<R> r(nvars(), f.order());
        for (int i = 0; i < nvars(); ++i) {
            if (comps_[i].is_zero()) continue;
            r += (comps_[i].truncated(f.order()) * f.derivative(i));
        }
        return r;
    }

    std::vector<R> eval(const std::vector<R>& pt) const {
        std::vector<R> out;
        out.reserve(comps_.size());
        for (const auto& c : comps_) out.push_back(c.eval(pt));
        return out;
    }

    VectorFieldJet part_of_degree(int k) const {
        VectorFieldJet r = *this;
        for (auto& c : r.comps_) c = c.part_of_degree(k);
        return r;
    }

    VectorFieldJet truncated(int order) const {
        VectorFieldJet r = *this;
        for (auto& c : r.comps_) c = c.truncated(order);
        return r;
    }

    // smallest total degree appearing in any component, -1 for the zero field
    int min_degree() const {
        int md = -1;
        for (const auto& c : comps_) {
            int d = c.min_degree();
            if (d >= 0 && (md < 0 || d < md)) md = d;
        }
        return md;
    }

  private:
    void check_same(const VectorFieldJet& o) const {
        if (nvars() != o.nvars() || order() != o.order())
            throw DimensionError("vector field nvars/order mismatch");
    }
    std::vector<Jet<R>> comps_;
};

// [v, w]^i = sum_j v^j d_j w^i - w^j d_j v^i
template <class R>
VectorFieldJet<R> bracket_vf(const VectorFieldJet<R>& v, const VectorFieldJet<R>& w) {
    if (v.nvars() != w.nvars() || v.order() != w.order())
        throw DimensionError("bracket arity mismatch");
    std::vector<Jet<R>> c;
    c.reserve(v.nvars());
    for (int i = 0; i < v.nvars(); ++i)
        c.push_back(v.apply(w.component(i)) - w.apply(v.component(i)));
    return VectorFieldJet<R>(std::move(c));
}

// (m_* v)(y) = Dm(x) v(x) at x = m^{-1}(y); the field seen in the coordinates
// y = m(x). m must be square with invertible linear part and order >= v's.
template <class R>
VectorFieldJet<R> pushforward_vf(const VectorFieldJet<R>& v, const PolyMap<R>& m) {
    if (m.dim() != m.nvars() || m.nvars() != v.nvars())
        throw DimensionError("pushforward arity mismatch");
    if (m.order() < v.order()) throw DimensionError("map order too low for pushforward");
    int n = v.nvars(), N = v.order();
    PolyMap<R> minv = polymap_inverse(m).truncated(N);
    auto J = m.jacobian();
    // Dm(x) v(x) first, then substitute x = m^{-1}(y) in one pass
    std::vector<Jet<R>> accs;
    accs.reserve(n);
    for (int i = 0; i < n; ++i) {
        Jet<R> acc(n, N);
        for (int j = 0; j < n; ++j) {
            if (v.component(j).is_zero() || J[i][j].is_zero()) continue;
            acc += J[i][j].truncated(N) * v.component(j);
        }
        accs.push_back(std::move(acc));
    }
    std::vector<const Jet<R>*> ap;
    ap.reserve(n);
    for (const auto& a : accs) ap.push_back(&a);
    auto comp = Jet<R>::compose_many(ap, minv.components());
    std::vector<Jet<R>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(comp[i].truncated(N));
    return VectorFieldJet<R>(std::move(out));
}

// Euler field sum x_i d_i
template <class R>
VectorFieldJet<R> euler_field(int nvars, int order) {
    std::vector<Jet<R>> c;
    c.reserve(nvars);
    for (int i = 0; i < nvars; ++i) c.push_back(Jet<R>::variable(nvars, order, i));
    return VectorFieldJet<R>(std::move(c));
}

} // namespace liejet
