#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "liejet/jet.hpp"
#include "liejet/polymap.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

// Strictly increasing index tuple labelling dx_{i1} ^ ... ^ dx_{ik}.
using FormIndex = std::vector<int>;

// Differential k-form with jet coefficients. Degree may formally exceed the
// number of variables (such a form is identically zero but can still be the
// result type of d or wedge).
template <class R>
class FormJet {
  public:
    using Terms = std::map<FormIndex, Jet<R>>;

    FormJet() : nvars_(0), order_(0), deg_(0) {}
    FormJet(int nvars, int order, int degree) : nvars_(nvars), order_(order), deg_(degree) {
        if (nvars < 1 || order < 0 || degree < 0) throw DimensionError("bad form signature");
    }

    static FormJet from_function(const Jet<R>& f) {
        FormJet w(f.nvars(), f.order(), 0);
        if (!f.is_zero()) w.terms_.emplace(FormIndex{}, f);
        return w;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    int degree() const { return deg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // idx must be strictly increasing
    Jet<R> coeff(const FormIndex& idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? Jet<R>(nvars_, order_) : it->second;
    }

    void set_coeff(const FormIndex& idx, Jet<R> f) {
        validate_sorted(idx);
        if (f.is_zero())
            terms_.erase(idx);
        else
            terms_[idx] = std::move(f);
    }

    // idx in any order; sorts, tracks the permutation sign, drops repeats
    void add_term(FormIndex idx, const Jet<R>& f) {
        if (static_cast<int>(idx.size()) != deg_) throw DimensionError("form index arity mismatch");
        if (f.is_zero()) return;
        bool flip = false;
        for (size_t i = 1; i < idx.size(); ++i)
            for (size_t j = idx.size() - 1; j >= i; --j) {
                if (idx[j - 1] == idx[j]) return;
                if (idx[j - 1] > idx[j]) {
                    std::swap(idx[j - 1], idx[j]);
                    flip = !flip;
                }
            }
        for (int v : idx)
            if (v < 0 || v >= nvars_) throw DimensionError("form index out of range");
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(std::move(idx), flip ? -f : f);
        } else {
            if (flip)
                it->second -= f;
            else
                it->second += f;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    FormJet& operator+=(const FormJet& o) {
        check_same(o);
        for (const auto& [i, f] : o.terms_) {
            auto it = terms_.find(i);
            if (it == terms_.end()) {
                terms_.emplace(i, f);
            } else {
                it->second += f;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }
    FormJet& operator-=(const FormJet& o) {
        check_same(o);
        for (const auto& [i, f] : o.terms_) {
            auto it = terms_.find(i);
            if (it == terms_.end()) {
                terms_.emplace(i, -f);
            } else {
                it->second -= f;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }
    friend FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
    friend FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
    friend FormJet operator-(const FormJet& a) {
        FormJet r = a;
        for (auto& [i, f] : r.terms_) f = -f;
        return r;
    }
    FormJet& scale(const R& c) {
        if (ScalarTraits<R>::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [i, f] : terms_) f.scale(c);
        return *this;
    }
    // f * omega
    FormJet& jet_scale(const Jet<R>& f) {
        Terms out;
        for (auto& [i, g] : terms_) {
            Jet<R> p = f * g;
            if (!p.is_zero()) out.emplace(i, std::move(p));
        }
        terms_ = std::move(out);
        return *this;
    }
    friend bool operator==(const FormJet& a, const FormJet& b) {
        return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.deg_ == b.deg_ && a.terms_ == b.terms_;
    }

    FormJet truncated(int order) const {
        FormJet r(nvars_, order, deg_);
        for (const auto& [i, f] : terms_) {
            Jet<R> t = f.truncated(order);
            if (!t.is_zero()) r.terms_.emplace(i, std::move(t));
        }
        return r;
    }

    // keep only coefficient terms of polynomial degree exactly k
    FormJet coeff_part_of_degree(int k) const {
        FormJet r(nvars_, order_, deg_);
        for (const auto& [i, f] : terms_) {
            Jet<R> t = f.part_of_degree(k);
            if (!t.is_zero()) r.terms_.emplace(i, std::move(t));
        }
        return r;
    }

    // smallest polynomial degree among all coefficients, -1 for the zero form
    int min_coeff_degree() const {
        int md = -1;
        for (const auto& [i, f] : terms_) {
            int d = f.min_degree();
            if (d >= 0 && (md < 0 || d < md)) md = d;
        }
        return md;
    }

  private:
    void check_same(const FormJet& o) const {
        if (nvars_ != o.nvars_ || order_ != o.order_ || deg_ != o.deg_)
            throw DimensionError("form signature mismatch");
    }
    void validate_sorted(const FormIndex& idx) const {
        if (static_cast<int>(idx.size()) != deg_) throw DimensionError("form index arity mismatch");
        for (size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 0 || idx[i] >= nvars_) throw DimensionError("form index out of range");
            if (i > 0 && idx[i - 1] >= idx[i]) throw DimensionError("form index not strictly increasing");
        }
    }

    int nvars_, order_, deg_;
    Terms terms_;
};

template <class R>
FormJet<R> wedge(const FormJet<R>& a, const FormJet<R>& b) {
    if (a.nvars() != b.nvars() || a.order() != b.order())
        throw DimensionError("wedge signature mismatch");
    FormJet<R> r(a.nvars(), a.order(), a.degree() + b.degree());
    for (const auto& [ia, fa] : a.terms())
        for (const auto& [ib, fb] : b.terms()) {
            Jet<R> p = fa * fb;
            if (p.is_zero()) continue;
            FormIndex idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), p);
        }
    return r;
}

template <class R>
FormJet<R> exterior_d(const FormJet<R>& w) {
    FormJet<R> r(w.nvars(), w.order(), w.degree() + 1);
    for (const auto& [i, f] : w.terms()) {
        for (int j = 0; j < w.nvars(); ++j) {
            Jet<R> df = f.derivative(j);
            if (df.is_zero()) continue;
            FormIndex idx;
            idx.reserve(i.size() + 1);
            idx.push_back(j);
            idx.insert(idx.end(), i.begin(), i.end());
            r.add_term(std::move(idx), df);
        }
    }
    return r;
}

// i_v w: contract the first slot
template <class R>
FormJet<R> interior(const VectorFieldJet<R>& v, const FormJet<R>& w) {
    if (v.nvars() != w.nvars()) throw DimensionError("interior product arity mismatch");
    if (w.degree() == 0) throw DimensionError("interior product needs degree >= 1");
    FormJet<R> r(w.nvars(), w.order(), w.degree() - 1);
    for (const auto& [i, f] : w.terms()) {
        for (size_t p = 0; p < i.size(); ++p) {
            const Jet<R>& vc = v.component(i[p]);
            if (vc.is_zero()) continue;
            Jet<R> t = vc.truncated(w.order()) * f;
            if (p % 2 == 1) t = -t;
            if (t.is_zero()) continue;
            FormIndex idx;
            idx.reserve(i.size() - 1);
            for (size_t q = 0; q < i.size(); ++q)
                if (q != p) idx.push_back(i[q]);
            r.add_term(std::move(idx), t);
        }
    }
    return r;
}

// m^* w. m may carry a higher order than w; the result is truncated back to
// w's order, which is exact since maps are genuine polynomials.
template <class R>
FormJet<R> pullback(const FormJet<R>& w, const PolyMap<R>& m) {
    if (m.dim() != w.nvars()) throw DimensionError("pullback arity mismatch");
    if (m.order() < w.order()) throw DimensionError("map order too low for pullback");
    int n = m.nvars(), N = w.order();
    FormJet<R> r(n, N, w.degree());
    if (w.is_zero()) return r;
    auto J = m.jacobian(); // J[i][j] = d m_i / d x_j, order m.order()
    // dm_i as rows of truncated jacobian entries
    std::vector<std::vector<Jet<R>>> dm(w.nvars());
    for (int i = 0; i < w.nvars(); ++i) {
        dm[i].reserve(n);
        for (int j = 0; j < n; ++j) dm[i].push_back(J[i][j].truncated(N));
    }
    std::vector<const Jet<R>*> coeffs;
    std::vector<const FormIndex*> keys;
    for (const auto& [idx, f] : w.terms()) {
        keys.push_back(&idx);
        coeffs.push_back(&f);
    }
    auto composed = Jet<R>::compose_many(coeffs, m.components());
    for (size_t t = 0; t < keys.size(); ++t) {
        const FormIndex& idx = *keys[t];
        Jet<R> fc = composed[t].truncated(N);
        if (fc.is_zero()) continue;
        // expand dm_{i1} ^ ... ^ dm_{ik} term by term
        FormJet<R> acc(n, N, 0);
        acc.set_coeff(FormIndex{}, fc);
        for (int p = 0; p < static_cast<int>(idx.size()); ++p) {
            FormJet<R> one(n, N, 1);
            for (int j = 0; j < n; ++j) one.add_term(FormIndex{j}, dm[idx[p]][j]);
            acc = wedge(acc, one);
            if (acc.is_zero()) break;
        }
        r += acc;
    }
    return r;
}

// Cartan formula L_v w = i_v dw + d i_v w
template <class R>
FormJet<R> lie_derivative(const VectorFieldJet<R>& v, const FormJet<R>& w) {
    if (w.degree() == 0) {
        FormJet<R> r(w.nvars(), w.order(), 0);
        Jet<R> f = w.coeff(FormIndex{});
        Jet<R> lf = v.apply(f);
        if (!lf.is_zero()) r.set_coeff(FormIndex{}, lf);
        return r;
    }
    return interior(v, exterior_d(w)) + exterior_d(interior(v, w));
}

// Exterior derivative in a subset of the variables only; the others ride
// along as parameters. active[i] != 0 marks variable i as differentiated.
template <class R>
FormJet<R> exterior_d_masked(const FormJet<R>& w, const std::vector<char>& active) {
    int n = w.nvars();
    if (static_cast<int>(active.size()) != n) throw DimensionError("mask arity mismatch");
    FormJet<R> r(n, w.order(), w.degree() + 1);
    for (const auto& [idx, f] : w.terms())
        for (int j = 0; j < n; ++j) {
            if (!active[j]) continue;
            Jet<R> df = f.derivative(j);
            if (df.is_zero()) continue;
            FormIndex ext;
            ext.reserve(idx.size() + 1);
            ext.push_back(j);
            ext.insert(ext.end(), idx.begin(), idx.end());
            r.add_term(ext, df);
        }
    return r;
}

// Radial homotopy in a subset of the variables: valid for forms whose index
// slots all lie in the active set and which are closed for the masked
// derivative; the inactive variables are parameters. Polynomial degree is
// counted in the active variables only.
template <class R>
FormJet<R> poincare_primitive_masked(const FormJet<R>& w, const std::vector<char>& active) {
    if (w.degree() < 1) throw DimensionError("primitive needs degree >= 1");
    int n = w.nvars(), N = w.order(), k = w.degree();
    if (static_cast<int>(active.size()) != n) throw DimensionError("mask arity mismatch");
    for (const auto& [idx, f] : w.terms())
        for (int s : idx)
            if (!active[s]) throw DimensionError("form has slots outside the active set");
    if (!exterior_d_masked(w, active).is_zero()) throw NotClosedError("primitive needs a closed form");
    FormJet<R> r(n, N, k - 1);
    for (const auto& [idx, f] : w.terms()) {
        for (size_t p = 0; p < idx.size(); ++p) {
            FormIndex sub;
            sub.reserve(idx.size() - 1);
            for (size_t q = 0; q < idx.size(); ++q)
                if (q != p) sub.push_back(idx[q]);
            for (const auto& [mono, c] : f.terms()) {
                int d = 0;
                for (int i = 0; i < n; ++i)
                    if (active[i]) d += mono[i];
                if (mono_degree(mono) + 1 > N) continue;
                Mono m2 = mono;
                m2[idx[p]] += 1;
                R val = c * ScalarTraits<R>::from_ratio(1, d + k);
                if (p % 2 == 1) val = -val;
                Jet<R> t = Jet<R>::monomial(n, N, std::move(m2), std::move(val));
                r.add_term(sub, t);
            }
        }
    }
    return r;
}

// Radial-homotopy primitive: for w closed of degree k >= 1, each coefficient
// piece of polynomial degree d contributes i_E(piece)/(d + k), E the Euler
// field. Then d(primitive(w)) = w. Coefficient degree can rise by one, so
// callers must keep relevant degrees below the jet order.
template <class R>
FormJet<R> poincare_primitive(const FormJet<R>& w) {
    if (w.degree() < 1) throw DimensionError("primitive needs degree >= 1");
    if (!exterior_d(w).is_zero()) throw NotClosedError("primitive needs a closed form");
    int n = w.nvars(), N = w.order(), k = w.degree();
    FormJet<R> r(n, N, k - 1);
    for (const auto& [idx, f] : w.terms()) {
        // i_E (f dx_idx) = sum_p (-1)^p x_{idx[p]} f dx_{idx minus p}
        for (size_t p = 0; p < idx.size(); ++p) {
            FormIndex sub;
            sub.reserve(idx.size() - 1);
            for (size_t q = 0; q < idx.size(); ++q)
                if (q != p) sub.push_back(idx[q]);
            for (const auto& [mono, c] : f.terms()) {
                int d = mono_degree(mono);
                if (d + 1 > N) continue;
                Mono m2 = mono;
                m2[idx[p]] += 1;
                R val = c * ScalarTraits<R>::from_ratio(1, d + k);
                if (p % 2 == 1) val = -val;
                Jet<R> t = Jet<R>::monomial(n, N, std::move(m2), std::move(val));
                r.add_term(sub, t);
            }
        }
    }
    return r;
}

} // namespace liejet
