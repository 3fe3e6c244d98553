#pragma once

#include <vector>

#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

// Finite-dimensional real Lie algebra given by structure constants:
// [e_i, e_j] = sum_k c(i,j,k) e_k. Antisymmetry and Jacobi are enforced.
template <class R>
class LieAlgebra {
  public:
    LieAlgebra(int dim, std::vector<R> table) : dim_(dim), c_(std::move(table)) {
        if (dim < 1 || static_cast<int>(c_.size()) != dim * dim * dim)
            throw DimensionError("structure constant table has wrong size");
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k)
                    if (!ScalarTraits<R>::is_zero(c(i, j, k) + c(j, i, k)))
                        throw InvalidMapError("structure constants not antisymmetric");
        for (int i = 0; i < dim_; ++i)
            for (int j = i + 1; j < dim_; ++j)
                for (int k = j + 1; k < dim_; ++k)
                    for (int m = 0; m < dim_; ++m) {
                        R s = ScalarTraits<R>::zero();
                        for (int l = 0; l < dim_; ++l) {
                            s += c(i, j, l) * c(l, k, m);
                            s += c(j, k, l) * c(l, i, m);
                            s += c(k, i, l) * c(l, j, m);
                        }
                        if (!ScalarTraits<R>::is_zero(s)) throw InvalidMapError("Jacobi identity fails");
                    }
    }

    int dim() const { return dim_; }
    const R& c(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }

    std::vector<R> bracket_coeffs(int i, int j) const {
        std::vector<R> out(dim_);
        for (int k = 0; k < dim_; ++k) out[k] = c(i, j, k);
        return out;
    }

    // ad_i e_j = sum_k c(i,j,k) e_k, so column j of ad(i) holds c(i,j,.)
    Matrix<R> ad(int i) const {
        Matrix<R> A(dim_, dim_);
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k) A.at(k, j) = c(i, j, k);
        return A;
    }

    // Killing form B_ij = tr(ad_i ad_j)
    Matrix<R> killing() const {
        Matrix<R> B(dim_, dim_);
        for (int i = 0; i < dim_; ++i) {
            Matrix<R> ai = ad(i);
            for (int j = 0; j < dim_; ++j) B.at(i, j) = (ai * ad(j)).trace();
        }
        return B;
    }

    bool is_semisimple() const { return !ScalarTraits<R>::is_zero(det(killing())); }

    // basis (X, Y, Z) with [X,Y] = -Z, [Z,X] = Y, [Z,Y] = -X
    static LieAlgebra sl2() {
        auto Z = ScalarTraits<R>::zero;
        auto O = ScalarTraits<R>::one;
        std::vector<R> c(27, Z());
        auto set = [&](int i, int j, int k, R v) {
            c[(i * 3 + j) * 3 + k] = v;
            c[(j * 3 + i) * 3 + k] = -v;
        };
        set(0, 1, 2, -O()); // [X,Y] = -Z
        set(2, 0, 1, O());  // [Z,X] = Y
        set(2, 1, 0, -O()); // [Z,Y] = -X
        return LieAlgebra(3, std::move(c));
    }

  private:
    int dim_;
    std::vector<R> c_; // c_[(i*dim+j)*dim+k]
};

// Action of a Lie algebra by vector fields vanishing at the origin, stored as
// one field per basis element. The homomorphism property [v_i, v_j] =
// sum_k c(i,j,k) v_k is checked by check_representation, not the constructor,
// so near-representations (inputs under test) can be represented too.
template <class R>
struct Representation {
    LieAlgebra<R> algebra;
    std::vector<VectorFieldJet<R>> fields;

    Representation(LieAlgebra<R> alg, std::vector<VectorFieldJet<R>> flds)
        : algebra(std::move(alg)), fields(std::move(flds)) {
        if (static_cast<int>(fields.size()) != algebra.dim())
            throw DimensionError("one field per basis element required");
        for (const auto& f : fields)
            if (f.nvars() != fields[0].nvars() || f.order() != fields[0].order())
                throw DimensionError("representation fields disagree on nvars/order");
    }

    int nvars() const { return fields[0].nvars(); }
    int order() const { return fields[0].order(); }

    // matrices A_i with v_i = A_i x + higher order; they close under
    // [A_i, A_j] + sum_k c(i,j,k) A_k = 0 whenever the fields represent
    std::vector<Matrix<R>> linear_parts() const {
        std::vector<Matrix<R>> out;
        out.reserve(fields.size());
        for (const auto& f : fields) out.push_back(f.linear_part_matrix());
        return out;
    }
};

// [v_i, v_j] - sum_k c(i,j,k) v_k for one pair
template <class R>
VectorFieldJet<R> representation_defect(const Representation<R>& rep, int i, int j) {
    VectorFieldJet<R> d = bracket_vf(rep.fields[i], rep.fields[j]);
    for (int k = 0; k < rep.algebra.dim(); ++k) {
        const R& ck = rep.algebra.c(i, j, k);
        if (ScalarTraits<R>::is_zero(ck)) continue;
        VectorFieldJet<R> t = rep.fields[k];
        t.scale(ck);
        d -= t;
    }
    return d;
}

template <class R>
bool check_representation(const Representation<R>& rep) {
    for (int i = 0; i < rep.algebra.dim(); ++i)
        for (int j = i + 1; j < rep.algebra.dim(); ++j)
            if (!representation_defect(rep, i, j).is_zero()) return false;
    return true;
}

// Conjugate the whole action by the coordinate change m (square, invertible
// linear part). One shared inverse and jacobian serve every field.
template <class R>
Representation<R> pushforward_rep(const Representation<R>& rep, const PolyMap<R>& m) {
    if (m.dim() != m.nvars() || m.nvars() != rep.nvars())
        throw DimensionError("pushforward arity mismatch");
    if (m.order() < rep.order()) throw DimensionError("map order too low for pushforward");
    int n = rep.nvars(), N = rep.order();
    PolyMap<R> minv = polymap_inverse(m).truncated(N);
    auto J = m.jacobian();
    std::vector<VectorFieldJet<R>> out;
    out.reserve(rep.fields.size());
    for (const auto& v : rep.fields) {
        // Dm(x) v(x) in source coordinates, then substitute x = m^{-1}(y)
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
        out.emplace_back(std::move(comp));
    }
    return Representation<R>(rep.algebra, std::move(out));
}

} // namespace liejet
