#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "liejet/exceptions.hpp"
#include "liejet/scalars.hpp"

namespace liejet {

template <class R>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, ScalarTraits<R>::zero()) {}

    static Matrix identity(int n) {
        Matrix I(n, n);
        for (int i = 0; i < n; ++i) I.at(i, i) = ScalarTraits<R>::one();
        return I;
    }
    static Matrix from_rows(const std::vector<std::vector<R>>& rows) {
        if (rows.empty()) return Matrix();
        Matrix M(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < M.rows(); ++i) {
            if (static_cast<int>(rows[i].size()) != M.cols()) throw DimensionError("ragged matrix rows");
            for (int j = 0; j < M.cols(); ++j) M.at(i, j) = rows[i][j];
        }
        return M;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    R& at(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
    const R& at(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

    Matrix transpose() const {
        Matrix T(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) T.at(j, i) = at(i, j);
        return T;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.d_) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (ScalarTraits<R>::is_zero(a.at(i, k))) continue;
                for (int j = 0; j < b.cols_; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return r;
    }
    Matrix& scale(const R& c) {
        for (auto& x : d_) x = x * c;
        return *this;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

    std::vector<R> apply(const std::vector<R>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw DimensionError("matrix apply shape mismatch");
        std::vector<R> r(rows_, ScalarTraits<R>::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    R trace() const {
        R t = ScalarTraits<R>::zero();
        for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : d_)
            if (!ScalarTraits<R>::is_zero(x)) return false;
        return true;
    }

  private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
    }
    int rows_, cols_;
    std::vector<R> d_;
};

namespace detail {

// Forward elimination. Exact scalars use fraction-free (Bareiss) steps so no
// spurious pivot collapse can come from rounding; doubles use partial pivoting
// with an absolute threshold.
template <class R>
struct EchelonResult {
    Matrix<R> M;
    std::vector<int> pivot_cols;
    int swaps = 0;
};

template <class R>
EchelonResult<R> echelonize(Matrix<R> A, int lead_cols, double eps = 1e-12) {
    EchelonResult<R> res;
    int rows = A.rows();
    int r = 0;
    R prev = ScalarTraits<R>::one();
    for (int c = 0; c < lead_cols && r < rows; ++c) {
        int p = -1;
        if constexpr (ScalarTraits<R>::exact) {
            for (int i = r; i < rows; ++i)
                if (!ScalarTraits<R>::is_zero(A.at(i, c))) {
                    p = i;
                    break;
                }
        } else {
            double best = eps;
            for (int i = r; i < rows; ++i) {
                double v = ScalarTraits<R>::to_double(ScalarTraits<R>::abs(A.at(i, c)));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
        }
        if (p < 0) continue;
        if (p != r) {
            for (int j = 0; j < A.cols(); ++j) std::swap(A.at(p, j), A.at(r, j));
            ++res.swaps;
        }
        R piv = A.at(r, c);
        for (int i = r + 1; i < rows; ++i) {
            if constexpr (ScalarTraits<R>::exact) {
                R f = A.at(i, c);
                for (int j = 0; j < A.cols(); ++j)
                    A.at(i, j) = (piv * A.at(i, j) - f * A.at(r, j)) / prev;
            } else {
                R f = A.at(i, c) / piv;
                for (int j = 0; j < A.cols(); ++j) A.at(i, j) = A.at(i, j) - f * A.at(r, j);
                A.at(i, c) = ScalarTraits<R>::zero();
            }
        }
        if constexpr (ScalarTraits<R>::exact) prev = piv;
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.M = std::move(A);
    return res;
}

} // namespace detail

template <class R>
int rank(const Matrix<R>& A, double eps = 1e-12) {
    return static_cast<int>(detail::echelonize(A, A.cols(), eps).pivot_cols.size());
}

template <class R>
R det(const Matrix<R>& A, double eps = 1e-12) {
    if (A.rows() != A.cols()) throw DimensionError("determinant of non-square matrix");
    auto e = detail::echelonize(A, A.cols(), eps);
    if (static_cast<int>(e.pivot_cols.size()) < A.rows()) return ScalarTraits<R>::zero();
    R d = ScalarTraits<R>::one();
    if constexpr (ScalarTraits<R>::exact) {
        // Bareiss: the last pivot is the determinant up to row swaps
        d = e.M.at(A.rows() - 1, A.cols() - 1);
    } else {
        for (int i = 0; i < A.rows(); ++i) d = d * e.M.at(i, i);
    }
    return (e.swaps % 2 == 0) ? d : -d;
}

// Solves A X = B columnwise. Underdetermined systems take the deterministic
// particular solution with all free variables zero (pivots in column order).
template <class R>
std::optional<Matrix<R>> solve_many(const Matrix<R>& A, const Matrix<R>& B, double eps = 1e-12) {
    if (A.rows() != B.rows()) throw DimensionError("solve shape mismatch");
    int n = A.cols(), m = B.cols();
    Matrix<R> aug(A.rows(), n + m);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        for (int j = 0; j < m; ++j) aug.at(i, n + j) = B.at(i, j);
    }
    auto e = detail::echelonize(std::move(aug), n, eps);
    int rk = static_cast<int>(e.pivot_cols.size());
    for (int i = rk; i < A.rows(); ++i)
        for (int j = 0; j < m; ++j) {
            if constexpr (ScalarTraits<R>::exact) {
                if (!ScalarTraits<R>::is_zero(e.M.at(i, n + j))) return std::nullopt;
            } else {
                if (ScalarTraits<R>::to_double(ScalarTraits<R>::abs(e.M.at(i, n + j))) > eps) return std::nullopt;
            }
        }
    Matrix<R> X(n, m);
    for (int col = 0; col < m; ++col) {
        for (int i = rk - 1; i >= 0; --i) {
            int pc = e.pivot_cols[i];
            R acc = e.M.at(i, n + col);
            for (int j = pc + 1; j < n; ++j) {
                if (ScalarTraits<R>::is_zero(X.at(j, col))) continue;
                acc -= e.M.at(i, j) * X.at(j, col);
            }
            X.at(pc, col) = acc / e.M.at(i, pc);
        }
    }
    return X;
}

template <class R>
std::optional<std::vector<R>> solve(const Matrix<R>& A, const std::vector<R>& b, double eps = 1e-12) {
    Matrix<R> B(static_cast<int>(b.size()), 1);
    for (size_t i = 0; i < b.size(); ++i) B.at(static_cast<int>(i), 0) = b[i];
    auto X = solve_many(A, B, eps);
    if (!X) return std::nullopt;
    std::vector<R> x(A.cols());
    for (int i = 0; i < A.cols(); ++i) x[i] = X->at(i, 0);
    return x;
}

// Basis of the right kernel, one vector per free column.
template <class R>
std::vector<std::vector<R>> nullspace(const Matrix<R>& A, double eps = 1e-12) {
    auto e = detail::echelonize(A, A.cols(), eps);
    int rk = static_cast<int>(e.pivot_cols.size());
    std::vector<bool> is_pivot(A.cols(), false);
    for (int c : e.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<R>> basis;
    for (int f = 0; f < A.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<R> v(A.cols(), ScalarTraits<R>::zero());
        v[f] = ScalarTraits<R>::one();
        for (int i = rk - 1; i >= 0; --i) {
            int pc = e.pivot_cols[i];
            R acc = ScalarTraits<R>::zero();
            for (int j = pc + 1; j < A.cols(); ++j) {
                if (ScalarTraits<R>::is_zero(v[j])) continue;
                acc -= e.M.at(i, j) * v[j];
            }
            v[pc] = acc / e.M.at(i, pc);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class R>
Matrix<R> inverse_or_throw(const Matrix<R>& A, const char* msg) {
    if (A.rows() != A.cols()) throw NotInvertibleError(msg);
    // [A|I] has full row rank, so rank deficiency of A surfaces as inconsistency
    auto X = solve_many(A, Matrix<R>::identity(A.rows()));
    if (!X) throw NotInvertibleError(msg);
    return *X;
}

// Linear Darboux basis for a constant antisymmetric bilinear form: returns T
// with T^t B T = J (+) 0, pairs interleaved first, kernel directions last,
// together with the number of pairs.
template <class R>
std::pair<Matrix<R>, int> skew_normal_basis(const Matrix<R>& B) {
    if (B.rows() != B.cols()) throw DimensionError("skew form must be square");
    int n = B.rows();
    auto pair_with = [&](const std::vector<R>& u, const std::vector<R>& v) {
        R s = ScalarTraits<R>::zero();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += u[i] * B.at(i, j) * v[j];
        return s;
    };
    std::vector<std::vector<R>> remaining;
    for (int i = 0; i < n; ++i) {
        std::vector<R> e(n, ScalarTraits<R>::zero());
        e[i] = ScalarTraits<R>::one();
        remaining.push_back(std::move(e));
    }
    std::vector<std::vector<R>> pairs;
    bool found = true;
    while (found) {
        found = false;
        for (size_t a = 0; a < remaining.size() && !found; ++a) {
            for (size_t b = a + 1; b < remaining.size() && !found; ++b) {
                R w = pair_with(remaining[a], remaining[b]);
                if (ScalarTraits<R>::is_zero(w)) continue;
                std::vector<R> u = remaining[a];
                std::vector<R> v = remaining[b];
                for (auto& x : v) x = x / w; // B(u, v) = 1
                remaining.erase(remaining.begin() + b);
                remaining.erase(remaining.begin() + a);
                for (auto& rvec : remaining) {
                    R bu = pair_with(rvec, u);
                    R bv = pair_with(rvec, v);
                    // r -> r - B(r,v) u + B(r,u) v kills both pairings
                    for (int i = 0; i < n; ++i) rvec[i] = rvec[i] - bv * u[i] + bu * v[i];
                }
                pairs.push_back(std::move(u));
                pairs.push_back(std::move(v));
                found = true;
            }
        }
    }
    Matrix<R> T(n, n);
    int col = 0;
    for (const auto& p : pairs) {
        for (int i = 0; i < n; ++i) T.at(i, col) = p[i];
        ++col;
    }
    for (const auto& rvec : remaining) {
        for (int i = 0; i < n; ++i) T.at(i, col) = rvec[i];
        ++col;
    }
    return {T, static_cast<int>(pairs.size() / 2)};
}

} // namespace liejet
