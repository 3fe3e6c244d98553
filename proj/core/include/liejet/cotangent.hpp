#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "liejet/form.hpp"
#include "liejet/jet.hpp"
#include "liejet/lie.hpp"
#include "liejet/matrix.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

// Phase-space bookkeeping: base variables first, fiber variables after, so
// variable i pairs with variable base+i. Three base variables get the
// traditional names (x,y,z,a,b,c).
struct CotangentContext {
    int base = 0;
    std::vector<std::string> names;

    explicit CotangentContext(int n) : base(n) {
        if (n <= 0) throw DimensionError("base dimension must be positive");
        if (n == 3) {
            names = {"x", "y", "z", "a", "b", "c"};
        } else {
            for (int i = 0; i < n; ++i) names.push_back("q" + std::to_string(i + 1));
            for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i + 1));
        }
    }
    int dim() const { return 2 * base; }
    int qvar(int i) const { return i; }
    int pvar(int i) const { return base + i; }
};

// theta = sum p_i dq_i
template <class R>
FormJet<R> liouville_form(int base, int order) {
    FormJet<R> w(2 * base, order, 1);
    for (int i = 0; i < base; ++i)
        w.set_coeff({i}, Jet<R>::variable(2 * base, order, base + i));
    return w;
}

// d theta = sum dp_i ^ dq_i; in sorted index order the (q_i, p_i) slot
// carries coefficient -1.
template <class R>
FormJet<R> cotangent_form(int base, int order) {
    FormJet<R> w(2 * base, order, 2);
    for (int i = 0; i < base; ++i)
        w.set_coeff({i, base + i},
                    Jet<R>::constant(2 * base, order, -ScalarTraits<R>::one()));
    return w;
}

// View a jet on the base as a jet on phase space (fiber exponents zero).
template <class R>
Jet<R> embed_base_jet(const Jet<R>& f, int base) {
    if (f.nvars() != base) throw DimensionError("base arity mismatch");
    Jet<R> out(2 * base, f.order());
    for (const auto& [m, c] : f.terms()) {
        Mono m2 = m;
        m2.resize(2 * base, 0);
        out.set_coeff(std::move(m2), c);
    }
    return out;
}

// Lift of a base field: base components unchanged, fiber components
// -(D xi)^T p, which is the unique lift preserving theta.
template <class R>
VectorFieldJet<R> cotangent_lift(const VectorFieldJet<R>& xi) {
    int n = xi.nvars(), N = xi.order();
    VectorFieldJet<R> out = VectorFieldJet<R>::zero(2 * n, N);
    for (int i = 0; i < n; ++i) out.component(i) = embed_base_jet(xi.component(i), n);
    for (int i = 0; i < n; ++i) {
        Jet<R> fi(2 * n, N);
        for (int j = 0; j < n; ++j) {
            Jet<R> d = embed_base_jet(xi.component(j).derivative(i), n);
            if (d.is_zero()) continue;
            fi -= Jet<R>::variable(2 * n, N, n + j) * d;
        }
        out.component(n + i) = fi;
    }
    return out;
}

// mu_i = sum_j p_j xi_i^j(q); one jet per generator, linear in the fibers.
// Lives one order above the input fields so nothing is truncated.
template <class R>
std::vector<Jet<R>> moment_map(const std::vector<VectorFieldJet<R>>& fields) {
    if (fields.empty()) throw DimensionError("moment map needs at least one field");
    int n = fields[0].nvars(), N = fields[0].order();
    std::vector<Jet<R>> mu;
    mu.reserve(fields.size());
    for (const auto& xi : fields) {
        if (xi.nvars() != n) throw DimensionError("mixed arities in generator list");
        Jet<R> m(2 * n, N + 1);
        for (int j = 0; j < n; ++j) {
            Jet<R> comp = embed_base_jet(xi.component(j).truncated(N), n).truncated(N + 1);
            if (comp.is_zero()) continue;
            m += Jet<R>::variable(2 * n, N + 1, n + j) * comp;
        }
        mu.push_back(std::move(m));
    }
    return mu;
}

// i_X w + d mu; identically zero exactly when X is the Hamiltonian field of
// mu for w. Orders are aligned to the smallest of the three inputs.
template <class R>
FormJet<R> hamiltonian_residual(const VectorFieldJet<R>& X, const Jet<R>& mu, const FormJet<R>& w) {
    int N = std::min(std::min(X.order(), mu.order()), w.order());
    FormJet<R> r = interior(X.truncated(N), w.truncated(N));
    FormJet<R> dmu = exterior_d(FormJet<R>::from_function(mu.truncated(N)));
    return r + dmu;
}

template <class R>
bool check_hamiltonian(const VectorFieldJet<R>& X, const Jet<R>& mu, const FormJet<R>& w) {
    return hamiltonian_residual(X, mu, w).is_zero();
}

// rows = generators, columns = variables
template <class R>
Matrix<R> dmu_matrix(const std::vector<Jet<R>>& mu, const std::vector<R>& pt) {
    int r = static_cast<int>(mu.size());
    int n = mu[0].nvars();
    Matrix<R> M(r, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) M.at(i, j) = mu[i].derivative(j).eval(pt);
    return M;
}

template <class R>
int dmu_rank(const std::vector<Jet<R>>& mu, const std::vector<R>& pt) {
    return rank(dmu_matrix(mu, pt));
}

// rows = generator fields evaluated at the point
template <class R>
Matrix<R> orbit_matrix(const std::vector<VectorFieldJet<R>>& fields, const std::vector<R>& pt) {
    int r = static_cast<int>(fields.size());
    int n = fields[0].nvars();
    Matrix<R> M(r, n);
    for (int i = 0; i < r; ++i) {
        auto v = fields[i].eval(pt);
        for (int j = 0; j < n; ++j) M.at(i, j) = v[j];
    }
    return M;
}

template <class R>
int orbit_dimension(const std::vector<VectorFieldJet<R>>& fields, const std::vector<R>& pt) {
    return rank(orbit_matrix(fields, pt));
}

// --- exact rank certificates -------------------------------------------------

// A rank claim that can be rechecked independently of the elimination: a
// nonzero maximal minor (first one in row/column lex order) plus the fact
// that every minor one size larger vanishes.
template <class R>
struct MinorWitness {
    int rank = 0;
    std::vector<int> rows, cols; // empty when rank is 0
    R minor_value = ScalarTraits<R>::zero();
    bool verified = false; // all (rank+1)-minors vanish
};

namespace detail {

inline bool next_subset(std::vector<int>& s, int n) {
    int k = static_cast<int>(s.size());
    for (int i = k - 1; i >= 0; --i) {
        if (s[i] < n - (k - i)) {
            ++s[i];
            for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
            return true;
        }
    }
    return false;
}

template <class R>
R submatrix_det(const Matrix<R>& M, const std::vector<int>& rows, const std::vector<int>& cols) {
    int k = static_cast<int>(rows.size());
    Matrix<R> S(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) S.at(i, j) = M.at(rows[i], cols[j]);
    return det(S);
}

} // namespace detail

template <class R>
MinorWitness<R> rank_witness(const Matrix<R>& M) {
    static_assert(ScalarTraits<R>::exact, "witnesses are exact certificates");
    MinorWitness<R> out;
    out.rank = rank(M);
    int m = M.rows(), n = M.cols(), r = out.rank;
    if (r > 0) {
        std::vector<int> rows(r), cols0(r);
        for (int i = 0; i < r; ++i) rows[i] = i;
        bool found = false;
        do {
            std::vector<int> cols = cols0;
            for (int i = 0; i < r; ++i) cols[i] = i;
            do {
                R d = detail::submatrix_det(M, rows, cols);
                if (!ScalarTraits<R>::is_zero(d)) {
                    out.rows = rows;
                    out.cols = cols;
                    out.minor_value = d;
                    found = true;
                    break;
                }
            } while (detail::next_subset(cols, n));
            if (found) break;
        } while (detail::next_subset(rows, m));
        if (!found) return out; // cannot happen when rank() is correct
    }
    // every (r+1)-minor must vanish
    out.verified = true;
    if (r + 1 <= std::min(m, n)) {
        std::vector<int> rows(r + 1), cols(r + 1);
        for (int i = 0; i <= r; ++i) rows[i] = i;
        do {
            for (int i = 0; i <= r; ++i) cols[i] = i;
            do {
                if (!ScalarTraits<R>::is_zero(detail::submatrix_det(M, rows, cols))) {
                    out.verified = false;
                    return out;
                }
            } while (detail::next_subset(cols, n));
        } while (detail::next_subset(rows, m));
    }
    return out;
}

// --- sampling and stratification ----------------------------------------------

// Axis-aligned box given by per-variable bounds.
template <class R>
struct Box {
    std::vector<std::pair<R, R>> bounds;
    int dim() const { return static_cast<int>(bounds.size()); }
};

// per_axis^dim lattice including both endpoints
template <class R>
std::vector<std::vector<R>> grid_points(const Box<R>& box, int per_axis) {
    if (per_axis < 1) throw DimensionError("grid needs at least one point per axis");
    int d = box.dim();
    std::vector<std::vector<R>> axes(d);
    for (int i = 0; i < d; ++i) {
        const auto& [lo, hi] = box.bounds[i];
        if (per_axis == 1) {
            axes[i].push_back((lo + hi) * ScalarTraits<R>::from_ratio(1, 2));
            continue;
        }
        R step = (hi - lo) * ScalarTraits<R>::from_ratio(1, per_axis - 1);
        for (int k = 0; k < per_axis; ++k) axes[i].push_back(lo + step * ScalarTraits<R>::from_long(k));
    }
    std::vector<std::vector<R>> out;
    std::vector<int> idx(d, 0);
    while (true) {
        std::vector<R> pt(d, ScalarTraits<R>::zero());
        for (int i = 0; i < d; ++i) pt[i] = axes[i][idx[i]];
        out.push_back(std::move(pt));
        int i = d - 1;
        while (i >= 0 && ++idx[i] == per_axis) idx[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// Seeded rational samples: dyadic points c/2^10 with c drawn uniformly so the
// result lies in the box. Deterministic for a fixed seed.
template <class R>
std::vector<std::vector<R>> random_points(const Box<R>& box, int count, unsigned long seed) {
    std::mt19937_64 rng(seed);
    const long den = 1024;
    int d = box.dim();
    std::vector<std::vector<R>> out;
    out.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<R> pt(d, ScalarTraits<R>::zero());
        for (int i = 0; i < d; ++i) {
            const auto& [lo, hi] = box.bounds[i];
            unsigned long long raw = rng();
            long c = static_cast<long>(raw % static_cast<unsigned long long>(den + 1));
            R t = ScalarTraits<R>::from_ratio(c, den); // in [0,1]
            pt[i] = lo + (hi - lo) * t;
        }
        out.push_back(std::move(pt));
    }
    return out;
}

template <class R>
struct StrataRow {
    std::vector<R> point;
    int rank = 0;
};

template <class R>
struct StrataScan {
    std::vector<StrataRow<R>> rows;
    std::map<int, long> histogram;
    // first sampled point of each observed rank, with its certificate
    std::map<int, std::pair<std::vector<R>, MinorWitness<R>>> witnesses;
};

// Rank of d mu across a sample set, with one exact certificate per observed
// rank value.
template <class R>
StrataScan<R> strata_scan(const std::vector<Jet<R>>& mu, const std::vector<std::vector<R>>& points) {
    static_assert(ScalarTraits<R>::exact, "stratification by exact rank");
    StrataScan<R> out;
    out.rows.reserve(points.size());
    for (const auto& pt : points) {
        Matrix<R> M = dmu_matrix(mu, pt);
        int r = rank(M);
        out.rows.push_back({pt, r});
        ++out.histogram[r];
        if (!out.witnesses.count(r)) out.witnesses.emplace(r, std::make_pair(pt, rank_witness(M)));
    }
    return out;
}

} // namespace liejet
