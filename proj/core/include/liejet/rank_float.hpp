#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <vector>

#include "liejet/matrix.hpp"

namespace liejet {

struct SvdRank {
    int rank = 0;
    std::vector<double> singular_values;
};

// Numerical rank through singular values: count those above rel_tol times the
// largest one. An all-zero matrix has rank 0 by convention.
inline SvdRank svd_rank(const Matrix<double>& A, double rel_tol = 1e-9) {
    Eigen::MatrixXd M(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) M(i, j) = A.at(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    SvdRank out;
    const auto& sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    if (sv.size() == 0) return out;
    double top = sv(0);
    if (top <= 0.0) return out;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * top) ++out.rank;
    return out;
}

} // namespace liejet
