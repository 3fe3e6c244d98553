#pragma once
// Small expression trees for the numeric side: smooth fields built from
// rational operations and the flat factor exp(-1/s) (s > 0, else 0), with
// exact symbolic differentiation so jacobians of flat fields are available
// pointwise.
#include "liejet/exceptions.hpp"
#include "liejet/matrix.hpp"

#include <memory>
#include <string>
#include <vector>

namespace liejet {

class Expr {
  public:
    Expr() = default;

    static Expr constant(double c);
    static Expr var(int i);
    // k-th derivative of s -> exp(-1/s) for s > 0 (identically 0 otherwise),
    // evaluated at the argument expression
    static Expr flat(int k, const Expr& arg);

    bool empty() const { return n_ == nullptr; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    // 0/0 evaluates to 0 (numerator checked first); nonzero/0 throws
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;
    Expr pow(int k) const;

    double eval(const std::vector<double>& x) const;
    Expr diff(int i) const;
    std::string to_string() const;

    struct Node; // exposed for the out-of-line implementation only

  private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

// Vector field with expression components.
struct ExprField {
    int nvars = 0;
    std::vector<Expr> comps;

    ExprField() = default;
    ExprField(int n, std::vector<Expr> c) : nvars(n), comps(std::move(c)) {}

    std::vector<double> eval(const std::vector<double>& x) const;
    // symbolic-derivative jacobian evaluated at x
    Matrix<double> jacobian(const std::vector<double>& x) const;
};

// [X, Y]_i = sum_j X_j d_j Y_i - Y_j d_j X_i, symbolically
ExprField expr_bracket(const ExprField& X, const ExprField& Y);

// central-difference jacobian, for validating the symbolic one
Matrix<double> numeric_jacobian(const ExprField& f, const std::vector<double>& x, double h = 1e-6);

} // namespace liejet
