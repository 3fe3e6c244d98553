#include "liejet/expr.hpp"

#include <cmath>
#include <mutex>

namespace liejet {

namespace {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Flat };

// coefficient rows of P_k with a^{(k)}(s) = P_k(1/s) exp(-1/s); the recurrence
// P_{k+1}(u) = u^2 (P_k(u) - P_k'(u)) starts from P_0 = 1
const std::vector<double>& flat_poly(int k) {
    static std::vector<std::vector<double>> table{{1.0}};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= k) {
        const auto& p = table.back();
        std::vector<double> q(p.size() + 2, 0.0);
        for (size_t i = 0; i < p.size(); ++i) {
            q[i + 2] += p[i];                              // u^2 P_k
            if (i > 0) q[i + 1] -= static_cast<double>(i) * p[i]; // -u^2 P_k'
        }
        table.push_back(std::move(q));
    }
    return table[k];
}

} // namespace

struct Expr::Node {
    Kind kind;
    double c = 0.0;                   // Const value
    int idx = 0;                      // Var index, Pow exponent, Flat order
    std::shared_ptr<const Node> a, b; // children
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind k, double c, int idx, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->c = c;
    n->idx = idx;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::Const && n->c == v; }

} // namespace

Expr Expr::constant(double c) { return Expr(make(Kind::Const, c, 0)); }

Expr Expr::var(int i) {
    if (i < 0) throw DimensionError("negative variable index");
    return Expr(make(Kind::Var, 0.0, i));
}

Expr Expr::flat(int k, const Expr& arg) {
    if (k < 0) throw DimensionError("negative flat-derivative order");
    if (arg.empty()) throw DimensionError("empty expression");
    return Expr(make(Kind::Flat, 0.0, k, arg.n_));
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) throw DimensionError("empty expression");
    if (a.n_->kind == Kind::Const && b.n_->kind == Kind::Const)
        return Expr::constant(a.n_->c + b.n_->c);
    if (is_const(a.n_, 0.0)) return b;
    if (is_const(b.n_, 0.0)) return a;
    return Expr(make(Kind::Add, 0.0, 0, a.n_, b.n_));
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) throw DimensionError("empty expression");
    if (a.n_->kind == Kind::Const && b.n_->kind == Kind::Const)
        return Expr::constant(a.n_->c - b.n_->c);
    if (is_const(b.n_, 0.0)) return a;
    return Expr(make(Kind::Sub, 0.0, 0, a.n_, b.n_));
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) throw DimensionError("empty expression");
    if (a.n_->kind == Kind::Const && b.n_->kind == Kind::Const)
        return Expr::constant(a.n_->c * b.n_->c);
    if (is_const(a.n_, 0.0) || is_const(b.n_, 0.0)) return Expr::constant(0.0);
    if (is_const(a.n_, 1.0)) return b;
    if (is_const(b.n_, 1.0)) return a;
    return Expr(make(Kind::Mul, 0.0, 0, a.n_, b.n_));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) throw DimensionError("empty expression");
    if (is_const(a.n_, 0.0)) return Expr::constant(0.0);
    if (is_const(b.n_, 1.0)) return a;
    return Expr(make(Kind::Div, 0.0, 0, a.n_, b.n_));
}

Expr Expr::operator-() const { return constant(0.0) - *this; }

Expr Expr::pow(int k) const {
    if (empty()) throw DimensionError("empty expression");
    if (k < 0) throw DimensionError("negative exponent; divide instead");
    if (k == 0) return constant(1.0);
    if (k == 1) return *this;
    return Expr(make(Kind::Pow, 0.0, k, n_));
}

double Expr::eval(const std::vector<double>& x) const {
    if (empty()) throw DimensionError("empty expression");
    const Node& n = *n_;
    switch (n.kind) {
        case Kind::Const: return n.c;
        case Kind::Var:
            if (n.idx >= static_cast<int>(x.size())) throw DimensionError("point arity too small");
            return x[n.idx];
        case Kind::Add: return Expr(n.a).eval(x) + Expr(n.b).eval(x);
        case Kind::Sub: return Expr(n.a).eval(x) - Expr(n.b).eval(x);
        case Kind::Mul: {
            double u = Expr(n.a).eval(x);
            if (u == 0.0) return 0.0;
            return u * Expr(n.b).eval(x);
        }
        case Kind::Div: {
            double num = Expr(n.a).eval(x);
            if (num == 0.0) return 0.0;
            double den = Expr(n.b).eval(x);
            if (den == 0.0) throw SingularityError("division by zero away from a removable point");
            return num / den;
        }
        case Kind::Pow: {
            double u = Expr(n.a).eval(x), r = 1.0;
            for (int i = 0; i < n.idx; ++i) r *= u;
            return r;
        }
        case Kind::Flat: {
            double s = Expr(n.a).eval(x);
            if (s <= 0.0) return 0.0;
            double u = 1.0 / s, pk = 0.0;
            const auto& p = flat_poly(n.idx);
            for (size_t i = p.size(); i-- > 0;) pk = pk * u + p[i];
            return pk * std::exp(-u);
        }
    }
    throw DimensionError("corrupt expression node");
}

Expr Expr::diff(int i) const {
    if (empty()) throw DimensionError("empty expression");
    const Node& n = *n_;
    Expr a(n.a), b(n.b);
    switch (n.kind) {
        case Kind::Const: return constant(0.0);
        case Kind::Var: return constant(n.idx == i ? 1.0 : 0.0);
        case Kind::Add: return a.diff(i) + b.diff(i);
        case Kind::Sub: return a.diff(i) - b.diff(i);
        case Kind::Mul: return a.diff(i) * b + a * b.diff(i);
        case Kind::Div: return (a.diff(i) * b - a * b.diff(i)) / (b * b);
        case Kind::Pow: return constant(static_cast<double>(n.idx)) * a.pow(n.idx - 1) * a.diff(i);
        case Kind::Flat: return flat(n.idx + 1, a) * a.diff(i);
    }
    throw DimensionError("corrupt expression node");
}

std::string Expr::to_string() const {
    if (empty()) return "<empty>";
    const Node& n = *n_;
    switch (n.kind) {
        case Kind::Const: return std::to_string(n.c);
        case Kind::Var: return "x" + std::to_string(n.idx);
        case Kind::Add: return "(" + Expr(n.a).to_string() + " + " + Expr(n.b).to_string() + ")";
        case Kind::Sub: return "(" + Expr(n.a).to_string() + " - " + Expr(n.b).to_string() + ")";
        case Kind::Mul: return "(" + Expr(n.a).to_string() + " * " + Expr(n.b).to_string() + ")";
        case Kind::Div: return "(" + Expr(n.a).to_string() + " / " + Expr(n.b).to_string() + ")";
        case Kind::Pow: return Expr(n.a).to_string() + "^" + std::to_string(n.idx);
        case Kind::Flat:
            return "flat" + (n.idx > 0 ? "'" + std::to_string(n.idx) : std::string()) + "(" +
                   Expr(n.a).to_string() + ")";
    }
    return "<corrupt>";
}

std::vector<double> ExprField::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nvars) throw DimensionError("point arity mismatch");
    std::vector<double> out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(c.eval(x));
    return out;
}

Matrix<double> ExprField::jacobian(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nvars) throw DimensionError("point arity mismatch");
    Matrix<double> J(static_cast<int>(comps.size()), nvars);
    for (int i = 0; i < static_cast<int>(comps.size()); ++i)
        for (int j = 0; j < nvars; ++j) J.at(i, j) = comps[i].diff(j).eval(x);
    return J;
}

ExprField expr_bracket(const ExprField& X, const ExprField& Y) {
    if (X.nvars != Y.nvars || X.comps.size() != Y.comps.size())
        throw DimensionError("bracket arity mismatch");
    int n = X.nvars;
    std::vector<Expr> out;
    out.reserve(X.comps.size());
    for (size_t i = 0; i < X.comps.size(); ++i) {
        Expr s = Expr::constant(0.0);
        for (int j = 0; j < n; ++j)
            s = s + X.comps[j] * Y.comps[i].diff(j) - Y.comps[j] * X.comps[i].diff(j);
        out.push_back(s);
    }
    return ExprField(n, std::move(out));
}

Matrix<double> numeric_jacobian(const ExprField& f, const std::vector<double>& x, double h) {
    Matrix<double> J(static_cast<int>(f.comps.size()), f.nvars);
    for (int j = 0; j < f.nvars; ++j) {
        std::vector<double> xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        auto fp = f.eval(xp), fm = f.eval(xm);
        for (int i = 0; i < static_cast<int>(f.comps.size()); ++i)
            J.at(i, j) = (fp[i] - fm[i]) / (2 * h);
    }
    return J;
}

} // namespace liejet
