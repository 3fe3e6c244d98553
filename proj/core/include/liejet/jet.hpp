#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "liejet/exceptions.hpp"
#include "liejet/scalars.hpp"

namespace liejet {

// Exponent vector of a monomial.
using Mono = std::vector<int>;

inline int mono_degree(const Mono& m) { return std::accumulate(m.begin(), m.end(), 0); }

// Graded lexicographic order: lower total degree first; within a degree,
// higher power on earlier variables first (1, x, y, x^2, x*y, y^2, ...).
struct GrlexLess {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = mono_degree(a), db = mono_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

// All exponent vectors in nvars variables of total degree exactly d, grlex order.
inline std::vector<Mono> monomials_of_degree(int nvars, int d) {
    std::vector<Mono> out;
    Mono cur(nvars, 0);
    // recursive enumeration, first variable outermost so grlex order falls out
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == nvars - 1) {
            cur[var] = rem;
            out.push_back(cur);
            cur[var] = 0;
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[var] = e;
            self(self, var + 1, rem - e);
        }
        cur[var] = 0;
    };
    rec(rec, 0, d);
    return out;
}

inline std::vector<Mono> monomials_up_to_degree(int nvars, int d) {
    std::vector<Mono> out;
    for (int k = 0; k <= d; ++k) {
        auto mk = monomials_of_degree(nvars, k);
        out.insert(out.end(), mk.begin(), mk.end());
    }
    return out;
}

// Truncated polynomial (jet of a function germ at 0) in the quotient ring
// R[x1..xn]/m^(order+1): terms of total degree > order are silently dropped.
template <class R>
class Jet {
  public:
    using Terms = std::map<Mono, R, GrlexLess>;

    Jet() : nvars_(0), order_(0) {}
    Jet(int nvars, int order) : nvars_(nvars), order_(order) {
        if (nvars < 1 || order < 0) throw DimensionError("jet needs nvars >= 1, order >= 0");
    }

    static Jet constant(int nvars, int order, R c) {
        Jet j(nvars, order);
        if (!ScalarTraits<R>::is_zero(c)) j.terms_.emplace(Mono(nvars, 0), std::move(c));
        return j;
    }
    static Jet variable(int nvars, int order, int i) {
        Jet j(nvars, order);
        if (i < 0 || i >= nvars) throw DimensionError("variable index out of range");
        if (order >= 1) {
            Mono m(nvars, 0);
            m[i] = 1;
            j.terms_.emplace(std::move(m), ScalarTraits<R>::one());
        }
        return j;
    }
    static Jet monomial(int nvars, int order, Mono m, R c) {
        Jet j(nvars, order);
        if (static_cast<int>(m.size()) != nvars) throw DimensionError("monomial arity mismatch");
        if (mono_degree(m) <= order && !ScalarTraits<R>::is_zero(c)) j.terms_.emplace(std::move(m), std::move(c));
        return j;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    R coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? ScalarTraits<R>::zero() : it->second;
    }
    R constant_term() const { return coeff(Mono(nvars_, 0)); }

    void set_coeff(const Mono& m, R c) {
        if (static_cast<int>(m.size()) != nvars_) throw DimensionError("monomial arity mismatch");
        if (mono_degree(m) > order_) return;
        if (ScalarTraits<R>::is_zero(c))
            terms_.erase(m);
        else
            terms_[m] = std::move(c);
    }

    void add_term(const Mono& m, const R& c) {
        if (mono_degree(m) > order_) return;
        if (ScalarTraits<R>::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (ScalarTraits<R>::is_zero(it->second)) terms_.erase(it);
        }
    }

    Jet& operator+=(const Jet& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(const Jet& a) {
        Jet r = a;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_same(b);
        Jet r(a.nvars_, a.order_);
        Mono m(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            int da = mono_degree(ma);
            for (const auto& [mb, cb] : b.terms_) {
                if (da + mono_degree(mb) > a.order_) continue;
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    Jet& scale(const R& c) {
        if (ScalarTraits<R>::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v = v * c;
        prune();
        return *this;
    }
    friend Jet operator*(const R& c, Jet a) { return a.scale(c); }

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    Jet pow(int e) const {
        if (e < 0) throw DimensionError("negative jet power");
        Jet r = constant(nvars_, order_, ScalarTraits<R>::one());
        Jet base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    Jet derivative(int i) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            Mono d = m;
            d[i] -= 1;
            r.add_term(d, c * ScalarTraits<R>::from_long(m[i]));
        }
        return r;
    }

    // re-truncate to a (possibly lower) order
    Jet truncated(int order) const {
        Jet r(nvars_, order);
        for (const auto& [m, c] : terms_)
            if (mono_degree(m) <= order) r.terms_.emplace(m, c);
        return r;
    }

    Jet part_of_degree(int k) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_)
            if (mono_degree(m) == k) r.terms_.emplace(m, c);
        return r;
    }

    Jet parts_below_degree(int k) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_)
            if (mono_degree(m) < k) r.terms_.emplace(m, c);
        return r;
    }

    // -1 when zero
    int min_degree() const {
        int md = -1;
        for (const auto& [m, c] : terms_) {
            int d = mono_degree(m);
            if (md < 0 || d < md) md = d;
        }
        return md;
    }

    bool is_homogeneous(int k) const {
        for (const auto& [m, c] : terms_)
            if (mono_degree(m) != k) return false;
        return true;
    }

    // terms with zero exponent on variable i
    Jet part_without_var(int i) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_)
            if (m[i] == 0) r.terms_.emplace(m, c);
        return r;
    }

    bool divisible_by_var(int i) const {
        for (const auto& [m, c] : terms_)
            if (m[i] == 0) return false;
        return true;
    }

    // exact division by x_i; throws if some term lacks the factor
    Jet div_var(int i) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) throw NoSolutionError("jet not divisible by requested variable");
            Mono d = m;
            d[i] -= 1;
            r.terms_.emplace(std::move(d), c);
        }
        return r;
    }

    Jet mul_var(int i) const {
        Jet r(nvars_, order_);
        for (const auto& [m, c] : terms_) {
            if (mono_degree(m) + 1 > order_) continue;
            Mono d = m;
            d[i] += 1;
            r.terms_.emplace(std::move(d), c);
        }
        return r;
    }

    R eval(const std::vector<R>& pt) const {
        if (static_cast<int>(pt.size()) != nvars_) throw DimensionError("point arity mismatch");
        R s = ScalarTraits<R>::zero();
        for (const auto& [m, c] : terms_) {
            R t = c;
            for (int i = 0; i < nvars_; ++i)
                for (int e = 0; e < m[i]; ++e) t = t * pt[i];
            s += t;
        }
        return s;
    }

    // substitute m[i] for variable i; every component must vanish at 0 so the
    // truncation is well defined
    Jet compose(const std::vector<Jet>& sub) const {
        if (static_cast<int>(sub.size()) != nvars_) throw InvalidMapError("substitution arity mismatch");
        for (const auto& s : sub) {
            if (!ScalarTraits<R>::is_zero(s.constant_term()))
                throw InvalidMapError("substitution must fix the origin");
        }
        int onv = sub.empty() ? nvars_ : sub[0].nvars();
        int oord = sub.empty() ? order_ : sub[0].order();
        for (const auto& s : sub)
            if (s.nvars() != onv || s.order() != oord) throw DimensionError("substitution components disagree");
        Jet result = constant(onv, oord, constant_term());
        std::map<Mono, Jet, GrlexLess> cache;
        Mono zero(nvars_, 0);
        cache.emplace(zero, constant(onv, oord, ScalarTraits<R>::one()));
        for (const auto& [m, c] : terms_) {
            if (mono_degree(m) == 0) continue;
            const Jet& p = cached_power(m, sub, cache);
            Jet t = p;
            t.scale(c);
            result += t;
        }
        return result;
    }

    // compose a family against one substitution, sharing the power cache
    static std::vector<Jet> compose_many(const std::vector<const Jet*>& fs, const std::vector<Jet>& sub) {
        std::vector<Jet> out;
        out.reserve(fs.size());
        if (fs.empty()) return out;
        const Jet& lead = *fs[0];
        for (const auto& s : sub) {
            if (!ScalarTraits<R>::is_zero(s.constant_term()))
                throw InvalidMapError("substitution must fix the origin");
        }
        int onv = sub.empty() ? lead.nvars_ : sub[0].nvars();
        int oord = sub.empty() ? lead.order_ : sub[0].order();
        std::map<Mono, Jet, GrlexLess> cache;
        for (const Jet* f : fs) {
            if (static_cast<int>(sub.size()) != f->nvars_) throw InvalidMapError("substitution arity mismatch");
            Jet r = constant(onv, oord, f->constant_term());
            cache.emplace(Mono(f->nvars_, 0), constant(onv, oord, ScalarTraits<R>::one()));
            for (const auto& [m, c] : f->terms_) {
                if (mono_degree(m) == 0) continue;
                Jet t = f->cached_power(m, sub, cache);
                t.scale(c);
                r += t;
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    template <class F>
    auto map_coeffs(F&& f) const -> Jet<std::decay_t<decltype(f(std::declval<R>()))>> {
        using S = std::decay_t<decltype(f(std::declval<R>()))>;
        Jet<S> r(nvars_, order_);
        for (const auto& [m, c] : terms_) {
            S v = f(c);
            if (!ScalarTraits<S>::is_zero(v)) r.set_coeff(m, std::move(v));
        }
        return r;
    }

    std::string to_string(const std::vector<std::string>& names = {}) const;

  private:
    void check_same(const Jet& o) const {
        if (nvars_ != o.nvars_ || order_ != o.order_)
            throw DimensionError("jet nvars/order mismatch");
    }
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = ScalarTraits<R>::is_zero(it->second) ? terms_.erase(it) : std::next(it);
    }

    const Jet& cached_power(const Mono& m, const std::vector<Jet>& sub,
                            std::map<Mono, Jet, GrlexLess>& cache) const {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        int i = 0;
        while (m[i] == 0) ++i;
        Mono prev = m;
        prev[i] -= 1;
        Jet p = cached_power(prev, sub, cache) * sub[i];
        return cache.emplace(m, std::move(p)).first->second;
    }

    int nvars_;
    int order_;
    Terms terms_;
};

inline std::vector<std::string> default_var_names(int nvars) {
    std::vector<std::string> names;
    names.reserve(nvars);
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

// Canonical serialization: grlex term order, "coef*xi^ai*..." with rational
// coefficients as p/q. Deterministic; round-trips through parse_jet.
template <class R>
std::string Jet<R>::to_string(const std::vector<std::string>& names_in) const {
    std::vector<std::string> names = names_in;
    if (names.empty()) names = default_var_names(nvars_);
    if (static_cast<int>(names.size()) != nvars_) throw DimensionError("variable name list arity mismatch");
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        std::string cs = ScalarTraits<R>::str(c);
        bool neg = !cs.empty() && cs[0] == '-';
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (neg) cs = cs.substr(1);
        std::string monos;
        for (int i = 0; i < nvars_; ++i) {
            if (m[i] == 0) continue;
            if (!monos.empty()) monos += "*";
            monos += names[i];
            if (m[i] > 1) monos += "^" + std::to_string(m[i]);
        }
        if (monos.empty()) {
            out += cs;
        } else if (cs == "1") {
            out += monos;
        } else {
            out += cs + "*" + monos;
        }
    }
    return out;
}

// largest |coefficient|; zero for the zero jet
template <class R>
R max_abs_coeff(const Jet<R>& j) {
    R best = ScalarTraits<R>::zero();
    for (const auto& [m, c] : j.terms()) {
        R a = ScalarTraits<R>::abs(c);
        if (best < a) best = a;
    }
    return best;
}

// 1/u as a jet; u must be a unit (nonzero constant term). Newton iteration
// v <- v(2 - uv) doubles the valid order each round.
template <class R>
Jet<R> jet_reciprocal(const Jet<R>& u) {
    R c = u.constant_term();
    if (ScalarTraits<R>::is_zero(c)) throw NotInvertibleError("reciprocal of a non-unit jet");
    int n = u.nvars(), N = u.order();
    Jet<R> two = Jet<R>::constant(n, N, ScalarTraits<R>::from_long(2));
    Jet<R> v = Jet<R>::constant(n, N, ScalarTraits<R>::one() / c);
    for (int valid = 0; valid <= N; valid *= 2) {
        Jet<R> nv = v * (two - u * v);
        if (nv == v) break;
        v = std::move(nv);
        if (valid == 0) valid = 1;
    }
    return v;
}

} // namespace liejet
