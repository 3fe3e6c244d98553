#pragma once

// Text format for jets (the inverse of Jet::to_string), JSON readers for the
// document types the command line tools consume, and small deterministic
// report writers. Everything here is plumbing; no math.

#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "liejet/form.hpp"
#include "liejet/jet.hpp"
#include "liejet/lie.hpp"
#include "liejet/matrix.hpp"
#include "liejet/polymap.hpp"

namespace liejet {

namespace iodetail {

inline bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool num_start(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; }

struct Token {
    char kind; // 'n' number, 'v' name, or one of '*', '^', '+', '-'
    std::string text;
};

// Numbers cover "p/q", integers, and decimal/scientific literals; a '+'/'-'
// directly after an exponent 'e' belongs to the number, not to the term list.
inline std::vector<Token> tokenize_poly(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0, n = s.size();
    while (i < n) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '*' || c == '^' || c == '+' || c == '-') {
            out.push_back({c, std::string(1, c)});
            ++i;
            continue;
        }
        if (num_start(c)) {
            size_t j = i;
            while (j < n && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            if (j < n && (s[j] == 'e' || s[j] == 'E') && j + 1 < n) {
                size_t k = j + 1;
                if (s[k] == '+' || s[k] == '-') ++k;
                if (k < n && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    ++k;
                    while (k < n && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                    j = k;
                }
            }
            if (j < n && s[j] == '/' && j + 1 < n && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            out.push_back({'n', s.substr(i, j - i)});
            i = j;
            continue;
        }
        if (name_start(c)) {
            size_t j = i;
            while (j < n && name_char(s[j])) ++j;
            out.push_back({'v', s.substr(i, j - i)});
            i = j;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
    }
    return out;
}

} // namespace iodetail

// Parse the canonical serialization produced by Jet::to_string: terms in any
// order, "coef*name^k*...", separators '+'/'-'. Whitespace is free. Terms of
// degree above `order` are truncated away, matching jet arithmetic.
template <class R>
Jet<R> parse_jet(const std::string& text, int nvars, int order,
                 const std::vector<std::string>& names_in = {}) {
    std::vector<std::string> names = names_in;
    if (names.empty()) names = default_var_names(nvars);
    if (static_cast<int>(names.size()) != nvars) throw DimensionError("variable name list arity mismatch");
    std::map<std::string, int> index;
    for (int i = 0; i < nvars; ++i) {
        if (!index.emplace(names[i], i).second) throw ParseError("duplicate variable name: " + names[i]);
    }

    auto toks = iodetail::tokenize_poly(text);
    if (toks.empty()) throw ParseError("empty polynomial");

    Jet<R> out(nvars, order);
    size_t p = 0;
    bool first = true;
    while (p < toks.size()) {
        bool neg = false;
        if (toks[p].kind == '+' || toks[p].kind == '-') {
            neg = toks[p].kind == '-';
            ++p;
        } else if (!first) {
            throw ParseError("expected '+' or '-' between terms");
        }
        first = false;
        if (p >= toks.size()) throw ParseError("dangling sign at end of polynomial");

        R coef = ScalarTraits<R>::one();
        Mono m(nvars, 0);
        bool want_factor = true;
        while (want_factor) {
            if (p >= toks.size()) throw ParseError("missing factor after '*'");
            const auto& t = toks[p];
            if (t.kind == 'n') {
                coef = coef * parse_scalar<R>(t.text);
                ++p;
            } else if (t.kind == 'v') {
                auto it = index.find(t.text);
                if (it == index.end()) throw ParseError("unknown variable: " + t.text);
                int e = 1;
                ++p;
                if (p < toks.size() && toks[p].kind == '^') {
                    ++p;
                    if (p >= toks.size() || toks[p].kind != 'n') throw ParseError("expected integer exponent after '^'");
                    const std::string& es = toks[p].text;
                    e = 0;
                    for (char c : es) {
                        if (!std::isdigit(static_cast<unsigned char>(c)))
                            throw ParseError("expected integer exponent after '^', got " + es);
                        e = e * 10 + (c - '0');
                        if (e > 1000) throw ParseError("exponent out of range: " + es);
                    }
                    ++p;
                }
                m[it->second] += e;
            } else {
                throw ParseError("expected coefficient or variable, got '" + t.text + "'");
            }
            want_factor = p < toks.size() && toks[p].kind == '*';
            if (want_factor) ++p;
        }
        if (neg) coef = -coef;
        out.add_term(m, coef);
    }
    return out;
}

// --- JSON documents ------------------------------------------------------
//
// Scalars may appear as JSON integers or as strings in the usual "p/q" form;
// non-integer JSON numbers are only accepted in float mode.

template <class R>
R scalar_from_json(const nlohmann::json& v) {
    if (v.is_string()) return parse_scalar<R>(v.get<std::string>());
    if (v.is_number_integer()) return ScalarTraits<R>::from_long(v.get<long>());
    if (v.is_number_float()) {
        if constexpr (std::is_same_v<R, double>)
            return v.get<double>();
        else
            throw ParseError("non-integer numeric literal in exact mode; write it as a string \"p/q\"");
    }
    throw ParseError("expected a number or a numeric string");
}

template <class R>
Matrix<R> matrix_from_json(const nlohmann::json& v) {
    if (!v.is_array() || v.empty() || !v[0].is_array()) throw ParseError("matrix must be a list of rows");
    int rows = static_cast<int>(v.size());
    int cols = static_cast<int>(v[0].size());
    Matrix<R> M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(v[i].size()) != cols) throw ParseError("ragged matrix rows");
        for (int j = 0; j < cols; ++j) M.at(i, j) = scalar_from_json<R>(v[i][j]);
    }
    return M;
}

template <class R>
std::vector<Matrix<R>> matrices_from_json(const nlohmann::json& v) {
    if (!v.is_array()) throw ParseError("expected a list of matrices");
    std::vector<Matrix<R>> out;
    out.reserve(v.size());
    for (const auto& m : v) out.push_back(matrix_from_json<R>(m));
    return out;
}

// {"dim": d, "structure_constants": [[i, j, k, value], ...]} — entries not
// listed default to zero, and the antisymmetric mirror of a listed entry is
// filled in automatically when absent.
template <class R>
LieAlgebra<R> algebra_from_json(const nlohmann::json& doc) {
    if (!doc.contains("dim")) throw ParseError("algebra document needs a \"dim\" field");
    int d = doc["dim"].get<int>();
    if (d < 1) throw ParseError("algebra dim must be positive");
    std::vector<R> table(static_cast<size_t>(d) * d * d, ScalarTraits<R>::zero());
    std::vector<char> given(table.size(), 0);
    auto slot = [&](int i, int j, int k) { return (static_cast<size_t>(i) * d + j) * d + k; };
    if (doc.contains("structure_constants")) {
        for (const auto& e : doc["structure_constants"]) {
            if (!e.is_array() || e.size() != 4) throw ParseError("structure constant entries are [i, j, k, value]");
            int i = e[0].get<int>(), j = e[1].get<int>(), k = e[2].get<int>();
            if (i < 0 || i >= d || j < 0 || j >= d || k < 0 || k >= d)
                throw ParseError("structure constant index out of range");
            size_t s = slot(i, j, k);
            if (given[s]) throw ParseError("duplicate structure constant entry");
            table[s] = scalar_from_json<R>(e[3]);
            given[s] = 1;
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (given[slot(i, j, k)] && !given[slot(j, i, k)]) {
                    table[slot(j, i, k)] = -table[slot(i, j, k)];
                    given[slot(j, i, k)] = 1;
                }
    return LieAlgebra<R>(d, std::move(table));
}

// {"algebra": {...}, "rep": {"nvars": n, "order": N,
//  "fields": [{"components": ["poly", ...]}, ...]}}
// A field may also be given as a bare list of component strings. A positive
// order_override reparses the components at that order instead.
template <class R>
Representation<R> representation_from_json(const nlohmann::json& doc, int order_override = -1) {
    if (!doc.contains("algebra") || !doc.contains("rep"))
        throw ParseError("representation document needs \"algebra\" and \"rep\"");
    LieAlgebra<R> alg = algebra_from_json<R>(doc["algebra"]);
    const auto& rep = doc["rep"];
    if (!rep.contains("nvars") || !rep.contains("order") || !rep.contains("fields"))
        throw ParseError("rep section needs \"nvars\", \"order\" and \"fields\"");
    int n = rep["nvars"].get<int>();
    int N = order_override >= 1 ? order_override : rep["order"].get<int>();
    if (n < 1 || N < 1) throw ParseError("rep nvars and order must be positive");
    std::vector<VectorFieldJet<R>> fields;
    for (const auto& f : rep["fields"]) {
        const auto& comps = f.is_array() ? f : f.at("components");
        if (static_cast<int>(comps.size()) != n) throw ParseError("field needs one component per variable");
        std::vector<Jet<R>> cs;
        cs.reserve(n);
        for (const auto& c : comps) cs.push_back(parse_jet<R>(c.get<std::string>(), n, N));
        fields.emplace_back(std::move(cs));
    }
    return Representation<R>(std::move(alg), std::move(fields));
}

// {"nvars": n, "order": N, "degree": k (optional), "entries": [[i..., "poly"],
//  ...]} — one entry per coefficient, indices 0-based, degree-many of them.
// Used both for differential forms and for bivectors (the container is the
// same alternating-coefficient family).
template <class R>
FormJet<R> form_from_json(const nlohmann::json& doc, int default_degree = 2, int order_override = -1) {
    if (!doc.contains("nvars") || !doc.contains("order") || !doc.contains("entries"))
        throw ParseError("form document needs \"nvars\", \"order\" and \"entries\"");
    int n = doc["nvars"].get<int>();
    int N = order_override >= 1 ? order_override : doc["order"].get<int>();
    int deg = doc.contains("degree") ? doc["degree"].get<int>() : default_degree;
    if (n < 1 || N < 0 || deg < 0 || deg > n) throw ParseError("bad form dimensions");
    FormJet<R> w(n, N, deg);
    for (const auto& e : doc["entries"]) {
        if (!e.is_array() || static_cast<int>(e.size()) != deg + 1)
            throw ParseError("form entries are [i_1, ..., i_k, polynomial]");
        FormIndex idx(deg);
        for (int a = 0; a < deg; ++a) {
            idx[a] = e[a].get<int>();
            if (idx[a] < 0 || idx[a] >= n) throw ParseError("form index out of range");
        }
        w.add_term(idx, parse_jet<R>(e[deg].get<std::string>(), n, N));
    }
    return w;
}

// {"nvars": n, "order": N, "components": ["poly", ...]}
template <class R>
PolyMap<R> polymap_from_json(const nlohmann::json& doc, int order_override = -1) {
    if (!doc.contains("nvars") || !doc.contains("order") || !doc.contains("components"))
        throw ParseError("map document needs \"nvars\", \"order\" and \"components\"");
    int n = doc["nvars"].get<int>();
    int N = order_override >= 1 ? order_override : doc["order"].get<int>();
    if (n < 1 || N < 1) throw ParseError("map nvars and order must be positive");
    std::vector<Jet<R>> cs;
    for (const auto& c : doc["components"]) cs.push_back(parse_jet<R>(c.get<std::string>(), n, N));
    return PolyMap<R>(std::move(cs));
}

// --- report writers ------------------------------------------------------

template <class R>
std::string polymap_report(const PolyMap<R>& m, const std::vector<std::string>& names_in = {}) {
    std::vector<std::string> names = names_in;
    if (names.empty()) names = default_var_names(m.nvars());
    std::string out;
    for (int i = 0; i < m.dim(); ++i) out += "m_" + std::to_string(i + 1) + " = " + m.component(i).to_string(names) + "\n";
    return out;
}

template <class R>
std::string fields_report(const std::vector<VectorFieldJet<R>>& fields, const std::string& label = "v",
                          const std::vector<std::string>& names_in = {}) {
    std::string out;
    for (size_t a = 0; a < fields.size(); ++a) {
        std::vector<std::string> names = names_in;
        if (names.empty()) names = default_var_names(fields[a].nvars());
        for (int i = 0; i < fields[a].nvars(); ++i)
            out += label + std::to_string(a + 1) + "[" + names[i] + "] = " + fields[a].component(i).to_string(names) + "\n";
    }
    return out;
}

template <class R>
std::string form_report(const FormJet<R>& w, const std::string& label = "w",
                        const std::vector<std::string>& names_in = {}) {
    std::vector<std::string> names = names_in;
    if (names.empty()) names = default_var_names(w.nvars());
    std::string out;
    for (const auto& [idx, f] : w.terms()) {
        out += label + "[";
        for (size_t a = 0; a < idx.size(); ++a) {
            if (a) out += ",";
            out += std::to_string(idx[a]);
        }
        out += "] = " + f.to_string(names) + "\n";
    }
    if (out.empty()) out = label + " = 0\n";
    return out;
}

// CSV column names for the scan outputs: x,y,z for 3 coordinates,
// x,y,z,a,b,c for 6, generic c1.. otherwise. Implemented in io.cpp.
std::vector<std::string> scan_column_names(int ncoords);

// One row per sampled point, "coord,...,rank". Works for exact rows (p/q
// strings) and float rows alike; deterministic given the rows.
template <class Rows>
std::string strata_csv(int ncoords, const Rows& rows) {
    auto cols = scan_column_names(ncoords);
    std::string out;
    for (const auto& c : cols) out += c + ",";
    out += "rank\n";
    for (const auto& row : rows) {
        if (static_cast<int>(row.point.size()) != ncoords) throw DimensionError("scan row arity mismatch");
        for (const auto& c : row.point) {
            using RV = std::decay_t<decltype(c)>;
            out += ScalarTraits<RV>::str(c) + ",";
        }
        out += std::to_string(row.rank) + "\n";
    }
    return out;
}

// --- files ---------------------------------------------------------------

nlohmann::json load_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

} // namespace liejet
