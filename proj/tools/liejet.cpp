// Command line front end. Each subcommand parses its input documents,
// dispatches to the library, re-verifies the operation's postcondition, and
// emits a deterministic report (stdout, or --out). Exit codes: 0 success,
// 1 usage or input parse problems, 2 verification or normalization failure.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "liejet/bform.hpp"
#include "liejet/cotangent.hpp"
#include "liejet/expr.hpp"
#include "liejet/io.hpp"
#include "liejet/linearize.hpp"
#include "liejet/poisson.hpp"
#include "liejet/rank_float.hpp"
#include "liejet/sl2.hpp"
#include "liejet/symplectic.hpp"

using namespace liejet;
using Q = Rational;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFail = 2;

struct Options {
    std::string input;
    std::string out;
    std::string field = "exact";
    std::string region = "box";
    std::string point;
    std::string which; // demo selector
    int order = -1;
    int zvar = -1; // -1: take it from the input file
    long long seed = -1;
    long long samples = -1;
    double tolerance = 1e-9;
};

// Raw engine draws only: the mt19937 stream is pinned by the standard, the
// distribution classes are not, and reports must be byte-stable.
long rand_int(std::mt19937& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}
double rand_unit(std::mt19937& rng) { return rng() * (1.0 / 4294967296.0); }

void deliver(const Options& o, const std::string& report) {
    if (o.out.empty()) {
        std::cout << report;
    } else {
        write_text_file(o.out, report);
        std::cout << "wrote " << o.out << "\n";
    }
}

template <class R>
R field_residual(const VectorFieldJet<R>& v) {
    R b = ScalarTraits<R>::zero();
    for (int i = 0; i < v.nvars(); ++i) {
        R a = max_abs_coeff(v.component(i));
        if (b < a) b = a;
    }
    return b;
}

template <class R>
R form_residual(const FormJet<R>& w) {
    R b = ScalarTraits<R>::zero();
    for (const auto& [idx, f] : w.terms()) {
        R a = max_abs_coeff(f);
        if (b < a) b = a;
    }
    return b;
}

// reports honor the classical letters in low dimension; files always use x1..xn
std::vector<std::string> report_names(int nvars) {
    if (nvars == 3) return {"x", "y", "z"};
    if (nvars == 6) return {"x", "y", "z", "a", "b", "c"};
    return default_var_names(nvars);
}

template <class R>
bool within(const R& resid, double tol) {
    if constexpr (ScalarTraits<R>::exact)
        return ScalarTraits<R>::is_zero(resid);
    else
        return ScalarTraits<R>::abs(resid) <= tol;
}

template <class R>
std::vector<R> parse_point(const std::string& s, int arity_a, int arity_b) {
    std::vector<R> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(parse_scalar<R>(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(parse_scalar<R>(cur));
    int n = static_cast<int>(out.size());
    if (n != arity_a && n != arity_b)
        throw ParseError("--point needs " + std::to_string(arity_a) + " or " + std::to_string(arity_b) +
                         " comma-separated coordinates");
    return out;
}

// ---------------------------------------------------------------------------

template <class R>
int run_verify_rep(const Options& o) {
    auto rep = representation_from_json<R>(load_json_file(o.input), o.order);
    std::string report;
    bool ok = true;
    for (int i = 0; i < rep.algebra.dim(); ++i)
        for (int j = i + 1; j < rep.algebra.dim(); ++j) {
            auto d = representation_defect(rep, i, j);
            R resid = field_residual(d);
            bool pass = within(resid, o.tolerance);
            ok = ok && pass;
            report += "defect[" + std::to_string(i) + "," + std::to_string(j) +
                      "] residual = " + ScalarTraits<R>::str(resid) + "\n";
        }
    report += std::string("algebra semisimple: ") + (rep.algebra.is_semisimple() ? "yes" : "no") + "\n";
    report += std::string("representation: ") + (ok ? "ok" : "FAIL") + "\n";
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

int run_linearize(const Options& o) {
    auto rep = representation_from_json<Q>(load_json_file(o.input), o.order);
    auto res = linearize_rep(rep);
    auto moved = pushforward_rep(rep, res.map);
    auto A = rep.linear_parts();
    bool ok = true;
    for (int a = 0; a < rep.algebra.dim(); ++a)
        ok = ok && moved.fields[a] == VectorFieldJet<Q>::from_linear(A[a], rep.order());
    std::string report = "linearizing map:\n" + polymap_report(res.map, report_names(rep.nvars()));
    if (!res.semisimple) report += "note: algebra is not semisimple; graded solves succeeded anyway\n";
    report += std::string("verification: pushforward equals the linear action: ") + (ok ? "yes" : "NO") + "\n";
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

int run_darboux(const Options& o, bool require_action) {
    auto doc = load_json_file(o.input);
    auto w = form_from_json<Q>(doc, 2, o.order);
    bool equivariant = doc.contains("action");
    if (require_action && !equivariant)
        throw ParseError("equivariant-darboux needs an \"action\" block in the input document");
    std::vector<Matrix<Q>> As;
    if (equivariant) As = matrices_from_json<Q>(doc["action"]);
    auto res = equivariant ? equivariant_darboux(w, As) : darboux(w);
    FormJet<Q> target = standard_symplectic_form<Q>(w.nvars() / 2, w.order());
    bool ok = pullback(w, res.map) == target;
    std::string report = "normalizing map:\n" + polymap_report(res.map, report_names(w.nvars()));
    report += std::string("verification: pullback of the input is the standard form: ") + (ok ? "yes" : "NO") + "\n";
    if (equivariant) {
        bool eq = is_equivariant_map(res.map, As);
        report += std::string("verification: map commutes with the action: ") + (eq ? "yes" : "NO") + "\n";
        ok = ok && eq;
    }
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

template <class R>
int run_cotangent_lift(const Options& o) {
    auto rep = representation_from_json<R>(load_json_file(o.input), o.order);
    std::vector<VectorFieldJet<R>> lifted;
    lifted.reserve(rep.fields.size());
    for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
    Representation<R> lrep(rep.algebra, lifted);
    R resid = ScalarTraits<R>::zero();
    for (int i = 0; i < rep.algebra.dim(); ++i)
        for (int j = i + 1; j < rep.algebra.dim(); ++j) {
            R a = field_residual(representation_defect(lrep, i, j));
            if (resid < a) resid = a;
        }
    bool ok = within(resid, o.tolerance);
    std::string report = fields_report(lifted, "lift", report_names(2 * rep.nvars()));
    report += "lift bracket residual = " + ScalarTraits<R>::str(resid) + "\n";
    report += std::string("verification: lifted fields represent: ") + (ok ? "yes" : "NO") + "\n";
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

template <class R>
int run_moment_map(const Options& o) {
    auto rep = representation_from_json<R>(load_json_file(o.input), o.order);
    auto mu = moment_map(rep.fields);
    FormJet<R> w = cotangent_form<R>(rep.nvars(), mu[0].order());
    std::string report;
    bool ok = true;
    for (size_t a = 0; a < mu.size(); ++a) {
        VectorFieldJet<R> X = cotangent_lift(rep.fields[a]);
        R resid = form_residual(hamiltonian_residual(X, mu[a], w));
        bool pass = within(resid, o.tolerance);
        ok = ok && pass;
        report += "mu_" + std::to_string(a + 1) + " = " + mu[a].to_string(report_names(2 * rep.nvars())) + "\n";
        report += "hamiltonian residual = " + ScalarTraits<R>::str(resid) + "\n";
    }
    report += std::string("verification: every generator is Hamiltonian for its component: ") +
              (ok ? "yes" : "NO") + "\n";
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

int run_orbit_dim_exact(const Options& o) {
    auto rep = representation_from_json<Q>(load_json_file(o.input), o.order);
    int n = rep.nvars();
    auto pt = parse_point<Q>(o.point, n, 2 * n);
    std::string report = "point = (" + o.point + ")\n";
    int dim = 0;
    bool ok = true;
    if (static_cast<int>(pt.size()) == n) {
        dim = orbit_dimension(rep.fields, pt);
        report += "orbit dimension = " + std::to_string(dim) + "\n";
    } else {
        std::vector<VectorFieldJet<Q>> lifted;
        for (const auto& f : rep.fields) lifted.push_back(cotangent_lift(f));
        dim = orbit_dimension(lifted, pt);
        auto mu = moment_map(rep.fields);
        int dr = dmu_rank(mu, pt);
        report += "orbit dimension (lifted) = " + std::to_string(dim) + "\n";
        report += "rank of d(mu) = " + std::to_string(dr) + "\n";
        ok = dim == dr;
        report += std::string("verification: the two ranks agree: ") + (ok ? "yes" : "NO") + "\n";
    }
    deliver(o, report);
    return ok ? kOk : kVerifyFail;
}

int run_orbit_dim_float(const Options& o) {
    auto rep = representation_from_json<double>(load_json_file(o.input), o.order);
    int n = rep.nvars();
    auto pt = parse_point<double>(o.point, n, 2 * n);
    std::vector<VectorFieldJet<double>> fields = rep.fields;
    if (static_cast<int>(pt.size()) == 2 * n) {
        std::vector<VectorFieldJet<double>> lifted;
        for (const auto& f : fields) lifted.push_back(cotangent_lift(f));
        fields = lifted;
    }
    Matrix<double> M(static_cast<int>(fields.size()), static_cast<int>(pt.size()));
    for (size_t a = 0; a < fields.size(); ++a) {
        auto v = fields[a].eval(pt);
        for (size_t i = 0; i < v.size(); ++i) M.at(static_cast<int>(a), static_cast<int>(i)) = v[i];
    }
    auto r = svd_rank(M, o.tolerance);
    std::string report = "point = (" + o.point + ")\n";
    report += "orbit dimension (svd) = " + std::to_string(r.rank) + "\n";
    deliver(o, report);
    return kOk;
}

// Grid over one coordinate block with the other held at zero: the scan domain
// for the union of the zero section and the zero fiber.
std::vector<std::vector<Q>> omega_grid(int n, long long want) {
    long long per = (want + 1) / 2;
    int g = 1;
    while (true) {
        long long total = 1;
        for (int i = 0; i < n; ++i) total *= g;
        if (total >= per) break;
        ++g;
    }
    if (g % 2 == 0) ++g; // odd side length keeps the origin on the grid
    std::vector<std::vector<Q>> pts;
    std::vector<int> idx(n, 0);
    auto value = [&](int t) {
        if (g == 1) return Q(0);
        Q v(8 * t - 4 * (g - 1), g - 1); // -4 .. 4 evenly spaced
        v.canonicalize();
        return v;
    };
    for (int side = 0; side < 2; ++side) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<Q> p(2 * n, Q(0));
            for (int i = 0; i < n; ++i) p[side * n + i] = value(idx[i]);
            pts.push_back(std::move(p));
            int c = n - 1;
            while (c >= 0 && ++idx[c] == g) idx[c--] = 0;
            if (c < 0) break;
        }
    }
    return pts;
}

int run_strata_scan(const Options& o) {
    auto rep = representation_from_json<Q>(load_json_file(o.input), o.order);
    int n = rep.nvars();
    long long K = o.samples > 0 ? o.samples : 10000;
    std::vector<std::vector<Q>> pts;
    if (o.region == "omega") {
        pts = omega_grid(n, K);
    } else if (o.region == "box") {
        if (o.seed < 0) throw ParseError("--seed is required for randomized scans");
        std::mt19937 rng(static_cast<std::uint32_t>(o.seed));
        for (long long t = 0; t < K; ++t) {
            std::vector<Q> p(2 * n);
            for (int i = 0; i < 2 * n; ++i) {
                Q v(rand_int(rng, -400, 400), 100);
                v.canonicalize();
                p[i] = v;
            }
            pts.push_back(std::move(p));
        }
    } else {
        throw ParseError("--region must be box or omega");
    }
    auto mu = moment_map(rep.fields);
    auto scan = strata_scan(mu, pts);
    deliver(o, strata_csv(2 * n, scan.rows));
    std::string summary;
    for (const auto& [r, count] : scan.histogram)
        summary += "rank " + std::to_string(r) + ": " + std::to_string(count) + " points\n";
    for (const auto& [r, wit] : scan.witnesses) {
        summary += "rank " + std::to_string(r) + " witness: (";
        for (size_t i = 0; i < wit.first.size(); ++i) {
            if (i) summary += ",";
            summary += ScalarTraits<Q>::str(wit.first[i]);
        }
        summary += ") minor value " + ScalarTraits<Q>::str(wit.second.minor_value) +
                   (wit.second.verified ? " certified" : " UNCERTIFIED") + "\n";
    }
    std::cerr << summary;
    for (const auto& [r, wit] : scan.witnesses)
        if (!wit.second.verified) return kVerifyFail;
    return kOk;
}

int run_b_darboux(const Options& o) {
    auto doc = load_json_file(o.input);
    int zv = o.zvar >= 0 ? o.zvar : (doc.contains("zvar") ? doc["zvar"].get<int>() : 0);
    BForm<Q> w = [&] {
        if (doc.contains("smooth")) {
            nlohmann::json sdoc = {{"nvars", doc["nvars"]}, {"order", doc["order"]}, {"entries", doc["smooth"]}};
            nlohmann::json ldoc = {{"nvars", doc["nvars"]}, {"order", doc["order"]},
                                   {"degree", 1},          {"entries", doc["log"]}};
            int N = o.order >= 1 ? o.order : -1;
            return BForm<Q>(form_from_json<Q>(sdoc, 2, N), form_from_json<Q>(ldoc, 1, N), zv);
        }
        auto pi = form_from_json<Q>(doc, 2, o.order);
        return bform_of_bivector(pi, zv);
    }();
    bool equivariant = doc.contains("action");
    std::string report;
    PolyMap<Q> m = PolyMap<Q>::identity(1, 1);
    if (equivariant) {
        auto res = equivariant_b_darboux(w, matrices_from_json<Q>(doc["action"]));
        m = res.map;
    } else {
        auto res = b_darboux(w);
        m = res.map;
    }
    BForm<Q> target = standard_b_form<Q>(w.smooth().nvars(), w.smooth().order(), zv);
    bool ok = b_pullback(w, m) == target;
    bool zdiv = m.component(zv).divisible_by_var(zv);
    report += "normalizing map:\n" + polymap_report(m, report_names(m.nvars()));
    report += std::string("verification: pullback of the input is the standard b-form: ") + (ok ? "yes" : "NO") + "\n";
    report += std::string("verification: z-component divisible by z: ") + (zdiv ? "yes" : "NO") + "\n";
    deliver(o, report);
    return ok && zdiv ? kOk : kVerifyFail;
}

int run_split(const Options& o) {
    auto doc = load_json_file(o.input);
    auto pi = form_from_json<Q>(doc, 2, o.order);
    int n = pi.nvars();
    std::string report;
    PolyMap<Q> m = PolyMap<Q>::identity(1, 1);
    BivectorJet<Q> split(1, 0, 2), transverse(1, 0, 2);
    int pairs = 0;
    if (doc.contains("action")) {
        auto res = equivariant_weinstein_split(pi, matrices_from_json<Q>(doc["action"]));
        m = res.map;
        split = res.split;
        transverse = res.transverse;
        pairs = res.pairs;
    } else {
        auto res = weinstein_split(pi);
        m = res.map;
        split = res.split;
        transverse = res.transverse;
        pairs = res.pairs;
    }
    bool moved_ok = bivector_pushforward(pi, m) == split;
    // shape: constant standard block, no cross terms, transverse in the
    // trailing variables only, vanishing at 0
    bool shape_ok = true;
    for (const auto& [idx, f] : split.terms()) {
        bool in_block = idx[0] < 2 * pairs && idx[1] < 2 * pairs;
        bool in_tail = idx[0] >= 2 * pairs && idx[1] >= 2 * pairs;
        if (in_block) {
            bool is_pair = idx[1] == idx[0] + 1 && idx[0] % 2 == 0;
            Jet<Q> expect = Jet<Q>::constant(n, f.order(), is_pair ? Q(1) : Q(0));
            shape_ok = shape_ok && f == expect;
        } else if (in_tail) {
            shape_ok = shape_ok && ScalarTraits<Q>::is_zero(f.constant_term());
            for (int v = 0; v < 2 * pairs; ++v) shape_ok = shape_ok && f.derivative(v).is_zero();
        } else {
            shape_ok = shape_ok && f.is_zero();
        }
    }
    report += "pairs = " + std::to_string(pairs) + "\n";
    report += "splitting map:\n" + polymap_report(m, report_names(n));
    report += form_report(transverse, "f", report_names(n));
    report += std::string("verification: pushforward matches the reported split: ") + (moved_ok ? "yes" : "NO") + "\n";
    report += std::string("verification: split has normal shape: ") + (shape_ok ? "yes" : "NO") + "\n";
    deliver(o, report);
    return moved_ok && shape_ok ? kOk : kVerifyFail;
}

int run_demo(const Options& o) {
    if (o.which != "cairns-ghys") throw ParseError("unknown demo: " + o.which);
    if (o.seed < 0) throw ParseError("--seed is required for randomized scans");
    long long K = o.samples > 0 ? o.samples : 1000;
    auto deformed = flat_deformation_fixed_z();
    auto linear = sl2_linear_fields_expr();
    std::mt19937 rng(static_cast<std::uint32_t>(o.seed));
    struct Row {
        std::vector<double> point;
        int rank;
    };
    std::vector<Row> rows;
    rows.reserve(K);
    bool ranks_ok = true, cone_ok = true;
    std::vector<std::vector<double>> residual_pts;
    for (long long t = 0; t < K; ++t) {
        std::vector<double> p(3);
        for (int i = 0; i < 3; ++i) p[i] = -4.0 + 8.0 * rand_unit(rng);
        int r = orbit_dimension_numeric(deformed, p, o.tolerance);
        bool inside = p[0] * p[0] + p[1] * p[1] <= p[2] * p[2];
        if (r != 0 && r != 2 && r != 3) ranks_ok = false;
        if (inside && r == 3) cone_ok = false;
        if (inside && r != orbit_dimension_numeric(linear, p, o.tolerance)) cone_ok = false;
        if (residual_pts.size() < 100) residual_pts.push_back(p);
        rows.push_back({std::move(p), r});
    }
    double resid = sl2_bracket_residual(deformed, residual_pts);
    bool resid_ok = resid < 1e-9;
    deliver(o, strata_csv(3, rows));
    std::map<int, long> hist;
    for (const auto& row : rows) ++hist[row.rank];
    std::string summary;
    for (const auto& [r, count] : hist) summary += "rank " + std::to_string(r) + ": " + std::to_string(count) + " points\n";
    summary += "bracket residual over " + std::to_string(residual_pts.size()) +
               " samples = " + ScalarTraits<double>::str(resid) + "\n";
    summary += std::string("verification: ranks within {0,2,3}: ") + (ranks_ok ? "yes" : "NO") + "\n";
    summary += std::string("verification: inside the cone the deformation matches the linear action: ") +
               (cone_ok ? "yes" : "NO") + "\n";
    summary += std::string("verification: deformed fields satisfy the bracket relations: ") +
               (resid_ok ? "yes" : "NO") + "\n";
    std::cerr << summary;
    return ranks_ok && cone_ok && resid_ok ? kOk : kVerifyFail;
}

bool exact_field(const Options& o) {
    if (o.field == "exact") return true;
    if (o.field == "float") return false;
    throw ParseError("--field must be exact or float");
}

void require_exact(const Options& o, const char* sub) {
    if (!exact_field(o)) throw ParseError(std::string(sub) + " works over the exact field only");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jet-level normal forms for Lie algebra actions, symplectic and Poisson structures"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("--input", o.input, "input JSON document")->required();
        sub->add_option("--order", o.order, "jet order override (>= 1)");
        sub->add_option("--field", o.field, "coefficient field: exact | float");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--samples", o.samples, "sample count");
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_option("--tolerance", o.tolerance, "residual tolerance for float verification");
        return sub;
    };

    auto* verify = add_common(app.add_subcommand("verify-rep", "check the bracket relations of an action"), true);
    auto* linearize = add_common(app.add_subcommand("linearize", "linearize a semisimple action"), true);
    auto* darboux = add_common(app.add_subcommand("darboux", "normalize a symplectic jet"), true);
    auto* eqdarboux =
        add_common(app.add_subcommand("equivariant-darboux", "normalize an invariant symplectic jet"), true);
    auto* lift = add_common(app.add_subcommand("cotangent-lift", "lift an action to the cotangent space"), true);
    auto* moment = add_common(app.add_subcommand("moment-map", "moment map of a lifted action"), true);
    auto* orbitdim = add_common(app.add_subcommand("orbit-dim", "orbit dimension at a point"), true);
    orbitdim->add_option("--point", o.point, "comma-separated coordinates")->required();
    auto* scan = add_common(app.add_subcommand("strata-scan", "rank histogram of d(mu) over a sample set"), true);
    scan->add_option("--region", o.region, "box (random) | omega (zero-section/zero-fiber grid)");
    auto* bdarboux = add_common(app.add_subcommand("b-darboux", "normalize a b-symplectic structure"), true);
    bdarboux->add_option("--zvar", o.zvar, "index of the singular variable (default: from file, else 0)");
    auto* split = add_common(app.add_subcommand("split", "Weinstein splitting of a Poisson jet"), true);
    auto* demo = add_common(app.add_subcommand("demo", "built-in example scans"), false);
    demo->add_option("name", o.which, "demo name (cairns-ghys)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (verify->parsed()) return exact_field(o) ? run_verify_rep<Q>(o) : run_verify_rep<double>(o);
        if (linearize->parsed()) {
            require_exact(o, "linearize");
            return run_linearize(o);
        }
        if (darboux->parsed() || eqdarboux->parsed()) {
            require_exact(o, "darboux");
            return run_darboux(o, eqdarboux->parsed());
        }
        if (lift->parsed()) return exact_field(o) ? run_cotangent_lift<Q>(o) : run_cotangent_lift<double>(o);
        if (moment->parsed()) return exact_field(o) ? run_moment_map<Q>(o) : run_moment_map<double>(o);
        if (orbitdim->parsed()) return exact_field(o) ? run_orbit_dim_exact(o) : run_orbit_dim_float(o);
        if (scan->parsed()) {
            require_exact(o, "strata-scan");
            return run_strata_scan(o);
        }
        if (bdarboux->parsed()) {
            require_exact(o, "b-darboux");
            return run_b_darboux(o);
        }
        if (split->parsed()) {
            require_exact(o, "split");
            return run_split(o);
        }
        if (demo->parsed()) return run_demo(o);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFail;
    }
    return kUsage;
}
