#include "subsel/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "subsel/bounds.hpp"
#include "subsel/error.hpp"
#include "subsel/expected.hpp"
#include "subsel/report.hpp"
#include "subsel/selector.hpp"

namespace subsel::cli {
namespace {

using nlohmann::json;

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct Grid {
    Range m, n, k;
};

std::size_t parse_count(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size() || s.front() == '-') throw InputError("grid: bad integer '" + s + "'");
    return static_cast<std::size_t>(v);
}

Range parse_range(const std::string& s) {
    const auto colon = s.find(':');
    Range r;
    if (colon == std::string::npos) {
        r.lo = r.hi = parse_count(s);
    } else {
        r.lo = parse_count(s.substr(0, colon));
        r.hi = parse_count(s.substr(colon + 1));
    }
    if (r.lo > r.hi) throw InputError("grid: range " + s + " is empty");
    return r;
}

Grid parse_grid(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    if (parts.size() != 3) throw InputError("grid must look like m0:m1,n0:n1,k0:k1");
    return {parse_range(parts[0]), parse_range(parts[1]), parse_range(parts[2])};
}

bool in_bound_domain(std::size_t m, std::size_t n, std::size_t k) {
    return n >= 1 && m >= n + 1 && k >= 1 && k <= m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string join(const std::vector<std::size_t>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

void emit_select(const report::SelectReport& r, const std::string& format, std::ostream& out) {
    using report::format_double;
    if (format == "json") {
        out << report::to_json(r).dump(2) << '\n';
    } else if (format == "csv") {
        out << "method,m,n,k,rank,subset,sigma_min,sigma_min_sq,sigma_min_target,root_certificate,"
               "bound_factor,bound_certificate,alpha,alpha_branch,epsilon,wall_time_ms\n";
        out << r.method << ',' << r.m << ',' << r.n << ',' << r.k << ',' << r.rank << ',' << join(r.subset, " ")
            << ',' << format_double(r.sigma_min) << ',' << format_double(r.sigma_min_sq) << ','
            << format_double(r.sigma_min_target) << ',' << format_double(r.root_certificate) << ','
            << format_double(r.bound_factor) << ',' << format_double(r.bound_certificate) << ','
            << format_double(r.alpha) << ',' << r.alpha_branch << ',' << format_double(r.epsilon) << ','
            << format_double(r.wall_time_ms) << '\n';
    } else {
        out << "method            " << r.method << '\n'
            << "shape             " << r.n << " x " << r.m << " (rank " << r.rank << ")\n"
            << "k                 " << r.k << '\n'
            << "subset            " << join(r.subset, " ") << '\n'
            << "sigma_min         " << format_double(r.sigma_min) << '\n'
            << "sigma_min_sq      " << format_double(r.sigma_min_sq) << '\n'
            << "sigma_min(A)      " << format_double(r.sigma_min_target) << '\n'
            << "root_certificate  " << format_double(r.root_certificate) << '\n'
            << "bound_certificate " << format_double(r.bound_certificate) << '\n'
            << "alpha             " << format_double(r.alpha) << " [" << r.alpha_branch << "]\n"
            << "wall_time_ms      " << format_double(r.wall_time_ms) << '\n';
    }
}

void emit_bound(const bounds::BoundReport& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << report::to_json(r).dump(2) << '\n';
    } else if (format == "csv") {
        out << report::bound_csv_header() << '\n' << report::bound_csv_row(r) << '\n';
    } else {
        using report::format_double;
        out << "m=" << r.m << " n=" << r.n << " k=" << r.k << '\n'
            << "alpha        " << format_double(r.alpha) << " [" << bounds::to_string(r.alpha_branch) << "]\n"
            << "main_bound   " << format_double(r.main_bound) << '\n';
        if (r.explicit_bound) out << "explicit     " << format_double(*r.explicit_bound) << '\n';
        for (const auto& [name, value] : r.baselines)
            out << name << std::string(name.size() < 13 ? 13 - name.size() : 1, ' ') << format_double(value)
                << (r.dominates.at(name) ? "  (main bound larger)" : "  (main bound not larger)") << '\n';
    }
}

struct CheckPrinter {
    std::ostream& out;
    bool all = true;

    void operator()(bool ok, const std::string& name, const std::string& detail = {}) {
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out << "  " << detail;
        out << '\n';
    }
};

void check_verdict(CheckPrinter& check, const selector::Verdict& v) {
    using report::format_double;
    check(v.subset_valid, "subset_valid");
    if (!v.subset_valid) return;
    check(v.value_consistent, "value_consistent", "sigma_min_sq=" + format_double(v.sigma_min_sq));
    check(v.bound_holds, "bound_holds", "rhs=" + format_double(v.bound_rhs));
    check(v.root_holds, "root_holds", "ratio=" + format_double(v.ratio) + " root=" + format_double(v.root));
}

struct Options {
    std::string input;
    std::string report_path;
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    double epsilon = selector::kDefaultEpsilon;
    std::string format = "json";
    std::string grid;
    std::uint64_t seed = 0;
    std::string method = "interlacing";
    bool no_matrix = false;
    std::size_t max_m = 12;
};

linalg::TargetMatrix load_or_generate(const Options& o, const CLI::App& sub) {
    if (!o.input.empty()) return report::to_target(report::read_matrix_file(o.input));
    if (sub.count("--n") == 0 || sub.count("--m") == 0)
        throw InputError("select needs --input or both --n and --m for a random Gaussian matrix");
    if (o.n == 0 || o.m == 0) throw InputError("--n and --m must be positive");
    return linalg::random_gaussian_matrix(o.n, o.m, o.seed);
}

report::SelectReport run_select(const linalg::TargetMatrix& a, const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    selector::SelectionResult r;
    if (o.method == "interlacing") {
        r = selector::select_interlacing(a, o.k, {o.epsilon, 0});
    } else {
        r = selector::select_brute_force(a, o.k);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report::make_select_report(a, r, o.method, ms, !o.no_matrix);
}

int cmd_select(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto a = load_or_generate(o, sub);
    emit_select(run_select(a, o), o.format, out);
    return kOk;
}

int cmd_bound(const Options& o, std::ostream& out) {
    if (!in_bound_domain(o.m, o.n, o.k))
        throw InputError("bound needs n >= 1, m >= n + 1 and 1 <= k <= m");
    emit_bound(bounds::compare_report(o.m, o.n, o.k), o.format, out);
    return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const Grid g = parse_grid(o.grid);
    std::vector<bounds::BoundReport> rows;
    for (std::size_t m = g.m.lo; m <= g.m.hi; ++m)
        for (std::size_t n = g.n.lo; n <= g.n.hi; ++n)
            for (std::size_t k = g.k.lo; k <= g.k.hi; ++k)
                if (in_bound_domain(m, n, k)) rows.push_back(bounds::compare_report(m, n, k));
    if (rows.empty()) throw InputError("grid contains no (m, n, k) with m >= n + 1 and 1 <= k <= m");
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(report::to_json(r));
        out << arr.dump(2) << '\n';
    } else {
        out << report::bound_csv_header() << '\n';
        for (const auto& r : rows) out << report::bound_csv_row(r) << '\n';
    }
    return kOk;
}

int verify_report(const report::SelectReport& rep, const linalg::TargetMatrix& a, std::ostream& out) {
    CheckPrinter check{out};
    check(rep.m == a.cols() && rep.n == a.rows(), "shape_matches",
          std::to_string(a.rows()) + " x " + std::to_string(a.cols()));
    std::optional<selector::SelectionResult> result;
    try {
        result = report::to_result(rep, a.cols());
    } catch (const InputError& e) {
        check(false, "subset_valid", e.what());
    }
    if (result) {
        check(result->k == rep.subset.size(), "k_matches_subset");
        const auto v = selector::verify_certificate(a, *result);
        check_verdict(check, v);
        if (v.subset_valid)
            check(std::abs(rep.root_certificate - v.root) <= selector::kCertificateSlack, "root_certificate_matches",
                  report::format_double(v.root));
    }
    return check.all ? kOk : kVerifyFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
    std::optional<report::SelectReport> rep;
    std::optional<linalg::TargetMatrix> a;
    if (!o.report_path.empty()) {
        rep = report::select_report_from_json(json::parse(read_file(o.report_path)));
        if (!o.input.empty()) a = report::to_target(report::read_matrix_file(o.input));
    } else if (!o.input.empty()) {
        const std::string text = read_file(o.input);
        json j = json::parse(text, nullptr, false);
        if (!j.is_discarded() && j.is_object() && j.contains("subset")) {
            rep = report::select_report_from_json(j);
        } else {
            a = report::to_target(report::parse_matrix(text));
        }
    } else {
        throw InputError("verify needs --report or --input");
    }
    if (rep && !a) {
        if (!rep->matrix) throw InputError("report carries no matrix; pass it with --input");
        a = report::to_target(*rep->matrix);
    }
    if (rep) return verify_report(*rep, *a, out);

    // Bare matrix: run the selector, certify it and compare against the optimum when enumerable.
    if (o.k == 0) throw InputError("verify on a bare matrix needs --k");
    const auto fresh = run_select(*a, o);
    int code = verify_report(fresh, *a, out);
    if (expected::choose_count(a->cols(), o.k) <= expected::kBruteForceLimit) {
        const auto best = selector::select_brute_force(*a, o.k);
        CheckPrinter check{out};
        check(best.sigma_min_sq >= fresh.sigma_min_sq - selector::kCertificateSlack, "optimum_dominates",
              "optimum=" + report::format_double(best.sigma_min_sq));
        if (!check.all) code = kVerifyFailed;
    }
    return code;
}

int cmd_identity_check(const Options& o, std::ostream& out) {
    using expected::FamilyParams;
    CheckPrinter check{out};
    const std::size_t top = o.max_m;

    std::size_t cases = 0;
    std::string failed;
    for (std::size_t m = 1; m <= top; ++m)
        for (std::size_t n = 1; n <= m; ++n)
            for (std::size_t k = n; k <= m; ++k) {
                ++cases;
                if (!expected::knh_identity_check(m, n, k) && failed.empty())
                    failed = "first failure (m,n,k)=(" + std::to_string(m) + "," + std::to_string(n) + "," +
                             std::to_string(k) + ")";
            }
    check(failed.empty(), "derivative identity, " + std::to_string(cases) + " cases", failed);

    cases = 0;
    failed.clear();
    for (std::size_t m = 2; m <= top; ++m)
        for (std::size_t n = 1; n < m; ++n)
            for (std::size_t k = 1; k <= n; ++k) {
                ++cases;
                const auto p = FamilyParams::make(m, n, k);
                if (poly::from_bernstein(expected::g_empty_bernstein<Rational>(p)) != expected::g_empty<Rational>(p))
                    if (failed.empty()) failed = "first failure m=" + std::to_string(m);
            }
    check(failed.empty(), "Bernstein coefficients of g_empty, " + std::to_string(cases) + " cases", failed);

    cases = 0;
    failed.clear();
    for (std::size_t m = 2; m <= top; ++m)
        for (std::size_t n = 1; n < m; ++n)
            for (std::size_t k = 1; k <= n && n + k <= m; ++k) {
                ++cases;
                const auto p = FamilyParams::make(m, n, k);
                const auto g = expected::g_empty<Rational>(p);
                const auto h = g.reflected();
                // Vieta: sum of reciprocal roots is -c_1 / c_0.
                const Rational s0 = -g.coeff(1) / g.coeff(0);
                const Rational s1 = -h.coeff(1) / h.coeff(0);
                const Rational num(static_cast<long>(k * (m - k + 1)));
                if (s0 != num / Rational(static_cast<long>(n - k + 1)) ||
                    s1 != num / Rational(static_cast<long>(m - n - k + 1)))
                    if (failed.empty())
                        failed = "first failure (m,n,k)=(" + std::to_string(m) + "," + std::to_string(n) + "," +
                                 std::to_string(k) + ")";
            }
    check(failed.empty(), "reciprocal root sums of g_empty, " + std::to_string(cases) + " cases", failed);
    return check.all ? kOk : kVerifyFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Column subset selection by interlacing polynomials, with bound calculus", "subsel"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> formats{"json", "csv", "plain"};

    auto* select = app.add_subcommand("select", "choose k columns of a matrix");
    select->add_option("--input", o.input, "matrix file (CSV or JSON)");
    select->add_option("--k", o.k, "subset size")->required();
    select->add_option("--n", o.n, "rows of a random Gaussian matrix (without --input)");
    select->add_option("--m", o.m, "columns of a random Gaussian matrix (without --input)");
    select->add_option("--seed", o.seed, "seed for the random matrix");
    select->add_option("--epsilon", o.epsilon, "root precision, in (0, 1/k)");
    select->add_option("--method", o.method)->check(CLI::IsMember({"interlacing", "brute-force"}));
    select->add_option("--format", o.format)->check(CLI::IsMember(formats));
    select->add_flag("--no-matrix", o.no_matrix, "do not embed the matrix in the report");

    auto* bound = app.add_subcommand("bound", "bounds for given (m, n, k)");
    bound->add_option("--m", o.m)->required();
    bound->add_option("--n", o.n)->required();
    bound->add_option("--k", o.k)->required();
    bound->add_option("--format", o.format)->check(CLI::IsMember(formats));

    auto* sweep = app.add_subcommand("sweep", "bound table over a grid, CSV by default");
    sweep->add_option("--grid", o.grid, "m0:m1,n0:n1,k0:k1")->required();
    sweep->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "re-check a select report, or a matrix with --k");
    verify->add_option("--report", o.report_path, "select report (JSON)");
    verify->add_option("--input", o.input, "matrix file, or a report with an embedded matrix");
    verify->add_option("--k", o.k);
    verify->add_option("--epsilon", o.epsilon);

    auto* identity = app.add_subcommand("identity-check", "exact polynomial identities");
    identity->add_option("--max-m", o.max_m, "largest m")->check(CLI::Range(1, 40));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }
    if (sweep->parsed() && sweep->count("--format") == 0) o.format = "csv";

    try {
        if (select->parsed()) return cmd_select(o, *select, out);
        if (bound->parsed()) return cmd_bound(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (identity->parsed()) return cmd_identity_check(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

} // namespace subsel::cli
