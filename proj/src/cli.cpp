#include "singode/cli.hpp"

#include "singode/criteria.hpp"
#include "singode/demos.hpp"
#include "singode/error.hpp"
#include "singode/model.hpp"
#include "singode/numerics.hpp"
#include "singode/report.hpp"
#include "singode/series.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>

namespace singode {

namespace {

struct GridFlags {
    double x_max = 1e-1;
    double x_min = 1e-8;
    int samples = 64;

    void attach(CLI::App* cmd) {
        cmd->add_option("--x-max", x_max, "largest sampled |x|")->capture_default_str();
        cmd->add_option("--x-min", x_min, "smallest sampled |x|")->capture_default_str();
        cmd->add_option("--samples", samples, "number of magnitudes (each used with both signs)")
            ->capture_default_str();
    }
    SampleGrid grid() const { return geometric_grid(x_max, x_min, samples); }
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw Error("failed writing '" + path + "'");
}

std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    write_csv(os, header, rows);
    return os.str();
}

int exit_code_for(Verdict v) {
    switch (v) {
        case Verdict::UniqueNearZero: return kExitOk;
        case Verdict::ConditionalOnFlatness: return kExitConditional;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

std::string short_summary(const CriteriaReport& r) {
    std::ostringstream os;
    os << "label: " << r.label << "\n"
       << "n: " << r.n << "\n";
    for (const auto& w : r.weights)
        os << "c" << w.k << ": " << format_double(w.estimate) << " (" << to_string(w.behavior)
           << (w.converged ? "" : ", not converged") << ")\n";
    os << "C_n: " << format_double(r.C_n) << "\n"
       << "B_n: " << format_double(r.B_n) << "\n"
       << "M: " << (r.flatness_bound_M ? std::to_string(*r.flatness_bound_M) : std::string("n/a")) << "\n"
       << "criterion c_k <= 1/e: " << (r.theorem1_satisfied ? "yes" : "no") << "\n"
       << "criterion c_k < 1/B_n: " << (r.relaxed_satisfied ? "yes" : "no") << "\n"
       << "all weights zero: " << (r.corollary2_satisfied ? "yes" : "no") << "\n"
       << "coefficients bounded: " << (r.corollary3_satisfied ? "yes" : "no") << "\n";
    for (const auto& note : r.notes) os << "note: " << note << "\n";
    os << "verdict: " << to_string(r.verdict) << "\n";
    return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uniqueness criteria for linear ODEs with coefficients singular at x = 0", "singode"};
    app.require_subcommand(1, 1);
    int precision_bits = 53;
    app.add_option("--precision", precision_bits, "working precision in bits (53 = double)")
        ->check(CLI::Range(24, 4096))
        ->capture_default_str();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "estimate singularity weights and evaluate the criteria");
    std::string problem_path;
    std::string json_path;
    GridFlags analyze_grid;
    analyze->add_option("problem", problem_path, "problem file")->required();
    analyze->add_option("--json", json_path, "write the JSON report here instead of standard output");
    analyze_grid.attach(analyze);

    // demo
    auto* demo = app.add_subcommand("demo", "run a reproduction pipeline");
    std::string demo_name;
    std::optional<double> demo_param;
    std::string demo_csv;
    std::string demo_json;
    demo->add_option("name", demo_name, "example4 | bessel | cauchy-euler")
        ->required()
        ->check(CLI::IsMember({"example4", "bessel", "cauchy-euler"}));
    demo->add_option("--param", demo_param, "alpha, m, or a (defaults 1/(2e), 2, 0.3)");
    demo->add_option("--csv", demo_csv, "write x, f, f' of the nonzero solution");
    demo->add_option("--json", demo_json, "write the demo result as JSON");

    // series
    auto* series = app.add_subcommand("series", "print an exact rational series");
    std::string family;
    int nu = 0;
    int terms = 5;
    std::string format = "text";
    series->add_option("family", family, "bessel")->required()->check(CLI::IsMember({"bessel"}));
    series->add_option("--nu", nu, "order m >= 0")->required();
    series->add_option("--terms", terms, "number of nonzero terms K >= 1")->capture_default_str();
    series->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // verify-bound
    auto* verify = app.add_subcommand("verify-bound", "check N <= B_n C_min + n - 1 for a smooth function");
    std::string function_text;
    int order = 2;
    GridFlags verify_grid;
    verify->add_option("--function", function_text, "expression in x")->required();
    verify->add_option("--n", order, "ODE order n >= 2")->required();
    verify_grid.attach(verify);

    // scan
    auto* scan = app.add_subcommand("scan", "sample the ratio |f^(n)| / sum_k |f^(k)|/|x|^(n-k)");
    std::string scan_function;
    std::string scan_reference;
    std::optional<double> scan_param;
    int scan_order = 2;
    std::string scan_csv;
    GridFlags scan_grid;
    auto* fn_opt = scan->add_option("--function", scan_function, "expression in x");
    auto* ref_opt = scan->add_option("--reference", scan_reference, "example4 | bessel")
                        ->check(CLI::IsMember({"example4", "bessel"}));
    fn_opt->excludes(ref_opt);
    scan->add_option("--param", scan_param, "alpha or m for --reference");
    scan->add_option("--n", scan_order, "order n >= 2")->required();
    scan->add_option("--csv", scan_csv, "write x, ratio");
    scan_grid.attach(scan);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    const Precision precision{static_cast<unsigned>(precision_bits)};
    try {
        if (analyze->parsed()) {
            const OdeProblem problem = load_problem_file(problem_path);
            const CriteriaReport report = check_uniqueness(problem, analyze_grid.grid(), Tolerances{}, precision);
            const std::string json = dump_json(to_json(report));
            if (json_path.empty()) {
                out << json;
            } else {
                write_file(json_path, json);
                out << short_summary(report);
            }
            return exit_code_for(report.verdict);
        }

        if (demo->parsed()) {
            DemoOptions opts;
            opts.precision = precision;
            DemoResult result;
            if (demo_name == "example4") {
                result = run_example4_demo(demo_param, opts);
            } else if (demo_name == "bessel") {
                const double m = demo_param.value_or(2.0);
                if (m != std::floor(m) || m < 2 || m > 64) throw RangeError("bessel: --param must be an integer in [2, 64]");
                result = run_bessel_demo(static_cast<int>(m), opts);
            } else {
                result = run_cauchy_euler_demo(demo_param.value_or(0.3), opts);
            }
            out << format_summary(result);
            if (!demo_csv.empty()) write_file(demo_csv, csv_string(result.csv_header, result.csv_rows));
            if (!demo_json.empty()) write_file(demo_json, dump_json(to_json(result)));
            return result.passed() ? kExitOk : kExitCheckFailed;
        }

        if (series->parsed()) {
            if (nu < 0) throw RangeError("series: --nu must be nonnegative");
            if (terms < 1) throw RangeError("series: --terms must be at least 1");
            // K nonzero terms sit at x^m, x^{m+2}, ..., x^{m+2(K-1)}
            const RationalSeries s = bessel_series(nu, std::max(1, 2 * (terms - 1)));
            if (format == "json") {
                Json j;
                j["family"] = family;
                j["nu"] = nu;
                j["terms"] = terms;
                j["coefficients"] = series_to_json(s);
                out << dump_json(j);
            } else {
                out << to_string(s) << "\n";
            }
            return kExitOk;
        }

        if (verify->parsed()) {
            const BoundCheck check = verify_vanishing_bound(expr::parse(function_text), order, verify_grid.grid());
            out << "function: " << check.function << "\n"
                << "n: " << check.n << "\n"
                << "N: " << to_string(check.N) << "\n"
                << "leading coefficient: " << to_string(check.leading_coefficient) << "\n"
                << "C_min: " << format_double(check.c_min) << " (sup over " << check.scan.ratios.size()
                << " samples)\n";
            if (check.c_exact) out << "C exact: " << to_string(*check.c_exact) << "\n";
            out << "bound B_n*C + n - 1: " << to_string(check.bound) << " (" << format_double(to_double(check.bound))
                << ")\n";
            if (check.slope) out << "log-log slope: " << format_double(check.slope->slope) << "\n";
            out << (check.passed ? "PASS" : "FAIL") << "\n";
            return check.passed ? kExitOk : kExitCheckFailed;
        }

        if (scan->parsed()) {
            if (scan_function.empty() && scan_reference.empty())
                throw RangeError("scan: one of --function or --reference is required");
            JetFunction jet;
            std::optional<RationalSeries> fseries;
            std::optional<ReferenceSolution> ref;
            if (!scan_function.empty()) {
                fseries = series_from_expr(expr::parse(scan_function), 60);
                jet = [&fseries](double x, int count) { return evaluate_derivatives(*fseries, x, count); };
            } else {
                const ReferenceKind kind = scan_reference == "bessel" ? ReferenceKind::Bessel : ReferenceKind::Example4;
                const double p = scan_param.value_or(kind == ReferenceKind::Bessel ? 2.0 : 1.0 / (2.0 * std::numbers::e));
                ref.emplace(reference_solution(kind, p));
                jet = ref->jet();
            }
            const MinimalCScan result = minimal_c_scan(jet, scan_order, scan_grid.grid());
            out << "samples: " << result.ratios.size() << "\n"
                << "skipped: " << result.skipped.size() << "\n"
                << "C_min: " << format_double(result.c_min) << "\n";
            if (!scan_csv.empty()) {
                std::ostringstream os;
                write_scan_csv(os, result);
                write_file(scan_csv, os.str());
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    return run_cli(args, out, err);
}

}  // namespace singode
