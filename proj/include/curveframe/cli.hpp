#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "curveframe/aw.hpp"
#include "curveframe/curve.hpp"
#include "curveframe/errors.hpp"
#include "curveframe/expression.hpp"
#include "curveframe/frames.hpp"
#include "curveframe/io.hpp"
#include "curveframe/profile.hpp"
#include "curveframe/synthesis.hpp"

namespace curveframe::cli {

// Bad flag combination discovered after CLI parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct CommandState {
    // input sources
    std::vector<std::string> inputs;
    std::string input;  // single-input commands
    std::string format;
    std::string k1_text, k2_text, kappa_text, tau_text;
    double theta0 = 0.0;
    std::string family;
    double c = 1.0;
    int sign = 1;
    // grid
    double s_start = 0.0;
    double s_end = 2.0;
    std::size_t n = 0;  // 0: per-command default
    // numeric options
    std::string initial_normal;
    double kappa_min = 1e-8;
    double tol = 0.0;  // 0: provenance default
    std::size_t trim = 4;
    bool legacy_cross = false;
    std::string end_condition = "not-a-knot";
    // initial frame for synthesis
    std::string position0 = "0,0,0";
    std::string tangent0 = "1,0,0";
    std::string normal0 = "0,1,0";
    // outputs
    std::string output;
    std::string residuals_path;
};

inline Vec3 parse_triple(const std::string& text, const std::string& flag) {
    const auto fields = io_detail::split(text, ',');
    if (fields.size() != 3) throw UsageError(flag + ": expected three comma-separated numbers");
    double v[3];
    for (int i = 0; i < 3; ++i) {
        const std::string t = io_detail::trimmed(fields[static_cast<std::size_t>(i)]);
        const char* begin = t.data();
        const char* end = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(begin, end, v[i]);
        if (ec != std::errc() || ptr != end)
            throw UsageError(flag + ": malformed number '" + t + "'");
    }
    return {v[0], v[1], v[2]};
}

inline std::optional<Vec3> optional_triple(const std::string& text, const std::string& flag) {
    if (text.empty()) return std::nullopt;
    return parse_triple(text, flag);
}

inline std::optional<PointFormat> requested_format(const std::string& format) {
    if (format.empty()) return std::nullopt;
    if (format == "csv") return PointFormat::csv;
    if (format == "json") return PointFormat::json;
    throw UsageError("--format: expected csv or json");
}

inline CubicSpline::End parse_end_condition(const std::string& name) {
    if (name == "natural") return CubicSpline::End::natural;
    if (name == "not-a-knot") return CubicSpline::End::not_a_knot;
    throw UsageError("--end-condition: expected natural or not-a-knot");
}

inline CanonicalFamily parse_family(const std::string& name) {
    if (name == "aw1") return CanonicalFamily::aw1;
    if (name == "weak-aw2") return CanonicalFamily::weak_aw2;
    throw UsageError("--family: expected aw1 or weak-aw2");
}

enum class SourceKind { file, bishop_expr, frenet_expr, family };

inline SourceKind resolve_source(const CommandState& st, bool allow_file) {
    const bool has_file = !st.inputs.empty();
    const bool has_bishop = !st.k1_text.empty() || !st.k2_text.empty();
    const bool has_frenet = !st.kappa_text.empty() || !st.tau_text.empty();
    const bool has_family = !st.family.empty();
    const int count = int(has_file) + int(has_bishop) + int(has_frenet) + int(has_family);
    if (count != 1)
        throw UsageError(
            "choose exactly one input source: --input, --k1/--k2, --kappa/--tau, or --family");
    if (has_bishop && (st.k1_text.empty() || st.k2_text.empty()))
        throw UsageError("--k1 and --k2 must be given together");
    if (has_frenet && (st.kappa_text.empty() || st.tau_text.empty()))
        throw UsageError("--kappa and --tau must be given together");
    if (has_file && !allow_file)
        throw UsageError("this command takes expression sources, not --input");
    if (has_file) return SourceKind::file;
    if (has_bishop) return SourceKind::bishop_expr;
    if (has_frenet) return SourceKind::frenet_expr;
    return SourceKind::family;
}

inline CurveSamples load_curve(const CommandState& st, const std::string& path) {
    const auto points = read_points(path, requested_format(st.format));
    ResampleOptions options;
    options.end_condition = parse_end_condition(st.end_condition);
    return resample_arclength(points, st.n == 0 ? 1001 : st.n, options);
}

// Prescribed profile from an expression or family source.
inline CurvatureProfile prescribed_profile(const CommandState& st, SourceKind kind) {
    const std::size_t n = st.n == 0 ? 2001 : st.n;
    const Grid grid = Grid::over(st.s_start, st.s_end, n);
    switch (kind) {
        case SourceKind::bishop_expr: {
            const auto k1 = ScalarFunction::parse(st.k1_text);
            const auto k2 = ScalarFunction::parse(st.k2_text);
            CurvatureProfile p;
            p.grid = grid;
            p.provenance = Provenance::prescribed;
            p.k1.resize(n);
            p.k2.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                p.k1[i] = k1(grid.s(i));
                p.k2[i] = k2(grid.s(i));
            }
            fill_bishop_derivatives(p);
            return p;
        }
        case SourceKind::frenet_expr:
            return frenet_to_bishop(ScalarFunction::parse(st.kappa_text),
                                    ScalarFunction::parse(st.tau_text), st.theta0, grid);
        case SourceKind::family:
            return canonical_profile(parse_family(st.family), st.c, st.sign, grid);
        case SourceKind::file: break;
    }
    throw UsageError("internal: unexpected source kind");
}

inline ClassifyOptions classify_options(const CommandState& st) {
    ClassifyOptions options;
    if (st.tol != 0.0) options.tol = st.tol;
    options.kappa_min = st.kappa_min;
    options.trim = st.trim;
    options.cross_term =
        st.legacy_cross ? CrossTermConvention::k1_cubed : CrossTermConvention::consistent;
    return options;
}

inline void write_residuals_for(const CommandState& st, const CurvatureProfile& completed) {
    ResidualOptions ropt;
    ropt.kappa_min = st.kappa_min;
    ropt.cross_term =
        st.legacy_cross ? CrossTermConvention::k1_cubed : CrossTermConvention::consistent;
    const ResidualBattery bishop = bishop_aw_residuals(completed, ropt);
    ResidualBattery frenet;
    const ResidualBattery* frenet_ptr = nullptr;
    try {
        frenet = frenet_aw_residuals(completed, ropt);
        frenet_ptr = &frenet;
    } catch (const NoValidSamples&) {
    }
    write_residuals_csv(st.residuals_path, completed.grid, frenet_ptr, bishop);
}

inline void print_report_table(std::ostream& os, const AwReport& report) {
    char line[200];
    os << "provenance: " << provenance_name(report.provenance)
       << "  tol: " << io_detail::num(report.tol)
       << "  kappa_min: " << io_detail::num(report.kappa_min) << '\n';
    std::snprintf(line, sizeof line, "evaluated samples %zu..%zu, s in [%.6g, %.6g]\n",
                  report.trim_first, report.trim_last, report.s_first, report.s_last);
    os << line;
    std::snprintf(line, sizeof line, "%-16s  %-12s  %-7s  %-10s  %s\n", "condition", "residual",
                  "verdict", "degenerate", "samples");
    os << line;
    for (const auto& c : report.conditions) {
        char residual[32];
        if (std::isfinite(c.residual))
            std::snprintf(residual, sizeof residual, "%.4e", c.residual);
        else
            std::snprintf(residual, sizeof residual, "n/a");
        std::snprintf(line, sizeof line, "%-16s  %-12s  %-7s  %-10s  %zu\n", c.name.c_str(),
                      residual, c.verdict ? "pass" : "fail", c.degenerate ? "yes" : "no",
                      c.evaluated_samples);
        os << line;
    }
}

inline void do_frame(const CommandState& st) {
    const CurveSamples curve = load_curve(st, st.input);
    FrameOptions options;
    options.kappa_min = st.kappa_min;
    const FrenetField frenet = frenet_frame(curve, options);
    const BishopField bishop =
        bishop_frame(curve, optional_triple(st.initial_normal, "--initial-normal"));
    write_frame_csv(st.output, curve, frenet, bishop);
}

inline void do_convert(const CommandState& st) {
    const SourceKind kind = resolve_source(st, false);
    const CurvatureProfile profile = prescribed_profile(st, kind);
    write_profile_csv(st.output, complete_profile(profile, st.kappa_min));
}

inline void do_synthesize(const CommandState& st) {
    const SourceKind kind = resolve_source(st, false);
    const std::size_t n = st.n == 0 ? 2001 : st.n;
    const Vec3 position = parse_triple(st.position0, "--position0");
    const Vec3 tangent = parse_triple(st.tangent0, "--tangent0");
    const Vec3 normal = parse_triple(st.normal0, "--normal0");

    SynthesizedCurve result;
    if (kind == SourceKind::frenet_expr) {
        result = synthesize_from_frenet(ScalarFunction::parse(st.kappa_text),
                                        ScalarFunction::parse(st.tau_text), st.theta0, st.s_start,
                                        st.s_end, n, position, tangent, normal);
    } else {
        SynthesisSpec spec;
        if (kind == SourceKind::family) {
            spec = canonical_spec(parse_family(st.family), st.c, st.sign, st.s_start, st.s_end, n);
        } else {
            spec.k1 = ScalarFunction::parse(st.k1_text);
            spec.k2 = ScalarFunction::parse(st.k2_text);
            spec.s_start = st.s_start;
            spec.s_end = st.s_end;
            spec.n = n;
        }
        spec.initial_position = position;
        spec.initial_T = tangent;
        spec.initial_M1 = normal;
        result = synthesize_from_bishop(spec);
    }
    write_synthesis_csv(st.output, result.curve, result.frame);
}

inline void run_classification(const CommandState& st, bool table, std::ostream& os) {
    const SourceKind kind = resolve_source(st, true);
    const ClassifyOptions options = classify_options(st);

    std::vector<std::pair<std::string, AwReport>> reports;
    CurvatureProfile last_completed;

    if (kind == SourceKind::file) {
        if (st.inputs.size() > 1 && !st.residuals_path.empty())
            throw UsageError("--residuals requires a single input");
        FrameOptions fopt;
        fopt.kappa_min = st.kappa_min;
        for (const auto& path : st.inputs) {
            const CurveSamples curve = load_curve(st, path);
            const CurvatureProfile measured = measure_profile(
                curve, optional_triple(st.initial_normal, "--initial-normal"), fopt);
            last_completed = complete_profile(measured, st.kappa_min);
            reports.emplace_back(path, classify(last_completed, options));
        }
    } else {
        last_completed = complete_profile(prescribed_profile(st, kind), st.kappa_min);
        reports.emplace_back("", classify(last_completed, options));
    }

    if (!st.residuals_path.empty()) write_residuals_for(st, last_completed);

    if (!st.output.empty()) {
        if (reports.size() == 1)
            write_report_json(st.output, reports.front().second);
        else
            write_reports_json(st.output, reports);
    }

    if (table) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (!reports[i].first.empty()) os << "input: " << reports[i].first << '\n';
            print_report_table(os, reports[i].second);
            if (i + 1 < reports.size()) os << '\n';
        }
    }
}

inline void register_source_options(CLI::App* cmd, CommandState& st, bool with_file) {
    if (with_file)
        cmd->add_option("--input", st.inputs, "input curve file (repeatable)");
    cmd->add_option("--k1", st.k1_text, "expression for k1(s)");
    cmd->add_option("--k2", st.k2_text, "expression for k2(s)");
    cmd->add_option("--kappa", st.kappa_text, "expression for kappa(s)");
    cmd->add_option("--tau", st.tau_text, "expression for tau(s)");
    cmd->add_option("--theta0", st.theta0, "initial normal development angle")
        ->capture_default_str();
    cmd->add_option("--family", st.family, "canonical family: aw1 or weak-aw2")
        ->check(CLI::IsMember({"aw1", "weak-aw2"}));
    cmd->add_option("--c", st.c, "canonical family constant c")->capture_default_str();
    cmd->add_option("--sign", st.sign, "canonical family sign")
        ->check(CLI::IsMember({1, -1}))
        ->capture_default_str();
}

inline void register_grid_options(CLI::App* cmd, CommandState& st) {
    cmd->add_option("--s-start", st.s_start, "arc-length range start")->capture_default_str();
    cmd->add_option("--s-end", st.s_end, "arc-length range end")->capture_default_str();
    cmd->add_option("--n", st.n,
                    "sample count (default: 1001 for --input, 2001 for expressions)");
}

inline void register_resample_options(CLI::App* cmd, CommandState& st) {
    cmd->add_option("--format", st.format, "input format (default: by file extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--end-condition", st.end_condition, "resampling spline end condition")
        ->check(CLI::IsMember({"natural", "not-a-knot"}))
        ->capture_default_str();
    cmd->add_option("--initial-normal", st.initial_normal,
                    "seed normal for the parallel-transport frame, as x,y,z");
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    using detail::CommandState;

    CLI::App app{"Frenet and parallel-transport frames, AW-type classification, and curve "
                 "synthesis from prescribed curvatures"};
    app.name("curveframe");
    CommandState st;

    CLI::App* frame = app.add_subcommand(
        "frame", "compute both frames along a curve and write an extended CSV");
    frame->add_option("--input", st.input, "input curve file")->required();
    detail::register_resample_options(frame, st);
    frame->add_option("--n", st.n, "resample count (default 1001)");
    frame->add_option("--kappa-min", st.kappa_min, "curvature floor for the Frenet frame")
        ->capture_default_str();
    frame->add_option("--output", st.output, "output CSV path")->required();

    CLI::App* convert = app.add_subcommand(
        "convert", "convert between (k1,k2) and (kappa,tau,theta0) descriptions");
    detail::register_source_options(convert, st, false);
    detail::register_grid_options(convert, st);
    convert->add_option("--kappa-min", st.kappa_min, "curvature floor for recovered Frenet data")
        ->capture_default_str();
    convert->add_option("--output", st.output, "output CSV path")->required();

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "evaluate all AW-type residuals and write a JSON report");
    detail::register_source_options(classify_cmd, st, true);
    detail::register_grid_options(classify_cmd, st);
    detail::register_resample_options(classify_cmd, st);
    classify_cmd->add_option("--tol", st.tol, "verdict tolerance (default by provenance)");
    classify_cmd->add_option("--kappa-min", st.kappa_min, "curvature floor")
        ->capture_default_str();
    classify_cmd->add_option("--trim", st.trim, "boundary samples excluded from the sup")
        ->capture_default_str();
    classify_cmd->add_flag("--legacy-cross-term", st.legacy_cross,
                           "use the k1^3 variant of the third-chain cross term");
    classify_cmd->add_option("--output", st.output, "report JSON path")->required();
    classify_cmd->add_option("--residuals", st.residuals_path,
                             "also write per-sample residuals CSV (single input only)");

    CLI::App* synthesize =
        app.add_subcommand("synthesize", "integrate a curve from prescribed curvatures");
    detail::register_source_options(synthesize, st, false);
    detail::register_grid_options(synthesize, st);
    synthesize->add_option("--position0", st.position0, "initial position x,y,z")
        ->capture_default_str();
    synthesize->add_option("--tangent0", st.tangent0, "initial tangent x,y,z (unit)")
        ->capture_default_str();
    synthesize->add_option("--normal0", st.normal0, "initial M1 x,y,z (unit, orthogonal)")
        ->capture_default_str();
    synthesize->add_option("--output", st.output, "output extended CSV path")->required();

    CLI::App* report =
        app.add_subcommand("report", "classify and print a summary table to stdout");
    detail::register_source_options(report, st, true);
    detail::register_grid_options(report, st);
    detail::register_resample_options(report, st);
    report->add_option("--tol", st.tol, "verdict tolerance (default by provenance)");
    report->add_option("--kappa-min", st.kappa_min, "curvature floor")->capture_default_str();
    report->add_option("--trim", st.trim, "boundary samples excluded from the sup")
        ->capture_default_str();
    report->add_flag("--legacy-cross-term", st.legacy_cross,
                     "use the k1^3 variant of the third-chain cross term");
    report->add_option("--output", st.output, "optional report JSON path");
    report->add_option("--residuals", st.residuals_path,
                       "also write per-sample residuals CSV (single input only)");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (frame->parsed())
            detail::do_frame(st);
        else if (convert->parsed())
            detail::do_convert(st);
        else if (classify_cmd->parsed())
            detail::run_classification(st, false, std::cout);
        else if (synthesize->parsed())
            detail::do_synthesize(st);
        else if (report->parsed())
            detail::run_classification(st, true, std::cout);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("curveframe");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace curveframe::cli
