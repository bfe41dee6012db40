#include <qvertex/cli.hpp>
#include <qvertex/filter.hpp>
#include <qvertex/io.hpp>
#include <qvertex/presets.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace qvertex::cli {

namespace {

// Raised for bad invocations; maps to kUsageError.
class UsageError : public Error {
  public:
    using Error::Error;
};

std::string num(double v, const char* fmt = "%.6g")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

double rank_tolerance()
{
    const char* env = std::getenv("QVERTEX_RANK_TOL");
    if (!env || !*env)
        return kDefaultRankTol;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0)
        throw UsageError(std::string("QVERTEX_RANK_TOL must be a positive number, got '") + env + "'");
    return v;
}

struct Source {
    std::string input;
    std::string preset;
};

BoundaryPair load_vertex(const Source& src)
{
    if (src.input.empty() == src.preset.empty())
        throw UsageError("give exactly one of an input file or --preset");
    if (!src.preset.empty()) {
        try {
            return make_case(preset(src.preset).params);
        } catch (const IndexError& e) {
            throw UsageError(e.what());
        }
    }
    const std::string text = io::read_text_file(src.input);
    return io::vertex_from_json(io::parse_json_text(text));
}

void emit(const std::string& text, const std::string& path, bool force, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << text;
    else
        io::write_text_file(path, text, force);
}

void print_class(const VertexClass& c, std::ostream& out)
{
    out << "class: (r_A, r_B, r_S) = (" << c.r_A << ", " << c.r_B << ", " << c.r_S
        << ")  n = " << c.n << "  label = " << to_string(c.label) << '\n';
    out << "rank identity r_A + r_B = n + r_S: " << (c.rank_identity_holds() ? "holds" : "BROKEN")
        << '\n';
    for (const auto& w : c.warnings)
        out << "warning: " << w << '\n';
}

void print_report(const CouplingReport& r, std::ostream& out)
{
    out << "pattern: " << r.pattern() << '\n';
    out << "pair  kind    |T(0)|        |T(inf)|      peak          variation\n";
    for (const auto& p : r.pairs) {
        // pad by code points; the symbols are multibyte UTF-8
        std::string kind(symbol(p.kind));
        const auto width = std::count_if(kind.begin(), kind.end(),
                                         [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; });
        kind.append(static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, 8 - width)), ' ');
        char line[160];
        std::snprintf(line, sizeof line, "%d%d    %s%-13.6g %-13.6g %-13.6g %.6g\n", p.i, p.j, kind.c_str(),
                      p.t0, p.tinf, p.peak, p.variation);
        out << line;
    }
    if (!r.pairs.empty())
        out << "epsilon: " << num(r.pairs.front().epsilon) << '\n';
    for (const auto& w : r.warnings)
        out << "warning: " << w << '\n';
}

int cmd_check(const Source& src, bool as_json, std::ostream& out)
{
    const double tol = rank_tolerance();
    const auto p = load_vertex(src);
    const auto rep = validate_admissible(p, tol);
    io::Json j;
    j["admissible"] = rep.ok;
    j["rank_AB"] = rep.rank_AB;
    j["hermitian_defect"] = rep.hermitian_defect;
    j["hermitian_tol"] = rep.hermitian_tol;
    if (!rep.ok) {
        j["violation"] = rep.violation;
        if (as_json) {
            out << j.dump(2) << '\n';
        } else {
            out << "admissible: no\n";
            out << "rank[A|B] = " << rep.rank_AB << " (n = " << p.n() << ")\n";
            out << "hermitian defect of AB+ = " << num(rep.hermitian_defect, "%.3g") << " (tol "
                << num(rep.hermitian_tol, "%.3g") << ")\n";
            out << "violation: " << rep.violation << '\n';
        }
        return kValidationFailure;
    }

    const auto cls = classify(p, tol);
    io::Json residuals = io::Json::object();
    std::vector<std::pair<double, double>> unit;
    for (double k : {0.1, 1.0, 10.0}) {
        const double d = s_matrix(p, k).unitarity_defect();
        unit.emplace_back(k, d);
        residuals[num(k, "%g")] = d;
    }
    if (as_json) {
        j["class"] = io::vertex_class_to_json(cls);
        j["unitarity_residual"] = residuals;
        out << j.dump(2) << '\n';
        return kSuccess;
    }
    out << "admissible: yes\n";
    out << "rank[A|B] = " << rep.rank_AB << " (n = " << p.n() << ")\n";
    out << "hermitian defect of AB+ = " << num(rep.hermitian_defect, "%.3g") << " (tol "
        << num(rep.hermitian_tol, "%.3g") << ")\n";
    print_class(cls, out);
    out << "unitarity residual max|S+S - I|:";
    for (const auto& [k, d] : unit)
        out << "  k=" << num(k, "%g") << ": " << num(d, "%.3g");
    out << '\n';
    return kSuccess;
}

int cmd_classify(const Source& src, double epsilon, bool as_json, std::ostream& out)
{
    const double tol = rank_tolerance();
    const auto p = load_vertex(src);
    const auto rep = validate_admissible(p, tol);
    if (!rep.ok) {
        out << "admissible: no\nviolation: " << rep.violation << '\n';
        return kValidationFailure;
    }
    const auto cls = classify(p, tol);
    const auto report = pair_coupling_class(p, epsilon);
    if (as_json) {
        io::Json j{{"class", io::vertex_class_to_json(cls)},
                   {"coupling", io::coupling_report_to_json(report)},
                   {"epsilon", epsilon}};
        out << j.dump(2) << '\n';
    } else {
        print_class(cls, out);
        print_report(report, out);
    }
    return kSuccess;
}

struct SweepArgs {
    double kmin = 1e-2;
    double kmax = 1e2;
    int points = 400;
    std::string out_path;
    bool force = false;
    bool amplitudes = false;
};

int cmd_sweep(const Source& src, const SweepArgs& a, std::ostream& out, std::ostream& err)
{
    std::vector<double> grid;
    try {
        grid = io::log_grid(a.kmin, a.kmax, a.points);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    const double tol = rank_tolerance();
    const auto p = load_vertex(src);
    const auto rep = validate_admissible(p, tol);
    if (!rep.ok) {
        err << "not admissible: " << rep.violation << '\n';
        return kValidationFailure;
    }
    const auto result = io::sweep(p, grid);
    emit(io::sweep_csv(result, a.amplitudes), a.out_path, a.force, out);
    if (result.max_flux_defect > 1e-9) {
        err << "warning: flux defect " << num(result.max_flux_defect, "%.3g") << '\n';
        return kValidationFailure;
    }
    return kSuccess;
}

struct DesignArgs {
    std::string spec_path;
    std::string out_path;
    bool force = false;
    std::optional<double> epsilon;
    bool as_json = false;
};

int cmd_design(const DesignArgs& a, std::ostream& out, std::ostream& err)
{
    FilterSpec spec;
    try {
        spec = io::filter_spec_from_text(io::read_text_file(a.spec_path));
    } catch (const ParseError& e) {
        throw UsageError(std::string("filter spec: ") + e.what());
    }
    auto design = design_branching_filter(spec);
    if (a.epsilon) {
        design.epsilon = *a.epsilon;
        design.achieved = pair_coupling_class(design.vertex, *a.epsilon);
    }

    auto doc = io::vertex_to_json(design.base, design.relabel);
    doc["design"] = {{"recipe", design.recipe},
                     {"epsilon", design.epsilon},
                     {"pattern", design.achieved.pattern()}};
    const bool to_stdout = a.out_path.empty() || a.out_path == "-";
    emit(doc.dump(2) + "\n", a.out_path, a.force, out);

    // With the vertex on stdout the report goes to stderr.
    std::ostream& rep = to_stdout ? err : out;
    const bool ok = design.matches(spec);
    if (a.as_json) {
        io::Json j{{"recipe", design.recipe},
                   {"epsilon", design.epsilon},
                   {"matches", ok},
                   {"achieved", io::coupling_report_to_json(design.achieved)}};
        for (std::size_t s = 0; s < 3; ++s)
            if (spec.targets[s]) {
                const auto pairs = coupling_pairs(3);
                const auto& pc = design.achieved.pair(pairs[s][0], pairs[s][1]);
                j["targets"][std::to_string(pairs[s][0]) + std::to_string(pairs[s][1])] = {
                    {"requested", *spec.targets[s]},
                    {"achieved_t0_sq", pc.t0 * pc.t0},
                    {"achieved_tinf_sq", pc.tinf * pc.tinf}};
            }
        rep << j.dump(2) << '\n';
    } else {
        rep << "recipe: " << design.recipe << '\n';
        print_report(design.achieved, rep);
        const auto pairs = coupling_pairs(3);
        for (std::size_t s = 0; s < 3; ++s)
            if (spec.targets[s]) {
                const auto& pc = design.achieved.pair(pairs[s][0], pairs[s][1]);
                rep << "target " << pairs[s][0] << pairs[s][1] << ": requested "
                    << num(*spec.targets[s]) << ", achieved |T(0)|^2 = " << num(pc.t0 * pc.t0)
                    << ", |T(inf)|^2 = " << num(pc.tinf * pc.tinf) << '\n';
            }
        rep << "matches spec: " << (ok ? "yes" : "no") << '\n';
    }
    return ok ? kSuccess : kValidationFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Boundary conditions and scattering at a quantum star-graph vertex", "qvertex"};
    app.require_subcommand(1);

    Source check_src, classify_src, sweep_src;
    bool check_json = false, classify_json = false;
    double classify_eps = kDefaultEpsilon;
    SweepArgs sweep_args;
    DesignArgs design_args;
    double design_eps = 0.0;

    auto* check = app.add_subcommand("check", "Validate a vertex and report its rank class");
    check->add_option("input", check_src.input, "Vertex JSON file");
    check->add_option("--preset", check_src.preset, "Built-in preset (fig2, fig4, ...)");
    check->add_flag("--json", check_json, "Emit JSON");

    auto* sweep = app.add_subcommand("sweep", "Tabulate |R_i|^2 and |T_ij|^2 over a log k-grid");
    sweep->add_option("input", sweep_src.input, "Vertex JSON file");
    sweep->add_option("--preset", sweep_src.preset, "Built-in preset");
    sweep->add_option("--kmin", sweep_args.kmin, "Smallest wave number")->capture_default_str();
    sweep->add_option("--kmax", sweep_args.kmax, "Largest wave number")->capture_default_str();
    sweep->add_option("--points", sweep_args.points, "Grid points")->capture_default_str();
    sweep->add_option("--out", sweep_args.out_path, "CSV path (stdout when omitted)");
    sweep->add_flag("--force", sweep_args.force, "Overwrite an existing file");
    sweep->add_flag("--amplitudes", sweep_args.amplitudes, "Emit re/im amplitudes");

    auto* classify_cmd = app.add_subcommand("classify", "Per-pair high/low-pass character");
    classify_cmd->add_option("input", classify_src.input, "Vertex JSON file");
    classify_cmd->add_option("--preset", classify_src.preset, "Built-in preset");
    classify_cmd->add_option("--epsilon", classify_eps, "Relative blocking threshold")
        ->capture_default_str();
    classify_cmd->add_flag("--json", classify_json, "Emit JSON");

    auto* design = app.add_subcommand("design", "Build a branching filter from a pair spec");
    design->add_option("spec", design_args.spec_path, "Filter spec JSON file")->required();
    design->add_option("--out", design_args.out_path, "Vertex JSON path (stdout when omitted)");
    design->add_flag("--force", design_args.force, "Overwrite an existing file");
    auto* design_eps_opt =
        design->add_option("--epsilon", design_eps, "Re-check with this threshold");
    design->add_flag("--json", design_args.as_json, "Emit the report as JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*check)
            return cmd_check(check_src, check_json, out);
        if (*sweep)
            return cmd_sweep(sweep_src, sweep_args, out, err);
        if (*classify_cmd) {
            if (!(classify_eps > 0.0))
                throw UsageError("--epsilon must be positive");
            return cmd_classify(classify_src, classify_eps, classify_json, out);
        }
        if (*design_eps_opt) {
            if (!(design_eps > 0.0))
                throw UsageError("--epsilon must be positive");
            design_args.epsilon = design_eps;
        }
        return cmd_design(design_args, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const SpecError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const FileError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace qvertex::cli
