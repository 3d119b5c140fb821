#include "fbms/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fbms/checks.hpp"
#include "fbms/exemplars.hpp"
#include "fbms/parallel.hpp"
#include "fbms/solver.hpp"
#include "fbms/steklov.hpp"

namespace fbms::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ConvexAmbient load_ambient(const json& cfg) {
    const std::string path = cfg.value("ambient", std::string());
    if (path.empty()) return ConvexAmbient::ball(1.0);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read ambient config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw AmbientError("malformed ambient config '" + path + "': " + e.what());
    }
    return ConvexAmbient::from_json(j);
}

TriMesh generate_exemplar(const json& cfg) {
    const std::string name = cfg.at("exemplar").get<std::string>();
    const int level = cfg.value("refine", 2);
    if (level < 0 || level > 6) throw UsageError("--refine must lie in [0, 6]");
    TriMesh mesh = [&] {
        if (name == "disk") return equatorial_disk(3 << level, 12 << level);
        if (name == "catenoid") return critical_catenoid(8 << level, 16 << level);
        if (name == "parallel_disk") return horizontal_disk(3 << level, 12 << level, cfg.value("height", 0.5));
        throw UsageError("unknown exemplar '" + name + "' (disk, catenoid, parallel_disk)");
    }();
    const double amp = cfg.value("perturb", 0.0);
    if (amp != 0.0) mesh = perturb(mesh, load_ambient(cfg), amp, cfg.value("seed", std::uint64_t{7}));
    return mesh;
}

json solver_json(const ConvergenceReport& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"final_H_sup", r.final_H_sup},
            {"final_orth_defect", r.final_orth_defect},
            {"initial_area", r.initial_area},
            {"final_area", r.final_area},
            {"final_balance", r.final_balance},
            {"rejected_steps", r.rejected_steps},
            {"smoothing_passes", r.smoothing_passes},
            {"final_step", r.final_step},
            {"objective_history", r.area_history},
            {"message", r.message}};
}

SolverConfig solver_config(const json& cfg) {
    SolverConfig sc;
    sc.tol_H = cfg.value("tol_h", sc.tol_H);
    sc.tol_orth = cfg.value("tol_orth", sc.tol_orth);
    sc.max_iters = cfg.value("max_iters", sc.max_iters);
    sc.smoothing = cfg.value("smoothing", sc.smoothing);
    sc.validate();
    return sc;
}

json spectrum_json(const TriMesh& mesh, int m) {
    const int nb = static_cast<int>(mesh.boundary_vertices().size());
    if (m < 2 || m > nb) throw UsageError("--num-eigs must lie in [2, number of boundary vertices]");
    const SteklovSpectrum s = steklov_spectrum(mesh, m);
    const double length = boundary_length(mesh);
    std::vector<double> eig(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
    return {{"eigenvalues", eig},
            {"multiplicity", s.multiplicity},
            {"multiplicity_gap", s.multiplicity_gap},
            {"method", s.method},
            {"boundary_length", length},
            {"sigma1", s.eigenvalues(1)},
            {"sigma1_times_length", s.eigenvalues(1) * length}};
}

Outcome verify_outcome(const TriMesh& mesh, const ConvexAmbient& ambient, const json& cfg) {
    ReportOptions opt;
    opt.num_eigs = cfg.value("num_eigs", opt.num_eigs);
    const GeometryReport r = full_report(mesh, ambient, opt);
    json j = r;
    if (cfg.value("schema_check", false)) {
        const auto problems = validate_report_schema(j);
        if (!problems.empty()) throw std::logic_error("report fails schema check: " + problems.front());
    }
    return {j, r.all_passed() ? ExitCode::ok : ExitCode::check_failure};
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace

Outcome execute(const json& cfg, bool write_files) {
    set_num_threads(cfg.value("threads", 1));
    const std::string cmd = cfg.at("subcommand").get<std::string>();
    Outcome out;
    auto maybe_write_mesh = [&](const TriMesh& mesh, const char* key) {
        const std::string path = cfg.value(key, std::string());
        if (write_files && !path.empty()) write_mesh(mesh, path);
    };

    if (cmd == "generate") {
        const TriMesh mesh = generate_exemplar(cfg);
        maybe_write_mesh(mesh, "output");
        const Topology t = topology(mesh);
        out.report = {{"vertices", mesh.num_vertices()},
                      {"faces", mesh.num_faces()},
                      {"area", area(mesh)},
                      {"length", boundary_length(mesh)},
                      {"genus", t.genus},
                      {"boundary_components", t.boundary_components}};
    } else if (cmd == "solve") {
        const SolveResult res = minimize_area(read_mesh(cfg.at("input").get<std::string>()), load_ambient(cfg), solver_config(cfg));
        maybe_write_mesh(res.mesh, "output");
        out.report = {{"solver", solver_json(res.report)}};
        out.exit_code = res.report.converged ? ExitCode::ok : ExitCode::check_failure;
    } else if (cmd == "spectrum") {
        out.report = {{"spectrum", spectrum_json(read_mesh(cfg.at("input").get<std::string>()), cfg.value("num_eigs", 5))}};
    } else if (cmd == "verify") {
        out = verify_outcome(read_mesh(cfg.at("input").get<std::string>()), load_ambient(cfg), cfg);
    } else if (cmd == "pipeline") {
        const ConvexAmbient ambient = load_ambient(cfg);
        const TriMesh start = generate_exemplar(cfg);
        const SolveResult res = minimize_area(start, ambient, solver_config(cfg));
        maybe_write_mesh(res.mesh, "output");
        out = verify_outcome(res.mesh, ambient, cfg);
        CheckResult conv;
        conv.name = "solver_converged";
        conv.value = res.report.iterations;
        conv.status = res.report.converged ? CheckStatus::pass : CheckStatus::fail;
        conv.reason = res.report.message;
        out.report["checks"].insert(out.report["checks"].begin(), json(conv));
        if (!res.report.converged) out.exit_code = ExitCode::check_failure;
        out.report["all_passed"] = out.exit_code == ExitCode::ok;
        out.report["solver"] = solver_json(res.report);
        out.report["spectrum_detail"] = spectrum_json(res.mesh, std::max(2, cfg.value("num_eigs", 5)));
        out.report["generated"] = {{"vertices", start.num_vertices()}, {"faces", start.num_faces()}};
    } else {
        throw UsageError("unknown subcommand '" + cmd + "'");
    }
    out.report["version"] = kVersion;
    out.report["run_config"] = cfg;
    return out;
}

std::vector<std::string> compare_reports(const json& a, const json& b, double rel_tol) {
    std::vector<std::string> diffs;
    auto walk = [&](auto&& self, const json& x, const json& y, const std::string& path) -> void {
        if (x.is_number() && y.is_number()) {
            const double u = x.get<double>(), v = y.get<double>();
            if (std::abs(u - v) > rel_tol * std::max(1.0, std::abs(u))) diffs.push_back(path);
        } else if (x.is_object() && y.is_object()) {
            for (auto it = x.begin(); it != x.end(); ++it) {
                if (!y.contains(it.key())) {
                    diffs.push_back(path + "/" + it.key());
                } else {
                    self(self, it.value(), y.at(it.key()), path + "/" + it.key());
                }
            }
        } else if (x.is_array() && y.is_array()) {
            if (x.size() != y.size()) {
                diffs.push_back(path);
                return;
            }
            for (std::size_t i = 0; i < x.size(); ++i) self(self, x[i], y[i], path + "/" + std::to_string(i));
        } else if (x != y) {
            diffs.push_back(path);
        }
    };
    walk(walk, a, b, "");
    return diffs;
}

int run(int argc, char** argv) {
    CLI::App app{"Free-boundary minimal surfaces: generation, solving, Steklov spectra and checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 1;
    std::uint64_t seed = 7;
    bool schema_check = false;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for perturbations");
    app.add_flag("--schema-check", schema_check, "validate reports against the schema before writing");

    std::string input, output, ambient, report_path, exemplar = "disk";
    int level = 2, num_eigs = 5, max_iters = SolverConfig{}.max_iters;
    double amp = 0.0, height = 0.5, tol_h = SolverConfig{}.tol_H, tol_orth = SolverConfig{}.tol_orth;
    bool replay = false;

    auto add_exemplar = [&](CLI::App* sub) {
        sub->add_option("--exemplar", exemplar, "disk | catenoid | parallel_disk");
        sub->add_option("--refine", level, "refinement level (resolution doubles per level)");
        sub->add_option("--perturb", amp, "normal perturbation amplitude");
        sub->add_option("--height", height, "plane height for parallel_disk");
    };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--tol-h", tol_h);
        sub->add_option("--tol-orth", tol_orth);
        sub->add_option("--max-iters", max_iters);
    };

    CLI::App* gen = app.add_subcommand("generate", "write an exemplar mesh");
    add_exemplar(gen);
    gen->add_option("--ambient", ambient, "ambient config (JSON)");
    gen->add_option("-o,--out,--output", output, "mesh path (.off or .obj)")->required();
    gen->add_option("--report", report_path);

    CLI::App* solve = app.add_subcommand("solve", "minimise area with free boundary");
    solve->add_option("--input", input)->required();
    solve->add_option("--ambient", ambient);
    add_solver(solve);
    solve->add_option("--output", output);
    solve->add_option("--report", report_path);

    CLI::App* spec = app.add_subcommand("spectrum", "Steklov eigenvalues");
    spec->add_option("--input", input)->required();
    spec->add_option("--num-eigs", num_eigs);
    spec->add_option("--report", report_path);

    CLI::App* verify = app.add_subcommand("verify", "run all checks on a mesh");
    verify->add_option("--input", input)->required();
    verify->add_option("--ambient", ambient);
    verify->add_option("--num-eigs", num_eigs);
    verify->add_option("--report", report_path);

    CLI::App* rep = app.add_subcommand("report", "inspect or replay a report");
    rep->add_option("--input", input)->required();
    rep->add_flag("--replay", replay, "rerun the embedded configuration and compare");

    CLI::App* pipe = app.add_subcommand("pipeline", "generate, solve, spectrum and verify");
    add_exemplar(pipe);
    add_solver(pipe);
    pipe->add_option("--ambient", ambient);
    pipe->add_option("--num-eigs", num_eigs);
    pipe->add_option("--output", output);
    pipe->add_option("--report", report_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::usage_or_io;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == rep) {
            std::ifstream in(input);
            if (!in) throw UsageError("cannot read report '" + input + "'");
            json stored;
            in >> stored;
            if (schema_check && stored.contains("checks")) {
                const auto problems = validate_report_schema(stored);
                for (const auto& p : problems) std::cerr << "schema: " << p << '\n';
                if (!problems.empty()) return ExitCode::check_failure;
            }
            if (!replay) {
                std::cout << stored.dump(2) << '\n';
                return stored.value("all_passed", true) ? ExitCode::ok : ExitCode::check_failure;
            }
            const Outcome again = execute(stored.at("run_config"), false);
            const auto diffs = compare_reports(stored, again.report, 1e-12);
            for (const auto& d : diffs) std::cout << "differs: " << d << '\n';
            std::cout << (diffs.empty() ? "replay matches" : "replay differs") << '\n';
            return diffs.empty() ? ExitCode::ok : ExitCode::check_failure;
        }

        json cfg = {{"subcommand", sub->get_name()}, {"threads", threads}, {"seed", seed}, {"schema_check", schema_check}};
        if (!input.empty()) cfg["input"] = input;
        if (!output.empty()) cfg["output"] = output;
        if (!ambient.empty()) cfg["ambient"] = ambient;
        if (sub == gen || sub == pipe) {
            cfg["exemplar"] = exemplar;
            cfg["refine"] = level;
            cfg["perturb"] = amp;
            cfg["height"] = height;
        }
        if (sub == solve || sub == pipe) {
            cfg["tol_h"] = tol_h;
            cfg["tol_orth"] = tol_orth;
            cfg["max_iters"] = max_iters;
        }
        if (sub == spec || sub == verify || sub == pipe) cfg["num_eigs"] = num_eigs;

        const Outcome out = execute(cfg, true);
        if (report_path.empty()) {
            std::cout << out.report.dump(2) << '\n';
        } else {
            write_json(out.report, report_path);
            std::cout << sub->get_name() << ": " << (out.exit_code == ExitCode::ok ? "ok" : "check failure") << ", report "
                      << report_path << '\n';
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::usage_or_io;
    }
}

}  // namespace fbms::cli
