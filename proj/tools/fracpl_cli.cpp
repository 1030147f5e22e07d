// fracpl command-line front end: solve, verify, apply, hypotheses.

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "fracpl/energy.hpp"
#include "fracpl/errors.hpp"
#include "fracpl/fracops.hpp"
#include "fracpl/io.hpp"
#include "fracpl/solvers.hpp"
#include "fracpl/verify.hpp"

using namespace fracpl;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNotConverged = 2, kIo = 3 };

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_text(path, text);
}

int run_solve(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const auto fp = make_params(cfg.problem.alpha, cfg.problem.p, cfg.problem.T);
    const Grid grid = make_grid(cfg.problem.T, cfg.problem.n);
    const ProblemState st = make_problem(fp, grid, cfg.nonlinearity, cfg.solver.eps_reg);
    const auto& sv = cfg.solver;

    GridFunction solution;
    std::string report;
    bool converged = false;
    try {
        if (sv.method == "direct") {
            const double a = sv.init_amplitude;
            const GridFunction init =
                sample(grid, [&](double t) { return a * std::sin(std::numbers::pi * t / grid.T); }, true);
            DirectOptions opts;
            opts.require_hypotheses = sv.require_hypotheses;
            SolveReport r = minimize_direct(st, init, sv.tol, sv.max_iter, opts);
            r.seed = sv.seed;
            solution = r.solution;
            converged = r.converged;
            report = to_json(r);
        } else if (sv.method == "mountain_pass") {
            const auto r = mountain_pass_full(st, sv.path_points, sv.tol, sv.max_iter, sv.seed);
            solution = r.solve.solution;
            converged = r.solve.converged;
            report = to_json(r);
        } else {
            const auto r = multiplicity_search(st, sv.k, sv.tol, sv.seed);
            solution = r.pairs.empty() ? zeros(grid) : r.pairs.front().solution;
            converged = r.converged_count >= sv.k;
            report = to_json(r);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError("nonlinearity", std::string("nonlinearity rejected by solver: ") + e.what());
    }
    if (!cfg.output.solution_path.empty()) write_text(cfg.output.solution_path, solution_csv(grid, solution));
    emit(cfg.output.report_path, report);
    return converged ? kOk : kNotConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional p-Laplacian solver and property verifier"};
    app.require_subcommand(1);

    std::string config_path;
    auto* solve = app.add_subcommand("solve", "run the configured solver");
    solve->add_option("--config", config_path, "JSON run configuration")->required();

    double alpha = 0.5, p = 2.0, T = 1.0;
    int n = 256, samples = 100;
    std::uint64_t seed = 42;
    std::string property, out_path;
    auto* ver = app.add_subcommand("verify", "run the property verification suite");
    ver->add_option("--alpha", alpha)->required();
    ver->add_option("--p", p)->required();
    ver->add_option("--T", T)->required();
    ver->add_option("--n", n)->required();
    ver->add_option("--seed", seed);
    ver->add_option("--samples", samples);
    ver->add_option("--property", property);
    ver->add_option("--out", out_path);

    std::string kind, input, output;
    double apply_alpha = 0.5;
    auto* app_apply = app.add_subcommand("apply", "apply a fractional operator to tabulated data");
    app_apply->add_option("--kind", kind)->required();
    app_apply->add_option("--alpha", apply_alpha)->required();
    app_apply->add_option("--input", input)->required();
    app_apply->add_option("--output", output)->required();

    std::string hyp_config, regime_name;
    auto* hyp = app.add_subcommand("hypotheses", "check the nonlinearity hypotheses");
    hyp->add_option("--config", hyp_config)->required();
    hyp->add_option("--regime", regime_name, "SUBLINEAR or SUPERLINEAR (default from solver.method)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*solve) return run_solve(config_path);

        if (*ver) {
            FracParams fp;
            try {
                fp = make_params(alpha, p, T);
                (void)make_grid(T, n);
                if (n > kMaxGridSize) throw InvalidArgument("n exceeds 8192");
                if (samples < 1) throw InvalidArgument("samples must be positive");
            } catch (const InvalidArgument& e) {
                throw ConfigError("verify", std::string("verify: ") + e.what());
            }
            const Grid grid = make_grid(T, n);
            std::vector<VerificationReport> reps;
            if (property.empty()) {
                reps = run_suite({fp}, grid, seed, samples);
            } else {
                PropertyId id;
                try {
                    id = parse_property(property);
                } catch (const InvalidArgument& e) {
                    throw ConfigError("--property", std::string("--property: ") + e.what());
                }
                if (auto why = precondition_failure(id, fp))
                    throw ConfigError("--property", "--property " + property + ": " + *why);
                reps.push_back(verify(id, fp, grid, samples, seed));
            }
            emit(out_path, to_json(reps));
            bool ok = true;
            for (const auto& r : reps) ok = ok && (r.skipped || r.passed);
            return ok ? kOk : kNotConverged;
        }

        if (*app_apply) {
            OpKind k;
            try {
                k = parse_op_kind(kind);
            } catch (const InvalidArgument& e) {
                throw ConfigError("--kind", std::string("--kind: ") + e.what());
            }
            const Table tab = read_csv(input);
            if (tab.t.size() < 3) throw ConfigError("--input", "--input: need at least 3 rows");
            const int nn = static_cast<int>(tab.t.size()) - 1;
            const double TT = tab.t.back();
            if (tab.t.front() != 0.0) throw ConfigError("--input", "--input: first t must be 0");
            const Grid grid = make_grid(TT, nn);
            for (int i = 0; i <= nn; ++i)
                if (std::abs(tab.t[i] - grid.nodes[i]) > 1e-9 * TT)
                    throw ConfigError("--input", "--input: t column is not a uniform grid");
            if (!(apply_alpha > 0.0 && apply_alpha <= 1.0))
                throw ConfigError("--alpha", "--alpha out of (0,1]");
            const auto ops = build_operators(apply_alpha, grid);
            GridFunction u;
            u.values = tab.u;
            const GridFunction r = apply(ops, k, u);
            write_text(output, solution_csv(grid, r));
            return kOk;
        }

        if (*hyp) {
            const RunConfig cfg = load_config(hyp_config);
            Regime regime = cfg.solver.method == "mountain_pass" ? Regime::SUPERLINEAR : Regime::SUBLINEAR;
            if (regime_name == "SUBLINEAR") regime = Regime::SUBLINEAR;
            else if (regime_name == "SUPERLINEAR") regime = Regime::SUPERLINEAR;
            else if (!regime_name.empty()) throw ConfigError("--regime", "--regime must be SUBLINEAR or SUPERLINEAR");
            const auto fp = make_params(cfg.problem.alpha, cfg.problem.p, cfg.problem.T);
            const auto rep = validate_hypotheses(cfg.nonlinearity, fp, regime, 2000, cfg.solver.seed);
            std::cout << to_json(rep);
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const ExtrapolationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    }
    return kOk;
}
