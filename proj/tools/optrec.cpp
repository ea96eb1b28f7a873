// optrec command-line tool: worst-case error bounds, point-set optimization,
// and spectral verification on bounded domains.
//
// Exit codes: 0 success, 1 invariant/verification failure, 2 configuration error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optrec/io.hpp"
#include "optrec/sweep.hpp"
#include "optrec/verify.hpp"
#include "optrec/version.hpp"

using namespace optrec;

namespace {

NormSpec parse_norm(const std::string& p, const std::vector<double>& weights) {
    NormSpec n = p == "inf" ? NormSpec::linf() : NormSpec::lp(std::stod(p));
    if (!weights.empty()) n = n.with_weights(weights);
    return n;
}

ModulusOfContinuity parse_omega(const std::string& s) {
    if (s == "id") return ModulusOfContinuity::identity();
    if (s.rfind("pow:", 0) == 0) return ModulusOfContinuity::power(std::stod(s.substr(4)));
    throw std::invalid_argument("omega must be 'id' or 'pow:<alpha>'");
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) std::cout << j.dump(2) << std::endl;
    else write_json_file(out, j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal worst-case error bounds for Lipschitz classes on general domains"};
    app.set_version_flag("--version", kVersion);
    app.set_help_flag("--help", "print help");
    app.set_help_all_flag("--help-all", "print help for all subcommands");
    app.require_subcommand(1);

    std::string domain_path, points_path, out_path, norm_p = "2", omega_s = "id";
    std::vector<double> norm_weights;
    std::uint64_t seed = 0;
    std::size_t budget = 1u << 20;
    std::size_t jobs = 1;

    auto add_common = [&](CLI::App* sub, bool needs_domain) {
        if (needs_domain)
            sub->add_option("--domain", domain_path, "domain JSON file")->required();
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--out", out_path, "output JSON path (stdout if absent)");
    };

    // volume
    auto* cmd_volume = app.add_subcommand("volume", "domain volume (exact or Monte-Carlo)");
    add_common(cmd_volume, true);
    cmd_volume->add_option("--budget", budget, "Monte-Carlo samples");

    // cover
    auto* cmd_cover = app.add_subcommand("cover", "covering radius of a point set");
    add_common(cmd_cover, true);
    cmd_cover->add_option("--points", points_path, "point set CSV")->required();
    cmd_cover->add_option("--norm-p", norm_p, "norm exponent or 'inf'");
    cmd_cover->add_option("--norm-weights", norm_weights, "per-axis weights");
    std::string cover_mode = "certified";
    double cover_tol = 1e-6;
    cmd_cover->add_option("--mode", cover_mode, "certified | mc");
    cmd_cover->add_option("--tol", cover_tol, "certified interval width");
    cmd_cover->add_option("--budget", budget, "MC samples (mc mode)");

    // wce
    auto* cmd_wce = app.add_subcommand("wce", "worst-case error of fixed nodes");
    add_common(cmd_wce, true);
    cmd_wce->add_option("--points", points_path, "point set CSV")->required();
    cmd_wce->add_option("--norm-p", norm_p, "norm exponent or 'inf'");
    cmd_wce->add_option("--norm-weights", norm_weights, "per-axis weights");
    std::string problem = "linf";
    cmd_wce->add_option("--problem", problem, "linf | int");
    cmd_wce->add_option("--omega", omega_s, "modulus: id | pow:<alpha>");
    cmd_wce->add_option("--budget", budget, "MC samples");
    double wce_tol = 1e-6;
    cmd_wce->add_option("--tol", wce_tol, "certified width (linf problem)");

    // optimize
    auto* cmd_opt = app.add_subcommand("optimize", "construct and optimize node sets");
    add_common(cmd_opt, true);
    cmd_opt->add_option("--norm-p", norm_p, "norm exponent or 'inf'");
    cmd_opt->add_option("--norm-weights", norm_weights, "per-axis weights");
    std::size_t opt_n = 8;
    std::string objective = "covering", points_out = "points.csv", trace_out;
    std::size_t iters = 40, restarts = 6, opt_samples = 0, pool = 10000;
    cmd_opt->add_option("--n", opt_n, "number of nodes")->required();
    cmd_opt->add_option("--objective", objective, "covering | quantization");
    cmd_opt->add_option("--iters", iters, "lloyd iterations");
    cmd_opt->add_option("--restarts", restarts, "independent restarts");
    cmd_opt->add_option("--samples", opt_samples, "samples per iteration (0 = auto)");
    cmd_opt->add_option("--pool", pool, "greedy candidate pool size");
    cmd_opt->add_option("--points-out", points_out, "output point CSV");
    cmd_opt->add_option("--trace", trace_out, "objective trace JSON");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "n-sweep: optimize, measure, compare to bounds");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--norm-p", norm_p, "norm exponent or 'inf'");
    cmd_sweep->add_option("--norm-weights", norm_weights, "per-axis weights");
    std::vector<std::size_t> n_list;
    bool sweep_grid = false;
    std::string sweep_objective = "covering";
    cmd_sweep->add_option("--n", n_list, "node counts")->required();
    cmd_sweep->add_flag("--grid", sweep_grid, "use m^d grids instead of optimized nodes");
    cmd_sweep->add_option("--objective", sweep_objective, "covering | quantization");
    cmd_sweep->add_option("--budget", budget, "MC samples per item");
    cmd_sweep->add_option("--jobs", jobs, "concurrent sweep items");
    cmd_sweep->add_option("--iters", iters, "lloyd iterations");
    cmd_sweep->add_option("--restarts", restarts, "restarts");

    // bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "closed-form bound calculators");
    std::string formula = "lower2";
    std::size_t b_n = 1, b_d = 1, b_r = 1;
    double b_vol = 1.0, b_eps = 0.1, b_cr = 1.0;
    cmd_bounds->add_option("--formula", formula, "lower2|lower4|upper1|asy1|asy3|curse|cr")
        ->required();
    cmd_bounds->add_option("--n", b_n, "information count");
    cmd_bounds->add_option("--d", b_d, "dimension")->required();
    cmd_bounds->add_option("--p", norm_p, "norm exponent or 'inf'");
    cmd_bounds->add_option("--vol", b_vol, "domain volume");
    cmd_bounds->add_option("--eps", b_eps, "target error (curse)");
    cmd_bounds->add_option("--r", b_r, "smoothness (cr)");
    cmd_bounds->add_option("--cr", b_cr, "user constant c_r (cr)");
    cmd_bounds->add_option("--seed", seed, "unused; accepted for uniformity");
    cmd_bounds->add_option("--out", out_path, "output JSON path");

    // spectrum
    auto* cmd_spec = app.add_subcommand("spectrum", "Laplacian eigenvalues on a masked grid");
    add_common(cmd_spec, true);
    double spec_h = 0.01;
    std::string bc = "dirichlet";
    std::size_t spec_k = 50;
    cmd_spec->add_option("--h", spec_h, "mesh width")->required();
    cmd_spec->add_option("--bc", bc, "dirichlet | neumann");
    cmd_spec->add_option("--k", spec_k, "number of eigenvalues");

    // weyl
    auto* cmd_weyl = app.add_subcommand("weyl", "compare Weyl constants across spectra");
    std::vector<std::string> spectra_paths;
    cmd_weyl->add_option("--spectra", spectra_paths, "spectrum JSON files")->expected(-2);
    cmd_weyl->add_option("--out", out_path, "output JSON path");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the module invariant battery");
    double verify_scale = 1.0;
    cmd_verify->add_option("--seed", seed, "RNG seed");
    cmd_verify->add_option("--scale", verify_scale, "sample budget multiplier");
    cmd_verify->add_option("--out", out_path, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_volume) {
            auto D = load_domain(domain_path);
            emit(to_json(volume(D, budget, seed)), out_path);
        } else if (*cmd_cover) {
            auto D = load_domain(domain_path);
            auto X = read_csv_file(points_path);
            CoverOptions co;
            co.mode = cover_mode == "mc" ? CoverOptions::Mode::MonteCarlo
                                         : CoverOptions::Mode::Certified;
            co.tol = cover_tol;
            co.budget = budget;
            co.seed = seed;
            emit(to_json(covering_radius(D, X, parse_norm(norm_p, norm_weights), co)), out_path);
        } else if (*cmd_wce) {
            auto D = load_domain(domain_path);
            auto X = read_csv_file(points_path);
            auto norm = parse_norm(norm_p, norm_weights);
            auto omega = parse_omega(omega_s);
            if (problem == "linf") {
                CoverOptions co;
                co.tol = wce_tol;
                co.budget = budget;
                co.seed = seed;
                if (D.kind() == Domain::Kind::Mask) co.mode = CoverOptions::Mode::MonteCarlo;
                emit(to_json(wce_linf(D, X, norm, omega, co)), out_path);
            } else if (problem == "int") {
                emit(to_json(wce_integration(D, X, norm, omega, budget, seed)), out_path);
            } else {
                throw std::invalid_argument("--problem must be linf or int");
            }
        } else if (*cmd_opt) {
            auto D = load_domain(domain_path);
            auto norm = parse_norm(norm_p, norm_weights);
            auto X0 = greedy_farthest_point(D, opt_n, norm, seed, pool);
            OptimizerConfig oc;
            oc.objective = objective == "quantization"
                               ? OptimizerConfig::Objective::Quantization
                               : OptimizerConfig::Objective::Covering;
            oc.norm = norm;
            oc.iterations = iters;
            oc.restarts = restarts;
            oc.sample_budget = opt_samples;
            oc.seed = seed;
            auto res = lloyd_descent(D, X0, oc);
            write_csv_file(points_out, res.points);
            json j;
            j["objective"] = res.objective;
            j["trace"] = res.trace;
            j["events"] = res.events;
            j["n"] = opt_n;
            j["seed"] = seed;
            j["points_csv"] = points_out;
            if (D.kind() != Domain::Kind::Mask) {
                CoverOptions co;
                co.tol = 1e-5;
                j["certified_covering_radius"] = to_json(covering_radius(D, res.points, norm, co));
            }
            j["tool_version"] = kVersion;
            if (!trace_out.empty()) write_json_file(trace_out, j);
            emit(j, out_path);
        } else if (*cmd_sweep) {
            SweepConfig sc;
            sc.domain = load_domain(domain_path);
            sc.norm = parse_norm(norm_p, norm_weights);
            sc.objective = sweep_objective == "quantization"
                               ? OptimizerConfig::Objective::Quantization
                               : OptimizerConfig::Objective::Covering;
            sc.n_values = n_list;
            sc.grid_nodes = sweep_grid;
            sc.budget = budget;
            sc.seed = seed;
            sc.jobs = jobs;
            sc.opt_iterations = iters;
            sc.opt_restarts = restarts;
            auto rep = run_sweep(sc);
            json j;
            j["seed"] = rep.seed;
            j["volume"] = rep.volume;
            j["cover_slope"] = rep.cover_slope;
            j["cover_prefactor"] = rep.cover_prefactor;
            j["int_slope"] = rep.int_slope;
            j["int_prefactor"] = rep.int_prefactor;
            j["budget"] = budget;
            j["tool_version"] = kVersion;
            json items = json::array();
            std::string csv = "n,cover,cover_lo,cover_hi,int,int_stderr,linf_lower,int_lower\n";
            for (const auto& it : rep.items) {
                json ji;
                ji["n"] = it.n;
                ji["ok"] = it.ok;
                if (!it.ok) ji["error"] = it.error;
                else {
                    ji["covering"] = to_json(it.covering);
                    ji["integration"] = to_json(it.integration);
                    ji["linf_lower"] = to_json(it.linf_lower);
                    ji["linf_asymptote"] = to_json(it.linf_asy);
                    ji["int_lower"] = to_json(it.int_lower);
                    ji["int_asymptote"] = to_json(it.int_asy);
                    csv += std::to_string(it.n) + "," + std::to_string(it.covering.value) + "," +
                           std::to_string(it.covering.lo) + "," + std::to_string(it.covering.hi) +
                           "," + std::to_string(it.integration.value) + "," +
                           std::to_string(it.integration.stderr_) + "," +
                           std::to_string(it.linf_lower.lo) + "," +
                           std::to_string(it.int_lower.lo) + "\n";
                }
                items.push_back(ji);
            }
            j["items"] = items;
            if (!out_path.empty()) {
                write_json_file(out_path + ".json", j);
                std::ofstream f(out_path + ".csv");
                f << csv;
                for (const auto& it : rep.items)
                    if (it.ok)
                        write_csv_file(out_path + ".n" + std::to_string(it.n) + ".csv", it.nodes);
                std::cout << "sweep written to " << out_path << ".{json,csv}" << std::endl;
            } else {
                std::cout << j.dump(2) << std::endl;
            }
        } else if (*cmd_bounds) {
            auto norm = parse_norm(norm_p, norm_weights);
            json j;
            if (formula == "lower2") j = to_json(linf_uniform_lower(b_n, b_d, norm, b_vol));
            else if (formula == "lower4") j = to_json(int_uniform_lower(b_n, b_d, norm, b_vol));
            else if (formula == "upper1")
                j = to_json(linf_boundary_zero_bracket(b_n, b_d, norm, b_vol));
            else if (formula == "asy1") j = to_json(linf_asymptote(b_n, b_d, norm, b_vol));
            else if (formula == "asy3") j = to_json(int_asymptote(b_n, b_d, norm, b_vol));
            else if (formula == "curse") {
                if (norm.is_inf) throw std::invalid_argument("curse: finite p required");
                j = to_json(curse_min_n(b_eps, b_d, norm.p));
            } else if (formula == "cr") {
                j["value"] = cr_class_lower(b_n, b_d, b_r, b_cr);
                j["formula"] = "cr";
                j["inputs"] = {{"n", b_n}, {"d", b_d}, {"r", b_r}, {"c_r", b_cr}};
                j["tool_version"] = kVersion;
            } else throw std::invalid_argument("unknown formula '" + formula + "'");
            emit(j, out_path);
        } else if (*cmd_spec) {
            auto D = load_domain(domain_path);
            auto G = discretize(D, spec_h);
            auto bcv = bc == "neumann" ? Spectrum::BC::Neumann : Spectrum::BC::Dirichlet;
            auto S = eigenvalues(G, bcv, spec_k, seed);
            emit(to_json(S), out_path);
        } else if (*cmd_weyl) {
            json j;
            json specs = json::array();
            std::vector<double> consts;
            for (const auto& path : spectra_paths) {
                auto S = spectrum_from_json(read_json_file(path));
                auto est = weyl_constant_estimate(S, S.domain_volume, S.d);
                json js;
                js["file"] = path;
                js["constant"] = est.value;
                js["plateau"] = est.plateau;
                js["spread"] = est.spread;
                auto ratios = weyl_ratio(S, S.domain_volume, S.d);
                js["weyl_ratio_tail"] = ratios.back();
                specs.push_back(js);
                consts.push_back(est.value);
            }
            j["spectra"] = specs;
            double clo = consts[0], chi = consts[0];
            for (double c : consts) {
                clo = std::min(clo, c);
                chi = std::max(chi, c);
            }
            j["max_pairwise_deviation"] = chi / clo - 1.0;
            j["agree_within_10pct"] = chi / clo - 1.0 <= 0.10;
            j["tool_version"] = kVersion;
            emit(j, out_path);
            if (!(chi / clo - 1.0 <= 0.10)) return 1;
        } else if (*cmd_verify) {
            auto results = run_verify(seed, verify_scale);
            json j;
            json items = json::array();
            for (const auto& r : results) {
                std::printf("%-45s %s%s%s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                            r.detail.empty() ? "" : "  -- ", r.detail.c_str());
                json ji;
                ji["name"] = r.name;
                ji["pass"] = r.pass;
                if (!r.detail.empty()) ji["detail"] = r.detail;
                items.push_back(ji);
            }
            j["checks"] = items;
            j["all_pass"] = all_passed(results);
            j["seed"] = seed;
            j["scale"] = verify_scale;
            j["tool_version"] = kVersion;
            if (!out_path.empty()) write_json_file(out_path, j);
            if (!all_passed(results)) return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
