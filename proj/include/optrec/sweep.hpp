#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "optrec/bounds.hpp"
#include "optrec/covering.hpp"
#include "optrec/domain.hpp"
#include "optrec/pointopt.hpp"
#include "optrec/wce.hpp"

namespace optrec {

/// One n-sweep over optimized (or grid) node sets: per n the certified/MC
/// covering radius, the Monte-Carlo integration worst case, and the bound
/// brackets, plus log-log fits of rate and prefactor.
struct SweepConfig {
    Domain domain = Domain::unit_box(2);
    NormSpec norm = NormSpec::lp(2.0);
    OptimizerConfig::Objective objective = OptimizerConfig::Objective::Covering;
    std::vector<std::size_t> n_values;
    bool grid_nodes = false;     // use m^d grids (box domains, square counts) instead
    std::size_t budget = 1u << 18;
    std::size_t opt_iterations = 40;
    std::size_t opt_restarts = 6;
    std::size_t opt_samples = 0; // 0 = auto
    double cover_tol = 1e-5;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

struct SweepItem {
    std::size_t n = 0;
    PointSet nodes;
    ErrorReport covering;
    ErrorReport integration;
    BoundReport linf_lower;
    BoundReport linf_asy;
    BoundReport int_lower;
    BoundReport int_asy;
    bool ok = false;
    std::string error;
};

struct SweepReport {
    std::vector<SweepItem> items;
    double cover_slope = 0.0, cover_prefactor = 0.0;
    double int_slope = 0.0, int_prefactor = 0.0;
    double volume = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void loglog_fit(const std::vector<double>& n, const std::vector<double>& v, double& slope,
                       double& prefactor) {
    slope = prefactor = 0.0;
    if (n.size() < 2) return;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        double x = std::log(n[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    prefactor = std::exp((sy - slope * sx) / m);
}

inline SweepItem sweep_one(const SweepConfig& cfg, std::size_t n, double vol) {
    SweepItem item;
    item.n = n;
    try {
        if (cfg.grid_nodes) {
            double root = std::pow(static_cast<double>(n),
                                   1.0 / static_cast<double>(cfg.domain.dim()));
            std::size_t m = static_cast<std::size_t>(std::llround(root));
            std::size_t check = 1;
            for (std::size_t j = 0; j < cfg.domain.dim(); ++j) check *= m;
            if (check != n)
                throw std::invalid_argument("sweep: grid nodes need n = m^d");
            item.nodes = make_grid_points(cfg.domain, m);
        } else {
            auto X0 = greedy_farthest_point(cfg.domain, n, cfg.norm, mix_seed(cfg.seed, n));
            OptimizerConfig oc;
            oc.objective = cfg.objective;
            oc.norm = cfg.norm;
            oc.iterations = cfg.opt_iterations;
            oc.restarts = cfg.opt_restarts;
            oc.sample_budget = cfg.opt_samples;
            oc.seed = mix_seed(cfg.seed, 7919 * n);
            item.nodes = lloyd_descent(cfg.domain, X0, oc).points;
        }
        CoverOptions co;
        co.tol = cfg.cover_tol;
        co.seed = mix_seed(cfg.seed, n + 1);
        if (cfg.domain.kind() == Domain::Kind::Mask) {
            co.mode = CoverOptions::Mode::MonteCarlo;
            co.budget = cfg.budget;
        }
        item.covering = covering_radius(cfg.domain, item.nodes, cfg.norm, co);
        item.integration = wce_integration(cfg.domain, item.nodes, cfg.norm,
                                           ModulusOfContinuity::identity(), cfg.budget,
                                           mix_seed(cfg.seed, n + 2));
        const std::size_t d = cfg.domain.dim();
        item.linf_lower = linf_uniform_lower(n, d, cfg.norm, vol);
        item.linf_asy = linf_asymptote(n, d, cfg.norm, vol);
        item.int_lower = int_uniform_lower(n, d, cfg.norm, vol);
        item.int_asy = int_asymptote(n, d, cfg.norm, vol);
        item.ok = true;
    } catch (const std::exception& e) {
        item.ok = false;
        item.error = e.what();
    }
    return item;
}

} // namespace detail

inline SweepReport run_sweep(const SweepConfig& cfg) {
    if (cfg.n_values.empty()) throw std::invalid_argument("run_sweep: n_values required");
    SweepReport rep;
    rep.seed = cfg.seed;
    rep.volume = volume(cfg.domain, cfg.budget, mix_seed(cfg.seed, 0x55)).value;

    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    rep.items.resize(cfg.n_values.size());
    std::size_t next = 0;
    while (next < cfg.n_values.size()) {
        std::size_t batch = std::min(jobs, cfg.n_values.size() - next);
        std::vector<std::future<SweepItem>> futs;
        for (std::size_t t = 0; t < batch; ++t) {
            std::size_t idx = next + t;
            futs.push_back(std::async(std::launch::async, [&cfg, idx, &rep] {
                return detail::sweep_one(cfg, cfg.n_values[idx], rep.volume);
            }));
        }
        for (std::size_t t = 0; t < batch; ++t) rep.items[next + t] = futs[t].get();
        next += batch;
    }

    std::vector<double> ns, cov, integ;
    for (const auto& it : rep.items) {
        if (!it.ok) continue;
        ns.push_back(static_cast<double>(it.n));
        cov.push_back(it.covering.value);
        integ.push_back(it.integration.value);
    }
    detail::loglog_fit(ns, cov, rep.cover_slope, rep.cover_prefactor);
    detail::loglog_fit(ns, integ, rep.int_slope, rep.int_prefactor);
    return rep;
}

} // namespace optrec
