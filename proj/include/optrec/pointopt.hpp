#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "optrec/covering.hpp"
#include "optrec/domain.hpp"
#include "optrec/geometry.hpp"
#include "optrec/modulus.hpp"
#include "optrec/nearest.hpp"
#include "optrec/points.hpp"

namespace optrec {

/// Gonzalez-style farthest-point construction over a sampled candidate pool.
/// First node approximates the Chebyshev center; every further node maximizes
/// the min-distance to the chosen ones. Covering radius of the result is at
/// most twice the optimum, up to pool resolution.
inline PointSet greedy_farthest_point(const Domain& D, std::size_t n, const NormSpec& norm,
                                      std::uint64_t seed, std::size_t pool_size = 10000) {
    if (n < 1) throw std::invalid_argument("greedy_farthest_point: n >= 1 required");
    PointSet pool = sample_uniform(D, std::max(pool_size, n), seed);
    const std::size_t m = pool.size();
    const std::size_t probe = std::min<std::size_t>(m, 2048);

    // approximate 1-center: candidate minimizing the max distance to a probe set
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probe; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < probe; ++j)
            worst = std::max(worst, distance(pool.point(i), pool.point(j), norm));
        if (worst < best_val) {
            best_val = worst;
            best = i;
        }
    }

    PointSet out(pool.dim());
    out.push_back(pool.point(best));
    std::vector<double> mind(m, std::numeric_limits<double>::infinity());
    while (out.size() < n) {
        std::size_t far = 0;
        double fd = -1.0;
        auto last = out.point(out.size() - 1);
        for (std::size_t i = 0; i < m; ++i) {
            mind[i] = std::min(mind[i], distance(pool.point(i), last, norm));
            if (mind[i] > fd) {
                fd = mind[i];
                far = i;
            }
        }
        out.push_back(pool.point(far));
    }
    return out;
}

/// m^d cell-center grid on a box; covering radius in l_inf is exactly
/// max side / (2m).
inline PointSet make_grid_points(const Domain& box_domain, std::size_t m) {
    if (box_domain.kind() != Domain::Kind::Box)
        throw std::invalid_argument("make_grid_points: box domain required");
    if (m < 1) throw std::invalid_argument("make_grid_points: m >= 1 required");
    const Box& b = box_domain.as_box();
    const std::size_t d = b.dim();
    std::size_t total = 1;
    for (std::size_t j = 0; j < d; ++j) total *= m;
    PointSet out(d);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d), h(d);
    for (std::size_t j = 0; j < d; ++j) h[j] = b.side(j) / static_cast<double>(m);
    for (std::size_t c = 0; c < total; ++c) {
        for (std::size_t j = 0; j < d; ++j)
            x[j] = b.lo[j] + (static_cast<double>(idx[j]) + 0.5) * h[j];
        out.push_back(x);
        for (std::size_t j = 0; j < d; ++j) {
            if (++idx[j] < m) break;
            idx[j] = 0;
        }
    }
    return out;
}

struct OptimizerConfig {
    std::size_t iterations = 60;
    std::size_t restarts = 8;
    std::size_t cell_budget = 64;   // candidate points per cell update
    std::size_t sample_budget = 0;  // samples per iteration; 0 = max(8192, 128 n)
    std::uint64_t seed = 0;
    enum class Objective { Covering, Quantization } objective = Objective::Covering;
    NormSpec norm = NormSpec::lp(2.0);
    ModulusOfContinuity omega = ModulusOfContinuity::identity();
};

struct LloydResult {
    PointSet points;
    double objective = 0.0;           // certified radius on boxes/unions, MC otherwise
    std::vector<double> trace;        // per-iteration objective estimates
    std::vector<std::string> events;  // cell re-seeds and similar
};

namespace detail {

inline double mc_objective(const PointSet& nodes, const PointSet& samples, double volume,
                           const OptimizerConfig& cfg) {
    NearestQuery nq(nodes, cfg.norm);
    if (cfg.objective == OptimizerConfig::Objective::Covering) {
        double m = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            m = std::max(m, nq.min_distance(samples.point(i)));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        s += cfg.omega(nq.min_distance(samples.point(i)));
    return volume * s / static_cast<double>(samples.size());
}

inline LloydResult lloyd_single(const Domain& D, const PointSet& X0, const OptimizerConfig& cfg,
                                std::uint64_t restart_seed, double volume) {
    const std::size_t n = X0.size();
    const std::size_t d = X0.dim();
    const std::size_t budget =
        cfg.sample_budget ? cfg.sample_budget : std::max<std::size_t>(8192, 128 * n);

    LloydResult res;
    PointSet nodes = X0;
    PointSet best_nodes = X0;
    double best_obj = std::numeric_limits<double>::infinity();
    // fixed evaluation sample: iterate selection must not chase sampling noise
    PointSet eval_samples =
        sample_uniform(D, std::max<std::size_t>(16384, 32 * n), mix_seed(restart_seed, 0xee));
    best_obj = mc_objective(X0, eval_samples, volume, cfg); // the initial iterate competes too

    std::vector<std::vector<std::size_t>> cells(n);
    const bool weiszfeld = cfg.objective == OptimizerConfig::Objective::Quantization &&
                           cfg.omega.is_identity() && !cfg.norm.is_inf && cfg.norm.p == 2.0 &&
                           !cfg.norm.weighted() && D.kind() != Domain::Kind::Mask;

    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        PointSet samples = sample_uniform(D, budget, mix_seed(restart_seed, it + 1));
        for (auto& c : cells) c.clear();
        {
            NearestQuery nq(nodes, cfg.norm);
            for (std::size_t i = 0; i < samples.size(); ++i)
                cells[nq.nearest_index(samples.point(i))].push_back(i);
        }
        if (cfg.objective == OptimizerConfig::Objective::Covering && n >= 2 && it % 9 == 8 &&
            it + 8 < cfg.iterations) {
            // teleport move: plain descent stalls in grid-like local optima, so
            // occasionally move the least-loaded node onto the farthest sample
            // (best-iterate selection discards the move when it does not pay off)
            NearestQuery nq(nodes, cfg.norm);
            double fd = -1.0;
            std::size_t far = 0;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                double dist_i = nq.min_distance(samples.point(i));
                if (dist_i > fd) {
                    fd = dist_i;
                    far = i;
                }
            }
            double least = std::numeric_limits<double>::infinity();
            std::size_t kmin = 0;
            for (std::size_t k = 0; k < n; ++k) {
                double worst = 0.0;
                for (std::size_t s : cells[k])
                    worst = std::max(worst, distance(nodes.point(k), samples.point(s), cfg.norm));
                if (worst < least) {
                    least = worst;
                    kmin = k;
                }
            }
            auto fp = samples.point(far);
            std::copy(fp.begin(), fp.end(), nodes.point(kmin).begin());
            // reclassify against the moved node set
            for (auto& c : cells) c.clear();
            NearestQuery nq2(nodes, cfg.norm);
            for (std::size_t i = 0; i < samples.size(); ++i)
                cells[nq2.nearest_index(samples.point(i))].push_back(i);
        }
        auto reseed_eng = stream_engine(restart_seed, 0xce110000ULL + it);
        for (std::size_t k = 0; k < n; ++k) {
            auto& cell = cells[k];
            if (cell.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
                auto p = samples.point(pick(reseed_eng));
                std::copy(p.begin(), p.end(), nodes.point(k).begin());
                res.events.push_back("iter " + std::to_string(it) + ": cell " +
                                     std::to_string(k) + " empty, node re-seeded");
                continue;
            }
            if (cfg.objective == OptimizerConfig::Objective::Covering) {
                // approximate 1-center: candidates are the current node, points
                // of the cell, the cell bounding-box center (exact sample
                // 1-center in l_inf), and a Badoiu-Clarkson iterate
                std::size_t stride = std::max<std::size_t>(1, cell.size() / cfg.cell_budget);
                double cur_best = std::numeric_limits<double>::infinity();
                std::vector<double> winner(nodes.point(k).begin(), nodes.point(k).end());
                auto eval = [&](std::span<const double> cand) {
                    double worst = 0.0;
                    for (std::size_t s : cell) {
                        worst = std::max(worst, distance(cand, samples.point(s), cfg.norm));
                        if (worst >= cur_best) break;
                    }
                    if (worst < cur_best) {
                        cur_best = worst;
                        winner.assign(cand.begin(), cand.end());
                    }
                };
                eval(nodes.point(k));
                for (std::size_t idx = 0; idx < cell.size(); idx += stride)
                    eval(samples.point(cell[idx]));
                std::vector<double> bc(d);
                {
                    std::vector<double> blo(d, std::numeric_limits<double>::infinity());
                    std::vector<double> bhi(d, -std::numeric_limits<double>::infinity());
                    for (std::size_t s : cell) {
                        auto pnt = samples.point(s);
                        for (std::size_t j = 0; j < d; ++j) {
                            blo[j] = std::min(blo[j], pnt[j]);
                            bhi[j] = std::max(bhi[j], pnt[j]);
                        }
                    }
                    for (std::size_t j = 0; j < d; ++j) bc[j] = 0.5 * (blo[j] + bhi[j]);
                    if (D.contains(bc)) eval(bc);
                }
                if (!cfg.norm.is_inf) {
                    std::vector<double> y = bc;
                    for (int t = 1; t <= 12; ++t) {
                        double fd = -1.0;
                        std::size_t far = cell[0];
                        for (std::size_t s : cell) {
                            double dist_s =
                                distance(std::span<const double>(y), samples.point(s), cfg.norm);
                            if (dist_s > fd) {
                                fd = dist_s;
                                far = s;
                            }
                        }
                        auto fp = samples.point(far);
                        for (std::size_t j = 0; j < d; ++j)
                            y[j] += (fp[j] - y[j]) / static_cast<double>(t + 1);
                    }
                    if (D.contains(y)) eval(y);
                }
                std::copy(winner.begin(), winner.end(), nodes.point(k).begin());
            } else if (weiszfeld) {
                // geometric median of the cell samples by iterative reweighting
                std::vector<double> y(nodes.point(k).begin(), nodes.point(k).end());
                std::vector<double> z(d);
                for (int sweep = 0; sweep < 8; ++sweep) {
                    double wsum = 0.0;
                    std::fill(z.begin(), z.end(), 0.0);
                    for (std::size_t s : cell) {
                        auto p = samples.point(s);
                        double dist_p = distance(std::span<const double>(y), p, cfg.norm);
                        double w = 1.0 / std::max(dist_p, 1e-12);
                        wsum += w;
                        for (std::size_t j = 0; j < d; ++j) z[j] += w * p[j];
                    }
                    for (std::size_t j = 0; j < d; ++j) y[j] = z[j] / wsum;
                }
                if (D.contains(y)) {
                    std::copy(y.begin(), y.end(), nodes.point(k).begin());
                } else {
                    // project back: nearest cell sample
                    double bd = std::numeric_limits<double>::infinity();
                    std::size_t bi = cell[0];
                    for (std::size_t s : cell) {
                        double dist_s = distance(std::span<const double>(y), samples.point(s),
                                                 cfg.norm);
                        if (dist_s < bd) {
                            bd = dist_s;
                            bi = s;
                        }
                    }
                    auto p = samples.point(bi);
                    std::copy(p.begin(), p.end(), nodes.point(k).begin());
                }
            } else {
                // generic quantization: candidate minimizing sum of omega(dist)
                std::size_t stride = std::max<std::size_t>(1, cell.size() / cfg.cell_budget);
                double cur_best = std::numeric_limits<double>::infinity();
                std::vector<double> winner(nodes.point(k).begin(), nodes.point(k).end());
                auto eval = [&](std::span<const double> cand) {
                    double tot = 0.0;
                    for (std::size_t s : cell)
                        tot += cfg.omega(distance(cand, samples.point(s), cfg.norm));
                    if (tot < cur_best) {
                        cur_best = tot;
                        winner.assign(cand.begin(), cand.end());
                    }
                };
                eval(nodes.point(k));
                for (std::size_t idx = 0; idx < cell.size(); idx += stride)
                    eval(samples.point(cell[idx]));
                std::copy(winner.begin(), winner.end(), nodes.point(k).begin());
            }
        }
        double obj = mc_objective(nodes, eval_samples, volume, cfg);
        res.trace.push_back(obj);
        if (obj < best_obj) {
            best_obj = obj;
            best_nodes = nodes;
        }
    }
    // sampled max-min cannot resolve percent-level quality differences, so
    // on certifiable domains the lineage winner is chosen by the certified
    // radius among {initial, best-sampled, last} iterates
    if (cfg.objective == OptimizerConfig::Objective::Covering &&
        D.kind() != Domain::Kind::Mask && D.dim() <= 8) {
        CoverOptions co;
        co.tol = 1e-4;
        const PointSet* candidates[3] = {&X0, &best_nodes, &nodes};
        double bestv = std::numeric_limits<double>::infinity();
        const PointSet* winner = &best_nodes;
        for (const PointSet* cand : candidates) {
            double v = covering_radius(D, *cand, cfg.norm, co).value;
            if (v < bestv) {
                bestv = v;
                winner = cand;
            }
        }
        res.points = *winner;
        res.objective = bestv;
        return res;
    }
    res.points = best_nodes;
    res.objective = best_obj;
    return res;
}

} // namespace detail

/// Lloyd-type descent for the covering (1-center per cell) or quantization
/// (per-cell median) objective. Restarts run independently: restart 0 starts
/// from X0, later ones from uniform random nodes; the best final iterate by a
/// common evaluation sample wins.
inline LloydResult lloyd_descent(const Domain& D, const PointSet& X0, const OptimizerConfig& cfg) {
    if (X0.size() == 0) throw std::invalid_argument("lloyd_descent: X0 must be nonempty");
    for (std::size_t i = 0; i < X0.size(); ++i)
        if (!D.contains(X0.point(i)))
            throw std::invalid_argument("lloyd_descent: X0 node outside domain");
    if (cfg.iterations < 1 || cfg.restarts < 1 || cfg.cell_budget < 1)
        throw std::invalid_argument("lloyd_descent: counts must be >= 1");

    double vol = volume(D, 1u << 18, mix_seed(cfg.seed, 0x700f)).value;

    std::vector<PointSet> inits{X0};
    if (D.kind() == Domain::Kind::Box) {
        // structured start: the m^d grid whenever n is a perfect power
        const double root =
            std::pow(static_cast<double>(X0.size()), 1.0 / static_cast<double>(D.dim()));
        const std::size_t m = static_cast<std::size_t>(std::llround(root));
        std::size_t total = 1;
        for (std::size_t j = 0; j < D.dim(); ++j) total *= m;
        if (m >= 1 && total == X0.size()) inits.push_back(make_grid_points(D, m));
    }
    while (inits.size() < cfg.restarts)
        inits.push_back(sample_uniform(D, X0.size(), mix_seed(cfg.seed, 1000 + inits.size())));

    std::vector<LloydResult> finals;
    for (std::size_t r = 0; r < inits.size(); ++r)
        finals.push_back(detail::lloyd_single(D, inits[r], cfg, mix_seed(cfg.seed, r), vol));
    if (cfg.objective == OptimizerConfig::Objective::Covering &&
        D.kind() != Domain::Kind::Mask && D.dim() <= 8) {
        // lineages already carry certified objectives
        std::size_t best = 0;
        for (std::size_t r = 1; r < finals.size(); ++r)
            if (finals[r].objective < finals[best].objective) best = r;
        return std::move(finals[best]);
    }
    // fair comparison on a common fresh sample
    PointSet eval = sample_uniform(D, std::max<std::size_t>(16384, 24 * X0.size()),
                                   mix_seed(cfg.seed, 0xe7a1));
    std::size_t best = 0;
    double bo = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < finals.size(); ++r) {
        double o = detail::mc_objective(finals[r].points, eval, vol, cfg);
        if (o < bo) {
            bo = o;
            best = r;
        }
    }
    LloydResult out = std::move(finals[best]);
    out.objective = bo;
    return out;
}

struct ExtremalConfig {
    Domain domain;            // disjoint union of n balls of radius delta
    PointSet nodes;           // the centers
    double delta = 0.0;
    double covering_radius = 0.0;   // = delta
    double integration_error = 0.0; // = d/(d+1) * delta * vol
    double volume = 0.0;
};

/// The sharpness configuration for the uniform lower bounds: n balls of
/// radius delta on a line with the given center spacing, nodes at centers.
inline ExtremalConfig make_extremal_ball_union(std::size_t n, double delta, std::size_t d,
                                               const NormSpec& norm, double spacing) {
    if (n < 1 || d < 1) throw std::invalid_argument("make_extremal_ball_union: n, d >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("make_extremal_ball_union: delta > 0");
    if (!(spacing > 2.0 * delta))
        throw std::invalid_argument("make_extremal_ball_union: spacing must exceed 2 delta");
    PointSet centers(d);
    std::vector<double> x(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[0] = static_cast<double>(i) * spacing;
        centers.push_back(x);
    }
    ExtremalConfig out{Domain::ball_union(centers, std::vector<double>(n, delta), norm, true),
                       centers, delta, delta, 0.0, 0.0};
    const double dd = static_cast<double>(d);
    out.volume = static_cast<double>(n) * unit_ball_volume(d, norm) * std::pow(delta, dd);
    out.integration_error = dd / (dd + 1.0) * delta * out.volume;
    return out;
}

struct FoolingCertificate {
    bool vanishes_at_nodes = false;
    double max_abs_at_nodes = 0.0;
    double integral = 0.0;          // closed form over the box
    double scaling_constant = 0.0;  // c with integral = c * m^-2 on the unit box
    double max_gradient_norm = 0.0; // sampled; class cap is d^-1/2
    double max_second_difference = 0.0; // sampled directional f''; class cap is d^-1
    bool admissible = false;
};

/// Separable fooling function for grid nodes on a box: per axis the C^1
/// quadratic spline with |f''| = 1 vanishing exactly at the m cell centers,
///   phi(s) = s^2/2                    for s <= h/4,
///   phi(s) = h^2/16 - (h/2 - s)^2/2   for h/4 < s <= h/2,
/// with s the distance to the nearest center, then f(x) = (1/d) sum_i f1(x_i).
/// Nonnegative, integral (1/d) sum_i h_i^2/32 * vol: on the unit box exactly
/// (1/32) m^-2 = (1/32) n^(-2/d).
class FoolingFunction {
public:
    FoolingFunction(Box box, std::size_t m) : box_(std::move(box)), m_(m) {
        const std::size_t d = box_.dim();
        h_.resize(d);
        for (std::size_t j = 0; j < d; ++j) h_[j] = box_.side(j) / static_cast<double>(m);
    }

    double f1(double t, std::size_t axis) const {
        const double h = h_[axis];
        double u = (t - box_.lo[axis]) / h - 0.5;
        double k = std::clamp(std::round(u), 0.0, static_cast<double>(m_ - 1));
        double center = box_.lo[axis] + (k + 0.5) * h;
        double s = std::abs(t - center);
        if (s <= 0.25 * h) return 0.5 * s * s;
        double r = 0.5 * h - s;
        return h * h / 16.0 - 0.5 * r * r;
    }

    double operator()(std::span<const double> x) const {
        const std::size_t d = box_.dim();
        if (x.size() != d) throw std::invalid_argument("FoolingFunction: dimension mismatch");
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += f1(x[j], j);
        return acc / static_cast<double>(d);
    }

    double integral_closed_form() const {
        const std::size_t d = box_.dim();
        double vol = box_.volume();
        double mean = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean += h_[j] * h_[j] / 32.0;
        return vol * mean / static_cast<double>(d);
    }

    const Box& box() const { return box_; }
    std::size_t grid_m() const { return m_; }

    FoolingCertificate certify(std::size_t fine_grid = 4096) const;

private:
    Box box_;
    std::size_t m_;
    std::vector<double> h_;
};

inline FoolingCertificate FoolingFunction::certify(std::size_t fine_grid) const {
    const std::size_t d = box_.dim();
    FoolingCertificate c;
    // exact zeros at all grid nodes (separable: check the m centers per axis)
    c.max_abs_at_nodes = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < m_; ++k) {
            double center = box_.lo[j] + (static_cast<double>(k) + 0.5) * h_[j];
            c.max_abs_at_nodes = std::max(c.max_abs_at_nodes, std::abs(f1(center, j)));
        }
    c.vanishes_at_nodes = c.max_abs_at_nodes == 0.0;
    c.integral = integral_closed_form();
    c.scaling_constant = c.integral * static_cast<double>(m_) * static_cast<double>(m_);

    // sampled derivative bounds per axis, then combined class constants
    double max_d1 = 0.0, max_d2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double lo = box_.lo[j], hi = box_.hi[j];
        const double step = (hi - lo) / static_cast<double>(fine_grid);
        const double delta = 0.25 * step;
        for (std::size_t i = 1; i + 1 < fine_grid; ++i) {
            double t = lo + step * static_cast<double>(i);
            double fm = f1(t - delta, j), f0 = f1(t, j), fp = f1(t + delta, j);
            max_d1 = std::max(max_d1, std::abs(fp - fm) / (2.0 * delta));
            max_d2 = std::max(max_d2, std::abs(fp - 2.0 * f0 + fm) / (delta * delta));
        }
    }
    const double dd = static_cast<double>(d);
    c.max_gradient_norm = std::sqrt(dd) * max_d1 / dd; // ||grad f|| <= sqrt(d) max|f1'| / d
    c.max_second_difference = max_d2 / dd;
    c.admissible = c.vanishes_at_nodes && c.integral > 0.0 &&
                   c.max_gradient_norm <= std::pow(dd, -0.5) * (1.0 + 1e-9) &&
                   c.max_second_difference <= (1.0 / dd) * (1.0 + 1e-9);
    return c;
}

inline FoolingFunction fooling_function(const Domain& box_domain, std::size_t m) {
    if (box_domain.kind() != Domain::Kind::Box)
        throw std::invalid_argument("fooling_function: box domain required");
    if (m < 1) throw std::invalid_argument("fooling_function: m >= 1 required");
    return FoolingFunction(box_domain.as_box(), m);
}

} // namespace optrec
