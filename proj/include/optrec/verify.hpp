#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optrec/bounds.hpp"
#include "optrec/covering.hpp"
#include "optrec/pointopt.hpp"
#include "optrec/spectral.hpp"
#include "optrec/wce.hpp"

namespace optrec {

struct VerifyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The module invariants as a runnable battery with fixed seeds. Tolerances
/// absorb Monte-Carlo noise, so verdicts are stable across seeds. scale
/// multiplies sample budgets (>= 1 recommended).
inline std::vector<VerifyResult> run_verify(std::uint64_t seed = 0, double scale = 1.0) {
    std::vector<VerifyResult> out;
    auto check = [&](const std::string& name, const std::function<bool(std::string&)>& fn) {
        VerifyResult r;
        r.name = name;
        try {
            r.pass = fn(r.detail);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(r));
    };
    const auto B = [&](std::size_t base) {
        return static_cast<std::size_t>(std::max(1.0, scale * static_cast<double>(base)));
    };

    check("geometry.triangle-inequality", [&](std::string& detail) {
        auto eng = stream_engine(seed, 1);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (double p : {1.0, 1.7, 2.0}) {
            NormSpec norm = NormSpec::lp(p);
            for (std::size_t rep = 0; rep < B(4000); ++rep) {
                std::vector<double> x{u(eng), u(eng), u(eng)}, y{u(eng), u(eng), u(eng)},
                    z{u(eng), u(eng), u(eng)};
                if (distance(x, z, norm) > distance(x, y, norm) + distance(y, z, norm) + 1e-12) {
                    detail = "violated for p=" + std::to_string(p);
                    return false;
                }
            }
        }
        return true;
    });

    check("geometry.ball-volume-vs-monte-carlo", [&](std::string& detail) {
        for (double p : {1.0, 2.0, 3.0}) {
            for (std::size_t d : {2u, 4u}) {
                NormSpec norm = NormSpec::lp(p);
                std::size_t budget = B(100000);
                auto eng = stream_engine(seed, 100 + d + std::size_t(p * 7));
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                std::vector<double> x(d);
                std::size_t hits = 0;
                for (std::size_t s = 0; s < budget; ++s) {
                    for (auto& v : x) v = u(eng);
                    if (norm_of(x, norm) <= 1.0) ++hits;
                }
                double cube = std::pow(2.0, double(d));
                double phat = double(hits) / double(budget);
                double est = cube * phat;
                double se = cube * std::sqrt(phat * (1 - phat) / double(budget));
                if (std::abs(est - unit_ball_volume(d, norm)) > 4.0 * se) {
                    std::ostringstream os;
                    os << "p=" << p << " d=" << d << " est=" << est;
                    detail = os.str();
                    return false;
                }
            }
        }
        return true;
    });

    check("domains.shrink-nesting", [&](std::string& detail) {
        auto L = Domain::builtin_mask("l_shape");
        auto s1 = shrink(L, 0.05), s2 = shrink(L, 0.15);
        auto pts = sample_uniform(L, B(3000), mix_seed(seed, 2));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            auto x = pts.point(i);
            if (s2.contains(x) && !s1.contains(x)) {
                detail = "monotonicity violated";
                return false;
            }
            if (s1.contains(x) && !L.contains(x)) {
                detail = "containment violated";
                return false;
            }
        }
        return true;
    });

    check("domains.shrink-volume-convergence", [&](std::string& detail) {
        auto L = Domain::builtin_mask("l_shape");
        double v = volume(shrink(L, 1e-3), B(1u << 20), mix_seed(seed, 3)).value;
        std::ostringstream os;
        os << "vol(L^0.001)=" << v;
        detail = os.str();
        return v >= 0.74 && v <= 0.755;
    });

    check("domains.sampling-determinism", [&](std::string&) {
        auto sq = Domain::unit_box(2);
        auto a = sample_uniform(sq, 2000, mix_seed(seed, 4));
        auto b = sample_uniform(sq, 2000, mix_seed(seed, 4));
        return a.data() == b.data();
    });

    check("wce.grid-covering-identity", [&](std::string& detail) {
        for (std::size_t d : {1u, 2u, 3u}) {
            for (std::size_t m : {1u, 2u, 3u}) {
                auto box = Domain::unit_box(d);
                auto r = covering_radius(box, make_grid_points(box, m), NormSpec::linf(), {});
                if (!r.converged || std::abs(r.value - 0.5 / double(m)) > 1e-6) {
                    detail = "d=" + std::to_string(d) + " m=" + std::to_string(m);
                    return false;
                }
            }
        }
        return true;
    });

    check("wce.extremal-sharpness", [&](std::string& detail) {
        for (double p : {2.0, std::numeric_limits<double>::infinity()}) {
            NormSpec norm = std::isinf(p) ? NormSpec::linf() : NormSpec::lp(p);
            auto ex = make_extremal_ball_union(3, 0.7, 2, norm, 2.0);
            auto cov = covering_radius(ex.domain, ex.nodes, norm, {});
            auto low2 = linf_uniform_lower(3, 2, norm, ex.volume);
            if (std::abs(cov.value - low2.lo) > 1e-6) {
                detail = "covering radius vs lower2";
                return false;
            }
            auto integ = wce_integration(ex.domain, ex.nodes, norm,
                                         ModulusOfContinuity::identity(), B(1u << 18),
                                         mix_seed(seed, 5));
            auto low4 = int_uniform_lower(3, 2, norm, ex.volume);
            if (std::abs(integ.value - low4.lo) > std::max(1e-6, 3.0 * integ.stderr_)) {
                detail = "integration vs lower4";
                return false;
            }
        }
        return true;
    });

    check("wce.radius-comparison", [&](std::string& detail) {
        auto eng = stream_engine(seed, 6);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t d : {1u, 2u}) {
            auto box = Domain::unit_box(d);
            for (int rep = 0; rep < 10; ++rep) {
                PointSet X(d);
                for (int i = 0; i <= rep; ++i) {
                    std::vector<double> pt(d);
                    for (auto& v : pt) v = u(eng);
                    X.push_back(pt);
                }
                auto cov = covering_radius(box, X, NormSpec::lp(2.0), {});
                auto integ = wce_integration(box, X, NormSpec::lp(2.0),
                                             ModulusOfContinuity::identity(), B(1u << 16),
                                             mix_seed(seed, 600 + rep));
                double dd = double(d);
                if (integ.value > dd / (dd + 1.0) * cov.hi + 3.0 * integ.stderr_) {
                    detail = "violated at d=" + std::to_string(d);
                    return false;
                }
            }
        }
        return true;
    });

    check("wce.scaling-law", [&](std::string& detail) {
        PointSet X(2, {0.3, 0.4, 0.9, 0.1});
        PointSet X2(2, {0.6, 0.8, 1.8, 0.2});
        auto sq = Domain::unit_box(2);
        auto sq2 = Domain::box({0.0, 0.0}, {2.0, 2.0});
        auto a = covering_radius(sq, X, NormSpec::lp(2.0), {});
        auto b = covering_radius(sq2, X2, NormSpec::lp(2.0), {});
        if (std::abs(b.value - 2.0 * a.value) > 1e-4) {
            detail = "covering radius scaling";
            return false;
        }
        auto ia = wce_integration(sq, X, NormSpec::lp(2.0), ModulusOfContinuity::identity(),
                                  B(1u << 16), mix_seed(seed, 7));
        auto ib = wce_integration(sq2, X2, NormSpec::lp(2.0), ModulusOfContinuity::identity(),
                                  B(1u << 16), mix_seed(seed, 7));
        if (std::abs(ib.value - 8.0 * ia.value) > 1e-9 * std::abs(ib.value)) {
            detail = "integration scaling (same-seed)";
            return false;
        }
        return true;
    });

    check("wce.central-respects-information-bound", [&](std::string& detail) {
        auto sq = Domain::unit_box(2);
        auto X = make_grid_points(sq, 4);
        NormSpec norm = NormSpec::lp(2.0);
        auto id = ModulusOfContinuity::identity();
        auto cov = covering_radius(sq, X, norm, {});
        auto eng = stream_engine(seed, 8);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int f = 0; f < 10; ++f) {
            std::vector<std::vector<double>> cones;
            for (int k = 0; k < 3; ++k) cones.push_back({u(eng), u(eng)});
            auto fn = [&](std::span<const double> x) {
                double m = std::numeric_limits<double>::infinity();
                for (auto& c : cones) m = std::min(m, distance(x, c, norm));
                return m;
            };
            std::vector<double> fv;
            for (std::size_t i = 0; i < X.size(); ++i) fv.push_back(fn(X.point(i)));
            for (int rep = 0; rep < 50; ++rep) {
                std::vector<double> x{u(eng), u(eng)};
                if (std::abs(central_algorithm(X, fv, norm, id, x) - fn(x)) >
                    cov.hi + 1e-9) {
                    detail = "pointwise error above omega(covering radius)";
                    return false;
                }
            }
        }
        return true;
    });

    check("pointopt.greedy-separates-components", [&](std::string&) {
        PointSet centers(2, {0.0, 0.0, 5.0, 0.0});
        auto two = Domain::ball_union(centers, {1.0, 1.0}, NormSpec::lp(2.0), true);
        auto X = greedy_farthest_point(two, 2, NormSpec::lp(2.0), mix_seed(seed, 9), B(4000));
        auto d0 = distance(X.point(0), centers.point(0), NormSpec::lp(2.0));
        auto d1 = distance(X.point(1), centers.point(1), NormSpec::lp(2.0));
        auto c0 = distance(X.point(0), centers.point(1), NormSpec::lp(2.0));
        auto c1 = distance(X.point(1), centers.point(0), NormSpec::lp(2.0));
        return (d0 <= 1.0 && d1 <= 1.0) || (c0 <= 1.0 && c1 <= 1.0);
    });

    check("pointopt.fooling-certificate", [&](std::string& detail) {
        for (std::size_t d : {1u, 2u, 3u}) {
            auto box = Domain::unit_box(d);
            auto f = fooling_function(box, 2);
            auto cert = f.certify(B(1024));
            if (!cert.admissible) {
                detail = "inadmissible at d=" + std::to_string(d);
                return false;
            }
        }
        double i1 = fooling_function(Domain::unit_box(2), 2).integral_closed_form();
        double i2 = fooling_function(Domain::unit_box(2), 4).integral_closed_form();
        if (std::abs(i1 / i2 - 4.0) > 1e-9) {
            detail = "integral ratio";
            return false;
        }
        return true;
    });

    check("bounds.homogeneity", [&](std::string&) {
        for (std::size_t d : {1u, 2u, 3u}) {
            for (double s : {0.5, 2.0}) {
                auto a2 = linf_uniform_lower(5, d, NormSpec::lp(2.0), 1.0);
                auto b2 = linf_uniform_lower(5, d, NormSpec::lp(2.0), std::pow(s, double(d)));
                if (std::abs(b2.lo / a2.lo - s) > 1e-10) return false;
                auto a4 = int_uniform_lower(5, d, NormSpec::lp(2.0), 1.0);
                auto b4 = int_uniform_lower(5, d, NormSpec::lp(2.0), std::pow(s, double(d)));
                if (std::abs(b4.lo / a4.lo - std::pow(s, double(d) + 1.0)) > 1e-9) return false;
            }
        }
        return true;
    });

    check("bounds.ordering", [&](std::string&) {
        for (std::size_t d = 2; d <= 10; ++d)
            for (double p : {1.0, 2.0}) {
                auto low = linf_uniform_lower(12, d, NormSpec::lp(p), 1.0);
                auto asy = linf_asymptote(12, d, NormSpec::lp(p), 1.0);
                if (!(low.lo <= asy.lo * (1 + 1e-12) && asy.lo <= asy.hi)) return false;
            }
        return true;
    });

    check("bounds.curse-values", [&](std::string& detail) {
        auto c = curse_min_n(0.1, 10, 2.0);
        std::ostringstream os;
        os << "coeff=" << c.coefficient << " n=" << c.min_n;
        detail = os.str();
        return std::abs(c.coefficient - 0.2617884628744330) < 1e-12 && c.min_n == 15119.0 &&
               std::abs(c.coefficient_asymptotic - 0.2419707245191433) < 1e-12;
    });

    check("bounds.optimized-never-beat-lower2", [&](std::string& detail) {
        auto eng = stream_engine(seed, 10);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int rep = 0; rep < 10; ++rep) {
            std::size_t d = 1 + rep % 3;
            auto box = Domain::unit_box(d);
            std::size_t n = 1 + (rep * 3) % 9;
            auto X = greedy_farthest_point(box, n, NormSpec::lp(2.0), mix_seed(seed, 40 + rep),
                                           B(3000));
            auto cov = covering_radius(box, X, NormSpec::lp(2.0), {});
            auto low = linf_uniform_lower(n, d, NormSpec::lp(2.0), 1.0);
            if (cov.hi < low.lo - cov.width() - 1e-9) {
                detail = "lower bound beaten at rep=" + std::to_string(rep);
                return false;
            }
        }
        return true;
    });

    check("spectral.interval-oracle", [&](std::string& detail) {
        const double h = 1.0 / 100.0;
        auto G = discretize(Domain::box({0.0}, {1.0}), h);
        auto S = eigenvalues(G, Spectrum::BC::Dirichlet, 100);
        for (std::size_t j = 0; j < 100; ++j) {
            double oracle = 4.0 / (h * h) * std::pow(std::sin((j + 1) * M_PI * h / 2.0), 2);
            if (std::abs(S.eigenvalues[j] - oracle) > 1e-8) {
                detail = "j=" + std::to_string(j);
                return false;
            }
        }
        return true;
    });

    check("spectral.square-ground-state", [&](std::string& detail) {
        auto G = discretize(Domain::unit_box(2), 1.0 / 64.0);
        auto S = eigenvalues(G, Spectrum::BC::Dirichlet, 3);
        std::ostringstream os;
        os << "lambda1=" << S.eigenvalues[0];
        detail = os.str();
        return std::abs(S.eigenvalues[0] / (2.0 * M_PI * M_PI) - 1.0) < 0.01;
    });

    check("spectral.bound-constants-gate", [&](std::string&) {
        auto G = discretize(Domain::unit_box(2), 1.0 / 48.0);
        auto SD = eigenvalues(G, Spectrum::BC::Dirichlet, 40);
        auto rep = eigenvalue_bound_check(SD, SD.domain_volume, 2);
        auto SN = eigenvalues(G, Spectrum::BC::Neumann, 40);
        auto repn = eigenvalue_bound_check(SN, SN.domain_volume, 2);
        auto pol = polya_form_check(SD, SD.domain_volume, 2);
        return rep.constants_confirmed && rep.all_pass && repn.all_pass && pol.all_pass;
    });

    check("spectral.weyl-drift", [&](std::string&) {
        auto G = discretize(Domain::unit_box(2), 1.0 / 64.0);
        auto S = eigenvalues(G, Spectrum::BC::Dirichlet, 120);
        auto ratios = weyl_ratio(S, 1.0, 2);
        double head = 0.0, tail = 0.0;
        for (int i = 0; i < 50; ++i) head += std::abs(ratios[i] - 1.0);
        for (int i = 70; i < 120; ++i) tail += std::abs(ratios[i] - 1.0);
        return tail < head;
    });

    return out;
}

inline bool all_passed(const std::vector<VerifyResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace optrec
