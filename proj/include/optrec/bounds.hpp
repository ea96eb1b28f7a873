#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "optrec/geometry.hpp"

namespace optrec {

/// A computed bound value or bracket with provenance. Asymptotic quantities
/// (asy1/asy3) are flagged: they describe the n -> infinity limit, not a
/// finite-n guarantee. lower2/lower4/upper1 hold for every n.
struct BoundReport {
    std::string quantity;
    std::string formula_id;
    double lo = 0.0;
    double hi = 0.0;
    bool upper_finite = true;
    bool asymptotic = false;
    bool valid_all_n = false;
    bool warning = false;
    // inputs echoed
    std::size_t n = 0;
    std::size_t d = 0;
    std::string norm;
    double vol = 0.0;

    bool is_point() const { return upper_finite && lo == hi; }
    double value() const { return 0.5 * (lo + hi); }
};

namespace detail {
inline void check_bound_inputs(std::size_t n, std::size_t d, double volD) {
    if (n < 1 || d < 1) throw std::invalid_argument("bounds: n >= 1 and d >= 1 required");
    if (!(volD > 0.0)) throw std::invalid_argument("bounds: volD > 0 required");
}
inline BoundReport base_report(std::string quantity, std::string formula, std::size_t n,
                               std::size_t d, const NormSpec& norm, double volD) {
    BoundReport r;
    r.quantity = std::move(quantity);
    r.formula_id = std::move(formula);
    r.n = n;
    r.d = d;
    r.norm = norm.describe();
    r.vol = volD;
    return r;
}
} // namespace detail

/// Asymptotic constant bracket for optimal L_inf approximation:
///   e_n ~ Theta_B^(1/d) (vol/lambda(B))^(1/d) n^(-1/d),
/// with the covering-constant bracket substituted for Theta_B. Collapses to
/// a point for l_inf (Theta = 1).
inline BoundReport linf_asymptote(std::size_t n, std::size_t d, const NormSpec& norm,
                                  double volD) {
    detail::check_bound_inputs(n, d, volD);
    auto r = detail::base_report("linf approximation asymptote", "asy1", n, d, norm, volD);
    r.asymptotic = true;
    const double base = std::pow(volD / unit_ball_volume(d, norm), 1.0 / d) *
                        std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d));
    CoveringBracket th = covering_constant_bracket(d, norm);
    r.lo = std::pow(th.lower, 1.0 / d) * base;
    if (th.upper_finite) {
        r.hi = std::pow(th.upper, 1.0 / d) * base;
    } else {
        r.hi = std::numeric_limits<double>::infinity();
        r.upper_finite = false;
    }
    r.warning = th.warning;
    return r;
}

/// Uniform lower bound, sharp over domains of the given volume:
///   inf_D e_n vol^(-1/d) = lambda(B)^(-1/d) n^(-1/d).
inline BoundReport linf_uniform_lower(std::size_t n, std::size_t d, const NormSpec& norm,
                                      double volD) {
    detail::check_bound_inputs(n, d, volD);
    auto r = detail::base_report("linf approximation uniform lower bound", "lower2", n, d, norm,
                                 volD);
    r.valid_all_n = true;
    double v = std::pow(volD / unit_ball_volume(d, norm), 1.0 / d) *
               std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d));
    r.lo = r.hi = v;
    return r;
}

/// Bracket for the boundary-zero subclass (functions vanishing on dD):
///   lambda(B)^(-1/d) vol^(1/d) (n+1)^(-1/d) <= sup_D e_n <= 2 lambda(B)^(-1/d) vol^(1/d) n^(-1/d).
inline BoundReport linf_boundary_zero_bracket(std::size_t n, std::size_t d, const NormSpec& norm,
                                              double volD) {
    detail::check_bound_inputs(n, d, volD);
    auto r = detail::base_report("linf boundary-zero class bracket", "upper1", n, d, norm, volD);
    r.valid_all_n = true;
    const double lb = std::pow(volD / unit_ball_volume(d, norm), 1.0 / d);
    r.lo = lb * std::pow(static_cast<double>(n + 1), -1.0 / static_cast<double>(d));
    r.hi = 2.0 * lb * std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d));
    return r;
}

/// Asymptotic constant bracket for optimal Lipschitz quadrature:
///   e_n ~ xi_B vol (vol/lambda(B))^(1/d) n^(-1/d),
///   d/(d+1) <= xi_B <= d/(d+1) Theta_B^(1/d).
inline BoundReport int_asymptote(std::size_t n, std::size_t d, const NormSpec& norm, double volD) {
    detail::check_bound_inputs(n, d, volD);
    auto r = detail::base_report("integration asymptote", "asy3", n, d, norm, volD);
    r.asymptotic = true;
    const double dd = static_cast<double>(d);
    const double base = (dd / (dd + 1.0)) * volD *
                        std::pow(volD / unit_ball_volume(d, norm), 1.0 / d) *
                        std::pow(static_cast<double>(n), -1.0 / dd);
    CoveringBracket th = covering_constant_bracket(d, norm);
    r.lo = base * std::pow(th.lower, 1.0 / d);
    if (th.upper_finite) {
        r.hi = base * std::pow(th.upper, 1.0 / d);
    } else {
        r.hi = std::numeric_limits<double>::infinity();
        r.upper_finite = false;
    }
    r.warning = th.warning;
    return r;
}

/// Uniform lower bound for quadrature, sharp over domains of given volume:
///   inf_D e_n vol^(-(d+1)/d) = d/(d+1) lambda(B)^(-1/d) n^(-1/d).
inline BoundReport int_uniform_lower(std::size_t n, std::size_t d, const NormSpec& norm,
                                     double volD) {
    detail::check_bound_inputs(n, d, volD);
    auto r = detail::base_report("integration uniform lower bound", "lower4", n, d, norm, volD);
    r.valid_all_n = true;
    const double dd = static_cast<double>(d);
    double v = (dd / (dd + 1.0)) * std::pow(unit_ball_volume(d, norm), -1.0 / dd) *
               std::pow(volD, (dd + 1.0) / dd) * std::pow(static_cast<double>(n), -1.0 / dd);
    r.lo = r.hi = v;
    return r;
}

/// Information-count lower bound for integration of the rescaled Lipschitz
/// class |f(x)-f(y)| <= d^(-1/p) ||x-y||_p on volume-1 domains:
///   n(eps, d) >= (ctilde_p(d) / eps)^d,
/// with ctilde computed from the exact Gamma-formula ball volume. The
/// asymptotic coefficient 1/(2 Gamma(1+1/p) (pe)^(1/p)) is reported alongside.
struct CurseReport {
    double coefficient = 0.0;            // ctilde_p(d), exact ball volume
    double coefficient_asymptotic = 0.0; // large-d limit of the coefficient
    double min_n = 1.0;                  // ceil((coefficient/eps)^d)
    bool vacuous = false;                // eps >= coefficient
    double eps = 0.0;
    std::size_t d = 0;
    double p = 2.0;
};

inline CurseReport curse_min_n(double eps, std::size_t d, double p) {
    if (!(eps > 0.0)) throw std::invalid_argument("curse_min_n: eps > 0 required");
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("curse_min_n: finite p >= 1 required");
    if (d < 1) throw std::invalid_argument("curse_min_n: d >= 1 required");
    CurseReport out;
    out.eps = eps;
    out.d = d;
    out.p = p;
    const double dd = static_cast<double>(d);
    const double lam = unit_ball_volume(d, NormSpec::lp(p));
    out.coefficient =
        (dd / (dd + 1.0)) * std::pow(dd, -1.0 / p) * std::pow(lam, -1.0 / dd);
    out.coefficient_asymptotic =
        1.0 / (2.0 * std::tgamma(1.0 + 1.0 / p) * std::pow(p * std::exp(1.0), 1.0 / p));
    if (eps >= out.coefficient) {
        out.vacuous = true;
        out.min_n = 1.0;
        return out;
    }
    out.min_n = std::ceil(std::pow(out.coefficient / eps, dd));
    return out;
}

/// Lower bound for integration on C^r classes with a caller-supplied
/// constant:  min(1/2, c_r d n^(-r/d)).  The constant's existence is known;
/// no value is published, so it is a parameter here.
inline double cr_class_lower(std::size_t n, std::size_t d, std::size_t r, double c_r) {
    if (n < 1 || d < 1 || r < 1) throw std::invalid_argument("cr_class_lower: n, d, r >= 1");
    if (!(c_r > 0.0)) throw std::invalid_argument("cr_class_lower: c_r > 0 required");
    const double dd = static_cast<double>(d);
    return std::min(0.5, c_r * dd * std::pow(static_cast<double>(n),
                                             -static_cast<double>(r) / dd));
}

} // namespace optrec
