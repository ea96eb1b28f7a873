#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace optrec {

/// Norm choice for the metric on R^d: an l_p exponent (p = inf is a distinct
/// tag, not a large float) with optional per-axis positive scale factors.
/// The induced distance is ||diag(w)(x - y)||_p.
struct NormSpec {
    double p = 2.0;
    bool is_inf = false;
    std::vector<double> weights; // empty means all ones

    static NormSpec lp(double exponent) {
        if (!(exponent >= 1.0)) throw std::invalid_argument("NormSpec: p must be >= 1");
        NormSpec n;
        n.p = exponent;
        return n;
    }
    static NormSpec linf() {
        NormSpec n;
        n.is_inf = true;
        n.p = std::numeric_limits<double>::infinity();
        return n;
    }
    NormSpec with_weights(std::vector<double> w) const {
        for (double v : w)
            if (!(v > 0.0)) throw std::invalid_argument("NormSpec: weights must be positive");
        NormSpec n = *this;
        n.weights = std::move(w);
        return n;
    }

    bool weighted() const { return !weights.empty(); }
    double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights.at(i); }
    double min_weight() const {
        if (weights.empty()) return 1.0;
        double m = weights[0];
        for (double w : weights) m = std::min(m, w);
        return m;
    }

    std::string describe() const {
        std::string s = is_inf ? "linf" : ("l" + std::to_string(p));
        if (weighted()) s += " (weighted)";
        return s;
    }
};

inline double norm_of(std::span<const double> v, const NormSpec& norm) {
    if (norm.weighted() && norm.weights.size() != v.size())
        throw std::invalid_argument("norm_of: weight count != dimension");
    if (norm.is_inf) {
        double m = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, norm.weight(i) * std::abs(v[i]));
        return m;
    }
    if (norm.p == 2.0 && !norm.weighted()) {
        double s = 0.0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    }
    if (norm.p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += norm.weight(i) * std::abs(v[i]);
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(norm.weight(i) * std::abs(v[i]), norm.p);
    return std::pow(s, 1.0 / norm.p);
}

/// Distance ||x - y|| in the given norm. Throws on dimension mismatch.
inline double distance(std::span<const double> x, std::span<const double> y, const NormSpec& norm) {
    if (x.size() != y.size()) throw std::invalid_argument("distance: dimension mismatch");
    if (x.size() <= 8) {
        double buf[8];
        for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] - y[i];
        return norm_of(std::span<const double>(buf, x.size()), norm);
    }
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
    return norm_of(diff, norm);
}

/// Lebesgue volume of the unit ball of the norm in dimension d.
/// l_p balls: 2^d Gamma(1+1/p)^d / Gamma(1+d/p); axis weights scale the ball
/// by 1/w_i per axis.
inline double unit_ball_volume(std::size_t d, const NormSpec& norm) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d >= 1 required");
    if (norm.weighted() && norm.weights.size() != d)
        throw std::invalid_argument("unit_ball_volume: weight count != d");
    double logv;
    if (norm.is_inf) {
        logv = static_cast<double>(d) * std::log(2.0);
    } else {
        logv = static_cast<double>(d) * (std::log(2.0) + std::lgamma(1.0 + 1.0 / norm.p)) -
               std::lgamma(1.0 + static_cast<double>(d) / norm.p);
    }
    for (std::size_t i = 0; i < d; ++i) logv -= std::log(norm.weight(i));
    return std::exp(logv);
}

/// Large-d approximation of unit_ball_volume(d, l_p)^(1/d):
/// 2 Gamma(1+1/p) (p e)^(1/p) d^(-1/p). Rejects p = inf (exact value is 2).
inline double ball_volume_root_asymptotic(std::size_t d, double p) {
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("ball_volume_root_asymptotic: finite p >= 1 required (p=inf has exact root 2)");
    if (d < 1) throw std::invalid_argument("ball_volume_root_asymptotic: d >= 1 required");
    return 2.0 * std::tgamma(1.0 + 1.0 / p) * std::pow(p * std::exp(1.0), 1.0 / p) *
           std::pow(static_cast<double>(d), -1.0 / p);
}

/// Bracket for the covering constant Theta_B of R^d.
/// Generic bodies: [1, d ln d + d ln ln d + 5d] (Rogers, natural logs).
/// l_inf (cubes tile): [1, 1]. For d < 2 the Rogers expression is undefined;
/// we return an infinite upper end with the warning flag set.
struct CoveringBracket {
    double lower = 1.0;
    double upper = 1.0;
    bool upper_finite = true;
    bool warning = false;
};

inline CoveringBracket covering_constant_bracket(std::size_t d, const NormSpec& norm) {
    CoveringBracket b;
    if (norm.is_inf) return b; // cubes (and axis-weighted boxes) tile space
    if (d < 2) {
        b.upper = std::numeric_limits<double>::infinity();
        b.upper_finite = false;
        b.warning = true;
        return b;
    }
    const double dd = static_cast<double>(d);
    b.upper = dd * std::log(dd) + dd * std::log(std::log(dd)) + 5.0 * dd;
    return b;
}

} // namespace optrec
