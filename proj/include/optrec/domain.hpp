#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "optrec/geometry.hpp"
#include "optrec/points.hpp"
#include "optrec/rng.hpp"

namespace optrec {

struct ThinDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Box {
    std::vector<double> lo, hi;
    std::size_t dim() const { return lo.size(); }
    double side(std::size_t i) const { return hi[i] - lo[i]; }
    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= side(i);
        return v;
    }
    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
};

struct BallUnion {
    PointSet centers;
    std::vector<double> radii;
    NormSpec norm;       // the norm whose balls these are
    bool disjoint = false;
};

struct MaskDomain {
    std::function<bool(std::span<const double>)> inside;
    Box bbox;
    std::optional<double> exact_volume;
    std::string name; // builtin name or description
};

/// Bounded domain D in R^d: an axis box, a union of norm balls, or an
/// implicit membership mask over a bounding box. Immutable after
/// construction; all queries are pure.
class Domain {
public:
    enum class Kind { Box, BallUnion, Mask };

    static Domain box(std::vector<double> lo, std::vector<double> hi) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("Domain::box: lo/hi dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw std::invalid_argument("Domain::box: need lo < hi per axis");
        Domain d;
        d.dim_ = lo.size();
        d.kind_ = Box{std::move(lo), std::move(hi)};
        return d;
    }

    static Domain unit_box(std::size_t d) {
        return box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    }

    static Domain ball_union(PointSet centers, std::vector<double> radii, NormSpec norm,
                             bool disjoint) {
        if (centers.empty() || centers.size() != radii.size())
            throw std::invalid_argument("Domain::ball_union: need one radius per center");
        for (double r : radii)
            if (!(r > 0.0)) throw std::invalid_argument("Domain::ball_union: radii must be positive");
        if (disjoint) {
            for (std::size_t i = 0; i < centers.size(); ++i)
                for (std::size_t j = i + 1; j < centers.size(); ++j)
                    if (distance(centers.point(i), centers.point(j), norm) <= radii[i] + radii[j])
                        throw std::invalid_argument("Domain::ball_union: disjoint=true but balls touch");
        }
        Domain d;
        d.dim_ = centers.dim();
        d.kind_ = BallUnion{std::move(centers), std::move(radii), std::move(norm), disjoint};
        return d;
    }

    static Domain ball(std::vector<double> center, double radius, NormSpec norm) {
        PointSet c(center.size(), center);
        return ball_union(std::move(c), {radius}, std::move(norm), true);
    }

    static Domain mask(std::function<bool(std::span<const double>)> inside, Box bbox,
                       std::optional<double> exact_volume = std::nullopt,
                       std::string name = "mask") {
        if (bbox.lo.empty()) throw std::invalid_argument("Domain::mask: bbox required");
        Domain d;
        d.dim_ = bbox.dim();
        d.kind_ = MaskDomain{std::move(inside), std::move(bbox), exact_volume, std::move(name)};
        return d;
    }

    /// Named mask corpus reachable from config files.
    /// "l_shape": [0,1]^2 minus the top-right quadrant (area 3/4).
    /// "annulus": 1/2 <= |x|_2 <= 1 in [-1,1]^2 (area 3*pi/4).
    static Domain builtin_mask(const std::string& name) {
        if (name == "l_shape") {
            auto inside = [](std::span<const double> x) {
                if (x[0] < 0.0 || x[0] > 1.0 || x[1] < 0.0 || x[1] > 1.0) return false;
                return !(x[0] > 0.5 && x[1] > 0.5);
            };
            return mask(inside, Box{{0.0, 0.0}, {1.0, 1.0}}, 0.75, "l_shape");
        }
        if (name == "annulus") {
            auto inside = [](std::span<const double> x) {
                double r2 = x[0] * x[0] + x[1] * x[1];
                return r2 >= 0.25 && r2 <= 1.0;
            };
            return mask(inside, Box{{-1.0, -1.0}, {1.0, 1.0}}, 3.0 * M_PI / 4.0, "annulus");
        }
        throw std::invalid_argument("Domain::builtin_mask: unknown mask '" + name + "'");
    }

    Kind kind() const { return static_cast<Kind>(kind_.index()); }
    std::size_t dim() const { return dim_; }
    bool is_empty() const { return empty_; }

    const Box& as_box() const { return std::get<Box>(kind_); }
    const BallUnion& as_ball_union() const { return std::get<BallUnion>(kind_); }
    const MaskDomain& as_mask() const { return std::get<MaskDomain>(kind_); }

    bool contains(std::span<const double> x) const {
        if (x.size() != dim_) throw std::invalid_argument("Domain::contains: dimension mismatch");
        if (empty_) return false;
        switch (kind()) {
        case Kind::Box:
            return as_box().contains(x);
        case Kind::BallUnion: {
            const auto& bu = as_ball_union();
            for (std::size_t i = 0; i < bu.centers.size(); ++i)
                if (distance(x, bu.centers.point(i), bu.norm) <= bu.radii[i]) return true;
            return false;
        }
        case Kind::Mask:
            return as_mask().inside(x);
        }
        return false;
    }

    Box bounding_box() const {
        switch (kind()) {
        case Kind::Box:
            return as_box();
        case Kind::Mask:
            return as_mask().bbox;
        case Kind::BallUnion: {
            const auto& bu = as_ball_union();
            Box b{std::vector<double>(dim_, 0.0), std::vector<double>(dim_, 0.0)};
            for (std::size_t j = 0; j < dim_; ++j) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -lo;
                for (std::size_t i = 0; i < bu.centers.size(); ++i) {
                    // the norm ball of radius r fits in the axis box of half-width r/w_j
                    double half = bu.radii[i] / bu.norm.weight(j);
                    lo = std::min(lo, bu.centers.point(i)[j] - half);
                    hi = std::max(hi, bu.centers.point(i)[j] + half);
                }
                b.lo[j] = lo;
                b.hi[j] = hi;
            }
            return b;
        }
        }
        throw std::logic_error("unreachable");
    }

    std::string describe() const {
        switch (kind()) {
        case Kind::Box: return "box";
        case Kind::BallUnion: return "ball_union";
        case Kind::Mask: return "mask:" + as_mask().name;
        }
        return "?";
    }

    friend Domain shrink(const Domain& D, double eps);

private:
    Domain() = default;
    std::size_t dim_ = 0;
    bool empty_ = false;
    std::variant<Box, BallUnion, MaskDomain> kind_;

    static Domain empty_domain(std::size_t dim) {
        Domain d;
        d.dim_ = dim;
        d.empty_ = true;
        d.kind_ = Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
        return d;
    }
};

struct VolumeEstimate {
    double value = 0.0;
    enum class Method { Exact, MonteCarlo } method = Method::Exact;
    std::size_t samples = 0;
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
};

/// Volume of D. Exact for boxes and disjoint ball unions; otherwise
/// rejection Monte-Carlo from the bounding box with a reported standard error.
inline VolumeEstimate volume(const Domain& D, std::size_t budget = 1u << 20,
                             std::uint64_t seed = 0) {
    VolumeEstimate est;
    est.seed = seed;
    if (D.is_empty()) return est;
    switch (D.kind()) {
    case Domain::Kind::Box:
        est.value = D.as_box().volume();
        return est;
    case Domain::Kind::BallUnion: {
        const auto& bu = D.as_ball_union();
        if (bu.disjoint) {
            double lb = unit_ball_volume(D.dim(), bu.norm);
            double v = 0.0;
            for (double r : bu.radii) v += lb * std::pow(r, static_cast<double>(D.dim()));
            est.value = v;
            return est;
        }
        break; // overlapping union: fall through to Monte Carlo
    }
    case Domain::Kind::Mask: {
        const auto& m = D.as_mask();
        if (m.exact_volume) {
            est.value = *m.exact_volume;
            return est;
        }
        break;
    }
    }
    if (budget == 0) throw std::invalid_argument("volume: sample budget 0 for a non-exact domain");
    Box bbox = D.bounding_box();
    const double vb = bbox.volume();
    std::size_t hits = 0;
    std::vector<double> x(D.dim());
    std::size_t done = 0;
    for (std::uint64_t chunk = 0; done < budget; ++chunk) {
        auto eng = stream_engine(seed, chunk);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::size_t todo = std::min(kRngChunk, budget - done);
        for (std::size_t s = 0; s < todo; ++s) {
            for (std::size_t j = 0; j < D.dim(); ++j)
                x[j] = bbox.lo[j] + u01(eng) * bbox.side(j);
            if (D.contains(x)) ++hits;
        }
        done += todo;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(budget);
    est.value = p * vb;
    est.method = VolumeEstimate::Method::MonteCarlo;
    est.samples = budget;
    est.stderr_ = vb * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(budget));
    return est;
}

namespace detail {

// Rejection sampling from the bounding box. Output index i belongs to chunk
// i / kRngChunk; each chunk draws from its own stream until filled, so the
// result is reproducible and chunks are independent.
template <class Accept>
inline PointSet rejection_sample(const Box& bbox, std::size_t n, std::uint64_t seed,
                                 const Accept& accept, std::size_t dim) {
    PointSet out(dim);
    std::vector<double> x(dim);
    std::size_t produced = 0;
    for (std::uint64_t chunk = 0; produced < n; ++chunk) {
        auto eng = stream_engine(seed, chunk);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::size_t want = std::min(kRngChunk, n - produced);
        std::size_t made = 0;
        std::uint64_t attempts = 0;
        while (made < want) {
            for (std::size_t j = 0; j < dim; ++j)
                x[j] = bbox.lo[j] + u01(eng) * bbox.side(j);
            ++attempts;
            if (accept(x)) {
                out.push_back(std::span<const double>(x.data(), dim));
                ++made;
                ++produced;
            } else if ((attempts > (1u << 21) && made == 0) || attempts > (1u << 30)) {
                // probe batch: acceptance rate below threshold
                throw ThinDomainError("sample_uniform: acceptance rate below threshold (thin domain)");
            }
        }
    }
    return out;
}

} // namespace detail

/// n i.i.d. uniform points in D, deterministic given the seed.
inline PointSet sample_uniform(const Domain& D, std::size_t n, std::uint64_t seed) {
    if (D.is_empty()) throw std::invalid_argument("sample_uniform: empty domain");
    const std::size_t dim = D.dim();
    switch (D.kind()) {
    case Domain::Kind::Box: {
        const Box& b = D.as_box();
        PointSet out(dim);
        std::vector<double> x(dim);
        std::size_t produced = 0;
        for (std::uint64_t chunk = 0; produced < n; ++chunk) {
            auto eng = stream_engine(seed, chunk);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            std::size_t want = std::min(kRngChunk, n - produced);
            for (std::size_t s = 0; s < want; ++s) {
                for (std::size_t j = 0; j < dim; ++j) x[j] = b.lo[j] + u01(eng) * b.side(j);
                out.push_back(std::span<const double>(x.data(), dim));
            }
            produced += want;
        }
        return out;
    }
    case Domain::Kind::BallUnion: {
        const auto& bu = D.as_ball_union();
        if (bu.disjoint) {
            // pick a ball proportional to volume, then reject from its own box
            const double dd = static_cast<double>(dim);
            std::vector<double> cum;
            double tot = 0.0;
            for (double r : bu.radii) {
                tot += std::pow(r, dd);
                cum.push_back(tot);
            }
            PointSet out(dim);
            std::vector<double> x(dim);
            std::size_t produced = 0;
            for (std::uint64_t chunk = 0; produced < n; ++chunk) {
                auto eng = stream_engine(seed, chunk);
                std::uniform_real_distribution<double> u01(0.0, 1.0);
                std::size_t want = std::min(kRngChunk, n - produced);
                for (std::size_t s = 0; s < want; ++s) {
                    double pick = u01(eng) * tot;
                    std::size_t i =
                        std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
                    i = std::min(i, bu.radii.size() - 1);
                    auto c = bu.centers.point(i);
                    const double r = bu.radii[i];
                    // uniform point in the l_p ball: g_j ~ sign * Gamma(1/p)^(1/p),
                    // w ~ Exp(1), x = g / (w + sum |g_j|^p)^(1/p); cube for p=inf
                    if (bu.norm.is_inf) {
                        for (std::size_t j = 0; j < dim; ++j)
                            x[j] = c[j] + (2.0 * u01(eng) - 1.0) * r / bu.norm.weight(j);
                    } else {
                        const double p = bu.norm.p;
                        std::gamma_distribution<double> gam(1.0 / p, 1.0);
                        std::exponential_distribution<double> expd(1.0);
                        double sump = 0.0;
                        for (std::size_t j = 0; j < dim; ++j) {
                            double g = gam(eng);
                            sump += g;
                            double sign = u01(eng) < 0.5 ? -1.0 : 1.0;
                            x[j] = sign * std::pow(g, 1.0 / p);
                        }
                        double denom = std::pow(sump + expd(eng), 1.0 / p);
                        for (std::size_t j = 0; j < dim; ++j)
                            x[j] = c[j] + r * x[j] / (denom * bu.norm.weight(j));
                    }
                    out.push_back(std::span<const double>(x.data(), dim));
                }
                produced += want;
            }
            return out;
        }
        Box bbox = D.bounding_box();
        return detail::rejection_sample(
            bbox, n, seed, [&](const std::vector<double>& x) { return D.contains(x); }, dim);
    }
    case Domain::Kind::Mask: {
        Box bbox = D.bounding_box();
        return detail::rejection_sample(
            bbox, n, seed, [&](const std::vector<double>& x) { return D.contains(x); }, dim);
    }
    }
    throw std::logic_error("unreachable");
}

/// D^eps = { x in D : dist(x, boundary of D) > eps }.
/// Exact for boxes (inset) and disjoint ball unions (radii - eps). For masks:
/// membership becomes "x and the probe points x + eps*u are inside D" over a
/// fixed direction set (2d axis directions plus up to 64-2d diagonal sign
/// patterns, unit l_2); an under-approximation wherever the boundary is
/// locally flat, approximate near corners.
inline Domain shrink(const Domain& D, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("shrink: eps must be positive");
    if (D.is_empty()) return D;
    switch (D.kind()) {
    case Domain::Kind::Box: {
        const Box& b = D.as_box();
        std::vector<double> lo(b.lo), hi(b.hi);
        for (std::size_t j = 0; j < b.dim(); ++j) {
            lo[j] += eps;
            hi[j] -= eps;
            if (!(lo[j] < hi[j])) return Domain::empty_domain(D.dim());
        }
        return Domain::box(std::move(lo), std::move(hi));
    }
    case Domain::Kind::BallUnion: {
        const auto& bu = D.as_ball_union();
        PointSet centers(D.dim());
        std::vector<double> radii;
        for (std::size_t i = 0; i < bu.radii.size(); ++i) {
            if (bu.radii[i] > eps) {
                centers.push_back(bu.centers.point(i));
                radii.push_back(bu.radii[i] - eps);
            }
        }
        if (radii.empty()) return Domain::empty_domain(D.dim());
        return Domain::ball_union(std::move(centers), std::move(radii), bu.norm, bu.disjoint);
    }
    case Domain::Kind::Mask: {
        const auto& m = D.as_mask();
        const std::size_t d = D.dim();
        // probe directions: +-e_i, then diagonal sign patterns (capped at 64)
        std::vector<std::vector<double>> dirs;
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> u(d, 0.0);
            u[j] = 1.0;
            dirs.push_back(u);
            u[j] = -1.0;
            dirs.push_back(u);
        }
        if (d >= 2) {
            const std::size_t cap = 64;
            const double inv = 1.0 / std::sqrt(static_cast<double>(d));
            for (std::size_t bits = 0; bits < (1ull << d) && dirs.size() < cap; ++bits) {
                std::vector<double> u(d);
                for (std::size_t j = 0; j < d; ++j)
                    u[j] = ((bits >> j) & 1) ? inv : -inv;
                dirs.push_back(u);
            }
        }
        auto parent = m.inside;
        auto probewise = [parent, dirs, eps, d](std::span<const double> x) {
            if (!parent(x)) return false;
            std::vector<double> y(d);
            for (const auto& u : dirs) {
                for (std::size_t j = 0; j < d; ++j) y[j] = x[j] + eps * u[j];
                if (!parent(y)) return false;
            }
            return true;
        };
        Box bbox = m.bbox;
        for (std::size_t j = 0; j < d; ++j) {
            bbox.lo[j] += eps;
            bbox.hi[j] -= eps;
            if (!(bbox.lo[j] < bbox.hi[j])) return Domain::empty_domain(D.dim());
        }
        return Domain::mask(probewise, bbox, std::nullopt, m.name + "^eps");
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace optrec
