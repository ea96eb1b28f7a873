#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "optrec/domain.hpp"
#include "optrec/geometry.hpp"
#include "optrec/nearest.hpp"
#include "optrec/points.hpp"
#include "optrec/report.hpp"

namespace optrec {

struct CoverOptions {
    enum class Mode { Certified, MonteCarlo };
    Mode mode = Mode::Certified;
    double tol = 1e-6;             // certified interval width target
    std::size_t budget = 1u << 20; // Monte-Carlo sample count
    std::uint64_t seed = 0;
    std::size_t max_boxes = 80'000'000;
};

namespace detail {

inline constexpr std::size_t kMaxCertifyDim = 8;

/// ||v||_to <= factor * ||v||_from for all v in R^d.
inline double norm_conversion_factor(const NormSpec& from, const NormSpec& to, std::size_t d) {
    double pf = from.is_inf ? std::numeric_limits<double>::infinity() : from.p;
    double pt = to.is_inf ? std::numeric_limits<double>::infinity() : to.p;
    double expo = 0.0;
    if (!(pt >= pf)) expo = 1.0 / pt - (std::isinf(pf) ? 0.0 : 1.0 / pf);
    double f = std::pow(static_cast<double>(d), std::max(0.0, expo));
    double wr = 1.0;
    for (std::size_t j = 0; j < d; ++j) wr = std::max(wr, to.weight(j) / from.weight(j));
    return f * wr;
}

// Branch-and-bound maximizer of f(x) = min_i ||x - x_i|| over D (box or ball
// union). Box upper bound: min over candidate nodes of the box max-distance
// (sup min <= min sup), intersected with the Lipschitz bound f(center)+rho
// and, on unions, the per-ball clamp min_i ||c_j - x_i|| + conv * r_j.
// Splits bisect the axis binding the bound and snap the cut to the nearest
// node-coordinate/bisector plane so flat maximizer sets land on child
// boundaries instead of being resolved dyadically.
class CoverCertifier {
public:
    CoverCertifier(const Domain& D, const PointSet& X, const NormSpec& norm,
                   const CoverOptions& opt)
        : domain_(D), norm_(norm), opt_(opt) {
        dim_ = X.dim();
        n_ = X.size();
        if (dim_ > kMaxCertifyDim)
            throw std::invalid_argument("covering_radius: certified mode supports d <= 8");
        is_union_ = D.kind() == Domain::Kind::BallUnion;
        flat_.assign(X.data().begin(), X.data().end());
        for (std::size_t j = 0; j < dim_; ++j) w_[j] = norm.weight(j);
        p_ = norm.is_inf ? std::numeric_limits<double>::infinity() : norm.p;
        if (is_union_) {
            const auto& bu = D.as_ball_union();
            conv_ = norm_conversion_factor(bu.norm, norm, dim_);
            nballs_ = bu.radii.size();
            ball_clamp_.resize(nballs_);
            for (std::size_t j = 0; j < nballs_; ++j) {
                double md = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < n_; ++i)
                    md = std::min(md, distance(bu.centers.point(j), X.point(i), norm));
                ball_clamp_[j] = md + conv_ * bu.radii[j];
            }
        }
        build_snap_values();
    }

    ErrorReport run() {
        Box root = domain_.bounding_box();
        seed_witnesses(root);
        std::array<double, kMaxCertifyDim> lo{}, hi{};
        for (std::size_t j = 0; j < dim_; ++j) {
            lo[j] = root.lo[j];
            hi[j] = root.hi[j];
        }
        arena_.reserve(1024);
        for (std::uint32_t i = 0; i < n_; ++i) arena_.push_back(i);
        ball_arena_.reserve(256);
        for (std::uint32_t j = 0; j < nballs_; ++j) ball_arena_.push_back(j);
        recurse(lo, hi, 0, n_, 0, nballs_, 0);

        ErrorReport rep;
        rep.kind = ErrorReport::Kind::CertifiedInterval;
        rep.lo = best_;
        rep.hi = std::max(best_, pruned_hi_);
        rep.value = 0.5 * (rep.lo + rep.hi);
        rep.converged = !budget_exceeded_ && rep.width() <= opt_.tol * (1.0 + 1e-9);
        rep.samples = boxes_;
        rep.seed = opt_.seed;
        if (budget_exceeded_) rep.note = "box budget exceeded; interval is valid but wider than tol";
        return rep;
    }

private:
    const double* node(std::size_t i) const { return flat_.data() + i * dim_; }

    double dist_to_node(const double* x, std::size_t i) const {
        const double* c = node(i);
        if (std::isinf(p_)) {
            double m = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) m = std::max(m, w_[j] * std::abs(x[j] - c[j]));
            return m;
        }
        if (p_ == 2.0) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                double t = w_[j] * (x[j] - c[j]);
                s += t * t;
            }
            return std::sqrt(s);
        }
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
            s += std::pow(w_[j] * std::abs(x[j] - c[j]), p_);
        return std::pow(s, 1.0 / p_);
    }

    double fval_full(const double* x) const {
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) bd = std::min(bd, dist_to_node(x, i));
        return bd;
    }

    double fval_active(const double* x, std::size_t abeg, std::size_t acnt) const {
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < acnt; ++t)
            bd = std::min(bd, dist_to_node(x, arena_[abeg + t]));
        return bd;
    }

    // max / min of ||x - c_i|| over the box, via per-coordinate intervals
    double box_max_dist(const double* lo, const double* hi, std::size_t i) const {
        const double* c = node(i);
        if (std::isinf(p_)) {
            double m = 0.0;
            for (std::size_t j = 0; j < dim_; ++j)
                m = std::max(m, w_[j] * std::max(std::abs(lo[j] - c[j]), std::abs(hi[j] - c[j])));
            return m;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double t = w_[j] * std::max(std::abs(lo[j] - c[j]), std::abs(hi[j] - c[j]));
            s += p_ == 2.0 ? t * t : std::pow(t, p_);
        }
        return p_ == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p_);
    }

    double box_min_dist(const double* lo, const double* hi, std::size_t i) const {
        const double* c = node(i);
        double s = 0.0, m = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double t = 0.0;
            if (c[j] < lo[j]) t = lo[j] - c[j];
            else if (c[j] > hi[j]) t = c[j] - hi[j];
            t *= w_[j];
            if (std::isinf(p_)) m = std::max(m, t);
            else s += p_ == 2.0 ? t * t : std::pow(t, p_);
        }
        if (std::isinf(p_)) return m;
        return p_ == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p_);
    }

    void build_snap_values() {
        snap_.resize(dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            std::vector<double> coords;
            coords.reserve(n_);
            for (std::size_t i = 0; i < n_; ++i) coords.push_back(node(i)[j]);
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
            auto& s = snap_[j];
            for (std::size_t t = 0; t < coords.size(); ++t) {
                s.push_back(coords[t]);
                if (t + 1 < coords.size()) s.push_back(0.5 * (coords[t] + coords[t + 1]));
            }
        }
    }

    double split_point(const double* lo, const double* hi, std::size_t axis) const {
        const double w = hi[axis] - lo[axis];
        const double mid = 0.5 * (lo[axis] + hi[axis]);
        const auto& s = snap_[axis];
        // nearest structural plane within the middle half of the interval
        double best_v = mid, best_gap = std::numeric_limits<double>::infinity();
        auto it = std::lower_bound(s.begin(), s.end(), lo[axis] + 0.25 * w);
        for (; it != s.end() && *it <= hi[axis] - 0.25 * w; ++it) {
            double gap = std::abs(*it - mid);
            if (gap < best_gap) {
                best_gap = gap;
                best_v = *it;
            }
        }
        return best_v;
    }

    void consider_witness(const double* x) {
        std::span<const double> xs(x, dim_);
        if (!domain_.contains(xs)) {
            if (!is_union_) return;
            const auto& bu = domain_.as_ball_union();
            std::size_t bj = 0;
            double brel = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < nballs_; ++j) {
                double rel = distance(xs, bu.centers.point(j), bu.norm) / bu.radii[j];
                if (rel < brel) {
                    brel = rel;
                    bj = j;
                }
            }
            auto c = bu.centers.point(bj);
            double dist_c = distance(xs, c, bu.norm);
            double scale = bu.radii[bj] * (1.0 - 1e-12) / dist_c;
            std::array<double, kMaxCertifyDim> y{};
            for (std::size_t j = 0; j < dim_; ++j) y[j] = c[j] + (x[j] - c[j]) * scale;
            best_ = std::max(best_, fval_full(y.data()));
            return;
        }
        best_ = std::max(best_, fval_full(x));
    }

    void seed_witnesses(const Box& root) {
        std::array<double, kMaxCertifyDim> x{};
        for (std::size_t bits = 0; bits < (1ull << dim_); ++bits) {
            for (std::size_t j = 0; j < dim_; ++j)
                x[j] = ((bits >> j) & 1) ? root.hi[j] : root.lo[j];
            consider_witness(x.data());
        }
        for (std::size_t j = 0; j < dim_; ++j) x[j] = 0.5 * (root.lo[j] + root.hi[j]);
        consider_witness(x.data());
        if (is_union_) {
            const auto& bu = domain_.as_ball_union();
            for (std::size_t b = 0; b < nballs_; ++b) {
                auto cb = bu.centers.point(b);
                for (std::size_t j = 0; j < dim_; ++j) {
                    for (double s : {-1.0, 1.0}) {
                        for (std::size_t t = 0; t < dim_; ++t) x[t] = cb[t];
                        x[j] = cb[j] + s * bu.radii[b] * (1.0 - 1e-12) / bu.norm.weight(j);
                        consider_witness(x.data());
                    }
                }
            }
        }
    }

    void recurse(std::array<double, kMaxCertifyDim>& lo, std::array<double, kMaxCertifyDim>& hi,
                 std::size_t abeg, std::size_t acnt, std::size_t bbeg, std::size_t bcnt,
                 int depth) {
        ++boxes_;
        if (boxes_ > opt_.max_boxes) budget_exceeded_ = true;

        double u1 = std::numeric_limits<double>::infinity();
        std::size_t argmin_node = arena_[abeg];
        for (std::size_t t = 0; t < acnt; ++t) {
            double md = box_max_dist(lo.data(), hi.data(), arena_[abeg + t]);
            if (md < u1) {
                u1 = md;
                argmin_node = arena_[abeg + t];
            }
        }
        if (u1 <= best_ + opt_.tol) {
            pruned_hi_ = std::max(pruned_hi_, u1);
            return;
        }

        double upper = u1;
        std::size_t ball_top = ball_arena_.size();
        std::size_t nbeg = ball_top, ncnt = 0;
        if (is_union_) {
            const auto& bu = domain_.as_ball_union();
            double clamp = 0.0;
            for (std::size_t t = 0; t < bcnt; ++t) {
                std::uint32_t j = ball_arena_[bbeg + t];
                // ball j meets the box? (min distance in the ball's own norm)
                double mind = 0.0;
                auto c = bu.centers.point(j);
                if (bu.norm.is_inf) {
                    for (std::size_t a = 0; a < dim_; ++a) {
                        double tt = 0.0;
                        if (c[a] < lo[a]) tt = lo[a] - c[a];
                        else if (c[a] > hi[a]) tt = c[a] - hi[a];
                        mind = std::max(mind, tt * bu.norm.weight(a));
                    }
                } else {
                    double s = 0.0;
                    for (std::size_t a = 0; a < dim_; ++a) {
                        double tt = 0.0;
                        if (c[a] < lo[a]) tt = lo[a] - c[a];
                        else if (c[a] > hi[a]) tt = c[a] - hi[a];
                        s += std::pow(tt * bu.norm.weight(a), bu.norm.p);
                    }
                    mind = std::pow(s, 1.0 / bu.norm.p);
                }
                if (mind <= bu.radii[j]) {
                    ball_arena_.push_back(j);
                    clamp = std::max(clamp, ball_clamp_[j]);
                }
            }
            ncnt = ball_arena_.size() - nbeg;
            if (ncnt == 0) {
                ball_arena_.resize(ball_top);
                return; // box misses the domain entirely
            }
            upper = std::min(upper, clamp);
            if (upper <= best_ + opt_.tol) {
                pruned_hi_ = std::max(pruned_hi_, upper);
                ball_arena_.resize(ball_top);
                return;
            }
        }

        // witness at the center; Lipschitz bound f(center) + rho
        std::array<double, kMaxCertifyDim> c{};
        std::array<double, kMaxCertifyDim> half{};
        for (std::size_t j = 0; j < dim_; ++j) {
            c[j] = 0.5 * (lo[j] + hi[j]);
            half[j] = 0.5 * (hi[j] - lo[j]);
        }
        double rho = norm_of(std::span<const double>(half.data(), dim_), norm_);
        if (!is_union_ || domain_.contains(std::span<const double>(c.data(), dim_))) {
            double fc = fval_active(c.data(), abeg, acnt);
            best_ = std::max(best_, fc);
            upper = std::min(upper, fc + rho);
        } else {
            consider_witness(c.data());
        }
        if (upper <= best_ + opt_.tol || budget_exceeded_ || depth >= 200) {
            pruned_hi_ = std::max(pruned_hi_, upper);
            ball_arena_.resize(ball_top);
            return;
        }

        // children keep only nodes that can still be the argmin
        std::size_t atop = arena_.size();
        for (std::size_t t = 0; t < acnt; ++t) {
            std::uint32_t i = arena_[abeg + t];
            if (box_min_dist(lo.data(), hi.data(), i) <= u1) arena_.push_back(i);
        }
        std::size_t cbeg = atop, ccnt = arena_.size() - atop;

        // Split the axis whose full resolution lowers the argmin node's bound
        // the most; a term whose node coordinate is far outside the interval
        // cannot be reduced, so splitting it would only double the tree.
        std::size_t axis = dim_;
        {
            const double* cn = node(argmin_node);
            double term[kMaxCertifyDim], mind[kMaxCertifyDim];
            double sum_p = 0.0, max_all = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                term[j] = w_[j] * std::max(std::abs(lo[j] - cn[j]), std::abs(hi[j] - cn[j]));
                double t = 0.0;
                if (cn[j] < lo[j]) t = lo[j] - cn[j];
                else if (cn[j] > hi[j]) t = cn[j] - hi[j];
                mind[j] = w_[j] * t;
                max_all = std::max(max_all, term[j]);
                if (!std::isinf(p_)) sum_p += p_ == 2.0 ? term[j] * term[j] : std::pow(term[j], p_);
            }
            double best_pot = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < dim_; ++j) {
                if (hi[j] - lo[j] <= 1e-14) continue;
                double pot;
                if (std::isinf(p_)) {
                    pot = mind[j];
                    for (std::size_t t = 0; t < dim_; ++t)
                        if (t != j) pot = std::max(pot, term[t]);
                } else if (p_ == 2.0) {
                    pot = std::sqrt(std::max(0.0, sum_p - term[j] * term[j] + mind[j] * mind[j]));
                } else {
                    pot = std::pow(std::max(0.0, sum_p - std::pow(term[j], p_) + std::pow(mind[j], p_)),
                                   1.0 / p_);
                }
                if (pot < best_pot) {
                    best_pot = pot;
                    axis = j;
                }
            }
            // no axis can prune through this node's bound: shrink the box
            // instead (widest axis) so the Lipschitz bound takes over
            if (axis == dim_ || best_pot > best_ + opt_.tol) {
                double wbest = -1.0;
                for (std::size_t j = 0; j < dim_; ++j) {
                    double w = (hi[j] - lo[j]) * w_[j];
                    if (hi[j] - lo[j] > 1e-14 && w > wbest) {
                        wbest = w;
                        axis = j;
                    }
                }
                if (wbest < 0.0) axis = 0; // fully degenerate box: depth cap ends it
            }
        }
        double mid = split_point(lo.data(), hi.data(), axis);
        const double save_lo = lo[axis], save_hi = hi[axis];
        hi[axis] = mid;
        recurse(lo, hi, cbeg, ccnt, nbeg, ncnt, depth + 1);
        hi[axis] = save_hi;
        lo[axis] = mid;
        recurse(lo, hi, cbeg, ccnt, nbeg, ncnt, depth + 1);
        lo[axis] = save_lo;

        arena_.resize(atop);
        ball_arena_.resize(ball_top);
    }

    const Domain& domain_;
    NormSpec norm_;
    CoverOptions opt_;
    std::size_t dim_ = 0, n_ = 0, nballs_ = 0;
    bool is_union_ = false;
    double conv_ = 1.0;
    double p_ = 2.0;
    std::array<double, kMaxCertifyDim> w_{};
    std::vector<double> flat_;
    std::vector<double> ball_clamp_;
    std::vector<std::vector<double>> snap_;
    std::vector<std::uint32_t> arena_;
    std::vector<std::uint32_t> ball_arena_;

    double best_ = 0.0;
    double pruned_hi_ = 0.0;
    std::size_t boxes_ = 0;
    bool budget_exceeded_ = false;
};

} // namespace detail

/// sup_{x in D} min_i ||x - x_i||  (the covering radius of X in D).
/// Certified mode (Box/BallUnion, d <= 8): branch-and-bound interval of
/// width <= tol. Monte-Carlo mode: max over uniform samples, flagged as a
/// lower estimate.
inline ErrorReport covering_radius(const Domain& D, const PointSet& X, const NormSpec& norm,
                                   const CoverOptions& opt = {}) {
    if (D.is_empty()) throw std::invalid_argument("covering_radius: empty domain");
    if (X.size() == 0) {
        ErrorReport r;
        r.infinite = true;
        r.value = r.lo = r.hi = std::numeric_limits<double>::infinity();
        r.kind = ErrorReport::Kind::Exact;
        r.note = "no nodes: radius of the empty information map is infinite";
        return r;
    }
    if (X.dim() != D.dim()) throw std::invalid_argument("covering_radius: dimension mismatch");

    if (opt.mode == CoverOptions::Mode::Certified) {
        if (D.kind() == Domain::Kind::Mask)
            throw std::invalid_argument("covering_radius: certified mode unsupported on mask domains");
        detail::CoverCertifier cert(D, X, norm, opt);
        return cert.run();
    }

    PointSet samples = sample_uniform(D, opt.budget, opt.seed);
    NearestQuery nq(X, norm);
    double m = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        m = std::max(m, nq.min_distance(samples.point(i)));
    ErrorReport r;
    r.kind = ErrorReport::Kind::MonteCarlo;
    r.value = m;
    r.lo = m;
    r.hi = std::numeric_limits<double>::infinity();
    r.lower_estimate_only = true;
    r.samples = opt.budget;
    r.seed = opt.seed;
    r.note = "sampled maximum: a lower estimate of the supremum";
    return r;
}

} // namespace optrec
