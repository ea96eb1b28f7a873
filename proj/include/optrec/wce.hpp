#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "optrec/covering.hpp"
#include "optrec/domain.hpp"
#include "optrec/modulus.hpp"
#include "optrec/nearest.hpp"
#include "optrec/points.hpp"
#include "optrec/report.hpp"

namespace optrec {

/// Standard information map: nodes, their domain, and the metric.
/// Construction checks that every node lies in the domain.
struct InformationMap {
    Domain domain;
    PointSet nodes;
    NormSpec norm;

    InformationMap(Domain D, PointSet X, NormSpec N)
        : domain(std::move(D)), nodes(std::move(X)), norm(std::move(N)) {
        if (nodes.size() > 0 && nodes.dim() != domain.dim())
            throw std::invalid_argument("InformationMap: node dimension != domain dimension");
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (!domain.contains(nodes.point(i)))
                throw std::invalid_argument("InformationMap: node outside domain");
    }
};

/// Worst-case L_inf recovery error on the w-Hoelder class for fixed nodes:
/// w(covering radius). Interval endpoints map through w (w nondecreasing).
inline ErrorReport wce_linf(const Domain& D, const PointSet& X, const NormSpec& norm,
                            const ModulusOfContinuity& omega, const CoverOptions& opt = {}) {
    ErrorReport r = covering_radius(D, X, norm, opt);
    if (r.infinite) return r;
    r.value = omega(r.value);
    r.lo = omega(r.lo);
    r.hi = std::isinf(r.hi) ? r.hi : omega(r.hi);
    return r;
}

/// Worst-case integration error for fixed nodes on the w-Hoelder class:
///   int_D w(min_i ||x - x_i||) dx,
/// attained by the admissible extremal f*(x) = w(min-distance), which
/// vanishes at the nodes. Monte-Carlo estimate with standard error.
inline ErrorReport wce_integration(const Domain& D, const PointSet& X, const NormSpec& norm,
                                   const ModulusOfContinuity& omega, std::size_t budget = 1u << 20,
                                   std::uint64_t seed = 0) {
    if (X.size() == 0) {
        ErrorReport r;
        r.infinite = true;
        r.value = std::numeric_limits<double>::quiet_NaN();
        r.note = "no nodes: integral of distance to the empty set is undefined";
        return r;
    }
    if (budget == 0) throw std::invalid_argument("wce_integration: budget must be positive");
    VolumeEstimate vol = volume(D, budget, seed ^ 0x9e3779b97f4a7c15ULL);
    NearestQuery nq(X, norm);

    // On exact-volume domains sample inside D; on masks integrate the
    // indicator against the bounding box to keep a single error term.
    ErrorReport r;
    r.kind = ErrorReport::Kind::MonteCarlo;
    r.seed = seed;
    r.samples = budget;
    if (vol.method == VolumeEstimate::Method::Exact) {
        PointSet s = sample_uniform(D, budget, seed);
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double g = omega(nq.min_distance(s.point(i)));
            sum += g;
            sumsq += g * g;
        }
        const double n = static_cast<double>(budget);
        double mean = sum / n;
        double var = std::max(0.0, sumsq / n - mean * mean);
        r.value = vol.value * mean;
        r.stderr_ = vol.value * std::sqrt(var / n);
    } else {
        Box bbox = D.bounding_box();
        const double vb = bbox.volume();
        double sum = 0.0, sumsq = 0.0;
        std::vector<double> x(D.dim());
        std::size_t done = 0;
        for (std::uint64_t chunk = 0; done < budget; ++chunk) {
            auto eng = stream_engine(seed, chunk);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            std::size_t todo = std::min(kRngChunk, budget - done);
            for (std::size_t k = 0; k < todo; ++k) {
                for (std::size_t j = 0; j < D.dim(); ++j)
                    x[j] = bbox.lo[j] + u01(eng) * bbox.side(j);
                double g = D.contains(x) ? omega(nq.min_distance(x)) : 0.0;
                sum += g;
                sumsq += g * g;
            }
            done += todo;
        }
        const double n = static_cast<double>(budget);
        double mean = sum / n;
        double var = std::max(0.0, sumsq / n - mean * mean);
        r.value = vb * mean;
        r.stderr_ = vb * std::sqrt(var / n);
    }
    r.lo = r.value - 3.0 * r.stderr_;
    r.hi = r.value + 3.0 * r.stderr_;
    return r;
}

/// Optimal (central) recovery from data (x_i, v_i) consistent with the
/// w-Hoelder class: midpoint of the consistency envelopes
///   1/2 [ max_i (v_i - w(d_i)) + min_i (v_i + w(d_i)) ].
inline double central_algorithm(const PointSet& X, std::span<const double> values,
                                const NormSpec& norm, const ModulusOfContinuity& omega,
                                std::span<const double> x) {
    if (X.size() == 0) throw std::invalid_argument("central_algorithm: no nodes");
    if (values.size() != X.size())
        throw std::invalid_argument("central_algorithm: one value per node required");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < X.size(); ++i) {
        double w = omega(distance(x, X.point(i), norm));
        lo = std::max(lo, values[i] - w);
        hi = std::min(hi, values[i] + w);
    }
    return 0.5 * (lo + hi);
}

struct QuadratureResult {
    double value = 0.0;
    std::vector<double> weights; // Monte-Carlo Voronoi cell volumes
    double volume_estimate = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
};

/// Quadrature with natural weights: w_i = volume of the Voronoi cell of x_i,
/// estimated by nearest-node classification of uniform samples (ties to the
/// lowest index). The weights sum to the volume estimate by construction.
inline QuadratureResult voronoi_quadrature(const Domain& D, const PointSet& X,
                                           std::span<const double> values, const NormSpec& norm,
                                           std::size_t budget = 1u << 20, std::uint64_t seed = 0) {
    if (X.size() == 0) throw std::invalid_argument("voronoi_quadrature: no nodes");
    if (values.size() != X.size())
        throw std::invalid_argument("voronoi_quadrature: one value per node required");
    NearestQuery nq(X, norm);
    std::vector<std::size_t> hits(X.size(), 0);
    QuadratureResult out;
    out.seed = seed;
    VolumeEstimate vol = volume(D, budget, seed ^ 0x9e3779b97f4a7c15ULL);
    if (vol.method == VolumeEstimate::Method::Exact) {
        PointSet s = sample_uniform(D, budget, seed);
        for (std::size_t i = 0; i < s.size(); ++i) ++hits[nq.nearest_index(s.point(i))];
        out.samples = budget;
        out.weights.resize(X.size());
        for (std::size_t i = 0; i < X.size(); ++i)
            out.weights[i] = vol.value * static_cast<double>(hits[i]) / static_cast<double>(budget);
        out.volume_estimate = vol.value;
    } else {
        Box bbox = D.bounding_box();
        std::vector<double> x(D.dim());
        std::size_t done = 0, inside = 0;
        for (std::uint64_t chunk = 0; done < budget; ++chunk) {
            auto eng = stream_engine(seed, chunk);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            std::size_t todo = std::min(kRngChunk, budget - done);
            for (std::size_t k = 0; k < todo; ++k) {
                for (std::size_t j = 0; j < D.dim(); ++j)
                    x[j] = bbox.lo[j] + u01(eng) * bbox.side(j);
                if (D.contains(x)) {
                    ++inside;
                    ++hits[nq.nearest_index(x)];
                }
            }
            done += todo;
        }
        out.samples = budget;
        out.weights.resize(X.size());
        for (std::size_t i = 0; i < X.size(); ++i)
            out.weights[i] =
                bbox.volume() * static_cast<double>(hits[i]) / static_cast<double>(budget);
        out.volume_estimate =
            bbox.volume() * static_cast<double>(inside) / static_cast<double>(budget);
    }
    for (std::size_t i = 0; i < X.size(); ++i) out.value += out.weights[i] * values[i];
    return out;
}

} // namespace optrec
