#pragma once

#include <cstdint>
#include <string>

namespace optrec {

/// A computed worst-case error value plus estimator metadata.
/// kind CertifiedInterval: true value lies in [lo, hi].
/// kind MonteCarlo: value +- stderr_ (or a flagged lower estimate for sup-type
/// quantities, where stderr_ is not meaningful).
/// kind Exact: closed form.
struct ErrorReport {
    double value = 0.0;
    enum class Kind { CertifiedInterval, MonteCarlo, Exact } kind = Kind::Exact;
    double lo = 0.0;
    double hi = 0.0;
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    bool lower_estimate_only = false; // MC sup estimates never overshoot
    bool infinite = false;            // e.g. covering radius with no nodes
    bool converged = true;            // certified mode reached its tolerance
    std::string note;

    double width() const { return hi - lo; }

    static ErrorReport exact(double v) {
        ErrorReport r;
        r.value = v;
        r.lo = r.hi = v;
        return r;
    }
};

} // namespace optrec
