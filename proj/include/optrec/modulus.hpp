#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace optrec {

/// Modulus of continuity w(h): nondecreasing, subadditive, w(0) = 0.
/// Identity is the Lipschitz case; Power is w(h) = h^alpha, alpha in (0,1].
struct ModulusOfContinuity {
    enum class Tag { Identity, Power, Custom } tag = Tag::Identity;
    double alpha = 1.0;
    std::function<double(double)> fn;

    static ModulusOfContinuity identity() { return {}; }
    static ModulusOfContinuity power(double a) {
        if (!(a > 0.0 && a <= 1.0))
            throw std::invalid_argument("ModulusOfContinuity::power: alpha in (0,1] required");
        ModulusOfContinuity m;
        m.tag = Tag::Power;
        m.alpha = a;
        return m;
    }
    static ModulusOfContinuity custom(std::function<double(double)> f) {
        ModulusOfContinuity m;
        m.tag = Tag::Custom;
        m.fn = std::move(f);
        return m;
    }

    double operator()(double h) const {
        switch (tag) {
        case Tag::Identity: return h;
        case Tag::Power: return std::pow(h, alpha);
        case Tag::Custom: return fn(h);
        }
        return h;
    }

    bool is_identity() const { return tag == Tag::Identity; }

    std::string describe() const {
        switch (tag) {
        case Tag::Identity: return "id";
        case Tag::Power: return "h^" + std::to_string(alpha);
        case Tag::Custom: return "custom";
        }
        return "?";
    }
};

} // namespace optrec
