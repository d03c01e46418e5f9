#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qengine/engine.hpp"

namespace qengine {

// Seeded parameter generator. Uniforms are built from raw mt19937_64 output so
// the streams are identical on every standard library.
class ParamSampler {
public:
    explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    double log_uniform(double lo, double hi)
    {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Always satisfies the engine condition.
    EngineParams engine(EngineKind kind)
    {
        EngineParams p;
        p.kind = kind;
        p.gamma0 = log_uniform(0.01, 1.0);
        p.omega_h = uniform(2.0, 20.0);
        p.omega_c = p.omega_h * uniform(0.2, 0.9);
        p.beta_h = log_uniform(1e-3, 1.0);
        p.beta_c = p.beta_h * p.omega_h / p.omega_c * uniform(1.05, 20.0);
        p.alpha = p.gamma0 * std::pow(10.0, uniform(-2.0, 2.0));
        return p;
    }

    // Parameter-valid; roughly 5% of the points violate the engine condition.
    EngineParams any(EngineKind kind)
    {
        EngineParams p = engine(kind);
        const double ratio = p.omega_h / p.omega_c;
        const double f = uniform(0.5, 10.0);
        p.beta_c = std::max(p.beta_h * ratio * f, p.beta_h * 1.01);
        return p;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace qengine
