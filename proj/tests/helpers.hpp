#pragma once

#include <algorithm>
#include <cmath>

#include "qengine/engine.hpp"

namespace testing {

inline double rel_err(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

// Temperatures chosen so that n = 1 / (e^{beta omega} - 1) hits n_h, n_c.
// n_c = 0 uses a beta_c*omega_c above the degenerate cut-off.
inline qengine::EngineParams with_occupations(qengine::EngineKind kind, double gamma0, double n_h, double n_c,
                                              double alpha, double omega_h = 10, double omega_c = 5)
{
    qengine::EngineParams p;
    p.kind = kind;
    p.gamma0 = gamma0;
    p.omega_h = omega_h;
    p.omega_c = omega_c;
    p.beta_h = std::log1p(1.0 / n_h) / omega_h;
    p.beta_c = n_c == 0 ? 1000.0 / omega_c : std::log1p(1.0 / n_c) / omega_c;
    p.alpha = alpha;
    return p;
}

// gamma0 = 1, n_h = 1, n_c = 0, alpha = 0.5, omega_h = 10, omega_c = 5
inline qengine::EngineParams worked(qengine::EngineKind kind)
{
    return with_occupations(kind, 1.0, 1.0, 0.0, 0.5);
}

} // namespace testing
