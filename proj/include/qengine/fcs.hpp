// fcs.hpp - counting statistics of power, heat currents and photon flux.
#pragma once

#include <string>

#include "qengine/engine.hpp"

namespace qengine {

enum class CountedObservable { Power, HotCurrent, ColdCurrent, PhotonFlux };

std::string to_string(CountedObservable o);

// Counting fields per unit counting parameter. Power is counted with both
// fields at -1 so that its mean carries the engine sign (<P> <= 0).
CountingField counting_direction(const EngineParams& p, CountedObservable o);

struct CumulantReport {
    double mean = 0;
    double variance = 0;
    double nsr = 0;
};

// Characteristic-polynomial coefficients at chi = 0 and their derivatives
// with respect to (i chi).
struct CoeffDerivs {
    cplx a0, a1, a2;
    cplx a0p, a0pp, a1p;
};

// default finite-difference step, 1e-3 / max(omega_h, omega_c)
double fd_step(const EngineParams& p);

// step_scale multiplies the default step. Throws NumericalInstability when
// the two Richardson estimates (h and h/2) disagree by more than 1e-7.
CoeffDerivs coeff_derivs(const EngineParams& p, CountedObservable o, double step_scale = 1.0);

// Mean and variance from the coefficient recipe; retries with h/4 on instability.
CumulantReport cumulants(const EngineParams& p, CountedObservable o);
CumulantReport cumulants_closed(const EngineParams& p, CountedObservable o);

// Eigenvalue branch lambda(chi) with lambda(0) = 0, tracked by Newton steps.
cplx lambda_branch(const EngineParams& p, CountedObservable o, double chi);
// Cumulants from finite differences of lambda_branch.
CumulantReport cumulants_branch(const EngineParams& p, CountedObservable o);

double population_fano(double n_h, double n_c);
// k written as 4a^2/(g0^2 (n_h-n_c)) + (n_h^2+n_c^2+n_h n_c)/(n_h-n_c) + 2 F_p
double k_three_term(const EngineParams& p);

} // namespace qengine
