#pragma once

#include "qengine/engine.hpp"

namespace qengine {

struct DensityMatrix {
    ComplexMatrix m;
    std::size_t dim() const { return m.rows(); }
};

struct DensityCheck {
    double hermiticity = 0; // max |rho_ij - conj(rho_ji)|
    double trace_error = 0; // |Tr rho - 1|
    bool positive = false;  // all eigenvalues >= -1e-10
    bool ok() const { return hermiticity <= 1e-12 && trace_error <= 1e-12 && positive; }
};

DensityCheck check_density(const DensityMatrix& rho);

// Null vector of a chi = 0 generator, trace normalised.
DensityMatrix steady_numeric(const ComplexMatrix& l);
DensityMatrix steady_closed(const EngineParams& p);

double coherence_l1(const DensityMatrix& rho);
// closed-form coherence of the steady state of either engine
double coherence_closed(const EngineParams& p);

struct Observables {
    double power = 0;
    double j_hot = 0;
    double j_cold = 0;
    double efficiency = 0;
    double photon_flux = 0;
    double entropy_rate = 0;
    double coherence = 0;
    double power_commutator = 0; // -i Tr([H_S, H_dR] rho), cross-check of power
    bool infinite_entropy = false;
    bool degenerate_bath = false;
};

// log[n_h(n_c+1) / (n_c(n_h+1))]; +inf when n_c == 0
double bias_log(double n_h, double n_c);

Observables observables(const EngineParams& p);

double critical_alpha(const EngineParams& p);

} // namespace qengine
