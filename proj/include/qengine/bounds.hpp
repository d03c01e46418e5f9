// bounds.hpp - Fano factors, classical and quantum uncertainty relations.
#pragma once

#include "qengine/engine.hpp"
#include "qengine/steady.hpp"

namespace qengine {

struct FanoReport {
    double f_total = 0;
    double f_pop = 0;
    double coherent_correction = 0;
};

FanoReport fano(const EngineParams& p);
// k = (4a^2 + g0^2 (n^2 + 2n + 3 n_h n_c)) / (g0^2 (n_h - n_c)), n = n_h + n_c
double k_coefficient(const EngineParams& p);

struct CturReport {
    double q = 0; // log-bias times Fano factor
    double d = 0; // power-efficiency-constancy value
    bool infinite_entropy = false;
};

CturReport ctur(const EngineParams& p);

// Generalised inverse on the complement of the steady-state kernel.
ComplexMatrix drazin(const ComplexMatrix& l, const DensityMatrix& rho);

struct QturBound {
    double upsilon = 0;
    double psi = 0;
    double f = 0;
    double psi_imag = 0; // residue, should vanish
};

QturBound qtur_bound(const EngineParams& p);
double qtur_bound_closed(const EngineParams& p);

struct TURReport {
    double q_value = 0;
    double nsr = 0;
    double entropy_rate = 0;
    double upsilon = 0;
    double psi = 0;
    double f_bound = 0;
    double slack = 0;
    bool ctur_violated = false;
    bool qtur_ok = false;
    bool infinite_entropy = false;
};

TURReport tur_report(const EngineParams& p);

} // namespace qengine
