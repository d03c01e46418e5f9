// engine.hpp - coherent (two-photon) and incoherent (one-photon) qutrit engines:
// parameters, bath occupations, rates, jump operators and dressed Liouvillians.
#pragma once

#include <string>
#include <vector>

#include "qengine/linalg.hpp"

namespace qengine {

enum class EngineKind { Coherent, Incoherent };

std::string to_string(EngineKind k);

struct EngineParams {
    double gamma0 = 0.01;
    double omega_h = 10.0;
    double omega_c = 5.0;
    double beta_h = 0.01;
    double beta_c = 0.8;
    double alpha = 0.0;
    EngineKind kind = EngineKind::Coherent;
};

// Throws InvalidArgument naming the violated invariant.
void check_params(const EngineParams& p);
// beta_h*omega_h < beta_c*omega_c, i.e. n_h > n_c
bool engine_valid(const EngineParams& p);
void require_engine(const EngineParams& p);

// 2 for the coherent engine (|0>,|1> subspace), 3 for the incoherent one
std::size_t working_dim(EngineKind k);

struct Occupations {
    double n_h = 0, n_c = 0;
    bool degenerate_h = false; // beta*omega > 700, occupation set to 0
    bool degenerate_c = false;
};

double occupation(double beta, double omega, bool* degenerate = nullptr);
Occupations occupations(const EngineParams& p);

struct Rates {
    EngineKind kind = EngineKind::Coherent;
    double gamma1 = 0, gamma2 = 0;           // coherent
    double g1 = 0, g2 = 0, g3 = 0, g4 = 0;   // incoherent
    double n_h = 0, n_c = 0;
    bool degenerate = false;
};

Rates rates(const EngineParams& p);

struct CountingField {
    double chi_h = 0;
    double chi_c = 0;
};

// Dressed gain term picks up exp(i*(weight_h*omega_h*chi_h + weight_c*omega_c*chi_c)).
struct JumpOperator {
    ComplexMatrix matrix;
    int weight_h = 0;
    int weight_c = 0;
};

std::vector<JumpOperator> jump_operators(const EngineParams& p);

struct Hamiltonians {
    ComplexMatrix system; // 3x3 diag(0, omega_h - omega_c, omega_h)
    ComplexMatrix drive;  // rotating-frame drive at working dimension
};

Hamiltonians hamiltonians(const EngineParams& p);
// system Hamiltonian restricted to the working space
ComplexMatrix system_hamiltonian_working(const EngineParams& p);

ComplexMatrix liouvillian(const EngineParams& p, const CountingField& chi = {});

struct SplitLiouvillian {
    ComplexMatrix right; // acts by left multiplication on rho
    ComplexMatrix left;  // acts by right multiplication on rho
};

SplitLiouvillian lr_ll_split(const EngineParams& p);

// vec(I) of the working space
CVector vec_identity(std::size_t d);

} // namespace qengine
