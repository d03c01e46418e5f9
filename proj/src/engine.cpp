#include "qengine/engine.hpp"

#include <cmath>

#include "qengine/quad.hpp"

namespace qengine {

std::string to_string(EngineKind k)
{
    return k == EngineKind::Coherent ? "coherent" : "incoherent";
}

void check_params(const EngineParams& p)
{
    for (double v : {p.gamma0, p.omega_h, p.omega_c, p.beta_h, p.beta_c, p.alpha})
        if (!std::isfinite(v))
            throw InvalidArgument("parameters must be finite");
    if (!(p.omega_c > 0))
        throw InvalidArgument("omega_c > 0 violated");
    if (!(p.omega_h > p.omega_c))
        throw InvalidArgument("omega_h > omega_c violated");
    if (!(p.gamma0 > 0))
        throw InvalidArgument("gamma0 > 0 violated");
    if (!(p.alpha >= 0))
        throw InvalidArgument("alpha >= 0 violated");
    if (!(p.beta_h > 0))
        throw InvalidArgument("beta_h > 0 violated");
    if (!(p.beta_c > p.beta_h))
        throw InvalidArgument("beta_c > beta_h violated");
}

bool engine_valid(const EngineParams& p)
{
    return p.beta_h * p.omega_h < p.beta_c * p.omega_c;
}

void require_engine(const EngineParams& p)
{
    check_params(p);
    if (!engine_valid(p))
        throw NotAnEngine();
}

std::size_t working_dim(EngineKind k)
{
    return k == EngineKind::Coherent ? 2 : 3;
}

double occupation(double beta, double omega, bool* degenerate)
{
    const double x = beta * omega;
    if (degenerate)
        *degenerate = x > 700.0;
    if (x > 700.0)
        return 0.0;
    return 1.0 / std::expm1(x);
}

Occupations occupations(const EngineParams& p)
{
    check_params(p);
    Occupations o;
    o.n_h = occupation(p.beta_h, p.omega_h, &o.degenerate_h);
    o.n_c = occupation(p.beta_c, p.omega_c, &o.degenerate_c);
    return o;
}

Rates rates(const EngineParams& p)
{
    const Occupations o = occupations(p);
    Rates r;
    r.kind = p.kind;
    r.n_h = o.n_h;
    r.n_c = o.n_c;
    r.degenerate = o.degenerate_h || o.degenerate_c;
    const double g0 = p.gamma0;
    r.gamma1 = g0 * o.n_c * (o.n_h + 1);
    r.gamma2 = g0 * o.n_h * (o.n_c + 1);
    r.g1 = g0 * (o.n_h + 1);
    r.g2 = g0 * o.n_h;
    r.g3 = g0 * (o.n_c + 1);
    r.g4 = g0 * o.n_c;
    return r;
}

namespace {

ComplexMatrix ket_bra(std::size_t d, std::size_t i, std::size_t j, double amp)
{
    ComplexMatrix m(d, d);
    m(i, j) = amp;
    return m;
}

} // namespace

std::vector<JumpOperator> jump_operators(const EngineParams& p)
{
    const Rates r = rates(p);
    if (p.kind == EngineKind::Coherent) {
        // b_hc = |0><1|
        return {
            {ket_bra(2, 0, 1, std::sqrt(r.gamma1)), -1, +1},
            {ket_bra(2, 1, 0, std::sqrt(r.gamma2)), +1, -1},
        };
    }
    // b_h = |0><2|, b_c = |1><2|
    return {
        {ket_bra(3, 0, 2, std::sqrt(r.g1)), -1, 0},
        {ket_bra(3, 2, 0, std::sqrt(r.g2)), +1, 0},
        {ket_bra(3, 1, 2, std::sqrt(r.g3)), 0, -1},
        {ket_bra(3, 2, 1, std::sqrt(r.g4)), 0, +1},
    };
}

Hamiltonians hamiltonians(const EngineParams& p)
{
    check_params(p);
    Hamiltonians h{ComplexMatrix(3, 3), ComplexMatrix(working_dim(p.kind), working_dim(p.kind))};
    h.system(1, 1) = p.omega_h - p.omega_c;
    h.system(2, 2) = p.omega_h;
    h.drive(0, 1) = p.alpha;
    h.drive(1, 0) = p.alpha;
    return h;
}

ComplexMatrix system_hamiltonian_working(const EngineParams& p)
{
    const std::size_t d = working_dim(p.kind);
    ComplexMatrix h(d, d);
    h(1, 1) = p.omega_h - p.omega_c;
    if (d == 3)
        h(2, 2) = p.omega_h;
    return h;
}

namespace {

template <class T>
BasicMatrix<T> convert(const ComplexMatrix& m)
{
    BasicMatrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = T(m(i, j).real(), m(i, j).imag());
    return out;
}

// -i[H, .] + sum_k phase_k L* (x) L - 1/2 I (x) L^dag L - 1/2 (L^dag L)^T (x) I
template <class T, class Phase>
BasicMatrix<T> assemble(const EngineParams& p, Phase phase)
{
    const std::size_t d = working_dim(p.kind);
    const auto id = BasicMatrix<T>::identity(d);
    const auto h = convert<T>(hamiltonians(p).drive);
    BasicMatrix<T> l = T(0, -1) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& j : jump_operators(p)) {
        const auto lk = convert<T>(j.matrix);
        const auto ldl = lk.adjoint() * lk;
        l += phase(j) * kron(lk.conj(), lk);
        l -= T(0.5) * (kron(id, ldl) + kron(ldl.transpose(), id));
    }
    return l;
}

} // namespace

ComplexMatrix liouvillian(const EngineParams& p, const CountingField& chi)
{
    return assemble<cplx>(p, [&](const JumpOperator& j) {
        const double theta = j.weight_h * p.omega_h * chi.chi_h + j.weight_c * p.omega_c * chi.chi_c;
        return std::polar(1.0, theta);
    });
}

QuadMatrix liouvillian_quad(const EngineParams& p, const CountingField& chi)
{
    return assemble<qcplx>(p, [&](const JumpOperator& j) {
        const qreal theta = qreal(j.weight_h) * qreal(p.omega_h) * qreal(chi.chi_h) +
                            qreal(j.weight_c) * qreal(p.omega_c) * qreal(chi.chi_c);
        return qcplx(cos(theta), sin(theta));
    });
}

SplitLiouvillian lr_ll_split(const EngineParams& p)
{
    const std::size_t d = working_dim(p.kind);
    const auto id = ComplexMatrix::identity(d);
    const auto h = hamiltonians(p).drive;
    const cplx i(0, 1);
    SplitLiouvillian s{-i * kron(id, h), i * kron(h.transpose(), id)};
    for (const auto& j : jump_operators(p)) {
        const auto& lk = j.matrix;
        const auto ldl = lk.adjoint() * lk;
        const auto jump = kron(lk.conj(), lk);
        s.right += cplx(0.5) * (jump - kron(id, ldl));
        s.left += cplx(0.5) * (jump - kron(ldl.transpose(), id));
    }
    return s;
}

CVector vec_identity(std::size_t d)
{
    return vec(ComplexMatrix::identity(d));
}

} // namespace qengine
