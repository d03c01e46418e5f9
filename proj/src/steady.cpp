#include "qengine/steady.hpp"

#include <cmath>
#include <limits>

#include "qengine/quad.hpp"

namespace qengine {

DensityCheck check_density(const DensityMatrix& rho)
{
    const auto& m = rho.m;
    const std::size_t d = m.rows();
    DensityCheck c;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            c.hermiticity = std::max(c.hermiticity, std::abs(m(i, j) - std::conj(m(j, i))));
    c.trace_error = std::abs(m.trace() - 1.0);

    // Hermitian => real-rooted characteristic polynomial; all roots of
    // rho + tol*I are >= 0 iff the coefficients alternate in sign.
    ComplexMatrix shifted = m + 1e-10 * ComplexMatrix::identity(d);
    PolyCoeffs p = char_poly(shifted);
    c.positive = true;
    for (std::size_t k = 0; k <= d; ++k) {
        const double sign = ((d - k) % 2 == 0) ? 1.0 : -1.0;
        if (sign * p.c[k].real() < -1e-15)
            c.positive = false;
    }
    return c;
}

std::vector<qcplx> steady_vector_quad(const ComplexMatrix& l)
{
    if (!l.square())
        throw InvalidArgument("steady_numeric: generator must be square");
    const auto d = static_cast<std::size_t>(std::lround(std::sqrt(double(l.rows()))));
    if (d * d != l.rows())
        throw InvalidArgument("steady_numeric: dimension is not a square");
    const std::size_t n = l.rows();
    const CVector id = vec_identity(d);

    // The population rows sum to zero, so any of them may carry the trace
    // constraint; keep whichever replacement leaves the smallest residual.
    // Far from equilibrium the kernel is ill-conditioned (rates ~1e-7 against
    // a drive of order one), so the solve runs in extended precision on the exact entries.
    const QuadMatrix lq = to_quad(l);
    std::vector<qcplx> best;
    qreal best_res = std::numeric_limits<qreal>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t row = i + d * i;
        QuadMatrix a = lq;
        for (std::size_t j = 0; j < n; ++j)
            a(row, j) = qcplx(id[j].real(), id[j].imag());
        std::vector<qcplx> b(n, qcplx(0));
        b[row] = qcplx(1);
        std::vector<qcplx> x;
        try {
            x = solve(a, b);
        } catch (const SingularMatrix&) {
            continue;
        }
        qreal res = 0;
        for (const auto& v : lq * x)
            res = std::max(res, qreal(abs(v)));
        if (res < best_res) {
            best_res = res;
            best = std::move(x);
        }
    }
    if (best.empty() || best_res > qreal(1e-11 * l.norm_inf()))
        throw DegenerateSteadyState();
    qcplx tr = 0;
    for (std::size_t i = 0; i < d; ++i)
        tr += best[i + d * i];
    for (auto& x : best)
        x /= tr;
    return best;
}

DensityMatrix steady_numeric(const ComplexMatrix& l)
{
    const std::vector<qcplx> q = steady_vector_quad(l);
    CVector v(q.size());
    for (std::size_t k = 0; k < q.size(); ++k)
        v[k] = to_double(q[k]);
    return DensityMatrix{unvec(v, static_cast<std::size_t>(std::lround(std::sqrt(double(q.size())))))};
}

DensityMatrix steady_closed(const EngineParams& p)
{
    const Rates r = rates(p);
    const double a = p.alpha, a2 = a * a;
    const cplx i(0, 1);
    if (p.kind == EngineKind::Coherent) {
        const double g = r.gamma1 + r.gamma2;
        const double den = 8 * a2 + g * g;
        if (den == 0)
            throw ZeroDenominator();
        ComplexMatrix m(2, 2);
        m(0, 0) = (4 * a2 + r.gamma1 * g) / den;
        m(1, 1) = (4 * a2 + r.gamma2 * g) / den;
        m(0, 1) = 2.0 * i * a * (r.gamma1 - r.gamma2) / den;
        m(1, 0) = std::conj(m(0, 1));
        return {m};
    }
    // equal hot/cold decay constants
    const double gh = p.gamma0, gc = p.gamma0, nh = r.n_h, nc = r.n_c;
    const double flow = gc * nc + gh * nh;
    const double den = 4 * a2 * (gc * (3 * nc + 2) + gh * (3 * nh + 2)) +
                       gc * gh * (3 * nc * nh + nc + nh) * flow;
    if (den == 0)
        throw ZeroDenominator();
    const double base = 4 * a2 * (gc + gh + gc * nc + gh * nh);
    ComplexMatrix m(3, 3);
    m(0, 0) = (base + gc * gh * nc * (nh + 1) * flow) / den;
    m(1, 1) = (base + gc * gh * nh * (nc + 1) * flow) / den;
    m(2, 2) = (4 * a2 + gc * gh * nc * nh) * flow / den;
    m(0, 1) = -2.0 * i * a * gc * gh * (nh - nc) / den;
    m(1, 0) = std::conj(m(0, 1));
    return {m};
}

double coherence_l1(const DensityMatrix& rho)
{
    double s = 0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j)
            if (i != j)
                s += std::abs(rho.m(i, j));
    return s;
}

double coherence_closed(const EngineParams& p)
{
    const Occupations o = occupations(p);
    const double a = p.alpha, g = p.gamma0, nh = o.n_h, nc = o.n_c, n = nh + nc;
    if (p.kind == EngineKind::Coherent) {
        const double s = n + 2 * nh * nc;
        const double den = 8 * a * a + g * g * s * s;
        if (den == 0)
            throw ZeroDenominator();
        return std::abs(4 * a * g * (nh - nc) / den);
    }
    const double den = 4 * a * a * (3 * n + 4) + g * g * n * (n + 3 * nh * nc);
    if (den == 0)
        throw ZeroDenominator();
    return std::abs(4 * a * g * (nh - nc) / den);
}

double bias_log(double n_h, double n_c)
{
    if (n_c == 0)
        return std::numeric_limits<double>::infinity();
    return std::log(n_h) + std::log1p(n_c) - std::log(n_c) - std::log1p(n_h);
}

Observables observables(const EngineParams& p)
{
    require_engine(p);
    const Occupations occ = occupations(p);
    const DensityMatrix rho = steady_numeric(liouvillian(p));
    const double dw = p.omega_h - p.omega_c;

    Observables o;
    o.degenerate_bath = occ.degenerate_h || occ.degenerate_c;
    o.coherence = coherence_l1(rho);
    o.power = -p.alpha * dw * o.coherence;
    o.j_hot = p.alpha * p.omega_h * o.coherence;
    o.j_cold = -p.alpha * p.omega_c * o.coherence;
    o.efficiency = 1.0 - p.omega_c / p.omega_h;
    o.photon_flux = std::abs(o.power) / dw;

    const auto hs = system_hamiltonian_working(p);
    const auto hd = hamiltonians(p).drive;
    const ComplexMatrix comm = hs * hd - hd * hs;
    o.power_commutator = (cplx(0, -1) * (comm * rho.m).trace()).real();

    const double lg = bias_log(occ.n_h, occ.n_c);
    o.infinite_entropy = std::isinf(lg);
    if (o.infinite_entropy)
        o.entropy_rate = o.photon_flux > 0 ? lg : 0.0;
    else
        o.entropy_rate = lg * o.photon_flux;
    return o;
}

double critical_alpha(const EngineParams& p)
{
    require_engine(p);
    const Occupations o = occupations(p);
    const double nh = o.n_h, nc = o.n_c;
    const double num = nh * nc * (nh + nc) + 4 * nh * nh * nc * nc;
    const double den = 8 + 12 * (nh + nc);
    return p.gamma0 * std::sqrt(num / den);
}

} // namespace qengine
