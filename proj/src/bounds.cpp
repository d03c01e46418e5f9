#include "qengine/bounds.hpp"

#include <cmath>
#include <limits>

#include "qengine/fcs.hpp"
#include "qengine/quad.hpp"

namespace qengine {

double k_coefficient(const EngineParams& p)
{
    const Occupations o = occupations(p);
    const double nh = o.n_h, nc = o.n_c, n = nh + nc, g2 = p.gamma0 * p.gamma0;
    if (!(nh > nc))
        throw NotAnEngine();
    return (4 * p.alpha * p.alpha + g2 * (n * n + 2 * n + 3 * nh * nc)) / (g2 * (nh - nc));
}

FanoReport fano(const EngineParams& p)
{
    require_engine(p);
    const Occupations o = occupations(p);
    FanoReport f;
    f.f_pop = population_fano(o.n_h, o.n_c);
    const double c = coherence_closed(p);
    if (p.kind == EngineKind::Coherent)
        f.coherent_correction = 1.5 * f.f_pop * c * c;
    else
        f.coherent_correction = k_coefficient(p) * c * c;
    f.f_total = f.f_pop - f.coherent_correction;
    return f;
}

CturReport ctur(const EngineParams& p)
{
    require_engine(p);
    const Occupations o = occupations(p);
    const double f = fano(p).f_total;
    CturReport r;
    const double lg = bias_log(o.n_h, o.n_c);
    r.infinite_entropy = std::isinf(lg);
    r.q = r.infinite_entropy ? std::numeric_limits<double>::infinity() : lg * f;
    const double carnot = 1 - p.beta_h / p.beta_c;
    const double eta = 1 - p.omega_c / p.omega_h;
    r.d = (carnot - eta) * f * p.beta_c * p.omega_h;
    return r;
}

namespace {

QuadMatrix drazin_quad(const QuadMatrix& l, const std::vector<qcplx>& vr)
{
    const std::size_t n = l.rows();
    const auto d = static_cast<std::size_t>(std::lround(std::sqrt(double(n))));
    if (vr.size() != n || d * d != n)
        throw InvalidArgument("drazin: state and generator dimensions differ");
    QuadMatrix proj(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            proj(i, j + d * j) = vr[i];
    QuadMatrix inv;
    try {
        inv = inverse(l + proj);
    } catch (const SingularMatrix&) {
        throw DegenerateSteadyState();
    }
    const QuadMatrix q = QuadMatrix::identity(n) - proj;
    return q * inv * q;
}

std::vector<qcplx> to_quad(const CVector& v)
{
    std::vector<qcplx> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = qcplx(v[i].real(), v[i].imag());
    return out;
}

} // namespace

// Extended precision internally: far from equilibrium (L + P) has condition numbers ~1e12.
ComplexMatrix drazin(const ComplexMatrix& l, const DensityMatrix& rho)
{
    return to_double(drazin_quad(to_quad(l), to_quad(vec(rho.m))));
}

QturBound qtur_bound(const EngineParams& p)
{
    require_engine(p);
    const ComplexMatrix l = liouvillian(p);
    const std::vector<qcplx> vr = steady_vector_quad(l);
    const QuadMatrix ld = drazin_quad(to_quad(l), vr);
    const SplitLiouvillian s = lr_ll_split(p);
    const QuadMatrix left = to_quad(s.left), right = to_quad(s.right);

    const std::size_t d = working_dim(p.kind);
    QturBound b;
    qreal ups = 0;
    for (const auto& j : jump_operators(p)) {
        const QuadMatrix ldl = to_quad(j.matrix.adjoint() * j.matrix);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t c = 0; c < d; ++c)
                ups += (ldl(a, c) * vr[c + d * a]).real();
    }
    b.upsilon = static_cast<double>(ups);

    // <I| M |rho> is the trace of the matrix whose vec is M vec(rho)
    auto trace_of = [&](const QuadMatrix& m) {
        const std::vector<qcplx> v = m * vr;
        qcplx t = 0;
        for (std::size_t i = 0; i < d; ++i)
            t += v[i + d * i];
        return t;
    };
    const qcplx psi = qreal(-4) * (trace_of(left * ld * right) + trace_of(right * ld * left));
    b.psi = static_cast<double>(psi.real());
    b.psi_imag = static_cast<double>(psi.imag());
    b.f = 1.0 / static_cast<double>(ups + psi.real());
    return b;
}

double qtur_bound_closed(const EngineParams& p)
{
    require_engine(p);
    const Occupations o = occupations(p);
    const double a2 = p.alpha * p.alpha, g = p.gamma0, g2 = g * g, nh = o.n_h, nc = o.n_c;
    double inv = 0;
    if (p.kind == EngineKind::Coherent) {
        const double s = nh + nc + 2 * nh * nc;
        inv = 2 * (2 * a2 + g2 * nh * nc * (nc + 1) * (nh + 1)) * (32 * a2 + g2 * s * s) /
              (g * s * (8 * a2 + g2 * s * s));
    } else {
        const double n = nh + nc;
        inv = 2 * (n + 2) * (4 * a2 + g2 * nh * nc) * (16 * a2 + g2 * n * n) /
              (g * n * (4 * a2 * (4 + 3 * n) + g2 * n * (n + 3 * nh * nc)));
    }
    return 1.0 / inv;
}

TURReport tur_report(const EngineParams& p)
{
    require_engine(p);
    const Observables obs = observables(p);
    const CumulantReport c = cumulants(p, CountedObservable::Power);
    const QturBound b = qtur_bound(p);
    TURReport t;
    t.nsr = c.nsr;
    t.entropy_rate = obs.entropy_rate;
    t.infinite_entropy = obs.infinite_entropy;
    t.q_value = t.infinite_entropy ? std::numeric_limits<double>::infinity() : obs.entropy_rate * c.nsr;
    t.upsilon = b.upsilon;
    t.psi = b.psi;
    t.f_bound = b.f;
    t.slack = t.nsr - t.f_bound;
    t.ctur_violated = t.q_value < 2;
    t.qtur_ok = t.slack >= -1e-9;
    return t;
}

} // namespace qengine
