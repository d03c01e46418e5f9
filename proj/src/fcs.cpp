#include "qengine/fcs.hpp"

#include <algorithm>
#include <cmath>

#include "qengine/quad.hpp"
#include "qengine/steady.hpp"

namespace qengine {

std::string to_string(CountedObservable o)
{
    switch (o) {
    case CountedObservable::Power: return "power";
    case CountedObservable::HotCurrent: return "hot_current";
    case CountedObservable::ColdCurrent: return "cold_current";
    case CountedObservable::PhotonFlux: return "photon_flux";
    }
    return "?";
}

CountingField counting_direction(const EngineParams& p, CountedObservable o)
{
    switch (o) {
    case CountedObservable::Power: return {-1.0, -1.0};
    case CountedObservable::HotCurrent: return {1.0, 0.0};
    case CountedObservable::ColdCurrent: return {0.0, 1.0};
    case CountedObservable::PhotonFlux: {
        const double s = 1.0 / (p.omega_h - p.omega_c);
        return {s, s};
    }
    }
    return {};
}

double fd_step(const EngineParams& p)
{
    return 1e-3 / std::max(p.omega_h, p.omega_c);
}

namespace {

struct QuadDerivs {
    qcplx a0, a1, a2, a0p, a0pp, a1p;
};

QuadPoly poly_at(const EngineParams& p, const CountingField& dir, double x)
{
    return char_poly(liouvillian_quad(p, {dir.chi_h * x, dir.chi_c * x}));
}

QuadDerivs quad_derivs(const EngineParams& p, CountedObservable o, double step_scale)
{
    require_engine(p);
    const CountingField dir = counting_direction(p, o);
    const double h = fd_step(p) * step_scale;
    const QuadPoly f0 = poly_at(p, dir, 0.0);
    QuadPoly fp[3], fm[3]; // offsets h/2, h, 2h
    const double off[3] = {0.5 * h, h, 2 * h};
    for (int k = 0; k < 3; ++k) {
        fp[k] = poly_at(p, dir, off[k]);
        fm[k] = poly_at(p, dir, -off[k]);
    }

    // once-extrapolated central differences at step s (index of s, index of 2s)
    auto d1 = [&](std::size_t c, int i, int j, const qreal& s) {
        return (qcplx(8) * (fp[i].c[c] - fm[i].c[c]) - (fp[j].c[c] - fm[j].c[c])) / qcplx(12 * s);
    };
    auto d2 = [&](std::size_t c, int i, int j, const qreal& s) {
        return (qcplx(16) * (fp[i].c[c] + fm[i].c[c]) - (fp[j].c[c] + fm[j].c[c]) - qcplx(30) * f0.c[c]) /
               qcplx(12 * s * s);
    };

    qreal sample_scale(0);
    for (int k = 0; k < 3; ++k)
        for (std::size_t c = 0; c < 3; ++c)
            sample_scale = std::max(sample_scale, qreal(abs(fp[k].c[c])));

    const qreal hq(h), hh = hq / 2;
    auto check = [&](const qcplx& coarse, const qcplx& fine, const qreal& floor) {
        const qreal diff = abs(coarse - fine);
        if (diff > qreal(1e-7) * abs(fine) + floor)
            throw NumericalInstability("Richardson estimates disagree");
    };

    const qcplx i(0, 1);
    QuadDerivs q;
    q.a0 = f0.c[0];
    q.a1 = f0.c[1];
    q.a2 = f0.c[2];
    const qcplx r1c = d1(0, 1, 2, hq), r1f = d1(0, 0, 1, hh);
    const qcplx r2c = d2(0, 1, 2, hq), r2f = d2(0, 0, 1, hh);
    const qcplx s1c = d1(1, 1, 2, hq), s1f = d1(1, 0, 1, hh);
    // rounding floor well above extended-precision noise, far below physical values
    check(r1c, r1f, qreal(1e-20) * sample_scale / hq);
    check(r2c, r2f, qreal(1e-20) * sample_scale / (hq * hq));
    check(s1c, s1f, qreal(1e-20) * sample_scale / hq);
    // d/d(i chi) = -i d/dchi
    q.a0p = -i * r1f;
    q.a0pp = -r2f;
    q.a1p = -i * s1f;
    return q;
}

CumulantReport report_from(const qcplx& mean, const qcplx& var)
{
    using std::abs;
    const double m = static_cast<double>(mean.real());
    const double v = static_cast<double>(var.real());
    if (abs(static_cast<double>(mean.imag())) > 1e-10 * abs(m) ||
        abs(static_cast<double>(var.imag())) > 1e-10 * abs(v))
        throw NumericalInstability("cumulants acquired an imaginary part");
    if (v < -1e-9 * abs(v))
        throw NumericalInstability("negative variance");
    CumulantReport r;
    r.mean = m;
    r.variance = abs(v);
    if (m == 0)
        throw ZeroMean();
    r.nsr = r.variance / (m * m);
    return r;
}

} // namespace

CoeffDerivs coeff_derivs(const EngineParams& p, CountedObservable o, double step_scale)
{
    const QuadDerivs q = quad_derivs(p, o, step_scale);
    return {to_double(q.a0), to_double(q.a1), to_double(q.a2),
            to_double(q.a0p), to_double(q.a0pp), to_double(q.a1p)};
}

CumulantReport cumulants(const EngineParams& p, CountedObservable o)
{
    require_engine(p);
    if (p.alpha == 0)
        throw ZeroMean();
    double scale = 1.0;
    for (int attempt = 0;; ++attempt) {
        try {
            const QuadDerivs q = quad_derivs(p, o, scale);
            const qcplx mean = -q.a0p / q.a1;
            const qcplx var = (q.a0pp / q.a0p - qcplx(2) * q.a1p / q.a1) * mean -
                              qcplx(2) * q.a2 / q.a1 * mean * mean;
            return report_from(mean, var);
        } catch (const NumericalInstability&) {
            if (attempt == 3)
                throw;
            scale /= 4;
        }
    }
}

double population_fano(double n_h, double n_c)
{
    if (!(n_h > n_c))
        throw NotAnEngine();
    return (2 * n_h * n_c + n_h + n_c) / (n_h - n_c);
}

double k_three_term(const EngineParams& p)
{
    const Occupations o = occupations(p);
    const double nh = o.n_h, nc = o.n_c, g = p.gamma0;
    const double fp = population_fano(nh, nc);
    return 4 * p.alpha * p.alpha / (g * g * (nh - nc)) + (nh * nh + nc * nc + nh * nc) / (nh - nc) + 2 * fp;
}

CumulantReport cumulants_closed(const EngineParams& p, CountedObservable o)
{
    require_engine(p);
    if (p.alpha == 0)
        throw ZeroMean();
    const Rates r = rates(p);
    const double a2 = p.alpha * p.alpha, dw = p.omega_h - p.omega_c;

    // power mean and variance, then rescale to the counted observable
    double power = 0, var_power = 0;
    if (p.kind == EngineKind::Coherent) {
        const double g1 = r.gamma1, g2 = r.gamma2, gs = g1 + g2;
        const double den = 8 * a2 + gs * gs;
        power = 4 * a2 * (g1 - g2) / den * dw;
        var_power = 4 * a2 * gs * (64 * a2 * a2 - 8 * a2 * (g1 * g1 - 10 * g1 * g2 + g2 * g2) + std::pow(gs, 4)) /
                    std::pow(den, 3) * dw * dw;
    } else {
        const double g = p.gamma0, nh = r.n_h, nc = r.n_c;
        const double den = 4 * a2 * (g * (3 * nc + 2) + g * (3 * nh + 2)) +
                           g * g * (3 * nc * nh + nc + nh) * (g * nc + g * nh);
        power = -4 * a2 * g * g * (nh - nc) / den * dw;
        const double m = std::abs(power);
        const double fp = population_fano(nh, nc), k = k_three_term(p);
        var_power = (fp * m - k / (a2 * dw * dw) * m * m * m) * dw;
    }

    CumulantReport c;
    switch (o) {
    case CountedObservable::Power:
        c.mean = power;
        c.variance = var_power;
        break;
    case CountedObservable::HotCurrent:
        c.mean = -power * p.omega_h / dw;
        c.variance = var_power * p.omega_h * p.omega_h / (dw * dw);
        break;
    case CountedObservable::ColdCurrent:
        c.mean = power * p.omega_c / dw;
        c.variance = var_power * p.omega_c * p.omega_c / (dw * dw);
        break;
    case CountedObservable::PhotonFlux:
        c.mean = std::abs(power) / dw;
        c.variance = var_power / (dw * dw);
        break;
    }
    if (c.mean == 0)
        throw ZeroMean();
    c.nsr = c.variance / (c.mean * c.mean);
    return c;
}

namespace {

double phase_rate(const EngineParams& p, const CountingField& dir)
{
    return std::max(std::abs(dir.chi_h) * p.omega_h, std::abs(dir.chi_c) * p.omega_c);
}

qcplx track(const EngineParams& p, const CountingField& dir, double from, qcplx lam_from, qcplx slope,
            double to, int depth)
{
    const QuadPoly poly = poly_at(p, dir, to);
    const qcplx seed = lam_from + slope * qcplx(to - from);
    try {
        return root_near(poly, seed);
    } catch (const NoConvergence&) {
        if (depth >= 20)
            throw;
        const double mid = 0.5 * (from + to);
        const qcplx lm = track(p, dir, from, lam_from, slope, mid, depth + 1);
        const qcplx s = (lm - lam_from) / qcplx(mid - from);
        return track(p, dir, mid, lm, s, to, depth + 1);
    }
}

} // namespace

cplx lambda_branch(const EngineParams& p, CountedObservable o, double chi)
{
    require_engine(p);
    const CountingField dir = counting_direction(p, o);
    const double rate = phase_rate(p, dir);
    if (!(std::abs(chi) * rate < 0.5))
        throw InvalidArgument("lambda_branch: |chi| outside the tracking radius");
    if (chi == 0)
        return 0.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(chi) * rate / 0.05)));
    const double dx = chi / steps;
    qcplx lam(0), slope(0);
    double x = 0;
    for (int s = 0; s < steps; ++s) {
        const double next = (s + 1 == steps) ? chi : x + dx;
        const qcplx ln = track(p, dir, x, lam, slope, next, 0);
        slope = (ln - lam) / qcplx(next - x);
        lam = ln;
        x = next;
    }
    return to_double(lam);
}

CumulantReport cumulants_branch(const EngineParams& p, CountedObservable o)
{
    require_engine(p);
    if (p.alpha == 0)
        throw ZeroMean();
    const double h = fd_step(p);
    const cplx lp1 = lambda_branch(p, o, h), lm1 = lambda_branch(p, o, -h);
    const cplx lp2 = lambda_branch(p, o, 2 * h), lm2 = lambda_branch(p, o, -2 * h);
    const cplx d1 = (8.0 * (lp1 - lm1) - (lp2 - lm2)) / (12 * h);
    const cplx d2 = (16.0 * (lp1 + lm1) - (lp2 + lm2)) / (12 * h * h);
    const cplx i(0, 1);
    const cplx mean = -i * d1, var = -d2;
    if (std::abs(mean.imag()) > 1e-8 * std::abs(mean.real()))
        throw NumericalInstability("branch mean acquired an imaginary part");
    CumulantReport r;
    r.mean = mean.real();
    r.variance = std::abs(var.real());
    if (r.mean == 0)
        throw ZeroMean();
    r.nsr = r.variance / (r.mean * r.mean);
    return r;
}

} // namespace qengine
