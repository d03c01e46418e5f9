#include <doctest.h>

#include "helpers.hpp"
#include "qengine/bounds.hpp"
#include "qengine/fcs.hpp"
#include "qengine/sampling.hpp"
#include "qengine/steady.hpp"

using namespace qengine;
using testing::rel_err;
using testing::with_occupations;
using testing::worked;

namespace {

constexpr CountedObservable all_observables[] = {CountedObservable::Power, CountedObservable::HotCurrent,
                                                 CountedObservable::ColdCurrent, CountedObservable::PhotonFlux};

double mean_from(const CoeffDerivs& d)
{
    return (-d.a0p / d.a1).real();
}

double var_from(const CoeffDerivs& d)
{
    const cplx m = -d.a0p / d.a1;
    return ((d.a0pp / d.a0p - 2.0 * d.a1p / d.a1) * m - 2.0 * d.a2 / d.a1 * m * m).real();
}

} // namespace

TEST_SUITE("fcs")
{
    TEST_CASE("worked coherent cumulants")
    {
        const EngineParams p = worked(EngineKind::Coherent);
        const CumulantReport pw = cumulants(p, CountedObservable::Power);
        CHECK(rel_err(pw.mean, -5.0 / 3) <= 1e-9);
        CHECK(rel_err(pw.variance, 25.0 / 9) <= 1e-8);
        CHECK(rel_err(pw.nsr, 1.0) <= 1e-8);

        const CumulantReport hot = cumulants(p, CountedObservable::HotCurrent);
        CHECK(rel_err(hot.mean, 10.0 / 3) <= 1e-9);
        CHECK(rel_err(hot.variance, 100.0 / 9) <= 1e-8);

        const CumulantReport flux = cumulants(p, CountedObservable::PhotonFlux);
        CHECK(rel_err(flux.mean, 1.0 / 3) <= 1e-9);
        CHECK(rel_err(flux.variance, 1.0 / 9) <= 1e-8);

        for (CountedObservable o : all_observables) {
            const CumulantReport c = cumulants_closed(p, o);
            CHECK(rel_err(c.nsr, 1.0) <= 1e-14);
        }
    }

    TEST_CASE("worked incoherent mean")
    {
        const EngineParams p = worked(EngineKind::Incoherent);
        CHECK(rel_err(cumulants(p, CountedObservable::Power).mean, -0.625) <= 1e-9);
        CHECK(rel_err(cumulants_closed(p, CountedObservable::Power).mean, -0.625) <= 1e-14);
        CHECK(rel_err(observables(p).power, -0.625) <= 1e-12);
    }

    TEST_CASE("zero drive has no current")
    {
        for (EngineKind k : {EngineKind::Coherent, EngineKind::Incoherent}) {
            EngineParams p = worked(k);
            p.alpha = 0;
            for (CountedObservable o : all_observables) {
                CHECK_THROWS_AS(cumulants(p, o), ZeroMean);
                CHECK_THROWS_AS(cumulants_closed(p, o), ZeroMean);
                CHECK_THROWS_AS(cumulants_branch(p, o), ZeroMean);
            }
        }
    }

    TEST_CASE("cumulants require an engine")
    {
        EngineParams p;
        p.beta_c = 0.015;
        CHECK_THROWS_AS(cumulants(p, CountedObservable::Power), NotAnEngine);
        CHECK_THROWS_AS(lambda_branch(p, CountedObservable::Power, 0.0), NotAnEngine);
    }

    TEST_CASE("two-level coefficients against the reference expressions")
    {
        // Even derivatives match; the odd ones come out with the opposite sign
        // because the reference formulas differentiate with the field reversed.
        // The reference mean (negative power) needs our sign.
        for (auto [g0, nh, nc, a] : {std::tuple{0.7, 1.3, 0.4, 0.35}, {1.0, 1.0, 0.0, 0.5}, {0.05, 3.0, 0.2, 0.9}}) {
            const EngineParams p = with_occupations(EngineKind::Coherent, g0, nh, nc, a);
            const Rates r = rates(p);
            const double g1 = r.gamma1, g2 = r.gamma2, gs = g1 + g2, dw = p.omega_h - p.omega_c;
            const CoeffDerivs d = coeff_derivs(p, CountedObservable::Power);
            const double scale = std::abs(d.a1);
            CHECK(std::abs(d.a0) <= 1e-14 * scale);
            CHECK(rel_err(d.a1.real(), 2 * a * a * gs + gs * gs * gs / 4) <= 1e-13);
            CHECK(rel_err(d.a2.real(), (16 * a * a + 5 * gs * gs) / 4) <= 1e-13);
            CHECK(rel_err(d.a0p.real(), -a * a * (g1 - g2) * gs * dw) <= 1e-9);
            CHECK(rel_err(d.a0pp.real(), -a * a * gs * gs * dw * dw) <= 1e-8);
            CHECK(rel_err(d.a1p.real(), -2 * a * a * (g1 - g2) * dw) <= 1e-9);
            for (cplx z : {d.a1, d.a2, d.a0p, d.a0pp, d.a1p})
                CHECK(std::abs(z.imag()) <= 1e-12 * std::abs(z));
            const double reference_mean = 4 * a * a * (g1 - g2) * dw / (8 * a * a + gs * gs);
            CHECK(rel_err(mean_from(d), reference_mean) <= 1e-9);
        }
    }

    TEST_CASE("coefficient derivatives scale with the frequencies")
    {
        const EngineParams p = with_occupations(EngineKind::Incoherent, 0.4, 2.0, 0.3, 0.2);
        const CoeffDerivs d = coeff_derivs(p, CountedObservable::Power);
        for (double c : {0.5, 3.0}) {
            EngineParams q = p;
            q.omega_h *= c;
            q.omega_c *= c;
            q.beta_h /= c;
            q.beta_c /= c;
            const CoeffDerivs e = coeff_derivs(q, CountedObservable::Power);
            CHECK(rel_err(e.a0p.real(), c * d.a0p.real()) <= 1e-9);
            CHECK(rel_err(e.a0pp.real(), c * c * d.a0pp.real()) <= 1e-8);
            CHECK(rel_err(e.a1.real(), d.a1.real()) <= 1e-12);
        }
    }

    TEST_CASE("recipe is blind to the overall sign of the polynomial")
    {
        ParamSampler s(71);
        for (int t = 0; t < 10; ++t) {
            const EngineParams p = s.engine(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            const CoeffDerivs d = coeff_derivs(p, CountedObservable::Power);
            CoeffDerivs n = d;
            for (cplx* z : {&n.a0, &n.a1, &n.a2, &n.a0p, &n.a0pp, &n.a1p})
                *z = -*z;
            CHECK(mean_from(n) == doctest::Approx(mean_from(d)).epsilon(1e-15));
            CHECK(var_from(n) == doctest::Approx(var_from(d)).epsilon(1e-15));
            CHECK(rel_err(mean_from(d), cumulants(p, CountedObservable::Power).mean) <= 1e-12);
        }
    }

    TEST_CASE("an oversized step is reported as unstable")
    {
        const EngineParams p = with_occupations(EngineKind::Coherent, 0.7, 1.3, 0.4, 0.35);
        CHECK_THROWS_AS(coeff_derivs(p, CountedObservable::Power, 3000.0), NumericalInstability);
        CHECK(fd_step(p) == doctest::Approx(1e-4).epsilon(1e-15));
    }

    TEST_CASE("population Fano and the k identity")
    {
        CHECK(population_fano(2.0, 1.0) == doctest::Approx(7.0).epsilon(1e-15));
        ParamSampler s(99);
        for (int t = 0; t < 100; ++t) {
            const EngineParams p = s.engine(EngineKind::Incoherent);
            CHECK(rel_err(k_coefficient(p), k_three_term(p)) <= 1e-10);
        }
    }

    TEST_CASE("eigenvalue branch")
    {
        const EngineParams p = with_occupations(EngineKind::Incoherent, 0.7, 1.3, 0.4, 0.35);
        CHECK(lambda_branch(p, CountedObservable::Power, 0.0) == cplx(0));
        for (double chi : {0.003, 0.02}) {
            const cplx up = lambda_branch(p, CountedObservable::Power, chi);
            const cplx dn = lambda_branch(p, CountedObservable::Power, -chi);
            CHECK(std::abs(up - std::conj(dn)) <= 1e-12 * std::max(1e-300, std::abs(up)));
            CHECK(up.real() <= 1e-15);
        }
        CHECK_THROWS_AS(lambda_branch(p, CountedObservable::Power, 1.0), InvalidArgument);

        const CumulantReport b = cumulants_branch(worked(EngineKind::Coherent), CountedObservable::Power);
        CHECK(rel_err(b.mean, -5.0 / 3) <= 1e-5);
        CHECK(rel_err(b.variance, 25.0 / 9) <= 1e-5);
    }

    TEST_CASE("coefficient, branch and closed cumulants agree on random parameters")
    {
        ParamSampler s(2025);
        for (int t = 0; t < 60; ++t) {
            const EngineParams p = s.engine(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            for (CountedObservable o : all_observables) {
                const CumulantReport c = cumulants(p, o), k = cumulants_closed(p, o);
                CHECK(rel_err(c.mean, k.mean) <= 1e-6);
                CHECK(rel_err(c.variance, k.variance) <= 1e-6);
                if (o == CountedObservable::Power) {
                    const CumulantReport b = cumulants_branch(p, o);
                    CHECK(rel_err(b.mean, c.mean) <= 1e-5);
                    CHECK(rel_err(b.variance, c.variance) <= 1e-5);
                }
            }
        }
    }

    TEST_CASE("cumulant invariants on random parameters")
    {
        ParamSampler s(4242);
        for (int t = 0; t < 100; ++t) {
            const EngineParams p = s.engine(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            const Observables o = observables(p);
            const CumulantReport pw = cumulants(p, CountedObservable::Power);
            const CumulantReport hot = cumulants(p, CountedObservable::HotCurrent);
            const CumulantReport cold = cumulants(p, CountedObservable::ColdCurrent);
            const CumulantReport flux = cumulants(p, CountedObservable::PhotonFlux);
            const double dw = p.omega_h - p.omega_c;

            CHECK(rel_err(pw.mean, o.power) <= 1e-8);
            CHECK(rel_err(hot.mean, o.j_hot) <= 1e-8);
            CHECK(std::abs(pw.mean + hot.mean + cold.mean) <= 1e-9 * std::abs(pw.mean));
            // one counted photon carries all three currents
            CHECK(rel_err(pw.nsr, hot.nsr) <= 1e-10);
            CHECK(rel_err(pw.nsr, cold.nsr) <= 1e-10);
            CHECK(rel_err(pw.nsr, flux.nsr) <= 1e-10);
            CHECK(rel_err(pw.variance, flux.variance * dw * dw) <= 1e-10);
            CHECK(rel_err(flux.variance / flux.mean, fano(p).f_total) <= 1e-10);
            CHECK(pw.variance > 0);
        }
    }
}
