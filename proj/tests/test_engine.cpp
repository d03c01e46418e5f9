#include <doctest.h>

#include <complex>

#include "helpers.hpp"
#include "qengine/engine.hpp"
#include "qengine/sampling.hpp"

using namespace qengine;
using testing::rel_err;
using testing::with_occupations;
using testing::worked;

namespace {

// Reference matrices order the basis in reverse: ref[i][j] = ours[n-1-i][n-1-j].
ComplexMatrix from_reference(const ComplexMatrix& ref)
{
    const std::size_t n = ref.rows();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(n - 1 - i, n - 1 - j) = ref(i, j);
    return m;
}

// Two-level dressed generator in reference form, with x the net phase
// chi_h*omega_h - chi_c*omega_c.
ComplexMatrix reference_coherent(double g1, double g2, double a, double x)
{
    const cplx i(0, 1);
    const double h = -(g1 + g2) / 2;
    return ComplexMatrix(4, 4,
                         {-g1, -i * a, i * a, g2 * std::exp(-i * x),   //
                          -i * a, h, 0, i * a,                         //
                          i * a, 0, h, -i * a,                         //
                          g1 * std::exp(i * x), i * a, -i * a, -g2});
}

ComplexMatrix reference_incoherent(double g1, double g2, double g3, double g4, double a, double xh, double xc)
{
    const cplx i(0, 1);
    ComplexMatrix m(9, 9);
    auto s = [&](int r, int c, cplx v) { m(r - 1, c - 1) = v; };
    s(1, 1, -g1 - g3);
    s(1, 5, g4 * std::exp(i * xc));
    s(1, 9, g2 * std::exp(i * xh));
    s(2, 2, -(g1 + g3 + g4) / 2);
    s(2, 3, -i * a);
    s(3, 2, -i * a);
    s(3, 3, -(g1 + g2 + g3) / 2);
    s(4, 4, -(g1 + g3 + g4) / 2);
    s(4, 7, i * a);
    s(5, 1, g3 * std::exp(-i * xc));
    s(5, 5, -g4);
    s(5, 6, -i * a);
    s(5, 8, i * a);
    s(6, 5, -i * a);
    s(6, 6, -(g2 + g4) / 2);
    s(6, 9, i * a);
    s(7, 4, i * a);
    s(7, 7, -(g1 + g2 + g3) / 2);
    s(8, 5, i * a);
    s(8, 8, -(g2 + g4) / 2);
    s(8, 9, -i * a);
    s(9, 1, g1 * std::exp(-i * xh));
    s(9, 6, i * a);
    s(9, 8, -i * a);
    s(9, 9, -g2);
    return m;
}

// vec(rho^dag) = S conj(vec(rho))
ComplexMatrix swap_operator(std::size_t d)
{
    ComplexMatrix s(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            s(i + d * j, j + d * i) = 1;
    return s;
}

} // namespace

TEST_SUITE("engine")
{
    TEST_CASE("parameter checks name the violated invariant")
    {
        EngineParams p;
        CHECK_NOTHROW(check_params(p));
        auto message = [](EngineParams q) {
            try {
                check_params(q);
            } catch (const InvalidArgument& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        EngineParams q = p;
        q.omega_c = 0;
        CHECK(message(q).find("omega_c > 0") != std::string::npos);
        q = p;
        q.omega_c = 12;
        CHECK(message(q).find("omega_h > omega_c") != std::string::npos);
        q = p;
        q.gamma0 = -1;
        CHECK(message(q).find("gamma0 > 0") != std::string::npos);
        q = p;
        q.alpha = -0.1;
        CHECK(message(q).find("alpha >= 0") != std::string::npos);
        q = p;
        q.beta_c = 0.005;
        CHECK(message(q).find("beta_c > beta_h") != std::string::npos);
        q = p;
        q.beta_h = 0;
        CHECK(message(q).find("beta_h > 0") != std::string::npos);
        q = p;
        q.alpha = std::nan("");
        CHECK_THROWS_AS(check_params(q), InvalidArgument);
    }

    TEST_CASE("engine condition")
    {
        EngineParams p;
        p.beta_h = 0.01;
        p.beta_c = 0.015; // 0.1 > 0.075
        CHECK_NOTHROW(check_params(p));
        CHECK_FALSE(engine_valid(p));
        CHECK_THROWS_AS(require_engine(p), NotAnEngine);
        p.beta_c = 0.8;
        CHECK(engine_valid(p));
        const Occupations o = occupations(p);
        CHECK(o.n_h > o.n_c);
    }

    TEST_CASE("occupation examples")
    {
        CHECK(occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
        bool deg = false;
        CHECK(occupation(1.0, 1000.0, &deg) == 0.0);
        CHECK(deg);
        CHECK(occupation(1.0, 1.0, &deg) > 0);
        CHECK_FALSE(deg);
        // 1/(e^0.1 - 1), 30-digit reference 9.50833194477504962...
        CHECK(rel_err(occupation(0.01, 10.0), 9.5083319447750496) <= 1e-14);
    }

    TEST_CASE("rate examples")
    {
        const Rates c = rates(worked(EngineKind::Coherent));
        CHECK(c.gamma1 == 0.0);
        CHECK(c.gamma2 == doctest::Approx(1.0).epsilon(1e-14));
        const Rates i = rates(worked(EngineKind::Incoherent));
        CHECK(i.g1 == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(i.g2 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(i.g3 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(i.g4 == 0.0);
        const Rates r = rates(with_occupations(EngineKind::Coherent, 0.1, 2.0, 1.0, 0.3));
        CHECK(rel_err(r.gamma1, 0.3) <= 1e-13);
        CHECK(rel_err(r.gamma2, 0.4) <= 1e-13);
    }

    TEST_CASE("rate invariants on random parameters")
    {
        ParamSampler s(101);
        for (int t = 0; t < 200; ++t) {
            const EngineParams p = s.any(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            const Rates r = rates(p);
            const double g0 = p.gamma0, nh = r.n_h, nc = r.n_c;
            CHECK(rel_err(r.gamma2 - r.gamma1, g0 * (nh - nc)) <= 1e-12);
            CHECK(rel_err(r.gamma1 + r.gamma2, g0 * (nh + nc + 2 * nh * nc)) <= 1e-12);
            CHECK(rel_err(r.g1, g0 * (nh + 1)) <= 1e-15);
            CHECK(rel_err(r.g4, g0 * nc) <= 1e-15);
            if (nc > 1e-250) {
                // both engines carry the same bias; in log form to survive tiny n_c
                const double bias = p.beta_c * p.omega_c - p.beta_h * p.omega_h;
                const double lg = std::log(r.g2) + std::log(r.g3) - std::log(r.g1) - std::log(r.g4);
                const double lc = std::log(r.gamma2) - std::log(r.gamma1);
                CHECK(std::abs(lg - bias) <= 1e-12 * std::max(1.0, bias));
                CHECK(std::abs(lc - bias) <= 1e-12 * std::max(1.0, bias));
                if (bias < 30)
                    CHECK(rel_err(r.g2 * r.g3 / (r.g1 * r.g4), r.gamma2 / r.gamma1) <= 1e-12);
            }
        }
    }

    TEST_CASE("jump operators")
    {
        const auto jc = jump_operators(worked(EngineKind::Coherent));
        REQUIRE(jc.size() == 2);
        CHECK(jc[0].matrix.rows() == 2);
        CHECK(jc[0].weight_h == -1);
        CHECK(jc[0].weight_c == 1);
        CHECK(jc[1].weight_h == 1);
        CHECK(jc[1].weight_c == -1);
        CHECK(std::abs(jc[1].matrix(1, 0) - 1.0) <= 1e-15); // sqrt(gamma2) |1><0|
        const auto ji = jump_operators(worked(EngineKind::Incoherent));
        REQUIRE(ji.size() == 4);
        CHECK(ji[0].matrix.rows() == 3);
        CHECK(std::abs(ji[0].matrix(0, 2) - std::sqrt(2.0)) <= 1e-15);
        CHECK(std::abs(ji[2].matrix(1, 2) - 1.0) <= 1e-15);
        CHECK(ji[3].weight_c == 1);
        CHECK(ji[3].weight_h == 0);
    }

    TEST_CASE("hamiltonians")
    {
        EngineParams p;
        p.alpha = 0.5;
        const Hamiltonians h = hamiltonians(p);
        CHECK(h.system(0, 0) == cplx(0));
        CHECK(h.system(1, 1) == cplx(5));
        CHECK(h.system(2, 2) == cplx(10));
        CHECK(h.drive(0, 1) == cplx(0.5));
        CHECK(h.drive(1, 0) == cplx(0.5));
        CHECK(h.drive(0, 0) == cplx(0));
        CHECK((h.drive - h.drive.adjoint()).max_abs() == 0);
        p.alpha = 0;
        CHECK(hamiltonians(p).drive.max_abs() == 0);
        p.kind = EngineKind::Incoherent;
        CHECK(hamiltonians(p).drive.rows() == 3);
    }

    TEST_CASE("coherent generator matches the reference two-level matrix")
    {
        const EngineParams p = worked(EngineKind::Coherent);
        const ComplexMatrix l = liouvillian(p);
        CHECK((l - from_reference(reference_coherent(0, 1, 0.5, 0))).max_abs() <= 1e-14);
        // the gamma2 population transfer entry
        CHECK(std::abs(l(3, 0) - 1.0) <= 1e-14);

        // dressing: chi_h = chi_c = chi puts the net phase -chi*(omega_h - omega_c) on the gamma1 jump
        const EngineParams q = with_occupations(EngineKind::Coherent, 0.7, 1.3, 0.4, 0.35);
        const Rates r = rates(q);
        for (double chi : {0.01, -0.2, 0.37}) {
            const ComplexMatrix lq = liouvillian(q, {chi, chi});
            const double x = -chi * (q.omega_h - q.omega_c);
            CHECK((lq - from_reference(reference_coherent(r.gamma1, r.gamma2, q.alpha, x))).max_abs() <= 1e-14);
        }
    }

    TEST_CASE("incoherent generator matches the reference qutrit matrix")
    {
        const EngineParams p = with_occupations(EngineKind::Incoherent, 0.7, 1.3, 0.4, 0.35);
        const Rates r = rates(p);
        for (auto [ch, cc] : {std::pair{0.0, 0.0}, {0.03, -0.05}, {-0.11, 0.2}}) {
            const ComplexMatrix l = liouvillian(p, {ch, cc});
            const ComplexMatrix expect =
                reference_incoherent(r.g1, r.g2, r.g3, r.g4, p.alpha, ch * p.omega_h, cc * p.omega_c);
            CHECK((l - from_reference(expect)).max_abs() <= 1e-14);
        }
    }

    TEST_CASE("trace preservation and split reconstruction on random parameters")
    {
        ParamSampler s(7);
        for (int t = 0; t < 200; ++t) {
            const EngineParams p = s.engine(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            const ComplexMatrix l = liouvillian(p);
            const CVector id = vec_identity(working_dim(p.kind));
            double worst = 0;
            for (std::size_t j = 0; j < l.cols(); ++j) {
                cplx c = 0;
                for (std::size_t i = 0; i < l.rows(); ++i)
                    c += id[i] * l(i, j);
                worst = std::max(worst, std::abs(c));
            }
            CHECK(worst <= 1e-13);
            const SplitLiouvillian sp = lr_ll_split(p);
            CHECK((sp.right + sp.left - l).max_abs() <= 1e-13 * std::max(1.0, l.max_abs()));
        }
    }

    TEST_CASE("split of the worked coherent point")
    {
        EngineParams p = worked(EngineKind::Coherent);
        SplitLiouvillian sp = lr_ll_split(p);
        CHECK((sp.right + sp.left - liouvillian(p)).max_abs() <= 1e-13);
        p.alpha = 0;
        sp = lr_ll_split(p);
        CHECK((sp.right + sp.left - liouvillian(p)).max_abs() <= 1e-13);
    }

    TEST_CASE("conjugation symmetry of the dressed generator")
    {
        ParamSampler s(9);
        for (int t = 0; t < 40; ++t) {
            const EngineParams p = s.engine(t % 2 ? EngineKind::Coherent : EngineKind::Incoherent);
            const ComplexMatrix sw = swap_operator(working_dim(p.kind));
            for (double chi : {0.0, 0.013, -0.04}) {
                const CountingField f{chi, -0.5 * chi};
                const ComplexMatrix lhs = sw * liouvillian(p, f).conj() * sw;
                const ComplexMatrix rhs = liouvillian(p, {-f.chi_h, -f.chi_c});
                CHECK((lhs - rhs).max_abs() <= 1e-14 * std::max(1.0, rhs.max_abs()));
            }
        }
    }

    TEST_CASE("coherent generator at zero drive is block diagonal")
    {
        EngineParams p = worked(EngineKind::Coherent);
        p.alpha = 0;
        const ComplexMatrix l = liouvillian(p);
        for (std::size_t pop : {0u, 3u})
            for (std::size_t coh : {1u, 2u}) {
                CHECK(l(pop, coh) == cplx(0));
                CHECK(l(coh, pop) == cplx(0));
            }
    }
}
