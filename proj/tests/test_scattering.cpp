#include "support.hpp"

#include <qvertex/cases.hpp>
#include <qvertex/presets.hpp>
#include <qvertex/scattering.hpp>

#include <doctest.h>

#include <cmath>

using namespace qvertex;
using qvt::Rng;

namespace {

const ComplexMatrix I3 = ComplexMatrix::Identity(3, 3);
const ComplexMatrix Z3 = ComplexMatrix::Zero(3, 3);

BoundaryPair delta_line(double s, Complex t)
{
    return make_case(cases::DeltaLine{s, t});
}

} // namespace

TEST_SUITE("scattering")
{
    TEST_CASE("Dirichlet and Neumann")
    {
        for (double k : {0.01, 1.0, 50.0}) {
            CHECK(qvt::max_abs_diff(s_matrix(BoundaryPair(I3, Z3), k).M, -I3) <= 1e-15);
            CHECK(qvt::max_abs_diff(s_matrix(BoundaryPair(Z3, I3), k).M, I3) <= 1e-15);
        }
    }

    TEST_CASE("delta of strength 2 on a line at k = 1")
    {
        const auto s = s_matrix(delta_line(2.0, 1.0), 1.0);
        CHECK(std::abs(s.T(1, 2) - 2.0 / Complex(2.0, 2.0)) <= 1e-14);
        CHECK(std::norm(s.T(1, 2)) == doctest::Approx(0.5));
        CHECK(std::norm(s.R(1)) == doctest::Approx(0.5));
        CHECK(s.n() == 2);
    }

    TEST_CASE("accessors check their indices")
    {
        const auto s = s_matrix(BoundaryPair(I3, Z3), 1.0);
        CHECK_THROWS_AS(s.R(0), IndexError);
        CHECK_THROWS_AS(s.R(4), IndexError);
        CHECK_THROWS_AS(s.T(2, 2), IndexError);
        CHECK_THROWS_AS(s.T(1, 4), IndexError);
    }

    TEST_CASE("wave number must be positive")
    {
        const auto p = BoundaryPair(I3, Z3);
        CHECK_THROWS_AS(s_matrix(p, 0.0), ValidationError);
        CHECK_THROWS_AS(s_matrix(p, -1.0), ValidationError);
        CHECK_THROWS_AS(s_matrix(p, INFINITY), ValidationError);
        CHECK_THROWS_AS(s_matrix(p, std::nan("")), ValidationError);
    }

    TEST_CASE("matrix formula against the eigenphase oracle")
    {
        Rng rng(41);
        for (int trial = 0; trial < 60; ++trial) {
            const Index n = 1 + trial % 5;
            const int dir = trial % 3 == 0 ? 1 : 0;
            const int neu = trial % 4 == 0 && n > 1 ? 1 : 0;
            const auto v = qvt::random_unitary_vertex(rng, n, dir, neu);
            for (double k : qvt::log_points(1e-3, 1e3, 9))
                CHECK(qvt::max_abs_diff(s_matrix(v.pair(), k).M, v.s(k)) <= 1e-10);
        }
    }

    TEST_CASE("matrix formula against full-pivot oracle on scrambled templates")
    {
        Rng rng(42);
        for (int trial = 0; trial < 60; ++trial) {
            const Index n = 1 + trial % 5;
            const auto p = qvt::random_admissible(rng, n);
            for (double k : {0.05, 1.0, 20.0})
                CHECK(qvt::max_abs_diff(s_matrix(p, k).M, qvt::oracle_s(p.A(), p.B(), k)) <= 1e-9);
        }
    }

    TEST_CASE("unitarity on random vertices")
    {
        Rng rng(43);
        for (int trial = 0; trial < 100; ++trial) {
            const Index n = 2 + trial % 4;
            const auto p = qvt::random_admissible(rng, n);
            for (double k : qvt::log_points(1e-3, 1e3, 20))
                CHECK(s_matrix(p, k).unitarity_defect() <= 1e-10);
        }
    }

    TEST_CASE("left multiplication does not change S(k)")
    {
        Rng rng(44);
        for (int trial = 0; trial < 30; ++trial) {
            const auto p = qvt::random_admissible(rng, 3);
            const auto q = qvt::scramble(rng, p);
            CHECK(qvt::max_abs_diff(s_matrix(p, 0.7).M, s_matrix(q, 0.7).M) <= 1e-10);
        }
    }

    TEST_CASE("continued formula agrees on the positive axis")
    {
        Rng rng(45);
        const auto p = qvt::random_admissible(rng, 4);
        CHECK(qvt::max_abs_diff(s_matrix_continued(p, Complex(2.5, 0.0)), s_matrix(p, 2.5).M) <= 1e-14);
        const auto v = qvt::random_unitary_vertex(rng, 3);
        const Complex kc{-0.8, 0.3};
        CHECK(qvt::max_abs_diff(s_matrix_continued(v.pair(), kc), v.s(kc)) <= 1e-10);
    }

    TEST_CASE("scattering solutions")
    {
        const auto d = scattering_solution(BoundaryPair(I3, Z3), 1, 3.0);
        CHECK(std::abs(d.reflection + 1.0) <= 1e-15);
        CHECK(std::abs(d.transmission(2)) == 0.0);
        CHECK(std::abs(d.transmission(3)) == 0.0);

        const auto free = scattering_solution(delta_line(0.0, 1.0), 1, 0.4);
        CHECK(std::abs(free.reflection) <= 1e-15);
        CHECK(std::abs(free.transmission(2) - 1.0) <= 1e-15);

        const auto fig2 = make_case(preset("fig2").params);
        const auto sol = scattering_solution(fig2, 1, 2.0);
        CHECK(std::norm(sol.reflection) + std::norm(sol.transmission(2)) + std::norm(sol.transmission(3)) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.flux_defect() <= 1e-12);
        CHECK(boundary_residual(fig2, sol) <= 1e-10);

        CHECK_THROWS_AS(scattering_solution(fig2, 0, 1.0), IndexError);
        CHECK_THROWS_AS(scattering_solution(fig2, 4, 1.0), IndexError);
        CHECK_THROWS_AS(sol.transmission(1), IndexError);
    }

    TEST_CASE("scattering solutions satisfy the boundary condition")
    {
        Rng rng(46);
        for (int trial = 0; trial < 50; ++trial) {
            const Index n = 1 + trial % 5;
            const auto p = qvt::random_admissible(rng, n);
            const double k = std::pow(10.0, qvt::uniform(rng, -3.0, 3.0));
            for (int j = 1; j <= n; ++j) {
                const auto sol = scattering_solution(p, j, k);
                const double scale = std::max(1.0, std::max(max_abs(p.A()), k * max_abs(p.B())));
                CHECK(boundary_residual(p, sol) <= 1e-10 * scale);
                CHECK(sol.flux_defect() <= 1e-10);
                const Complex i1{0.0, 1.0};
                ComplexVector e = ComplexVector::Zero(n);
                e(j - 1) = 1.0;
                CHECK((sol.psi - (sol.column + e)).cwiseAbs().maxCoeff() <= 1e-15);
                CHECK((sol.dpsi - i1 * k * (sol.column - e)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, k));
            }
        }
    }

    TEST_CASE("duality")
    {
        const auto dn = dual_boundary(BoundaryPair(I3, Z3));
        CHECK(qvt::max_abs_diff(dn.A(), Z3) == 0.0);
        CHECK(qvt::max_abs_diff(dn.B(), I3) == 0.0);
        for (double k : {0.1, 1.0, 10.0})
            CHECK(qvt::max_abs_diff(s_matrix(dn, k).M, -s_matrix_continued(BoundaryPair(I3, Z3), -1.0 / k)) <= 1e-15);

        const auto delta = delta_line(1.7, Complex(0.4, 0.3));
        const auto dd = dual_boundary(delta);
        for (double k : qvt::log_points(1e-2, 1e2, 15))
            CHECK(qvt::max_abs_diff(s_matrix(dd, k).M, -qvt::oracle_s(delta.A(), delta.B(), -1.0 / k)) <= 1e-10);

        Rng rng(47);
        for (int trial = 0; trial < 50; ++trial) {
            const Index n = 1 + trial % 5;
            const auto p = qvt::random_admissible(rng, n);
            const auto d = dual_boundary(p);
            CHECK(validate_admissible(d).ok);
            for (double k : {0.1, 1.0, 10.0})
                CHECK(qvt::max_abs_diff(s_matrix(d, k).M, -s_matrix_continued(p, -1.0 / k)) <= 1e-10);
        }

        ComplexMatrix b(2, 2);
        b << 0.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(dual_boundary(BoundaryPair(ComplexMatrix::Identity(2, 2), b)), AdmissibilityError);
    }

    TEST_CASE("asymptotic limits of presets")
    {
        const auto fig2 = asymptotic_limits(make_case(preset("fig2").params));
        const auto fig8 = asymptotic_limits(make_case(preset("fig8").params));
        const auto fig10 = asymptotic_limits(make_case(preset("fig10").params));
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j)
                    continue;
                CHECK(std::abs(fig2.at_zero(i, j)) <= 1e-9);
                CHECK(std::abs(fig8.at_infinity(i, j)) <= 1e-9);
                CHECK(std::abs(fig10.at_zero(i, j)) <= 1e-5);
                CHECK(std::abs(fig10.at_infinity(i, j)) <= 1e-5);
            }
        }
        CHECK(fig2.warnings.empty());
        CHECK(fig2.error_zero < 1e-6);
    }

    TEST_CASE("asymptotic limits against eigenphase projectors")
    {
        Rng rng(48);
        for (int trial = 0; trial < 30; ++trial) {
            const Index n = 2 + trial % 4;
            const int dir = trial % 2;
            const int neu = trial % 3 == 0 ? 1 : 0;
            const auto v = qvt::random_unitary_vertex(rng, n, dir, neu);
            // S(0) = -I + 2 P(+1), S(inf) = I - 2 P(-1)
            ComplexVector z(n), inf(n);
            for (Index a = 0; a < n; ++a) {
                const double ph = v.phases[static_cast<std::size_t>(a)];
                z(a) = ph == 0.0 ? 1.0 : -1.0;
                inf(a) = std::abs(ph - std::acos(-1.0)) == 0.0 ? -1.0 : 1.0;
            }
            const auto lim = asymptotic_limits(v.pair());
            CHECK(qvt::max_abs_diff(lim.at_zero, v.Q * z.asDiagonal() * v.Q.adjoint()) <= 1e-8);
            CHECK(qvt::max_abs_diff(lim.at_infinity, v.Q * inf.asDiagonal() * v.Q.adjoint()) <= 1e-8);
        }
    }

    TEST_CASE("asymptotic limit options are checked")
    {
        LimitOptions bad;
        bad.k_lo = 10.0;
        bad.k_hi = 1.0;
        CHECK_THROWS_AS(asymptotic_limits(BoundaryPair(I3, Z3), bad), ValidationError);
    }
}
