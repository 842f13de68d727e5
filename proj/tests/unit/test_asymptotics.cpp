#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "casimir/asymptotics.hpp"
#include "casimir/errors.hpp"

using namespace casimir;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_SUITE("asymptotics") {
    TEST_CASE("PFA energy and the next-to-leading-order asymptote") {
        const Geometry g(100.0, 2.0);
        CHECK(e_pfa(g) == doctest::Approx(-pi * pi * pi * 50 / 720).epsilon(1e-15));
        CHECK(energy_asymptotic(g, AsymptoticOrder::Pfa) == e_pfa(g));
        const double b1 = 1.0 / 3 - 20 / (pi * pi);
        CHECK(energy_asymptotic(g, AsymptoticOrder::Ntlo) == doctest::Approx(e_pfa(g) * (1 + b1 / 50)).epsilon(1e-15));
    }

    TEST_CASE("exact coefficients and their identities") {
        const auto b = beta_bundle();
        CHECK(b.beta1.str() == "1/3 - 20/pi^2");
        CHECK(b.beta_go.str() == "1/3 - 5/pi^2");
        CHECK(b.beta_d.str() == "-15/pi^2");
        CHECK(b.beta_d_te.str() == "-25/(2 pi^2)");
        CHECK(b.beta_d_tm.str() == "-5/(2 pi^2)");
        CHECK(b.beta_dd.str() == "1/6");
        CHECK(b.beta_nn.str() == "1/6 - 20/pi^2");
        CHECK(b.beta1 == b.beta_d + b.beta_go);
        CHECK(b.beta1 == b.beta_te + b.beta_tm);
        CHECK(b.beta1 == b.beta_dd + b.beta_nn);
        CHECK(b.beta_d == b.beta_d_te + b.beta_d_tm);
        CHECK(b.beta1.value() == doctest::Approx(1.0 / 3 - 20 / (pi * pi)).epsilon(1e-15));
        const double total = std::accumulate(b.table_percentages.begin(), b.table_percentages.end(), 0.0);
        CHECK(total == doctest::Approx(100.0).epsilon(1e-13));
    }

    TEST_CASE("rationals are kept reduced") {
        CHECK(Rational(2, -4) == Rational(-1, 2));
        CHECK(Rational(0, 7) == Rational(0));
        CHECK((Rational(1, 6) + Rational(1, 3)).str() == "1/2");
        CHECK((Rational(1, 6) - Rational(1, 6)).str() == "0");
        CHECK_THROWS_AS(Rational(1, 0), DomainError);
        CHECK(ExactBeta{}.str() == "0");
    }

    TEST_CASE("Hessian spectrum and the a(s) function") {
        const auto l = hessian_eigenvalues(4, 2.0);
        REQUIRE(l.size() == 4);
        CHECK(l[0] == 0.0);
        CHECK(l[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(l[2] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(l[3] == doctest::Approx(0.5).epsilon(1e-15));
        for (int r : {2, 3, 7})
            for (double s : {0.0, 0.3, 1.5}) {
                CHECK(a_function(s + r, r, 1.7) == doctest::Approx(a_function(s, r, 1.7)).epsilon(1e-13));
                CHECK(a_function(r - s, r, 1.7) == doctest::Approx(a_function(s, r, 1.7)).epsilon(1e-13));
            }
        CHECK(a_function(0.0, 3, 6.0) == doctest::Approx(8.0 / 3).epsilon(1e-15));
        CHECK_THROWS_AS(hessian_eigenvalues(0, 1.0), DomainError);
    }

    TEST_CASE("D and F1 terms vanish where they must") {
        for (double x : {0.4, 1.0})
            for (double k : {1.0, 2.5}) {
                const auto d1 = appendix_D(1, x, k * x, 1.0);
                CHECK(d1.D1 == 0.0);
                CHECK(d1.D2 == 0.0);
                CHECK(d1.D3_over_g == 0.0);
                CHECK(d1.F1_over_g == 0.0);
                CHECK(appendix_D(2, x, k * x, 1.0).D1 == 0.0);
                CHECK(appendix_D(4, x, x, 1.0).D1 == 0.0);
            }
        CHECK_THROWS_AS(appendix_D(3, 1.0, 0.5, 1.0), DomainError);
    }

    TEST_CASE("trace terms: reference values and closed forms against quadrature") {
        const auto te = trace_Mr_leading(1, 1.0, Polarization::TE);
        const auto tm = trace_Mr_leading(1, 1.0, Polarization::TM);
        CHECK(te.constant == doctest::Approx(-0.0822690).epsilon(1e-6));
        CHECK(tm.constant == doctest::Approx(-0.0274230).epsilon(1e-6));
        CHECK(te.r_over_l == doctest::Approx(std::exp(-1.0) / 4).epsilon(1e-15));
        CHECK(trace_Mr_ntlo(2, 0.0) == doctest::Approx(-1.0 / 16).epsilon(1e-15));
        CHECK(trace_Mr_ntlo(1, 0.3) == 0.0);
        for (int r : {1, 2, 5})
            for (double xi : {0.05, 0.5, 2.0}) {
                const double u = 2 * xi * r;
                for (auto pol : {Polarization::TE, Polarization::TM}) {
                    const auto a = trace_Mr_leading(r, u, pol);
                    const auto n = trace_Mr_leading_numeric(r, xi, 1.0, pol);
                    CHECK(n.r_over_l == doctest::Approx(a.r_over_l).epsilon(1e-10));
                    CHECK(n.constant == doctest::Approx(a.constant).epsilon(1e-9));
                }
                CHECK(trace_Mr_ntlo_numeric(r, xi, 1.0) == doctest::Approx(trace_Mr_ntlo(r, u)).epsilon(1e-9));
            }
        CHECK_THROWS_AS(trace_Mr_leading(0, 1.0, Polarization::TE), DomainError);
        CHECK_THROWS_AS(trace_Mr_leading(1, 0.0, Polarization::TE), DomainError);
    }

    TEST_CASE("short Mercator reconstructions approach the exact coefficients") {
        const auto b = beta_bundle();
        const auto ntlo = reconstruct_ntlo(200);
        CHECK(beta_from_reconstruction(ntlo) == doctest::Approx(b.beta_go.value()).epsilon(1e-7));
        const auto te = reconstruct_leading(Polarization::TE, 200);
        CHECK(te.energy_r_over_l == doctest::Approx(-pi * pi * pi / 1440).epsilon(1e-8));
        CHECK(te.tail_bound < 1e-6);
        CHECK_THROWS_AS(reconstruct_ntlo(4), DomainError);
    }
}
