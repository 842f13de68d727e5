#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "casimir/errors.hpp"
#include "casimir/kinematics.hpp"
#include "casimir/mie.hpp"
#include "fixtures.hpp"

using namespace casimir;

TEST_SUITE("mie-amplitudes") {
    TEST_CASE("Mie coefficients against fixtures") {
        for (const auto& row : load_fixtures("mie_a")) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            const auto c = mie_ab(row.ell, row.arg);
            CHECK(c.a.sign() == row.sign());
            CHECK(std::abs(c.a.log_abs() - row.log_abs()) < 1e-11);
        }
        for (const auto& row : load_fixtures("mie_b")) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            const auto c = mie_ab(row.ell, row.arg);
            CHECK(c.b.sign() == row.sign());
            CHECK(std::abs(c.b.log_abs() - row.log_abs()) < 1e-11);
        }
    }

    TEST_CASE("Mie coefficients die off super-exponentially for l >> x") {
        for (double x : {0.5, 3.0, 12.0}) {
            double log_max = -1e300;
            for (int l = 1; l <= 60; ++l) {
                const auto c = mie_ab(l, x);
                log_max = std::max({log_max, c.a.log_abs(), c.b.log_abs()});
            }
            const int far = static_cast<int>(10 * x) + 50;
            const auto c = mie_ab(far, x);
            CHECK(c.a.log_abs() - log_max < std::log(1e-30));
            CHECK(c.b.log_abs() - log_max < std::log(1e-30));
        }
        CHECK_THROWS_AS(mie_ab(1, 0.0), DomainError);
        CHECK_THROWS_AS(mie_ab(0, 1.0), DomainError);
    }

    TEST_CASE("exact amplitudes against fixtures") {
        for (const std::string tag : {"-2.0", "-1.25", "-1.3", "-7.0"}) {
            const double z = std::stod(tag);
            const auto perp = load_fixtures("s_perp@" + tag);
            const auto par = load_fixtures("s_par@" + tag);
            REQUIRE(perp.size() == 1);
            REQUIRE(par.size() == 1);
            const double x = perp[0].arg;
            CAPTURE(x);
            CAPTURE(z);
            const auto amp = amplitudes_exact(1.0, x, z);
            CHECK(amp.s_perp.sign() == perp[0].sign());
            CHECK(amp.s_par.sign() == par[0].sign());
            CHECK(std::abs(amp.s_perp.log_abs() - perp[0].log_abs()) < 1e-11);
            CHECK(std::abs(amp.s_par.log_abs() - par[0].log_abs()) < 1e-11);
        }
    }

    TEST_CASE("backscattering: S_perp = -S_par") {
        for (double x : {0.3, 4.0, 60.0}) {
            const auto amp = amplitudes_exact(1.0, x, -1.0);
            CHECK((amp.s_perp / amp.s_par).value() == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("truncation: a wider ratio table leaves the sums unchanged") {
        for (double x : {2.0, 40.0})
            for (double z : {-1.1, -3.0}) {
                const auto a = MieSeries(x, std::abs(z)).amplitudes_scaled(z);
                const auto b = MieSeries(x, 50 * std::abs(z)).amplitudes_scaled(z);
                const double pa = a.s_perp * std::exp(a.log_scale - b.log_scale);
                const double qa = a.s_par * std::exp(a.log_scale - b.log_scale);
                CHECK(std::abs(pa / b.s_perp - 1) < 1e-12);
                CHECK(std::abs(qa / b.s_par - 1) < 1e-12);
            }
    }

    TEST_CASE("WKB amplitudes: signs, diffraction corrections, exponent") {
        for (int order : {0, 1})
            for (double xi : {0.2, 1.0})
                for (double z : {-1.0, -1.7, -30.0}) {
                    const auto w = amplitudes_wkb(xi, 50.0, z, order);
                    CHECK(w.s_perp.sign() == -1);
                    CHECK(w.s_par.sign() == 1);
                }
        for (double xi : {0.3, 1.0, 2.5})
            for (double k : {0.0, 0.5, 4.0}) {
                const double ka = kappa(xi, k);
                const double z = cos_theta(xi, k, k, 1.0);
                const auto s = diffraction_corrections(xi, z);
                CHECK(s.s_perp == doctest::Approx((xi * xi / 2 - ka * ka) / (ka * ka * ka)).epsilon(1e-13));
                CHECK(s.s_par == doctest::Approx(-xi * xi / (2 * ka * ka * ka)).epsilon(1e-13));
                const double R = 123.0;
                const auto w = amplitudes_wkb(xi, R, z, 0);
                CHECK(w.s_par.log_abs() - std::log(xi * R / 2) == doctest::Approx(2 * ka * R).epsilon(1e-14));
            }
        const auto s = diffraction_corrections(1.0, -1.0);
        CHECK(s.s_perp == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(s.s_par == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK_THROWS_AS(amplitudes_wkb(1.0, 10.0, -2.0, 2), DomainError);
    }

    TEST_CASE("WKB convergence: exact / wkb0 - 1 - s_p/R is o(1/R)") {
        const double z = -2.0;
        const auto s = diffraction_corrections(1.0, z);
        std::vector<double> xs{50, 100, 200, 400}, dperp, dpar;
        for (double x : xs) {
            const auto e = amplitudes_exact(1.0, x, z);
            const auto w = amplitudes_wkb(1.0, x, z, 0);
            dperp.push_back(std::abs((e.s_perp / w.s_perp).value() - 1 - s.s_perp / x));
            dpar.push_back(std::abs((e.s_par / w.s_par).value() - 1 - s.s_par / x));
        }
        for (const auto* d : {&dperp, &dpar}) {
            const double slope = std::log((*d)[3] / (*d)[0]) / std::log(xs[3] / xs[0]);
            CAPTURE(slope);
            CHECK(slope <= -1.5);
        }
    }
}
