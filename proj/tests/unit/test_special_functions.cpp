#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "casimir/errors.hpp"
#include "casimir/special_functions.hpp"
#include "fixtures.hpp"

using namespace casimir;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void check_scaled(const ScaledValue& v, const FixtureRow& row, double tol) {
    CHECK(v.sign() == row.sign());
    CHECK(std::abs(v.log_abs() - row.log_abs()) < tol);
}

}  // namespace

TEST_SUITE("special-functions") {
    TEST_CASE("ScaledValue normalization is unique") {
        for (double v : {1.0, -3.5e200, 2.5e-300, 0.1, -0.99999, 12345.678}) {
            const ScaledValue s(v);
            CHECK(std::abs(s.mantissa()) >= 0.1);
            CHECK(std::abs(s.mantissa()) < 1.0);
            CHECK(rel(s.value(), v) < 1e-14);
            const ScaledValue t = ScaledValue::from_log(v > 0 ? 1 : -1, std::log(std::abs(v)));
            CHECK(std::abs(t.mantissa()) >= 0.1);
            CHECK(std::abs(t.mantissa()) < 1.0);
            CHECK(rel(t.value(), v) < 1e-13);
        }
        CHECK(ScaledValue(0.0).is_zero());
        CHECK(ScaledValue(0.0).mantissa() == 0);
        const auto big = ScaledValue::from_log(1, 5000.0) * ScaledValue::from_log(-1, -4990.0);
        CHECK(big.sign() == -1);
        CHECK(std::abs(big.log_abs() - 10.0) < 1e-10);
    }

    TEST_CASE("half-integer Bessel closed forms at l = 0") {
        const double x = 1.0;
        const auto b = bessel_ik_half_scaled(0, x);
        CHECK(rel(b.i.value(), std::sqrt(2 / (std::numbers::pi * x)) * std::sinh(x)) < 1e-12);
        CHECK(rel(b.k.value(), std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x)) < 1e-12);
    }

    TEST_CASE("half-integer Bessel values against fixtures") {
        for (const auto& row : load_fixtures("bessel_i_half")) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            check_scaled(bessel_ik_half_scaled(row.ell, row.arg).i, row, 1e-12);
        }
        for (const auto& row : load_fixtures("bessel_k_half")) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            check_scaled(bessel_ik_half_scaled(row.ell, row.arg).k, row, 1e-12);
        }
    }

    TEST_CASE("Wronskian I K' - I' K = -1/x") {
        for (int ell : {0, 1, 2, 5, 10, 50, 200, 1000})
            for (double x : {0.01, 0.5, 1.0, 7.0, 30.0, 200.0, 5000.0}) {
                const auto b = bessel_ik_half_scaled(ell, x);
                const ScaledValue minus_inv_x(-1 / x);
                const double w1 = (b.i * b.dk / minus_inv_x).value();
                const double w2 = (b.di * b.k / minus_inv_x).value();
                CAPTURE(ell);
                CAPTURE(x);
                CHECK(std::abs((w1 - w2) - 1) < 1e-10);
            }
    }

    TEST_CASE("domain errors") {
        CHECK_THROWS_AS(bessel_ik_half_scaled(0, 0.0), DomainError);
        CHECK_THROWS_AS(bessel_ik_half_scaled(3, -1.0), DomainError);
        CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
        CHECK_THROWS_AS(exp_integral_e1(-2.0), DomainError);
        CHECK_THROWS_AS(pi_tau(5, -0.5), DomainError);
    }

    TEST_CASE("E1 reference values and limits") {
        CHECK(rel(exp_integral_e1(1.0), 0.21938393439552027) < 1e-12);
        for (const auto& row : load_fixtures("e1")) {
            CAPTURE(row.arg);
            CHECK(rel(exp_integral_e1(row.arg), row.mantissa * std::exp(row.log_scale)) < 1e-12);
        }
        const double u = 700;
        CHECK(std::abs(exp_integral_e1(u) * u * std::exp(u) - 1) < 1e-2);
        const double small = 1e-8;
        CHECK(std::abs(exp_integral_e1(small) + std::log(small) + std::numbers::egamma) < 1e-7);
    }

    TEST_CASE("E1 is decreasing and below exp(-u)/u") {
        double prev = exp_integral_e1(1e-6);
        for (double u = 2e-6; u < 600; u *= 1.37) {
            const double e = exp_integral_e1(u);
            CHECK(e < prev);
            CHECK(e < std::exp(-u) / u);
            prev = e;
        }
    }

    TEST_CASE("angular functions: base case, endpoint and fixtures") {
        for (double z : {-1.0, -1.5, -3.0, -40.0}) {
            const auto a = pi_tau(12, z);
            CHECK(a.pi[1].value() == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(a.tau[1].value() == doctest::Approx(z).epsilon(1e-15));
        }
        const auto e = pi_tau(60, -1.0);
        for (int l = 1; l <= 60; ++l) {
            const double expected = (l % 2 ? 1.0 : -1.0) * l * (l + 1) / 2.0;
            CHECK(rel(e.pi[l].value(), expected) < 1e-13);
        }
        const auto pis = load_fixtures("pi");
        const auto taus = load_fixtures("tau");
        REQUIRE(!pis.empty());
        for (const auto& row : pis) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            check_scaled(pi_tau(row.ell, row.arg).pi[row.ell], row, 1e-10);
        }
        for (const auto& row : taus) {
            CAPTURE(row.ell);
            CAPTURE(row.arg);
            check_scaled(pi_tau(row.ell, row.arg).tau[row.ell], row, 1e-10);
        }
    }

    TEST_CASE("angular functions satisfy their recurrences and alternate in sign") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> pick(2, 150);
        for (double z : {-1.2, -2.0, -9.0}) {
            const auto a = pi_tau(160, z);
            for (int trial = 0; trial < 30; ++trial) {
                const int l = pick(rng);
                // (l) pi_{l+1} = (2l + 1) z pi_l - (l + 1) pi_{l-1}
                const double lhs = l * (a.pi[l + 1] / a.pi[l]).value();
                const double rhs = (2 * l + 1) * z - (l + 1) * (a.pi[l - 1] / a.pi[l]).value();
                CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
                const double tau = l * z - (l + 1) * (a.pi[l - 1] / a.pi[l]).value();
                CHECK(std::abs((a.tau[l] / a.pi[l]).value() - tau) < 1e-10 * std::abs(tau));
            }
            for (int l = 1; l <= 160; ++l) CHECK(a.pi[l].sign() == (l % 2 ? 1 : -1));
        }
    }
}
