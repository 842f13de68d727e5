#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <numbers>

#include "casimir/asymptotics.hpp"
#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/solver.hpp"

using namespace casimir;

namespace {

QuadratureConfig small_config() {
    QuadratureConfig c;
    c.n_radial = 32;
    c.n_azimuthal = 32;
    c.n_xi = 16;
    return c;
}

}  // namespace

TEST_SUITE("exact-solver") {
    TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
        const auto g = gauss_legendre(8, 0.0, 2.0);
        double s = 0;
        for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 15);
        CHECK(s == doctest::Approx(std::pow(2.0, 16) / 16).epsilon(1e-13));
        const auto c = composite_gauss_legendre(40, -1.0, 3.0, 16);
        CHECK(c.x.size() == 40);
        double e = 0;
        for (std::size_t i = 0; i < c.x.size(); ++i) e += c.w[i] * std::exp(c.x[i]);
        CHECK(e == doctest::Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-13));
        CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
    }

    TEST_CASE("config validation and defaults") {
        QuadratureConfig c;
        CHECK_NOTHROW(c.validate());
        c.n_azimuthal = 48;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.n_azimuthal = 16;
        c.m_max = 9;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        QuadratureConfig d;
        d.n_xi = 2;
        CHECK_THROWS_AS(d.validate(), ConfigError);
        const auto r = QuadratureConfig{}.resolved(Geometry(100.0, 1.0));
        CHECK(r.n_radial % r.radial_panel == 0);
        CHECK(r.n_azimuthal >= 64);
        CHECK(std::has_single_bit(static_cast<unsigned>(r.n_azimuthal)));
        CHECK_THROWS_AS(radial_grid(1.0, Geometry(1.0, 1.0), QuadratureConfig{}), ConfigError);
    }

    TEST_CASE("frequency grid is positive and ordered") {
        const Geometry g(10.0, 1.0);
        const auto x = xi_grid(g, QuadratureConfig{});
        REQUIRE(!x.x.empty());
        for (std::size_t i = 0; i < x.x.size(); ++i) {
            CHECK(x.x[i] > 0);
            CHECK(x.w[i] > 0);
            if (i) CHECK(x.x[i] > x.x[i - 1]);
            CHECK(2 * x.x[i] * g.L() <= QuadratureConfig{}.u_max);
        }
    }

    TEST_CASE("ln det(1 - M) of a rank-one block is ln(1 - q)") {
        for (double q : {0.1, 0.5, 0.93}) {
            Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(10, 0.3, 2.0);
            v.normalize();
            BlockMatrix b;
            b.m = 0;
            b.xi = 1;
            b.n_radial = 5;
            b.entries = q * v * v.transpose();
            CHECK(log_det_contribution(b) == doctest::Approx(std::log(1 - q)).epsilon(1e-13));
            b.m = 3;
            CHECK(log_det_contribution(b) == doctest::Approx(2 * std::log(1 - q)).epsilon(1e-13));
        }
        BlockMatrix zero;
        zero.entries = Eigen::MatrixXd::Zero(6, 6);
        CHECK(log_det_contribution(zero) == 0.0);
        BlockMatrix bad;
        bad.entries = 2 * Eigen::MatrixXd::Identity(4, 4);
        CHECK_THROWS_AS(log_det_contribution(bad), NonPhysicalKernel);
    }

    TEST_CASE("blocks are symmetric, contractive and obey the Mercator bound") {
        const Geometry g(5.0, 1.0);
        auto c = small_config();
        c.full_blocks = true;
        const auto rc = c.resolved(g);
        for (auto kind : {KernelKind::ExactMie, KernelKind::Wkb0, KernelKind::Wkb1})
            for (double xi : {0.05, 0.4, 2.0}) {
                const auto blocks = build_blocks(xi, g, kind, rc);
                REQUIRE(!blocks.empty());
                // relative to the operator: the Fourier sums leave roundoff of that size in every block
                const double scale = std::max(blocks[0].entries.cwiseAbs().maxCoeff(), 1e-300);
                for (const auto& b : blocks) {
                    CHECK((b.entries - b.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
                    if (b.entries.cwiseAbs().maxCoeff() == 0) continue;
                    const auto est = mercator_log_det(b, 12);
                    CHECK(est.spectral_radius < 1);
                    const double exact = log_det_contribution(b);
                    CHECK(std::abs(exact - est.value) <= est.bound + 8 * b.entries.rows() * 2.3e-16);
                }
            }
    }

    TEST_CASE("trace of M^1 is the sum over diagonal entries of all blocks") {
        const Geometry g(5.0, 1.0);
        const auto rc = small_config().resolved(g);
        auto full = rc;
        full.m_max = rc.n_azimuthal / 2;
        const auto blocks = build_blocks(0.5, g, KernelKind::Wkb0, full);
        double tr = 0;
        for (const auto& b : blocks) tr += (b.m == 0 ? 1 : 2) * b.entries.trace();
        CHECK(trace_Mr_numeric(1, 0.5, g, KernelKind::Wkb0, full) == doctest::Approx(tr).epsilon(1e-12));
    }

    TEST_CASE("energy: negative, below PFA in magnitude, banded and dense paths agree") {
        const Geometry g(5.0, 1.0);
        const auto c = small_config();
        for (auto kind : {KernelKind::Wkb0, KernelKind::Wkb1, KernelKind::ExactMie}) {
            const auto band = energy(g, kind, c);
            auto cd = c;
            cd.full_blocks = true;
            const auto dense = energy(g, kind, cd);
            CAPTURE(to_string(kind));
            CHECK(band.energy < 0);
            CHECK(band.ratio_to_pfa > 0.5);
            CHECK(band.ratio_to_pfa < 1.0);
            CHECK(band.energy_pfa == doctest::Approx(e_pfa(g)).epsilon(1e-15));
            CHECK(band.energy == doctest::Approx(dense.energy).epsilon(1e-10));
            CHECK(band.samples.size() > 4);
        }
    }

    TEST_CASE("the diffraction correction reduces the magnitude of the energy") {
        const Geometry g(30.0, 1.0);
        auto c = small_config();
        c.n_radial = 48;
        const auto lin = energy(g, KernelKind::Wkb1, c);
        const auto w0 = energy(g, KernelKind::Wkb0, c);
        CHECK(lin.energy > w0.energy);
        CHECK(lin.ratio_to_pfa < w0.ratio_to_pfa);
    }
}
