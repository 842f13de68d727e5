#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "casimir/errors.hpp"
#include "casimir/kinematics.hpp"
#include "casimir/reflection.hpp"

namespace casimir {

// -pi^3 R / (720 L^2), returned in units of hbar c / L.
double e_pfa(const Geometry& geometry);

enum class AsymptoticOrder { Pfa, Ntlo };

// E_PFA (1 + beta_1 L/R) or E_PFA, in hbar c / L.
double energy_asymptotic(const Geometry& geometry, AsymptoticOrder order);

struct SaddleFrame {
    int r = 1;
    double xi = 0;
    double kappa_sp = 0;
    double L = 1;

    SaddleFrame(int r, double xi, double kappa_sp, double L);
    double k_sp() const { return std::sqrt((kappa_sp - xi) * (kappa_sp + xi)); }
    double u() const { return 2 * xi * L * r; }
};

template <class Real>
struct Vec2 {
    Real x = 0, y = 0;
};

// eta_{j,j+1} = kappa_j + kappa_{j+1} - sqrt(2 (xi^2 + kappa_j kappa_{j+1} + k_j . k_{j+1}))
template <class Real>
Real eta(Real xi, const Vec2<Real>& a, const Vec2<Real>& b) {
    using std::sqrt;
    const Real ka = sqrt(xi * xi + a.x * a.x + a.y * a.y);
    const Real kb = sqrt(xi * xi + b.x * b.x + b.y * b.y);
    const Real dx = a.x - b.x, dy = a.y - b.y;
    const Real s = sqrt(Real(2) * (xi * xi + ka * kb + a.x * b.x + a.y * b.y));
    return (dx * dx + dy * dy) / (ka + kb + s);
}

// f = sum_j eta_{j,j+1}, cyclic.
template <class Real>
Real f_function(Real xi, const std::vector<Vec2<Real>>& k) {
    Real s = 0;
    const std::size_t r = k.size();
    for (std::size_t j = 0; j < r; ++j) s += eta(xi, k[j], k[(j + 1) % r]);
    return s;
}

namespace detail {

template <class Real>
struct StepRho {
    Real rho[2][2];  // [p_out][p_in], TE = 0, TM = 1
};

template <class Real>
StepRho<Real> step_rho(Real xi, const Vec2<Real>& in, const Vec2<Real>& out, Real R, int order) {
    using std::sqrt;
    const Real kin = sqrt(in.x * in.x + in.y * in.y);
    const Real kout = sqrt(out.x * out.x + out.y * out.y);
    Real c = 1, s = 0;
    if (kin > 0 && kout > 0) {
        c = (in.x * out.x + in.y * out.y) / (kin * kout);
        s = (in.x * out.y - in.y * out.x) / (kin * kout);
    }
    const auto t = tilt_angles<Real>(xi, kin, kout, c, s);
    const Real A = t.cos_out * t.cos_in, B = t.sin_out * t.sin_in;
    const Real C = t.sin_out * t.cos_in, D = -t.cos_out * t.sin_in;
    StepRho<Real> r{{{-(A - B), C - D}, {C - D, A - B}}};
    if (order == 1) {
        const Real ka_in = sqrt(xi * xi + kin * kin), ka_out = sqrt(xi * xi + kout * kout);
        const Real sh = sqrt((xi * xi + ka_in * ka_out + kin * kout * c) / (Real(2) * xi * xi));
        const Real cos_theta = Real(1) - Real(2) * sh * sh;
        const Real inv = Real(1) / (Real(2) * xi * sh * sh * sh);
        const Real sp = cos_theta * inv, sq = -inv;
        r.rho[1][1] += (A * sq - B * sp) / R;
        r.rho[0][0] -= (A * sp - B * sq) / R;
        r.rho[1][0] += (C * sp - D * sq) / R;
        r.rho[0][1] += (C * sq - D * sp) / R;
    }
    return r;
}

}  // namespace detail

// g = sum over polarization assignments of prod_j (-1)^{p_j} e^{-2 kappa_j L} / kappa_j
//     rho_{p_{j+1}, p_j}, (-1)^p = -1 for TE and +1 for TM. order 0: pure WKB;
// order 1: includes s_p / R. The sum runs explicitly over all 2^r assignments.
template <class Real>
Real g_function(Real xi, const std::vector<Vec2<Real>>& k, Real R, Real L, int order) {
    using std::exp;
    using std::sqrt;
    const int r = static_cast<int>(k.size());
    if (r < 1) throw DomainError("g_function needs at least one point");
    if (r > 12) throw CapabilityError("explicit polarization sum supports r <= 12");
    if (order != 0 && order != 1) throw DomainError("g_function order must be 0 or 1");
    std::vector<detail::StepRho<Real>> steps(r);
    Real weight = 1;
    for (int j = 0; j < r; ++j) {
        steps[j] = detail::step_rho(xi, k[j], k[(j + 1) % r], R, order);
        const Real ka = sqrt(xi * xi + k[j].x * k[j].x + k[j].y * k[j].y);
        weight *= exp(Real(-2) * ka * L) / ka;
    }
    Real total = 0;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        Real prod = 1;
        for (int j = 0; j < r; ++j) {
            const int p = (mask >> j) & 1u;
            const int p_next = (mask >> ((j + 1) % r)) & 1u;
            prod *= (p == 0 ? Real(-1) : Real(1)) * steps[j].rho[p_next][p];
        }
        total += prod;
    }
    return weight * total;
}

// g without polarization mixing and per polarization: prod_j e^{-2 kappa_j L} / kappa_j.
template <class Real>
Real g_scalar(Real xi, const std::vector<Vec2<Real>>& k, Real L) {
    using std::exp;
    using std::sqrt;
    Real w = 1;
    for (const auto& p : k) {
        const Real ka = sqrt(xi * xi + p.x * p.x + p.y * p.y);
        w *= exp(Real(-2) * ka * L) / ka;
    }
    return w;
}

// lambda_j = (2 / kappa_sp) sin^2(pi j / r), j = 0..r-1 (lambda_0 = 0 is the
// saddle-manifold direction).
std::vector<double> hessian_eigenvalues(int r, double kappa_sp);

// a(s) = (kappa_sp / 6r)(r^2 - 6 s r + 6 s^2 - 1), s reduced into [0, r].
double a_function(double s, int r, double kappa_sp);

struct AppendixD {
    double D1 = 0;
    double D2 = 0;
    double D3_over_g = 0;
    double F1_over_g = 0;
};

AppendixD appendix_D(int r, double xi, double kappa_sp, double L);

// Diffraction corrections at the specular point.
double s_te_specular(double xi, double kappa_sp);
double s_tm_specular(double xi, double kappa_sp);

// Leading saddle-point trace for one polarization split as
// (R/L) * r_over_l + constant.
struct TraceTerm {
    double r_over_l = 0;
    double constant = 0;
    double value(double aspect_ratio) const { return aspect_ratio * r_over_l + constant; }
};

TraceTerm trace_Mr_leading(int r, double u, Polarization pol);

// NTLO trace contribution of one polarization (both contribute the same).
double trace_Mr_ntlo(int r, double u);

// Same traces from numerical integration over kappa_sp of the saddle-point
// integrand (R / 2r) kappa_sp^r [F_0 + F_1 / R].
TraceTerm trace_Mr_leading_numeric(int r, double xi, double L, Polarization pol);
double trace_Mr_ntlo_numeric(int r, double xi, double L);

// Number a + b / pi^2 with rational a, b.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);
    double value() const { return double(num) / double(den); }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend bool operator==(const Rational&, const Rational&) = default;
    std::string str() const;
};

struct ExactBeta {
    Rational rational;
    Rational inv_pi2;
    double value() const { return rational.value() + inv_pi2.value() / (std::numbers::pi * std::numbers::pi); }
    friend ExactBeta operator+(const ExactBeta& a, const ExactBeta& b) {
        return {a.rational + b.rational, a.inv_pi2 + b.inv_pi2};
    }
    friend ExactBeta operator-(const ExactBeta& a, const ExactBeta& b) {
        return {a.rational - b.rational, a.inv_pi2 - b.inv_pi2};
    }
    friend bool operator==(const ExactBeta&, const ExactBeta&) = default;
    std::string str() const;
};

struct BetaBundle {
    ExactBeta beta_d_te, beta_d_tm, beta_d, beta_go, beta1, beta_te, beta_tm, beta_dd, beta_nn;
    // diffraction TE, diffraction TM, geometrical optics TE, geometrical optics TM (percent of beta1)
    std::array<double, 4> table_percentages{};
};

BetaBundle beta_bundle();

// Mercator sum over round trips of frequency-integrated traces,
//   E L = -(1/2pi) sum_r (1/r) int dxi trace(r, 2 xi L r),
// with the sum truncated at r_max and an Euler-Maclaurin tail for terms
// behaving as c2 / r^2 + c4 / r^4.
struct MercatorReconstruction {
    double energy_r_over_l = 0;  // coefficient of R/L in E L (hbar c)
    double energy_constant = 0;  // constant part of E L (hbar c)
    double tail = 0;             // tail added beyond r_max (both parts at R/L = 1)
    double tail_bound = 0;       // difference between successive tail approximations
    int r_max = 0;
};

// Leading traces of one polarization, integrated numerically over u.
MercatorReconstruction reconstruct_leading(Polarization pol, int r_max = 10000);
// NTLO traces of both polarizations.
MercatorReconstruction reconstruct_ntlo(int r_max = 10000);

// beta = (E_constant / E_PFA-coefficient), i.e. the L/R coefficient relative
// to -pi^3/720.
double beta_from_reconstruction(const MercatorReconstruction& rec);

}  // namespace casimir
