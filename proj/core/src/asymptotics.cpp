#include "casimir/asymptotics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "casimir/special_functions.hpp"

namespace casimir {

namespace {

constexpr double pi = std::numbers::pi;

double integrate_half_line(const auto& f, double tol = 1e-14) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0;
    const double v = integrator.integrate(f, tol, &err);
    if (!std::isfinite(v)) throw TruncationError("half-line quadrature did not converge");
    return v;
}

// sum_{r > N} r^{-s} by Euler-Maclaurin; the last retained term is returned
// as an error estimate.
std::pair<double, double> zeta_tail(int s, double N) {
    const double a = std::pow(N, 1.0 - s) / (s - 1);
    const double b = -0.5 * std::pow(N, -s);
    const double c = s * std::pow(N, -s - 1.0) / 12.0;
    const double d = -double(s) * (s + 1) * (s + 2) * std::pow(N, -s - 3.0) / 720.0;
    return {a + b + c + d, std::abs(d)};
}

struct SeriesSum {
    double value = 0;
    double tail = 0;
    double bound = 0;
};

// sum_{r >= 1} a_r with a_r computed up to r_max; the tail is modelled as
// c2/r^2 + c4/r^4 fitted at r_max and r_max/2.
SeriesSum mercator_sum(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    SeriesSum out;
    for (int r = n; r >= 1; --r) out.value += a[r];
    if (n < 8) throw DomainError("r_max must be at least 8");
    auto fit = [&](int m) {
        const double x1 = double(n), x2 = double(m);
        // a = c2 x^-2 + c4 x^-4
        const double y1 = a[n] * x1 * x1, y2 = a[m] * x2 * x2;
        const double c4 = (y1 - y2) / (1 / (x1 * x1) - 1 / (x2 * x2));
        const double c2 = y1 - c4 / (x1 * x1);
        const auto [t2, e2] = zeta_tail(2, x1);
        const auto [t4, e4] = zeta_tail(4, x1);
        return std::pair{c2 * t2 + c4 * t4, std::abs(c2) * e2 + std::abs(c4) * e4};
    };
    const auto [tail, em_err] = fit(n / 2);
    const auto [tail_alt, em_err_alt] = fit(n / 4);
    out.tail = tail;
    out.bound = em_err + em_err_alt + std::abs(tail - tail_alt);
    out.value += tail;
    return out;
}

}  // namespace

double e_pfa(const Geometry& geometry) { return -pi * pi * pi * geometry.aspect_ratio() / 720.0; }

double energy_asymptotic(const Geometry& geometry, AsymptoticOrder order) {
    const double pfa = e_pfa(geometry);
    if (order == AsymptoticOrder::Pfa) return pfa;
    return pfa * (1 + beta_bundle().beta1.value() / geometry.aspect_ratio());
}

SaddleFrame::SaddleFrame(int r_, double xi_, double kappa_sp_, double L_) : r(r_), xi(xi_), kappa_sp(kappa_sp_), L(L_) {
    if (r < 1) throw DomainError("saddle frame needs r >= 1");
    if (!(xi > 0) || !(L > 0)) throw DomainError("saddle frame needs xi > 0 and L > 0");
    if (!(kappa_sp >= xi)) throw DomainError("saddle frame needs kappa_sp >= xi");
}

std::vector<double> hessian_eigenvalues(int r, double kappa_sp) {
    if (r < 1) throw DomainError("hessian_eigenvalues needs r >= 1");
    std::vector<double> lambda(r);
    for (int j = 0; j < r; ++j) {
        const double s = std::sin(pi * j / r);
        lambda[j] = j == 0 ? 0.0 : 2 * s * s / kappa_sp;
    }
    return lambda;
}

double a_function(double s, int r, double kappa_sp) {
    if (r < 1) throw DomainError("a_function needs r >= 1");
    s = std::fmod(s, double(r));
    if (s < 0) s += r;
    return kappa_sp / (6.0 * r) * (double(r) * r - 6 * s * r + 6 * s * s - 1);
}

AppendixD appendix_D(int r, double xi, double kappa_sp, double L) {
    const SaddleFrame frame(r, xi, kappa_sp, L);
    const double k2 = kappa_sp * kappa_sp, x2 = xi * xi, k3 = k2 * kappa_sp;
    const double rr = r, rm1 = r - 1.0;
    AppendixD d;
    d.D1 = (rr - 2) * rm1 * rm1 * (k2 - x2) / (rr * k3);
    d.D2 = 2 * rm1 * rm1 * ((rr - 2) * k2 - 3 * rr * x2) / (3 * rr * k3);
    d.D3_over_g = -(rr * rr - 1) * (x2 + L * kappa_sp * (k2 + x2)) / (3 * k3);
    d.F1_over_g = -(rr * rr - 1) * (rr * L * kappa_sp * (k2 + x2) + x2) / (6 * rr * k3);
    return d;
}

double s_te_specular(double xi, double kappa_sp) {
    return (0.5 * xi * xi - kappa_sp * kappa_sp) / (kappa_sp * kappa_sp * kappa_sp);
}

double s_tm_specular(double xi, double kappa_sp) { return -0.5 * xi * xi / (kappa_sp * kappa_sp * kappa_sp); }

TraceTerm trace_Mr_leading(int r, double u, Polarization pol) {
    if (r < 1) throw DomainError("trace_Mr_leading needs r >= 1");
    if (!(u > 0)) throw DomainError("trace_Mr_leading needs u > 0");
    const double e = std::exp(-u), e1 = exp_integral_e1(u);
    TraceTerm t;
    if (e == 0) return t;
    t.r_over_l = e / (4.0 * r * r);
    if (pol == Polarization::TE)
        t.constant = 0.125 * ((u * u - 4) * e1 - (u - 1) * e);
    else
        t.constant = -0.125 * (u * u * e1 - (u - 1) * e);
    return t;
}

double trace_Mr_ntlo(int r, double u) {
    if (r < 1) throw DomainError("trace_Mr_ntlo needs r >= 1");
    if (!(u >= 0)) throw DomainError("trace_Mr_ntlo needs u >= 0");
    const double rr = r;
    return (1 - rr * rr) * std::exp(-u) / (12 * rr * rr);
}

TraceTerm trace_Mr_leading_numeric(int r, double xi, double L, Polarization pol) {
    const SaddleFrame frame(r, xi, xi, L);
    const double a = 2 * L * r;
    // kappa = xi + t; the e^{-2 kappa L r} factor is pulled out as e^{-u}.
    TraceTerm t;
    t.r_over_l = L / (2.0 * r) * std::exp(-frame.u()) * integrate_half_line([&](double s) { return std::exp(-a * s); });
    auto sp = pol == Polarization::TE ? s_te_specular : s_tm_specular;
    t.constant = 0.5 * std::exp(-frame.u()) *
                 integrate_half_line([&](double s) {
                     const double e = std::exp(-a * s);
                     return e == 0 ? 0.0 : e * sp(xi, xi + s);
                 });
    return t;
}

double trace_Mr_ntlo_numeric(int r, double xi, double L) {
    const SaddleFrame frame(r, xi, xi, L);
    const double a = 2 * L * r;
    return std::exp(-frame.u()) / (2.0 * r) *
           integrate_half_line([&](double s) {
               const double e = std::exp(-a * s);
               return e == 0 ? 0.0 : e * appendix_D(r, xi, xi + s, L).F1_over_g;
           });
}

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) n = -n, d = -d;
    const std::int64_t g = std::gcd(n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string ExactBeta::str() const {
    std::ostringstream os;
    bool first = true;
    if (rational.num != 0) {
        os << rational.str();
        first = false;
    }
    if (inv_pi2.num != 0) {
        if (!first) os << (inv_pi2.num < 0 ? " - " : " + ");
        else if (inv_pi2.num < 0) os << "-";
        Rational m(inv_pi2.num < 0 ? -inv_pi2.num : inv_pi2.num, inv_pi2.den);
        if (m.den == 1)
            os << m.num << "/pi^2";
        else
            os << m.num << "/(" << m.den << " pi^2)";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

BetaBundle beta_bundle() {
    BetaBundle b;
    b.beta_d_te = {Rational(0), Rational(-25, 2)};
    b.beta_d_tm = {Rational(0), Rational(-5, 2)};
    b.beta_d = b.beta_d_te + b.beta_d_tm;
    b.beta_go = {Rational(1, 3), Rational(-5)};
    b.beta1 = b.beta_d + b.beta_go;
    const ExactBeta half_go = {Rational(1, 6), Rational(-5, 2)};
    b.beta_te = b.beta_d_te + half_go;
    b.beta_tm = b.beta_d_tm + half_go;
    b.beta_dd = {Rational(1, 6), Rational(0)};
    b.beta_nn = {Rational(1, 6), Rational(-20)};
    const double total = b.beta1.value();
    b.table_percentages = {100 * b.beta_d_te.value() / total, 100 * b.beta_d_tm.value() / total,
                           100 * half_go.value() / total, 100 * half_go.value() / total};
    return b;
}

namespace {

// E L = -(1/2pi) sum_r (1/r) int dxi T(r, 2 xi L r) = -(1/4pi) sum_r I_r / r^2 with
// I_r = int_0^inf du T(r, u) (L = 1).
MercatorReconstruction reconstruct(const auto& trace, int r_max) {
    if (r_max < 8) throw DomainError("reconstruction needs r_max >= 8");
    std::vector<double> a_ratio(r_max + 1, 0.0), a_const(r_max + 1, 0.0);
    for (int r = 1; r <= r_max; ++r) {
        const double rr = double(r) * r;
        a_ratio[r] = integrate_half_line([&](double u) { return trace(r, u).r_over_l; }, 1e-13) / rr;
        a_const[r] = integrate_half_line([&](double u) { return trace(r, u).constant; }, 1e-13) / rr;
    }
    const auto s_ratio = mercator_sum(a_ratio);
    const auto s_const = mercator_sum(a_const);
    const double w = -1 / (4 * pi);
    MercatorReconstruction rec;
    rec.energy_r_over_l = w * s_ratio.value;
    rec.energy_constant = w * s_const.value;
    rec.tail = w * (s_ratio.tail + s_const.tail);
    rec.tail_bound = std::abs(w) * (s_ratio.bound + s_const.bound);
    rec.r_max = r_max;
    return rec;
}

}  // namespace

MercatorReconstruction reconstruct_leading(Polarization pol, int r_max) {
    return reconstruct([pol](int r, double u) { return trace_Mr_leading(r, u, pol); }, r_max);
}

MercatorReconstruction reconstruct_ntlo(int r_max) {
    return reconstruct(
        [](int r, double u) {
            return TraceTerm{0.0, 2 * trace_Mr_ntlo(r, u)};
        },
        r_max);
}

double beta_from_reconstruction(const MercatorReconstruction& rec) {
    return -720.0 * rec.energy_constant / (pi * pi * pi);
}

}  // namespace casimir
