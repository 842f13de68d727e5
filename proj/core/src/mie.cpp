#include "casimir/mie.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr int hard_ell_cap = 200000;

// ln(I_{1/2}(x) / K_{1/2}(x)) = ln(expm1(2x) / pi)
double log_i_over_k_half0(double x) {
    const double l = x > 20 ? 2 * x + std::log1p(-std::exp(-2 * x)) : std::log(std::expm1(2 * x));
    return l - std::log(std::numbers::pi);
}

struct RatioTables {
    double log_a1;
    std::vector<double> alpha;  // |a_l| / |a_{l-1}|, alpha[1] unused
    std::vector<double> beta;   // |b_l| / |a_l|
};

RatioTables ratio_tables(int ell_max, double x) {
    const auto r = bessel_i_half_ratios(ell_max, x);
    const auto s = bessel_k_half_ratios(ell_max, x);
    RatioTables t;
    t.alpha.assign(ell_max + 1, 0.0);
    t.beta.assign(ell_max + 1, 0.0);
    // |a_l| = (pi/2) (I_{l-1/2} / K_{l+1/2}) g_l with g_l = (x - l r_l) / (l + x / s_l)
    double g_prev = 0;
    for (int l = 1; l <= ell_max; ++l) {
        const double g = (x - l * r[l]) / (l + x / s[l]);
        t.beta[l] = r[l] / g;
        if (l >= 2) t.alpha[l] = r[l - 1] / s[l] * g / g_prev;
        g_prev = g;
        if (l == 1) t.log_a1 = std::log(std::numbers::pi / 2) + log_i_over_k_half0(x) - std::log(s[1]) + std::log(g);
    }
    return t;
}

void check_x(double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("Mie size parameter must be finite and > 0");
}

void check_z(double z) {
    if (!(z <= -1)) throw DomainError("cos(Theta) must be <= -1 on the imaginary-frequency branch");
}

}  // namespace

MieCoefficient mie_ab(int ell, double x) {
    check_x(x);
    if (ell < 1) throw DomainError("Mie coefficients start at ell = 1");
    const auto t = ratio_tables(ell, x);
    double log_a = t.log_a1;
    for (int l = 2; l <= ell; ++l) log_a += std::log(t.alpha[l]);
    MieCoefficient c;
    c.ell = ell;
    const int sa = (ell % 2 == 0) ? +1 : -1;
    c.a = ScaledValue::from_log(sa, log_a);
    c.b = ScaledValue::from_log(-sa, log_a + std::log(t.beta[ell]));
    return c;
}

MieSeries::MieSeries(double x, double z_abs_max) : x_(x), z_abs_max_(z_abs_max) {
    check_x(x);
    if (!(z_abs_max >= 1) || !std::isfinite(z_abs_max)) throw DomainError("MieSeries needs finite |z|max >= 1");
    // Beyond the crossing alpha_l (2|z|+2) < 1/4 every further term of either
    // amplitude sum shrinks at least by that bound.
    const double growth = 2 * z_abs_max + 2;
    int cap = static_cast<int>(std::ceil(x * std::sqrt(z_abs_max) + 8 * std::cbrt(x) + 40));
    for (;;) {
        auto t = ratio_tables(cap, x);
        int crossing = -1;
        double product = 1;
        int end = -1;
        for (int l = 2; l <= cap; ++l) {
            const double bound = t.alpha[l] * growth;
            if (crossing < 0 && bound < 0.25) crossing = l;
            if (crossing >= 0) {
                product *= bound;
                if (product < 1e-20) {
                    end = l;
                    break;
                }
            }
        }
        if (end > 0) {
            t.alpha.resize(end + 1);
            t.beta.resize(end + 1);
            log_a1_ = t.log_a1;
            alpha_ = std::move(t.alpha);
            beta_ = std::move(t.beta);
            return;
        }
        if (cap >= hard_ell_cap)
            throw TruncationError("Mie ratio table exceeds ell cap " + std::to_string(hard_ell_cap) +
                                  " for x=" + std::to_string(x));
        cap = std::min(2 * cap, hard_ell_cap);
    }
}

ScaledAmplitudes MieSeries::amplitudes_scaled(double z) const {
    check_z(z);
    const double az = -z;
    if (az > z_abs_max_ * (1 + 1e-12))
        throw DomainError("cos(Theta) outside the range this MieSeries was built for");
    constexpr double rescale = 1e-200;
    constexpr double big = 1e200;
    const int cap = ell_cap();

    double g = 1;  // |a_l pi_l| relative to |a_1|
    double q = std::numeric_limits<double>::infinity();
    double log_scale = log_a1_;
    double sum_perp = 0, sum_par = 0;
    double prev_term = 0, prev_ratio = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= cap; ++l) {
        if (l >= 2) {
            q = (2.0 * l - 1) / (l - 1) * az - double(l) / (l - 1) / q;
            g *= alpha_[l] * q;
        }
        const double t = l * az - (l + 1) / q;  // |tau_l / pi_l|
        const double c = (2.0 * l + 1) / (double(l) * (l + 1));
        const double tp = c * g * (1 + beta_[l] * t);
        const double tq = c * g * (t + beta_[l]);
        sum_perp += tp;
        sum_par += tq;
        const double term = tp + tq;
        if (l >= 2) {
            const double ratio = term / prev_term;
            if (ratio < 1 && ratio <= prev_ratio) {
                const double tail = term * ratio / (1 - ratio);
                if (tail < 1e-16 * std::min(sum_perp, sum_par))
                    return {-sum_perp, sum_par, log_scale, l};
            }
            prev_ratio = ratio;
        }
        prev_term = term;
        if (g > big) {
            g *= rescale;
            sum_perp *= rescale;
            sum_par *= rescale;
            prev_term *= rescale;
            log_scale -= std::log(rescale);
        }
    }
    throw TruncationError("Mie amplitude sum not converged: x=" + std::to_string(x_) + " cos(Theta)=" +
                          std::to_string(z) + " ell_cap=" + std::to_string(cap));
}

AmplitudePair MieSeries::amplitudes(double z) const {
    const auto s = amplitudes_scaled(z);
    return {ScaledValue::from_log(-1, s.log_scale + std::log(-s.s_perp)),
            ScaledValue::from_log(+1, s.log_scale + std::log(s.s_par))};
}

AmplitudePair amplitudes_exact(double xi, double R, double cos_theta) {
    check_z(cos_theta);
    if (!(xi > 0) || !(R > 0)) throw DomainError("amplitudes_exact needs xi > 0 and R > 0");
    return MieSeries(xi * R, -cos_theta).amplitudes(cos_theta);
}

DiffractionCorrections diffraction_corrections(double xi, double cos_theta) {
    check_z(cos_theta);
    if (!(xi > 0)) throw DomainError("diffraction corrections need xi > 0");
    const double s = std::sqrt((1 - cos_theta) / 2);
    const double inv = 1 / (2 * xi * s * s * s);
    return {cos_theta * inv, -inv};
}

AmplitudePair amplitudes_wkb(double xi, double R, double cos_theta, int order) {
    check_z(cos_theta);
    if (!(xi > 0) || !(R > 0)) throw DomainError("amplitudes_wkb needs xi > 0 and R > 0");
    if (order != 0 && order != 1) throw DomainError("WKB order must be 0 or 1");
    const double s = std::sqrt((1 - cos_theta) / 2);
    if (s < 1) throw DomainError("sin(Theta/2) < 1 is not reachable at imaginary frequency");
    const double log_w = std::log(xi * R / 2) + 2 * xi * R * s;
    double f_perp = 1, f_par = 1;
    if (order == 1) {
        const auto d = diffraction_corrections(xi, cos_theta);
        f_perp += d.s_perp / R;
        f_par += d.s_par / R;
    }
    auto perp = ScaledValue::from_log(-1, log_w);
    auto par = ScaledValue::from_log(+1, log_w);
    perp *= f_perp;
    par *= f_par;
    return {perp, par};
}

}  // namespace casimir
