#include "casimir/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr double ln10_hi = 2.302585092994046;
constexpr double ln10_lo = -2.1707562233822494e-16;
constexpr double ln2_hi = 0.6931471805599453;
constexpr double ln2_lo = 2.3190468138462996e-17;

// Running product kept as m * 2^e to avoid over/underflow without rounding
// the scale.
struct BinaryAccumulator {
    double m = 1;
    long e = 0;
    void mul(double f) {
        m *= f;
        int k;
        m = std::frexp(m, &k);
        e += k;
    }
    double log_abs() const { return std::log(std::abs(m)) + (double(e) * ln2_hi + double(e) * ln2_lo); }
};

}  // namespace

ScaledValue::ScaledValue(double v) : m_(v), e_(0) {
    if (!std::isfinite(v)) throw DomainError("ScaledValue from non-finite double");
    normalize();
}

void ScaledValue::normalize() {
    if (m_ == 0) {
        e_ = 0;
        return;
    }
    int shift = static_cast<int>(std::floor(std::log10(std::abs(m_)))) + 1;
    // two-stage scaling keeps 10^-shift representable for subnormal inputs
    if (shift < -290) {
        m_ *= 1e300;
        e_ -= 300;
        shift += 300;
    }
    m_ /= std::pow(10.0, shift);
    e_ += shift;
    if (std::abs(m_) >= 1) {
        m_ /= 10;
        ++e_;
    } else if (std::abs(m_) < 0.1) {
        m_ *= 10;
        --e_;
    }
}

ScaledValue ScaledValue::from_log(int sign, double log_abs) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return {};
    if (!std::isfinite(log_abs)) throw DomainError("ScaledValue from non-finite logarithm");
    const double e = std::floor(log_abs / ln10_hi) + 1;
    const double rest = std::fma(-e, ln10_hi, log_abs) - e * ln10_lo;
    ScaledValue v(sign > 0 ? std::exp(rest) : -std::exp(rest), static_cast<int>(e));
    if (std::abs(v.m_) >= 1) {
        v.m_ /= 10;
        ++v.e_;
    } else if (std::abs(v.m_) < 0.1) {
        v.m_ *= 10;
        --v.e_;
    }
    return v;
}

double ScaledValue::log_scale() const { return e_ * ln10_hi + e_ * ln10_lo; }

double ScaledValue::log_abs() const {
    if (m_ == 0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m_)) + log_scale();
}

double ScaledValue::value() const {
    if (m_ == 0) return 0;
    if (std::abs(e_) < 300) return m_ * std::pow(10.0, e_);
    return sign() * std::exp(log_abs());
}

ScaledValue ScaledValue::operator-() const { return ScaledValue(-m_, e_); }

ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    ScaledValue r(a.m_ * b.m_, a.e_ + b.e_);
    r.normalize();
    return r;
}

ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
    if (b.m_ == 0) throw DomainError("ScaledValue division by zero");
    ScaledValue r(a.m_ / b.m_, a.e_ - b.e_);
    r.normalize();
    return r;
}

ScaledValue& ScaledValue::operator*=(double f) {
    if (!std::isfinite(f)) throw DomainError("ScaledValue scaled by non-finite factor");
    m_ *= f;
    normalize();
    return *this;
}

std::vector<double> bessel_i_half_ratios(int ell_max, double x) {
    if (!(x > 0)) throw DomainError("bessel ratios need x > 0");
    if (ell_max < 0) throw DomainError("bessel ratios need ell_max >= 0");
    // Errors in the starting guess shrink like (I_{top}/I_{l})^2, which is
    // below exp(-margin^2 / x) for l << x.
    const int top = ell_max + 20 + static_cast<int>(std::ceil(7 * std::sqrt(x)));
    double r = x / (top + 1 + std::hypot(top + 1.0, x));
    std::vector<double> out(ell_max + 1);
    for (int l = top; l >= 0; --l) {
        r = 1.0 / ((2 * l + 1) / x + r);  // now r = r_l
        if (l <= ell_max) out[l] = r;
    }
    return out;
}

std::vector<double> bessel_k_half_ratios(int ell_max, double x) {
    if (!(x > 0)) throw DomainError("bessel ratios need x > 0");
    std::vector<double> s(ell_max + 1);
    s[0] = 1;
    for (int l = 0; l < ell_max; ++l) s[l + 1] = (2 * l + 1) / x + 1 / s[l];
    return s;
}

double log_bessel_i_half0(double x) {
    const double half_log = 0.5 * std::log(2 / (std::numbers::pi * x));
    if (x < 20) return half_log + std::log(std::sinh(x));
    return half_log + x - std::numbers::ln2 + std::log1p(-std::exp(-2 * x));
}

double log_bessel_k_half0(double x) { return 0.5 * std::log(std::numbers::pi / (2 * x)) - x; }

BesselIKHalf bessel_ik_half_scaled(int ell, double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("bessel_ik_half_scaled needs finite x > 0");
    if (ell < 0) throw DomainError("bessel_ik_half_scaled needs ell >= 0");
    const auto r = bessel_i_half_ratios(ell + 1, x);
    const auto s = bessel_k_half_ratios(ell, x);

    BinaryAccumulator ip, kp;
    for (int l = 1; l <= ell; ++l) {
        ip.mul(r[l]);
        kp.mul(s[l]);
    }
    BesselIKHalf out;
    out.i = ScaledValue::from_log(+1, log_bessel_i_half0(x) + ip.log_abs());
    out.k = ScaledValue::from_log(+1, log_bessel_k_half0(x) + kp.log_abs());
    const double nu = ell + 0.5;
    // I' = I_{nu-1} - (nu/x) I = I (nu/x + r_{l+1}); K' = -K (1/s_l + nu/x)
    out.di = out.i;
    out.di *= nu / x + r[ell + 1];
    out.dk = out.k;
    out.dk *= -(1 / s[ell] + nu / x);
    return out;
}

double exp_integral_e1(double u) {
    if (!(u > 0)) throw DomainError("exp_integral_e1 needs u > 0, got " + std::to_string(u));
    if (u > 745) return 0;  // e^{-u}/u underflows
    if (u <= 1) {
        // -gamma - ln u - sum_{n>=1} (-u)^n / (n n!)
        double term = 1, sum = 0;
        for (int n = 1; n < 60; ++n) {
            term *= -u / n;
            const double add = term / n;
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return -std::numbers::egamma - std::log(u) - sum;
    }
    // modified Lentz on e^u E_1(u) = 1/(u+1- 1/(u+3- 4/(u+5- ...)))
    constexpr double tiny = 1e-300;
    double b = u + 1, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -double(i) * i;
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1) < 1e-16) return h * std::exp(-u);
    }
    throw TruncationError("exp_integral_e1 continued fraction did not converge");
}

AngularFunctions pi_tau(int ell_max, double z) {
    if (!(z <= -1)) throw DomainError("pi_tau supports z <= -1 only, got " + std::to_string(z));
    if (ell_max < 1) throw DomainError("pi_tau needs ell_max >= 1");
    AngularFunctions out;
    out.pi.assign(ell_max + 1, ScaledValue());
    out.tau.assign(ell_max + 1, ScaledValue());
    // |pi_l| = p_l with sign (-1)^{l+1}; p_l / p_{l-1} = q_l follows from the
    // Legendre-derivative recurrence and never cancels for z <= -1.
    const double az = -z;
    BinaryAccumulator p;
    double q = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= ell_max; ++l) {
        if (l >= 2) {
            q = (2.0 * l - 1) / (l - 1) * az - double(l) / (l - 1) / q;
            p.mul(q);
        }
        const double t = l * az - (l + 1) / q;  // |tau_l / pi_l|
        const int sgn = (l % 2 == 1) ? +1 : -1;
        out.pi[l] = ScaledValue::from_log(sgn, p.log_abs());
        out.tau[l] = ScaledValue::from_log(-sgn, p.log_abs() + std::log(t));
    }
    return out;
}

}  // namespace casimir
