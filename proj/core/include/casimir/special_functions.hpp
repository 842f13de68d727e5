#pragma once

#include <vector>

namespace casimir {

// Signed real number stored as mantissa * 10^e with 0.1 <= |mantissa| < 1
// (or mantissa = e = 0 for zero). log_scale() = e * ln(10), so that
// value = mantissa * exp(log_scale). Products and quotients never overflow.
class ScaledValue {
public:
    ScaledValue() = default;
    explicit ScaledValue(double v);

    // sign in {-1, 0, +1}; log_abs = ln|value|.
    static ScaledValue from_log(int sign, double log_abs);

    double mantissa() const { return m_; }
    int exponent10() const { return e_; }
    double log_scale() const;
    // ln|value|, -inf for zero.
    double log_abs() const;
    int sign() const { return (m_ > 0) - (m_ < 0); }
    bool is_zero() const { return m_ == 0; }
    // Plain double; overflows to +-inf or underflows to 0 outside the range.
    double value() const;

    ScaledValue operator-() const;
    friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b);
    friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b);
    ScaledValue& operator*=(double f);

    friend bool operator==(const ScaledValue&, const ScaledValue&) = default;

private:
    ScaledValue(double m, int e) : m_(m), e_(e) {}
    void normalize();

    double m_ = 0;
    int e_ = 0;
};

struct BesselIKHalf {
    ScaledValue i;   // I_{l+1/2}(x)
    ScaledValue k;   // K_{l+1/2}(x)
    ScaledValue di;  // d/dx I_{l+1/2}(x)
    ScaledValue dk;  // d/dx K_{l+1/2}(x)
};

// Modified Bessel functions of half-integer order l + 1/2, x > 0.
BesselIKHalf bessel_ik_half_scaled(int ell, double x);

// r[l] = I_{l+1/2}(x) / I_{l-1/2}(x) for l = 0..ell_max, by backward
// recurrence started well above ell_max.
std::vector<double> bessel_i_half_ratios(int ell_max, double x);

// s[l] = K_{l+1/2}(x) / K_{l-1/2}(x) for l = 0..ell_max (s[0] = 1), by
// forward recurrence.
std::vector<double> bessel_k_half_ratios(int ell_max, double x);

// ln I_{1/2}(x) and ln K_{1/2}(x).
double log_bessel_i_half0(double x);
double log_bessel_k_half0(double x);

// E_1(u) for u > 0.
double exp_integral_e1(double u);

// Angular functions pi_l(z), tau_l(z) for z <= -1, l = 0..ell_max (index 0
// holds zero). pi_l = P_l'(z), tau_l = l z pi_l - (l+1) pi_{l-1}.
struct AngularFunctions {
    std::vector<ScaledValue> pi;
    std::vector<ScaledValue> tau;
};

AngularFunctions pi_tau(int ell_max, double z);

}  // namespace casimir
