#pragma once

#include <vector>

#include "casimir/special_functions.hpp"

namespace casimir {

// Perfect-reflector Mie coefficients continued to imaginary frequency,
// x = xi R:
//   a_l = (-1)^{l+1} (pi/2) (l I_{l+1/2}(x) - x I_{l-1/2}(x)) / (l K_{l+1/2}(x) + x K_{l-1/2}(x))
//   b_l = (-1)^{l+1} (pi/2) I_{l+1/2}(x) / K_{l+1/2}(x)
// With these signs every term of S_perp is negative and every term of S_par
// positive for cos(Theta) <= -1.
struct MieCoefficient {
    int ell = 0;
    ScaledValue a;
    ScaledValue b;
};

MieCoefficient mie_ab(int ell, double x);

struct AmplitudePair {
    ScaledValue s_perp;
    ScaledValue s_par;
};

// Amplitudes as s * exp(log_scale) with plain doubles, for hot loops.
struct ScaledAmplitudes {
    double s_perp = 0;
    double s_par = 0;
    double log_scale = 0;
    int terms = 0;
};

// Ratio tables for one size parameter x, valid for all |cos(Theta)| up to
// z_abs_max. Immutable after construction, safe to share between threads.
class MieSeries {
public:
    MieSeries(double x, double z_abs_max);

    double x() const { return x_; }
    double z_abs_max() const { return z_abs_max_; }
    int ell_cap() const { return static_cast<int>(alpha_.size()) - 1; }

    // |a_1|, |a_l|/|a_{l-1}| and |b_l|/|a_l|
    double log_abs_a1() const { return log_a1_; }
    double alpha(int ell) const { return alpha_[ell]; }
    double beta(int ell) const { return beta_[ell]; }

    ScaledAmplitudes amplitudes_scaled(double cos_theta) const;
    AmplitudePair amplitudes(double cos_theta) const;

private:
    double x_;
    double z_abs_max_;
    double log_a1_ = 0;
    std::vector<double> alpha_;
    std::vector<double> beta_;
};

AmplitudePair amplitudes_exact(double xi, double R, double cos_theta);

// s_perp = cos(Theta) / (2 xi sin^3(Theta/2)), s_par = -1 / (2 xi sin^3(Theta/2))
struct DiffractionCorrections {
    double s_perp;
    double s_par;
};

DiffractionCorrections diffraction_corrections(double xi, double cos_theta);

// S_p = (-1)^p (xi R / 2) exp(2 xi R sin(Theta/2)) [1 + s_p / R]_{order 1}
AmplitudePair amplitudes_wkb(double xi, double R, double cos_theta, int order);

}  // namespace casimir
