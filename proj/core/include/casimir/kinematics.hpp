#pragma once

#include <cmath>
#include <string_view>

namespace casimir {

// Units: hbar = c = 1. Lengths (R, L) are in an arbitrary common unit and
// wavenumbers/frequencies in its inverse. Energies leave the library
// multiplied by L, i.e. in units of hbar*c/L.
inline constexpr std::string_view energy_unit = "hbar*c/L";

enum class Polarization { TE = 0, TM = 1 };

inline constexpr std::string_view to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

class Geometry {
public:
    Geometry(double R, double L);

    double R() const { return R_; }
    double L() const { return L_; }
    double aspect_ratio() const { return R_ / L_; }

private:
    double R_;
    double L_;
};

// One plane-wave channel at imaginary frequency xi. dir = +1 travels towards
// the sphere (up), dir = -1 away from it.
struct SpectralPoint {
    double xi = 0;
    double k = 0;
    double phi = 0;
    Polarization pol = Polarization::TE;
    int dir = +1;
};

inline double kappa(double xi, double k) { return std::hypot(xi, k); }

inline double kappa(const SpectralPoint& p) { return kappa(p.xi, p.k); }

// xi^2 + kappa_in kappa_out + k_in k_out cos(dphi) = xi^2 (1 - cos Theta).
// Never smaller than 2 xi^2.
template <class Real>
Real one_minus_cos_theta_scaled(Real xi, Real k_in, Real k_out, Real cos_dphi) {
    using std::sqrt;
    const Real ka_in = sqrt(xi * xi + k_in * k_in);
    const Real ka_out = sqrt(xi * xi + k_out * k_out);
    return xi * xi + ka_in * ka_out + k_in * k_out * cos_dphi;
}

// 2 xi sin(Theta/2), finite also at xi = 0.
template <class Real>
Real two_xi_sin_half_theta(Real xi, Real k_in, Real k_out, Real cos_dphi) {
    using std::sqrt;
    return sqrt(Real(2) * one_minus_cos_theta_scaled(xi, k_in, k_out, cos_dphi));
}

// kappa_in + kappa_out - 2 xi sin(Theta/2) >= 0, written without the
// cancellation near the specular point k_in = k_out.
template <class Real>
Real eta(Real xi, Real k_in, Real k_out, Real cos_dphi) {
    using std::sqrt;
    const Real ka_in = sqrt(xi * xi + k_in * k_in);
    const Real ka_out = sqrt(xi * xi + k_out * k_out);
    const Real dk2 = (k_in - k_out) * (k_in - k_out) + Real(2) * k_in * k_out * (Real(1) - cos_dphi);
    const Real s = two_xi_sin_half_theta(xi, k_in, k_out, cos_dphi);
    return dk2 / (ka_in + ka_out + s);
}

double cos_theta(const SpectralPoint& in, const SpectralPoint& out);
double sin_half_theta(const SpectralPoint& in, const SpectralPoint& out);

double cos_theta(double xi, double k_in, double k_out, double cos_dphi);
double sin_half_theta(double xi, double k_in, double k_out, double cos_dphi);

}  // namespace casimir
