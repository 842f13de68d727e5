#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string_view>

#include "casimir/kinematics.hpp"
#include "casimir/mie.hpp"
#include "casimir/special_functions.hpp"

namespace casimir {

enum class KernelKind { ExactMie, Wkb0, Wkb1 };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

// Tilt angles between the Fresnel planes of the incoming (up-going) and
// outgoing (down-going) waves and the scattering plane, continued to
// imaginary frequency. With P = kappa_out k_in + kappa_in k_out cos(dphi),
// Q = kappa_in k_out + kappa_out k_in cos(dphi) and
// N^2 = P^2 + xi^2 k_out^2 sin^2(dphi) = Q^2 + xi^2 k_in^2 sin^2(dphi):
//   cos chi_in = P/N, sin chi_in = xi k_out sin(dphi)/N
//   cos chi_out = Q/N, sin chi_out = xi k_in sin(dphi)/N
// sin chi is eps_TE . eps_par. Where the scattering plane is undefined
// (N = 0) the limit chi_in = 0, chi_out = dphi is returned.
template <class Real>
struct TiltAngles {
    Real cos_in, sin_in, cos_out, sin_out;
};

template <class Real>
TiltAngles<Real> tilt_angles(Real xi, Real k_in, Real k_out, Real cos_dphi, Real sin_dphi) {
    using std::sqrt;
    const Real ka_in = sqrt(xi * xi + k_in * k_in);
    const Real ka_out = sqrt(xi * xi + k_out * k_out);
    const Real p = ka_out * k_in + ka_in * k_out * cos_dphi;
    const Real q = ka_in * k_out + ka_out * k_in * cos_dphi;
    const Real yin = xi * k_out * sin_dphi;
    const Real yout = xi * k_in * sin_dphi;
    const Real n = sqrt(p * p + yin * yin);
    if (n == Real(0)) return {Real(1), Real(0), cos_dphi, sin_dphi};
    return {p / n, yin / n, q / n, yout / n};
}

struct RotationCoefficients {
    double A, B, C, D;
    double chi_in, chi_out;
};

RotationCoefficients rotation_coefficients(const SpectralPoint& in, const SpectralPoint& out);
RotationCoefficients rotation_coefficients(double xi, double k_in, double k_out, double dphi);

// Fresnel coefficients of a perfect reflector: r_TM = +1, r_TE = -1.
inline double plane_reflection(Polarization p) { return p == Polarization::TM ? 1.0 : -1.0; }

// <out, p_out, -| R_S |in, p_in, +> for a sphere of radius R.
ScaledValue sphere_matrix_element(const SpectralPoint& in, const SpectralPoint& out, double R, KernelKind kind);

// r_{p_in} exp(-(kappa_in + kappa_out)(L + R)) sqrt(kappa_out / kappa_in) <out|R_S|in>.
// Symmetric under exchanging (in, p_in) with (out, p_out).
double symmetrized_round_trip_element(const SpectralPoint& in, const SpectralPoint& out, const Geometry& geometry,
                                      KernelKind kind);

// Symmetrized element for all four polarization pairs, indexed [p_out][p_in]
// with TE = 0, TM = 1.
using PolarizationBlock = std::array<std::array<double, 2>, 2>;

// Evaluates symmetrized elements at one frequency. For the exact kernel the
// Mie ratio tables are built once in the constructor for all channels with
// transverse wavenumbers up to k_max.
class RoundTripKernel {
public:
    RoundTripKernel(double xi, const Geometry& geometry, KernelKind kind, double k_max);

    double xi() const { return xi_; }
    KernelKind kind() const { return kind_; }

    PolarizationBlock operator()(double k_in, double k_out, double cos_dphi, double sin_dphi) const;

    // WKB kinds only: the order-0 kernel and the 1/R diffraction correction
    // (zero for wkb0) as separate blocks; their sum is operator().
    struct Split {
        PolarizationBlock leading;
        PolarizationBlock correction;
    };
    Split split(double k_in, double k_out, double cos_dphi, double sin_dphi) const;

    // Scale factor applied to every element (1 by default); zero switches the
    // kernel off, used as a sanity check by the oracles.
    void set_scale(double s) { scale_ = s; }

private:
    double xi_;
    double R_;
    double L_;
    KernelKind kind_;
    double scale_ = 1;
    std::shared_ptr<const MieSeries> mie_;
};

}  // namespace casimir
