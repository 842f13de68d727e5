#include "casimir/kinematics.hpp"

#include <cmath>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

Geometry::Geometry(double R, double L) : R_(R), L_(L) {
    if (!(R > 0) || !(L > 0) || !std::isfinite(R) || !std::isfinite(L) || !std::isfinite(R / L))
        throw DomainError("geometry requires finite R > 0 and L > 0, got R=" + std::to_string(R) +
                          " L=" + std::to_string(L));
}

namespace {

void check_pair(const SpectralPoint& in, const SpectralPoint& out) {
    if (in.xi != out.xi) throw DomainError("spectral points must share the same frequency");
    if (!(in.xi > 0)) throw DomainError("degenerate frequency xi = 0: use the kappa-based limit path");
    if (in.k < 0 || out.k < 0) throw DomainError("transverse wavenumber must be non-negative");
}

}  // namespace

double cos_theta(double xi, double k_in, double k_out, double cos_dphi) {
    if (!(xi > 0)) throw DomainError("degenerate frequency xi = 0: use the kappa-based limit path");
    return -(kappa(xi, k_in) * kappa(xi, k_out) + k_in * k_out * cos_dphi) / (xi * xi);
}

double sin_half_theta(double xi, double k_in, double k_out, double cos_dphi) {
    if (!(xi > 0)) throw DomainError("degenerate frequency xi = 0: use the kappa-based limit path");
    return std::sqrt(one_minus_cos_theta_scaled(xi, k_in, k_out, cos_dphi) / (2 * xi * xi));
}

double cos_theta(const SpectralPoint& in, const SpectralPoint& out) {
    check_pair(in, out);
    return cos_theta(in.xi, in.k, out.k, std::cos(out.phi - in.phi));
}

double sin_half_theta(const SpectralPoint& in, const SpectralPoint& out) {
    check_pair(in, out);
    return sin_half_theta(in.xi, in.k, out.k, std::cos(out.phi - in.phi));
}

}  // namespace casimir
