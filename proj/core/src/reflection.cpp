#include "casimir/reflection.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::ExactMie: return "exact-mie";
        case KernelKind::Wkb0: return "wkb0";
        case KernelKind::Wkb1: return "wkb1";
    }
    throw DomainError("unsupported kernel kind");
}

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "exact-mie") return KernelKind::ExactMie;
    if (name == "wkb0") return KernelKind::Wkb0;
    if (name == "wkb1") return KernelKind::Wkb1;
    throw DomainError("unsupported kernel kind '" + std::string(name) + "'");
}

RotationCoefficients rotation_coefficients(double xi, double k_in, double k_out, double dphi) {
    if (!(xi > 0)) throw DomainError("rotation coefficients need xi > 0");
    const auto t = tilt_angles(xi, k_in, k_out, std::cos(dphi), std::sin(dphi));
    return {t.cos_out * t.cos_in,
            t.sin_out * t.sin_in,
            t.sin_out * t.cos_in,
            -t.cos_out * t.sin_in,
            std::atan2(t.sin_in, t.cos_in),
            std::atan2(t.sin_out, t.cos_out)};
}

RotationCoefficients rotation_coefficients(const SpectralPoint& in, const SpectralPoint& out) {
    if (in.xi != out.xi) throw DomainError("spectral points must share the same frequency");
    return rotation_coefficients(in.xi, in.k, out.k, out.phi - in.phi);
}

namespace {

struct Rho {
    double te_te, te_tm, tm_te, tm_tm;  // [out][in]
};

// Polarization factors of the WKB elements (order 0 or 1).
Rho wkb_rho(const TiltAngles<double>& t, double xi, double sin_half, double R, bool diffraction) {
    const double A = t.cos_out * t.cos_in, B = t.sin_out * t.sin_in;
    const double C = t.sin_out * t.cos_in, D = -t.cos_out * t.sin_in;
    Rho rho{-(A - B), C - D, C - D, A - B};
    if (diffraction) {
        const double cos_theta = 1 - 2 * sin_half * sin_half;
        const double inv = 1 / (2 * xi * sin_half * sin_half * sin_half);
        const double s_perp = cos_theta * inv, s_par = -inv;
        rho.tm_tm += (A * s_par - B * s_perp) / R;
        rho.te_te -= (A * s_perp - B * s_par) / R;
        rho.tm_te += (C * s_perp - D * s_par) / R;
        rho.te_tm += (C * s_par - D * s_perp) / R;
    }
    return rho;
}

// Fresnel-basis combinations of the exact amplitudes, without 2 pi / (xi kappa_out).
Rho exact_combination(const TiltAngles<double>& t, double s_perp, double s_par) {
    const double A = t.cos_out * t.cos_in, B = t.sin_out * t.sin_in;
    const double C = t.sin_out * t.cos_in, D = -t.cos_out * t.sin_in;
    return {A * s_perp + B * s_par, C * s_par + D * s_perp, -(C * s_perp + D * s_par), A * s_par + B * s_perp};
}

double max_abs_cos_theta(double xi, double k_max) {
    const double ka = kappa(xi, k_max);
    return (ka * ka + k_max * k_max) / (xi * xi);
}

void check_kind(KernelKind kind) {
    if (kind != KernelKind::ExactMie && kind != KernelKind::Wkb0 && kind != KernelKind::Wkb1)
        throw DomainError("unsupported kernel kind");
}

}  // namespace

ScaledValue sphere_matrix_element(const SpectralPoint& in, const SpectralPoint& out, double R, KernelKind kind) {
    check_kind(kind);
    if (in.xi != out.xi) throw DomainError("spectral points must share the same frequency");
    const double xi = in.xi;
    if (!(xi > 0)) throw DomainError("sphere matrix elements need xi > 0");
    const double dphi = out.phi - in.phi;
    const double c = std::cos(dphi), s = std::sin(dphi);
    const auto t = tilt_angles(xi, in.k, out.k, c, s);
    const double ka_out = kappa(out.xi, out.k);
    const int o = static_cast<int>(out.pol), i = static_cast<int>(in.pol);
    auto pick = [&](const Rho& r) {
        const double v[2][2] = {{r.te_te, r.te_tm}, {r.tm_te, r.tm_tm}};
        return v[o][i];
    };
    if (kind == KernelKind::ExactMie) {
        const double z = cos_theta(xi, in.k, out.k, c);
        const auto amp = MieSeries(xi * R, -z).amplitudes_scaled(z);
        const double v = pick(exact_combination(t, amp.s_perp, amp.s_par));
        if (v == 0) return {};
        return ScaledValue::from_log(v > 0 ? 1 : -1,
                                     std::log(2 * std::numbers::pi / (xi * ka_out)) + amp.log_scale + std::log(std::abs(v)));
    }
    const double sin_half = sin_half_theta(xi, in.k, out.k, c);
    const double v = pick(wkb_rho(t, xi, sin_half, R, kind == KernelKind::Wkb1));
    if (v == 0) return {};
    return ScaledValue::from_log(v > 0 ? 1 : -1,
                                 std::log(std::numbers::pi * R / ka_out) + 2 * xi * R * sin_half + std::log(std::abs(v)));
}

RoundTripKernel::RoundTripKernel(double xi, const Geometry& geometry, KernelKind kind, double k_max)
    : xi_(xi), R_(geometry.R()), L_(geometry.L()), kind_(kind) {
    check_kind(kind);
    if (!(xi > 0)) throw DomainError("round-trip kernel needs xi > 0");
    if (kind == KernelKind::ExactMie)
        mie_ = std::make_shared<const MieSeries>(xi * R_, max_abs_cos_theta(xi, k_max));
}

PolarizationBlock RoundTripKernel::operator()(double k_in, double k_out, double cos_dphi, double sin_dphi) const {
    const double xi = xi_;
    const double ka_in = kappa(xi, k_in), ka_out = kappa(xi, k_out);
    const auto t = tilt_angles(xi, k_in, k_out, cos_dphi, sin_dphi);
    const double two_xi_s = two_xi_sin_half_theta(xi, k_in, k_out, cos_dphi);
    // exp(-(kappa_in + kappa_out)(L + R) + 2 xi R sin(Theta/2)) = exp(expo)
    const double expo = -(ka_in + ka_out) * L_ - R_ * eta(xi, k_in, k_out, cos_dphi);
    Rho rho;
    double pref;
    if (kind_ == KernelKind::ExactMie) {
        const double z = -(ka_in * ka_out + k_in * k_out * cos_dphi) / (xi * xi);
        const auto amp = mie_->amplitudes_scaled(std::min(z, -1.0));
        rho = exact_combination(t, amp.s_perp, amp.s_par);
        pref = 2 * std::numbers::pi / xi * std::exp(expo + amp.log_scale - R_ * two_xi_s) / std::sqrt(ka_in * ka_out);
    } else {
        rho = wkb_rho(t, xi, two_xi_s / (2 * xi), R_, kind_ == KernelKind::Wkb1);
        pref = std::numbers::pi * R_ * std::exp(expo) / std::sqrt(ka_in * ka_out);
    }
    pref *= scale_;
    if (pref == 0) return {};
    // plate reflection on the incoming polarization: r_TE = -1, r_TM = +1
    return {{{-pref * rho.te_te, pref * rho.te_tm}, {-pref * rho.tm_te, pref * rho.tm_tm}}};
}

RoundTripKernel::Split RoundTripKernel::split(double k_in, double k_out, double cos_dphi, double sin_dphi) const {
    if (kind_ == KernelKind::ExactMie) throw CapabilityError("exact kernel has no leading/diffraction split");
    const double xi = xi_;
    const double ka_in = kappa(xi, k_in), ka_out = kappa(xi, k_out);
    const auto t = tilt_angles(xi, k_in, k_out, cos_dphi, sin_dphi);
    const double two_xi_s = two_xi_sin_half_theta(xi, k_in, k_out, cos_dphi);
    const double expo = -(ka_in + ka_out) * L_ - R_ * eta(xi, k_in, k_out, cos_dphi);
    const double pref = scale_ * std::numbers::pi * R_ * std::exp(expo) / std::sqrt(ka_in * ka_out);
    if (pref == 0) return {};
    const Rho r0 = wkb_rho(t, xi, two_xi_s / (2 * xi), R_, false);
    Rho r1 = r0;
    if (kind_ == KernelKind::Wkb1) r1 = wkb_rho(t, xi, two_xi_s / (2 * xi), R_, true);
    auto block = [&](double te_te, double te_tm, double tm_te, double tm_tm) {
        return PolarizationBlock{{{-pref * te_te, pref * te_tm}, {-pref * tm_te, pref * tm_tm}}};
    };
    return {block(r0.te_te, r0.te_tm, r0.tm_te, r0.tm_tm),
            block(r1.te_te - r0.te_te, r1.te_tm - r0.te_tm, r1.tm_te - r0.tm_te, r1.tm_tm - r0.tm_tm)};
}

double symmetrized_round_trip_element(const SpectralPoint& in, const SpectralPoint& out, const Geometry& geometry,
                                      KernelKind kind) {
    if (in.xi != out.xi) throw DomainError("spectral points must share the same frequency");
    const RoundTripKernel kernel(in.xi, geometry, kind, std::max(in.k, out.k));
    const double dphi = out.phi - in.phi;
    const auto b = kernel(in.k, out.k, std::cos(dphi), std::sin(dphi));
    return b[static_cast<int>(out.pol)][static_cast<int>(in.pol)];
}

}  // namespace casimir
