#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <cstddef>
#include <utility>
#include <vector>

#include "casimir/kinematics.hpp"
#include "casimir/reflection.hpp"

namespace casimir {

// Central-difference stencil with Richardson extrapolation in h^2. step is
// relative to kappa_sp; 0 means an automatic sweep over three decades.
struct DerivativeStencil {
    int order = 2;
    double step = 0;
    int richardson_levels = 4;
    void validate() const;
};

// W_{jl} = r^{-1/2} exp(2 pi i j l / r).
Eigen::MatrixXcd w_transform(int r);

// Real chart for the v-coordinates. Points are stored as
// (k_{0,x}, k_{0,y}, k_{1,x}, ..., k_{r-1,y}); derivatives are taken as real
// partials in these 2r coordinates at the saddle point k_j = k_sp and
// contracted with the columns of W:
//   d/dv_{l,alpha} = sum_j W_{jl} d/dk_{j,alpha}.
// Since W_{j,r-l} = conj(W_{jl}), the pair (v_l, v_{r-l}) carries the real
// and imaginary parts of one complex Fourier mode. The saddle point is placed
// at azimuth 0.3 rad so that x and y components are both exercised.
struct NumericAppendix {
    double D1 = 0;
    double D2 = 0;
    double D3_over_g = 0;
    double F1_over_g = 0;
    double error_estimate = 0;  // largest plateau spread among D1, D2, D3
};

NumericAppendix numeric_F1(int r, double xi, double kappa_sp, double L, const DerivativeStencil& stencil = {});

// Residuals of the terms that vanish at the saddle point:
//   g_first = max_{i != 0} |g_{i alpha}| / ||grad g|| off the saddle,
//   f_ijj   = max_{i != 0, j} |sum_beta f_{i alpha, j beta, jbar beta}| / max |f_{ijk}|.
struct VanishingTerms {
    double g_first = 0;
    double f_ijj = 0;
};

VanishingTerms vanishing_terms(int r, double xi, double kappa_sp, double L);

struct HessianCheck {
    double block_residual = 0;           // max |H_xx - Gamma_r/(2 kappa)|, same for yy, times kappa
    double cross_residual = 0;           // max |H_xy| times kappa
    double eigenvalue_residual = 0;      // max |eig(H_xx) - lambda_j| times kappa
    double counter_diagonal_residual = 0;  // max |(W^T H_xx W)_{jl} - lambda_j delta_{j, r-l}| times kappa
};

HessianCheck hessian_check(int r, double xi, double kappa_sp);

// |grad f| on the saddle manifold and at a point displaced off it, both times
// kappa_sp / |k_sp| scale-free.
struct SaddleGradient {
    double on_manifold = 0;
    double off_manifold = 0;
};

SaddleGradient saddle_gradient(int r, double xi, double kappa_sp);

// P(k): polarization sum of g at leading order (g / prod e^{-2 kappa L}/kappa),
// X(k): total tilt sum_j (chi_in + chi_out) of the r scatterings.
// second_derivative = max_{i,alpha} |P_{i alpha, ibar alpha}| / 2, product_form
// = max |X_{i alpha} X_{ibar alpha}|, difference = max |P_{..}/2 + X_i X_ibar|,
// all times kappa_sp^2.
struct PolarizationMixing {
    double second_derivative = 0;
    double product_form = 0;
    double difference = 0;
    double first_derivative = 0;  // max |P_{i alpha}| times kappa_sp
    double chi_at_saddle = 0;
};

PolarizationMixing polarization_mixing_cancellation(int r, double xi, double kappa_sp);

// Third derivatives of eta_{p,p+1} contracted over Cartesian components for
// the argument classes of the D1 lattice sum.
struct DpqClasses {
    double d = 0;  // (3/4) k_sp^2 / kappa_sp^6
    double ppp_qqq = 0;
    double p1pp_qqq = 0;
    double ppp_q1qq = 0;
    double p1pp_q1qq = 0;
    double p1pp_qq1q = 0;
    double p1pp_qqq1 = 0;
};

DpqClasses dpq_classes(double xi, double kappa_sp);

struct BruteForceTrace {
    double value = 0;
    double error_estimate = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// tr M^r for r = 1, 2 by nested adaptive Gauss-Kronrod quadrature over the
// transverse wave vectors. For r = 2 the overall rotation is integrated out
// and the relative azimuth runs over [0, pi] using the psi -> -psi symmetry.
BruteForceTrace brute_force_trace(int r, double xi, const Geometry& geometry, KernelKind kind,
                                  double rel_tol = 1e-6, double kernel_scale = 1.0,
                                  std::size_t max_evaluations = 100'000'000);

enum class FitModel { Linear, Quadratic };

struct BetaFit {
    double beta = 0;
    double standard_error = 0;
    double curvature = 0;  // (L/R)^2 coefficient, quadratic model only
    int samples = 0;
};

// Least squares of ratio - 1 against L/R (and (L/R)^2) through the origin.
// samples are (R/L, E/E_PFA).
BetaFit beta_fit(const std::vector<std::pair<double, double>>& samples, FitModel model);

struct OracleCheck {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool passed = false;
};

// Oracle battery over r = 2..5 and a 3 x 3 grid of (xi, kappa_sp / xi) at
// L = 1: numeric vs closed-form D and F1 terms, vanishing terms, Hessian
// spectrum (r <= 8), saddle gradient, polarization mixing and d_pq classes.
std::vector<OracleCheck> verification_suite();

}  // namespace casimir
