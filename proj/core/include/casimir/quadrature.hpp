#pragma once

#include <vector>

#include "casimir/kinematics.hpp"

namespace casimir {

struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1, double b = 1);

// Composite Gauss-Legendre on [a, b] with n nodes split into equal panels of
// at most `panel` nodes.
QuadratureRule composite_gauss_legendre(int n, double a, double b, int panel);

struct QuadratureConfig {
    // radial grid: composite Gauss-Legendre in t = sqrt((k + kappa) L) covering
    // k in [0, k_max(xi)] with kappa(k_max) = xi + k_cut / L
    int n_radial = 0;  // 0: default for the geometry
    double radial_density = 2;  // default n_radial ~ radial_density sqrt(2 k_cut R/L)
    double k_cut = 10;
    int radial_panel = 16;
    // azimuthal grid: n_azimuthal equidistant angles (power of two)
    int n_azimuthal = 0;  // 0: default for the geometry
    double azimuth_offset = 0;
    // frequency grid: u = 2 xi L = xi_scale (t / (1 - t))^2, Gauss-Legendre in t
    int n_xi = 40;
    double xi_scale = 2;
    double u_max = 100;  // nodes beyond carry less than e^{-u_max}
    // azimuthal index cutoff; negative: stop once ||M_m||_F < m_tol ||M_0||_F
    int m_max = -1;
    double m_tol = 1e-10;
    // channel pairs with R eta > eta_cut at dphi = 0 are dropped (|entry| < e^{-eta_cut})
    double eta_cut = 40;
    // wkb1 only: expand ln det(1 - M_0 - dM) to first order in the diffraction
    // correction dM, i.e. ln det(1 - M_0) - tr[(1 - M_0)^{-1} dM]. The full
    // determinant is not defined once xi R < ~0.1, where dM ~ 1/(kappa R).
    bool diffraction_first_order = true;
    // evaluate both triangles of every block and the full azimuthal circle
    bool full_blocks = false;
    int threads = 1;

    void validate() const;
    // Copy with geometry-dependent defaults filled in.
    QuadratureConfig resolved(const Geometry& geometry) const;
};

QuadratureRule radial_grid(double xi, const Geometry& geometry, const QuadratureConfig& config);

// Frequency nodes xi_j and weights (dxi); nodes with u > u_max are dropped.
QuadratureRule xi_grid(const Geometry& geometry, const QuadratureConfig& config);

}  // namespace casimir
