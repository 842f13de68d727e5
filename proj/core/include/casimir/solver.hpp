#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "casimir/kinematics.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"

namespace casimir {

// Real symmetric block of the discretized round-trip operator for azimuthal
// index m at frequency xi. Rows/columns 0..n-1 are TE channels at the radial
// nodes, n..2n-1 the TM channels. The TM part is conjugated with i so that the
// block is real.
struct BlockMatrix {
    int m = 0;
    double xi = 0;
    int n_radial = 0;
    Eigen::MatrixXd entries;
};

// Blocks for m = 0..m_max (fixed or automatic per config). The config must be
// resolved.
std::vector<BlockMatrix> build_blocks(double xi, const Geometry& geometry, KernelKind kind,
                                      const QuadratureConfig& config);

// Frobenius norms ||M_m||_F for m = 0..n_azimuthal/2, for the m-cutoff study.
std::vector<double> block_norms(double xi, const Geometry& geometry, KernelKind kind, const QuadratureConfig& config);

// (2 - delta_{m0}) ln det(1 - M_m) through a Cholesky factorization.
double log_det_contribution(const BlockMatrix& block);

struct MercatorEstimate {
    double value = 0;           // -(2 - delta_{m0}) sum_{r <= r_max} tr(M^r) / r
    double bound = 0;           // sum over eigenvalues of |lambda|^{r+1} / ((r+1)(1 - |lambda|)), same multiplicity
    double spectral_radius = 0;
};

MercatorEstimate mercator_log_det(const BlockMatrix& block, int r_max);

// sum_m (2 - delta_{m0}) tr(M_m^r) at one frequency.
double trace_Mr_numeric(int r, double xi, const Geometry& geometry, KernelKind kind, const QuadratureConfig& config);

struct XiSample {
    double xi = 0;
    double weight = 0;
    double integrand = 0;  // sum_m (2 - delta_{m0}) ln det(1 - M_m)
    int m_max = 0;
    double m_tail = 0;  // ||M_{m_max}||_F / ||M_0||_F
    std::size_t pairs = 0;
};

struct EnergyReport {
    double R = 0;
    double L = 0;
    KernelKind kernel = KernelKind::Wkb1;
    QuadratureConfig config;  // resolved
    double energy = 0;        // hbar c / L
    double energy_pfa = 0;    // hbar c / L
    double ratio_to_pfa = 0;
    double m_tail_max = 0;
    double xi_tail = 0;      // |last node contribution| / |energy|
    double radial_tail = 0;  // exp(-2 k_cut)
    std::vector<XiSample> samples;
};

EnergyReport energy(const Geometry& geometry, KernelKind kind, const QuadratureConfig& config);

struct ConvergenceEstimate {
    std::string knob;
    double value = 0;            // refined knob value
    double relative_change = 0;  // |E_refined / E - 1|
};

// Re-runs energy() with one knob refined at a time.
std::vector<ConvergenceEstimate> convergence_study(const Geometry& geometry, KernelKind kind,
                                                   const QuadratureConfig& config, const EnergyReport& base);

}  // namespace casimir
