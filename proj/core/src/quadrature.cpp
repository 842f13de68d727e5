#include "casimir/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ConfigError("Gauss-Legendre needs n >= 1");
    QuadratureRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
        }
        const double w = 2 / ((1 - z * z) * dp * dp);
        rule.x[i] = mid - half * z;
        rule.x[n - 1 - i] = mid + half * z;
        rule.w[i] = rule.w[n - 1 - i] = half * w;
    }
    if (n % 2 == 1) rule.x[n / 2] = mid;
    return rule;
}

QuadratureRule composite_gauss_legendre(int n, double a, double b, int panel) {
    if (n < 1 || panel < 1) throw ConfigError("composite rule needs n >= 1 and panel >= 1");
    const int panels = (n + panel - 1) / panel;
    QuadratureRule rule;
    rule.x.reserve(n);
    rule.w.reserve(n);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const int m = n / panels + (p < n % panels ? 1 : 0);
        const auto g = gauss_legendre(m, a + p * h, a + (p + 1) * h);
        rule.x.insert(rule.x.end(), g.x.begin(), g.x.end());
        rule.w.insert(rule.w.end(), g.w.begin(), g.w.end());
    }
    return rule;
}

void QuadratureConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid quadrature config: " + what); };
    if (n_radial != 0 && n_radial < 4) fail("n_radial must be >= 4");
    if (n_azimuthal != 0 && (n_azimuthal < 4 || !std::has_single_bit(static_cast<unsigned>(n_azimuthal))))
        fail("n_azimuthal must be a power of two >= 4");
    if (n_xi < 4) fail("n_xi must be >= 4");
    if (radial_panel < 2) fail("radial_panel must be >= 2");
    if (!(k_cut > 0)) fail("k_cut must be > 0");
    if (!(radial_density > 0)) fail("radial_density must be > 0");
    if (!(xi_scale > 0)) fail("xi_scale must be > 0");
    if (!(u_max > 0)) fail("u_max must be > 0");
    if (!(m_tol > 0)) fail("m_tol must be > 0");
    if (!(eta_cut > 0)) fail("eta_cut must be > 0");
    if (n_azimuthal != 0 && m_max > n_azimuthal / 2) fail("m_max must not exceed n_azimuthal / 2");
    if (threads < 1) fail("threads must be >= 1");
    if (!std::isfinite(azimuth_offset)) fail("azimuth_offset must be finite");
}

QuadratureConfig QuadratureConfig::resolved(const Geometry& geometry) const {
    validate();
    QuadratureConfig c = *this;
    const double sq = std::sqrt(geometry.aspect_ratio());
    if (c.n_radial == 0) {
        // the kernel is a Gaussian of width ~0.7 (R/L)^{-1/2} in t = sqrt((k + kappa) L)
        const int n = static_cast<int>(std::ceil(32 + radial_density * std::sqrt(2 * c.k_cut) * sq));
        c.n_radial = (n + c.radial_panel - 1) / c.radial_panel * c.radial_panel;
    }
    if (c.n_azimuthal == 0) {
        const int m_estimate = static_cast<int>(std::ceil(2 * sq)) + 4;
        c.n_azimuthal = std::max(64, static_cast<int>(std::bit_ceil(static_cast<unsigned>(8 * m_estimate))));
    }
    if (c.m_max > c.n_azimuthal / 2) throw ConfigError("invalid quadrature config: m_max must not exceed n_azimuthal / 2");
    return c;
}

QuadratureRule radial_grid(double xi, const Geometry& geometry, const QuadratureConfig& config) {
    if (config.n_radial < 4) throw ConfigError("radial grid needs a resolved config");
    // t = sqrt((k + kappa) L) is uniform in units of the kernel width; the
    // inverse is k L = (t^2 - (xi L)^2 / t^2) / 2.
    const double L = geometry.L();
    const double x = xi * L;
    const double q = config.k_cut;
    const double k_max = std::sqrt(q * (q + 2 * x));
    const double t_min = std::sqrt(x), t_max = std::sqrt(k_max + x + q);
    auto rule = composite_gauss_legendre(config.n_radial, t_min, t_max, config.radial_panel);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double t = rule.x[i], t2 = t * t;
        rule.x[i] = 0.5 * (t2 - x * x / t2) / L;
        rule.w[i] *= (t + x * x / (t2 * t)) / L;
    }
    return rule;
}

QuadratureRule xi_grid(const Geometry& geometry, const QuadratureConfig& config) {
    const auto t = gauss_legendre(config.n_xi, 0, 1);
    QuadratureRule rule;
    for (int i = 0; i < config.n_xi; ++i) {
        const double r = t.x[i] / (1 - t.x[i]);
        const double u = config.xi_scale * r * r;
        if (u > config.u_max) continue;
        const double du_dt = config.xi_scale * 2 * r / ((1 - t.x[i]) * (1 - t.x[i]));
        rule.x.push_back(u / (2 * geometry.L()));
        rule.w.push_back(t.w[i] * du_dt / (2 * geometry.L()));
    }
    return rule;
}

}  // namespace casimir
