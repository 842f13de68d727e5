#include "casimir/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <fftw3.h>

#include "casimir/asymptotics.hpp"
#include "casimir/errors.hpp"

extern "C" void dpbtrf_(const char* uplo, const int* n, const int* kd, double* ab, const int* ldab, int* info);

namespace casimir {

namespace {

// Symmetric band matrix, lower storage: (i, j) with 0 <= i - j <= kd at
// ab[j * (kd + 1) + (i - j)] (LAPACK 'L' layout).
struct BandMatrix {
    int n = 0;
    int kd = 0;
    std::vector<double> ab;

    void reset(int n_, int kd_) {
        n = n_;
        kd = kd_;
        ab.assign(static_cast<std::size_t>(n) * (kd + 1), 0.0);
    }
    double& at(int i, int j) { return ab[static_cast<std::size_t>(j) * (kd + 1) + (i - j)]; }
    double at(int i, int j) const {
        if (i < j) std::swap(i, j);
        return i - j > kd ? 0.0 : ab[static_cast<std::size_t>(j) * (kd + 1) + (i - j)];
    }
};

// In place: B -> Cholesky factor of 1 - B.
void factor_one_minus(BandMatrix& b, int m, double xi) {
    for (double& v : b.ab) v = -v;
    for (int j = 0; j < b.n; ++j) b.at(j, j) += 1.0;
    const int ldab = b.kd + 1;
    int info = 0;
    dpbtrf_("L", &b.n, &b.kd, b.ab.data(), &ldab, &info);
    if (info != 0) {
        std::ostringstream os;
        os << "1 - M is not positive definite at xi=" << xi << " m=" << m << " (round trip not contractive)";
        throw NonPhysicalKernel(os.str());
    }
}

double log_det(const BandMatrix& l) {
    double s = 0;
    for (int j = 0; j < l.n; ++j) s += std::log(l.at(j, j));
    return 2 * s;
}

// Entries of (L L^T)^{-1} inside the band (Takahashi recurrences).
BandMatrix selected_inverse(const BandMatrix& l) {
    BandMatrix z;
    z.reset(l.n, l.kd);
    const int n = l.n, kd = l.kd;
    const std::size_t ld = kd + 1;
    const double* lab = l.ab.data();
    double* zab = z.ab.data();
    for (int i = n - 1; i >= 0; --i) {
        const int kend = std::min(n - 1, i + kd);
        const double* li = lab + i * ld;  // li[k - i] = L(k, i)
        const double lii = li[0];
        for (int j = kend; j >= i; --j) {
            double s = j == i ? 1 / lii : 0.0;
            for (int k = i + 1; k < j; ++k) s -= li[k - i] * zab[k * ld + (j - k)];
            const double* zj = zab + j * ld;
            for (int k = std::max(j, i + 1); k <= kend; ++k) s -= li[k - i] * zj[k - j];
            zab[i * ld + (j - i)] = s / lii;
        }
    }
    return z;
}

double trace_product(const BandMatrix& z, const BandMatrix& d) {
    double s = 0;
    for (int j = 0; j < d.n; ++j) {
        s += z.at(j, j) * d.at(j, j);
        for (int i = j + 1; i <= std::min(d.n - 1, j + d.kd); ++i) s += 2 * z.at(i, j) * d.at(i, j);
    }
    return s;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::mutex fftw_planner_mutex;

// In place over rows of samples at angles 2 pi d / nphi, d = 0..nphi/2:
// even rows -> sum_d mult_d f_d cos(2 pi m d / nphi) (DCT-I),
// odd rows -> sum_d mult_d f_d sin(2 pi m d / nphi) (DST-I), mult_d = 2 inside.
void half_circle_transform(RowMatrix& even, RowMatrix& odd, int nphi) {
    const int nd = nphi / 2 + 1;
    const int rows = static_cast<int>(even.rows());
    if (rows == 0) return;
    fftw_plan pe, po;
    {
        std::lock_guard lock(fftw_planner_mutex);
        const fftw_r2r_kind kc = FFTW_REDFT00, ks = FFTW_RODFT00;
        const int ne = nd, no = nd - 2;
        pe = fftw_plan_many_r2r(1, &ne, rows, even.data(), nullptr, 1, nd, even.data(), nullptr, 1, nd, &kc,
                                FFTW_ESTIMATE);
        po = no > 0 ? fftw_plan_many_r2r(1, &no, rows, odd.data() + 1, nullptr, 1, nd, odd.data() + 1, nullptr, 1,
                                         nd, &ks, FFTW_ESTIMATE)
                    : nullptr;
    }
    fftw_execute(pe);
    if (po) fftw_execute(po);
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(pe);
        if (po) fftw_destroy_plan(po);
    }
    // DST-I output j (m = j + 1) sits at column m already; sin vanishes at m = 0, nphi/2
    odd.col(0).setZero();
    odd.col(nd - 1).setZero();
}

// Azimuthal Fourier transform of the symmetrized kernel on the radial grid.
// Row 2p / 2p+1 of even_ holds the TE-TE / TM-TM entry of channel pair p,
// row 2p / 2p+1 of odd_ the TE(a)<-TM(b) / TM(a)<-TE(b) entry; column m.
class AzimuthalTransform {
public:
    AzimuthalTransform(double xi, const Geometry& geometry, KernelKind kind, const QuadratureConfig& config)
        : xi_(xi), full_(config.full_blocks) {
        const auto grid = radial_grid(xi, geometry, config);
        n_ = static_cast<int>(grid.x.size());
        const int nphi = config.n_azimuthal;
        m_cap_ = nphi / 2;
        const int nd = full_ ? nphi : nphi / 2 + 1;
        const RoundTripKernel kernel(xi, geometry, kind, grid.x.back());

        std::vector<double> sw(n_);
        for (int a = 0; a < n_; ++a) sw[a] = std::sqrt(grid.x[a] * grid.w[a]);

        const double R = geometry.R();
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < (full_ ? n_ : a + 1); ++b)
                if (R * eta(xi, grid.x[b], grid.x[a], 1.0) <= config.eta_cut) {
                    pa_.push_back(a);
                    pb_.push_back(b);
                    reach_ = std::max(reach_, std::abs(a - b));
                }

        // angles and transform tables
        std::vector<double> cphi(nd), sphi(nd);
        for (int d = 0; d < nd; ++d) {
            const double phi_in = config.azimuth_offset;
            const double phi_out = config.azimuth_offset + 2 * std::numbers::pi * d / nphi;
            const double dphi = phi_out - phi_in;
            cphi[d] = std::cos(dphi);
            sphi[d] = std::sin(dphi);
        }
        Eigen::MatrixXd ctab, stab;
        if (full_) {
            ctab.resize(nd, m_cap_ + 1);
            stab.resize(nd, m_cap_ + 1);
            for (int d = 0; d < nd; ++d)
                for (int m = 0; m <= m_cap_; ++m) {
                    const double ang = 2 * std::numbers::pi * (static_cast<long>(m) * d % nphi) / nphi;
                    ctab(d, m) = std::cos(ang);
                    stab(d, m) = std::sin(ang);
                }
        }

        split_ = kind == KernelKind::Wkb1 && config.diffraction_first_order;
        const auto pairs = static_cast<Eigen::Index>(pa_.size());
        const int layers = split_ ? 2 : 1;
        for (int layer = 0; layer < layers; ++layer) {
            even_[layer].resize(2 * pairs, m_cap_ + 1);
            odd_[layer].resize(2 * pairs, m_cap_ + 1);
        }
        constexpr Eigen::Index chunk = 1024;
        RowMatrix se[2], so[2];
        for (Eigen::Index p0 = 0; p0 < pairs; p0 += chunk) {
            const Eigen::Index np = std::min(chunk, pairs - p0);
            for (int layer = 0; layer < layers; ++layer) {
                se[layer].resize(2 * np, nd);
                so[layer].resize(2 * np, nd);
            }
            for (Eigen::Index p = 0; p < np; ++p) {
                const int a = pa_[p0 + p], b = pb_[p0 + p];
                const double w = sw[a] * sw[b] / (2 * std::numbers::pi * nphi);
                for (int d = 0; d < nd; ++d) {
                    const double wd = w;
                    auto store = [&](int layer, const PolarizationBlock& k) {
                        se[layer](2 * p, d) = wd * k[0][0];
                        se[layer](2 * p + 1, d) = wd * k[1][1];
                        so[layer](2 * p, d) = wd * k[0][1];
                        so[layer](2 * p + 1, d) = -wd * k[1][0];
                    };
                    if (split_) {
                        const auto k = kernel.split(grid.x[b], grid.x[a], cphi[d], sphi[d]);
                        store(0, k.leading);
                        store(1, k.correction);
                    } else {
                        store(0, kernel(grid.x[b], grid.x[a], cphi[d], sphi[d]));
                    }
                }
            }
            for (int layer = 0; layer < layers; ++layer) {
                if (full_) {
                    even_[layer].middleRows(2 * p0, 2 * np).noalias() = se[layer] * ctab;
                    odd_[layer].middleRows(2 * p0, 2 * np).noalias() = so[layer] * stab;
                } else {
                    half_circle_transform(se[layer], so[layer], nphi);
                    even_[layer].middleRows(2 * p0, 2 * np) = se[layer];
                    odd_[layer].middleRows(2 * p0, 2 * np) = so[layer];
                }
            }
        }
    }

    int n() const { return n_; }
    int m_cap() const { return m_cap_; }
    bool split() const { return split_; }
    std::size_t pairs() const { return pa_.size(); }

    double frobenius(int m) const {
        double s = 0;
        for (std::size_t p = 0; p < pa_.size(); ++p) {
            const double f = (!full_ && pa_[p] != pb_[p]) ? 2.0 : 1.0;
            const auto i = static_cast<Eigen::Index>(2 * p);
            const double e0 = entry(even_, i, m), e1 = entry(even_, i + 1, m);
            const double o0 = entry(odd_, i, m), o1 = entry(odd_, i + 1, m);
            s += f * (e0 * e0 + e1 * e1 + o0 * o0 + o1 * o1);
        }
        return std::sqrt(s);
    }

    // layer -1: full kernel; 0: leading part; 1: diffraction correction (split mode).
    void fill(int m, Eigen::MatrixXd& out, int layer = -1) const {
        const int n = n_;
        out.setZero(2 * n, 2 * n);
        auto get = [&](const Eigen::MatrixXd (&t)[2], Eigen::Index i) {
            return layer < 0 ? entry(t, i, m) : t[layer](i, m);
        };
        for (std::size_t p = 0; p < pa_.size(); ++p) {
            const int a = pa_[p], b = pb_[p];
            const auto i = static_cast<Eigen::Index>(2 * p);
            const double e0 = get(even_, i), e1 = get(even_, i + 1), o0 = get(odd_, i), o1 = get(odd_, i + 1);
            out(a, b) = e0;
            out(n + a, n + b) = e1;
            out(a, n + b) = o0;
            out(n + a, b) = o1;
            if (!full_) {
                if (a != b) {
                    out(b, a) = e0;
                    out(n + b, n + a) = e1;
                    out(n + b, a) = o0;
                    out(b, n + a) = o1;
                } else {
                    const double o = 0.5 * (o0 + o1);
                    out(a, n + a) = o;
                    out(n + a, a) = o;
                }
            }
        }
    }

    // Auto cutoff: first m with ||M_m|| < tol ||M_0||, capped at m_cap.
    int auto_m_max(double tol, double* tail) const {
        const double f0 = frobenius(0);
        if (f0 == 0) {
            *tail = 0;
            return 0;
        }
        for (int m = 1; m <= m_cap_; ++m) {
            const double fm = frobenius(m);
            if (fm < tol * f0) {
                *tail = fm / f0;
                return m;
            }
        }
        *tail = frobenius(m_cap_) / f0;
        return m_cap_;
    }

    double xi() const { return xi_; }

    // Block m in band storage with interleaved channels (TE a -> 2a, TM a -> 2a+1).
    void fill_band(int m, BandMatrix& out, int layer = -1) const {
        if (full_) throw CapabilityError("band storage needs the lower-triangle pair list");
        out.reset(2 * n_, 2 * reach_ + 1);
        auto get = [&](const Eigen::MatrixXd (&t)[2], Eigen::Index i) {
            return layer < 0 ? entry(t, i, m) : t[layer](i, m);
        };
        for (std::size_t p = 0; p < pa_.size(); ++p) {
            const int a = pa_[p], b = pb_[p];
            const auto i = static_cast<Eigen::Index>(2 * p);
            const double e0 = get(even_, i), e1 = get(even_, i + 1), o0 = get(odd_, i), o1 = get(odd_, i + 1);
            out.at(2 * a, 2 * b) = e0;
            out.at(2 * a + 1, 2 * b + 1) = e1;
            if (a != b) {
                out.at(2 * a, 2 * b + 1) = o0;
                out.at(2 * a + 1, 2 * b) = o1;
            } else {
                out.at(2 * a + 1, 2 * a) = 0.5 * (o0 + o1);
            }
        }
    }

private:
    double entry(const Eigen::MatrixXd (&t)[2], Eigen::Index i, int m) const {
        return split_ ? t[0](i, m) + t[1](i, m) : t[0](i, m);
    }

    double xi_;
    bool full_;
    bool split_ = false;
    int n_ = 0;
    int m_cap_ = 0;
    int reach_ = 0;
    std::vector<int> pa_, pb_;
    Eigen::MatrixXd even_[2], odd_[2];
};

QuadratureConfig require_resolved(const Geometry& geometry, const QuadratureConfig& config) {
    return config.resolved(geometry);
}

int choose_m_max(const AzimuthalTransform& t, const QuadratureConfig& config, double* tail) {
    if (config.m_max >= 0) {
        const int m = std::min(config.m_max, t.m_cap());
        const double f0 = t.frobenius(0);
        *tail = f0 > 0 ? t.frobenius(m) / f0 : 0;
        return m;
    }
    return t.auto_m_max(config.m_tol, tail);
}

Eigen::LLT<Eigen::MatrixXd> factor_one_minus(const Eigen::MatrixXd& block, int m, double xi) {
    Eigen::MatrixXd a = -block;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "1 - M is not positive definite at xi=" << xi << " m=" << m << " (round trip not contractive)";
        throw NonPhysicalKernel(os.str());
    }
    return llt;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    double s = 0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2 * s;
}

double log_det_one_minus(const Eigen::MatrixXd& block, int m, double xi) {
    return log_det(factor_one_minus(block, m, xi));
}

XiSample integrand_at(double xi, double weight, const Geometry& geometry, KernelKind kind,
                      const QuadratureConfig& config) {
    const AzimuthalTransform t(xi, geometry, kind, config);
    XiSample s;
    s.xi = xi;
    s.weight = weight;
    s.pairs = t.pairs();
    s.m_max = choose_m_max(t, config, &s.m_tail);
    double sum = 0;
    if (config.full_blocks) {
        Eigen::MatrixXd block, correction;
        for (int m = 0; m <= s.m_max; ++m) {
            double v;
            if (t.split()) {
                t.fill(m, block, 0);
                t.fill(m, correction, 1);
                const auto llt = factor_one_minus(block, m, xi);
                v = log_det(llt) - llt.solve(correction).trace();
            } else {
                t.fill(m, block);
                v = log_det_one_minus(block, m, xi);
            }
            sum += (m == 0 ? 1.0 : 2.0) * v;
        }
    } else {
        BandMatrix band, correction;
        for (int m = 0; m <= s.m_max; ++m) {
            double v;
            if (t.split()) {
                t.fill_band(m, band, 0);
                t.fill_band(m, correction, 1);
                factor_one_minus(band, m, xi);
                v = log_det(band) - trace_product(selected_inverse(band), correction);
            } else {
                t.fill_band(m, band);
                factor_one_minus(band, m, xi);
                v = log_det(band);
            }
            sum += (m == 0 ? 1.0 : 2.0) * v;
        }
    }
    s.integrand = sum;
    return s;
}

}  // namespace

std::vector<BlockMatrix> build_blocks(double xi, const Geometry& geometry, KernelKind kind,
                                      const QuadratureConfig& config) {
    const auto c = require_resolved(geometry, config);
    const AzimuthalTransform t(xi, geometry, kind, c);
    double tail = 0;
    const int m_max = choose_m_max(t, c, &tail);
    std::vector<BlockMatrix> out(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        out[m].m = m;
        out[m].xi = xi;
        out[m].n_radial = t.n();
        t.fill(m, out[m].entries);
    }
    return out;
}

std::vector<double> block_norms(double xi, const Geometry& geometry, KernelKind kind, const QuadratureConfig& config) {
    const auto c = require_resolved(geometry, config);
    const AzimuthalTransform t(xi, geometry, kind, c);
    std::vector<double> out(t.m_cap() + 1);
    for (int m = 0; m <= t.m_cap(); ++m) out[m] = t.frobenius(m);
    return out;
}

double log_det_contribution(const BlockMatrix& block) {
    if (block.entries.size() == 0) return 0;
    return (block.m == 0 ? 1.0 : 2.0) * log_det_one_minus(block.entries, block.m, block.xi);
}

MercatorEstimate mercator_log_det(const BlockMatrix& block, int r_max) {
    if (r_max < 1) throw DomainError("Mercator truncation needs r_max >= 1");
    const double mult = block.m == 0 ? 1.0 : 2.0;
    MercatorEstimate est;
    const Eigen::MatrixXd& m = block.entries;
    Eigen::MatrixXd power = m;
    double sum = 0;
    for (int r = 1; r <= r_max; ++r) {
        if (r > 1) power = (power * m).eval();
        sum -= power.trace() / r;
    }
    est.value = mult * sum;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    double bound = 0, radius = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double q = std::abs(es.eigenvalues()(i));
        radius = std::max(radius, q);
        if (q >= 1) {
            bound = std::numeric_limits<double>::infinity();
            continue;
        }
        bound += std::pow(q, r_max + 1) / ((r_max + 1) * (1 - q));
    }
    est.bound = mult * bound;
    est.spectral_radius = radius;
    return est;
}

double trace_Mr_numeric(int r, double xi, const Geometry& geometry, KernelKind kind, const QuadratureConfig& config) {
    if (r < 1) throw DomainError("trace_Mr_numeric needs r >= 1");
    const auto blocks = build_blocks(xi, geometry, kind, config);
    double total = 0;
    for (const auto& b : blocks) {
        double tr;
        if (r == 1) {
            tr = b.entries.trace();
        } else {
            Eigen::MatrixXd p = b.entries;
            for (int j = 1; j < r; ++j) p = (p * b.entries).eval();
            tr = p.trace();
        }
        total += (b.m == 0 ? 1.0 : 2.0) * tr;
    }
    return total;
}

EnergyReport energy(const Geometry& geometry, KernelKind kind, const QuadratureConfig& config) {
    const auto c = require_resolved(geometry, config);
    const auto nodes = xi_grid(geometry, c);
    const std::size_t n = nodes.x.size();
    std::vector<XiSample> samples(n);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                samples[i] = integrand_at(nodes.x[i], nodes.w[i], geometry, kind, c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
                return;
            }
        }
    };
    const int workers = std::min<int>(c.threads, static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    EnergyReport rep;
    rep.R = geometry.R();
    rep.L = geometry.L();
    rep.kernel = kind;
    rep.config = c;
    double integral = 0;
    for (const auto& s : samples) {
        integral += s.weight * s.integrand;
        rep.m_tail_max = std::max(rep.m_tail_max, s.m_tail);
    }
    rep.energy = geometry.L() * integral / (2 * std::numbers::pi);
    rep.energy_pfa = e_pfa(geometry);
    rep.ratio_to_pfa = rep.energy / rep.energy_pfa;
    if (!samples.empty() && integral != 0)
        rep.xi_tail = std::abs(samples.back().weight * samples.back().integrand / integral);
    rep.radial_tail = std::exp(-2 * c.k_cut);
    rep.samples = std::move(samples);
    return rep;
}

std::vector<ConvergenceEstimate> convergence_study(const Geometry& geometry, KernelKind kind,
                                                   const QuadratureConfig& config, const EnergyReport& base) {
    const auto c = require_resolved(geometry, config);
    std::vector<ConvergenceEstimate> out;
    auto run = [&](const std::string& knob, QuadratureConfig refined, double value) {
        const auto rep = energy(geometry, kind, refined);
        out.push_back({knob, value, std::abs(rep.energy / base.energy - 1)});
    };
    {
        auto r = c;
        r.n_radial = (c.n_radial * 3 / 2 + c.radial_panel - 1) / c.radial_panel * c.radial_panel;
        run("n_radial", r, r.n_radial);
    }
    {
        auto r = c;
        r.n_azimuthal = 2 * c.n_azimuthal;
        run("n_azimuthal", r, r.n_azimuthal);
    }
    {
        auto r = c;
        r.n_xi = c.n_xi * 3 / 2;
        run("n_xi", r, r.n_xi);
    }
    {
        auto r = c;
        r.k_cut = c.k_cut + 4;
        run("k_cut", r, r.k_cut);
    }
    return out;
}

}  // namespace casimir
