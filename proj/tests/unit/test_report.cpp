#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/solver.hpp"
#include "report.hpp"

using namespace casimir;

namespace {

EnergyReport random_report(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> n(4, 4096);
    EnergyReport r;
    r.R = 1e3 * std::abs(u(rng)) + 1e-3;
    r.L = std::abs(u(rng)) + 1e-6;
    r.kernel = static_cast<KernelKind>(n(rng) % 3);
    r.energy = -std::exp(30 * u(rng));
    r.energy_pfa = -std::exp(30 * u(rng));
    r.ratio_to_pfa = u(rng) / 3;
    r.m_tail_max = std::exp(40 * u(rng));
    r.xi_tail = std::exp(40 * u(rng));
    r.radial_tail = std::exp(-40 * std::abs(u(rng)));
    auto& c = r.config;
    c.n_radial = n(rng);
    c.radial_density = 1 + u(rng) * 0.5;
    c.k_cut = 10 + u(rng);
    c.radial_panel = n(rng) % 32 + 2;
    c.n_azimuthal = 1 << (n(rng) % 10 + 2);
    c.azimuth_offset = u(rng);
    c.n_xi = n(rng);
    c.xi_scale = 2 + u(rng);
    c.u_max = 100 + u(rng);
    c.m_max = n(rng) % 50 - 1;
    c.m_tol = std::exp(20 * u(rng));
    c.eta_cut = 40 + u(rng);
    c.diffraction_first_order = n(rng) % 2;
    c.full_blocks = n(rng) % 2;
    c.threads = n(rng) % 8 + 1;
    return r;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("CSV round trip is bitwise") {
        std::mt19937 rng(17);
        std::vector<EnergyReport> in;
        for (int i = 0; i < 50; ++i) in.push_back(random_report(rng));
        const auto text = report::emit_csv(in);
        const auto out = report::parse_csv(text);
        REQUIRE(out.size() == in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
            const auto &a = in[i], &b = out[i];
            CHECK(a.R == b.R);
            CHECK(a.L == b.L);
            CHECK(a.kernel == b.kernel);
            CHECK(a.energy == b.energy);
            CHECK(a.energy_pfa == b.energy_pfa);
            CHECK(a.ratio_to_pfa == b.ratio_to_pfa);
            CHECK(a.m_tail_max == b.m_tail_max);
            CHECK(a.xi_tail == b.xi_tail);
            CHECK(a.radial_tail == b.radial_tail);
            CHECK(a.config.n_radial == b.config.n_radial);
            CHECK(a.config.radial_density == b.config.radial_density);
            CHECK(a.config.k_cut == b.config.k_cut);
            CHECK(a.config.radial_panel == b.config.radial_panel);
            CHECK(a.config.n_azimuthal == b.config.n_azimuthal);
            CHECK(a.config.azimuth_offset == b.config.azimuth_offset);
            CHECK(a.config.n_xi == b.config.n_xi);
            CHECK(a.config.xi_scale == b.config.xi_scale);
            CHECK(a.config.u_max == b.config.u_max);
            CHECK(a.config.m_max == b.config.m_max);
            CHECK(a.config.m_tol == b.config.m_tol);
            CHECK(a.config.eta_cut == b.config.eta_cut);
            CHECK(a.config.diffraction_first_order == b.config.diffraction_first_order);
            CHECK(a.config.full_blocks == b.config.full_blocks);
            CHECK(a.config.threads == b.config.threads);
        }
        CHECK(report::emit_csv(out) == text);
    }

    TEST_CASE("empty input gives the header only") {
        const auto text = report::emit_csv({});
        std::string header;
        for (const auto& c : report::csv_columns()) header += (header.empty() ? "" : ",") + c;
        CHECK(text == header + "\n");
        CHECK(report::parse_csv(text).empty());
        CHECK(report::csv_columns().front() == "R");
        CHECK(report::csv_columns().size() == 24);
    }

    TEST_CASE("fixed-precision formatting") {
        CHECK(report::format_double(0.1) == "0.10000000000000001");
        CHECK(report::format_double(-2.5) == "-2.5");
    }

    TEST_CASE("JSON output is deterministic and carries SI energies on request") {
        std::mt19937 rng(23);
        const auto r = random_report(rng);
        CHECK(report::to_json(r).dump() == report::to_json(r).dump());
        CHECK(!report::to_json(r).contains("energy_J"));
        const auto j = report::to_json(r, 1e-6);
        REQUIRE(j.contains("energy_J"));
        CHECK(j["energy_J"].get<double>() == doctest::Approx(r.energy * report::hbar_c_si / (r.L * 1e-6)).epsilon(1e-14));
        const auto b = report::to_json(beta_bundle());
        CHECK(b.dump() == report::to_json(beta_bundle()).dump());
    }
}
