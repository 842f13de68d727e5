#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir::report {

namespace {

Json exact_beta(const ExactBeta& b) {
    return Json{{"value", b.value()}, {"exact", b.str()}};
}

struct Column {
    std::string name;
    std::function<std::string(const EnergyReport&)> get;
    std::function<void(EnergyReport&, const std::string&)> set;
};

double parse_double(const std::string& s) {
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("bad number in CSV: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("bad integer in CSV: '" + s + "'");
    return v;
}

template <class T>
Column real(std::string name, T EnergyReport::*field) {
    return {std::move(name), [field](const EnergyReport& r) { return format_double(r.*field); },
            [field](EnergyReport& r, const std::string& s) { r.*field = parse_double(s); }};
}

template <class T>
Column config_real(std::string name, T QuadratureConfig::*field) {
    return {std::move(name), [field](const EnergyReport& r) { return format_double(r.config.*field); },
            [field](EnergyReport& r, const std::string& s) { r.config.*field = parse_double(s); }};
}

Column config_int(std::string name, int QuadratureConfig::*field) {
    return {std::move(name), [field](const EnergyReport& r) { return std::to_string(r.config.*field); },
            [field](EnergyReport& r, const std::string& s) { r.config.*field = parse_int(s); }};
}

Column config_bool(std::string name, bool QuadratureConfig::*field) {
    return {std::move(name), [field](const EnergyReport& r) { return std::string(r.config.*field ? "1" : "0"); },
            [field](EnergyReport& r, const std::string& s) {
                if (s != "0" && s != "1") throw ConfigError("bad flag in CSV: '" + s + "'");
                r.config.*field = s == "1";
            }};
}

const std::vector<Column>& columns() {
    static const std::vector<Column> cols = {
        real("R", &EnergyReport::R),
        real("L", &EnergyReport::L),
        {"kernel", [](const EnergyReport& r) { return std::string(to_string(r.kernel)); },
         [](EnergyReport& r, const std::string& s) { r.kernel = parse_kernel_kind(s); }},
        real("energy", &EnergyReport::energy),
        real("energy_pfa", &EnergyReport::energy_pfa),
        real("ratio_to_pfa", &EnergyReport::ratio_to_pfa),
        real("m_tail_max", &EnergyReport::m_tail_max),
        real("xi_tail", &EnergyReport::xi_tail),
        real("radial_tail", &EnergyReport::radial_tail),
        config_int("n_radial", &QuadratureConfig::n_radial),
        config_real("radial_density", &QuadratureConfig::radial_density),
        config_real("k_cut", &QuadratureConfig::k_cut),
        config_int("radial_panel", &QuadratureConfig::radial_panel),
        config_int("n_azimuthal", &QuadratureConfig::n_azimuthal),
        config_real("azimuth_offset", &QuadratureConfig::azimuth_offset),
        config_int("n_xi", &QuadratureConfig::n_xi),
        config_real("xi_scale", &QuadratureConfig::xi_scale),
        config_real("u_max", &QuadratureConfig::u_max),
        config_int("m_max", &QuadratureConfig::m_max),
        config_real("m_tol", &QuadratureConfig::m_tol),
        config_real("eta_cut", &QuadratureConfig::eta_cut),
        config_bool("diffraction_first_order", &QuadratureConfig::diffraction_first_order),
        config_bool("full_blocks", &QuadratureConfig::full_blocks),
        config_int("threads", &QuadratureConfig::threads),
    };
    return cols;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const QuadratureConfig& c) {
    return Json{{"n_radial", c.n_radial},
                {"radial_density", c.radial_density},
                {"k_cut", c.k_cut},
                {"radial_panel", c.radial_panel},
                {"n_azimuthal", c.n_azimuthal},
                {"azimuth_offset", c.azimuth_offset},
                {"n_xi", c.n_xi},
                {"xi_scale", c.xi_scale},
                {"u_max", c.u_max},
                {"m_max", c.m_max},
                {"m_tol", c.m_tol},
                {"eta_cut", c.eta_cut},
                {"diffraction_first_order", c.diffraction_first_order},
                {"full_blocks", c.full_blocks},
                {"threads", c.threads}};
}

Json to_json(const EnergyReport& r, std::optional<double> length_unit_m) {
    Json j{{"R", r.R},
           {"L", r.L},
           {"aspect_ratio", r.R / r.L},
           {"kernel", std::string(to_string(r.kernel))},
           {"energy", r.energy},
           {"energy_pfa", r.energy_pfa},
           {"ratio_to_pfa", r.ratio_to_pfa},
           {"units", "hbar c / L"}};
    if (length_unit_m) {
        const double scale = hbar_c_si / (r.L * *length_unit_m);
        j["energy_J"] = r.energy * scale;
        j["energy_pfa_J"] = r.energy_pfa * scale;
    }
    j["convergence"] = Json{{"m_tail_max", r.m_tail_max}, {"xi_tail", r.xi_tail}, {"radial_tail", r.radial_tail}};
    j["config"] = to_json(r.config);
    Json samples = Json::array();
    for (const auto& s : r.samples)
        samples.push_back(Json{{"xi", s.xi},
                               {"weight", s.weight},
                               {"integrand", s.integrand},
                               {"m_max", s.m_max},
                               {"m_tail", s.m_tail},
                               {"pairs", s.pairs}});
    j["samples"] = std::move(samples);
    return j;
}

Json to_json(const BetaBundle& b) {
    Json pct = Json::object();
    const char* names[] = {"diffraction_TE", "diffraction_TM", "geometrical_optics_TE", "geometrical_optics_TM"};
    for (int i = 0; i < 4; ++i) pct[names[i]] = b.table_percentages[i];
    return Json{{"beta1", exact_beta(b.beta1)},
                {"beta_d", exact_beta(b.beta_d)},
                {"beta_go", exact_beta(b.beta_go)},
                {"beta_d_TE", exact_beta(b.beta_d_te)},
                {"beta_d_TM", exact_beta(b.beta_d_tm)},
                {"beta_TE", exact_beta(b.beta_te)},
                {"beta_TM", exact_beta(b.beta_tm)},
                {"beta_DD", exact_beta(b.beta_dd)},
                {"beta_NN", exact_beta(b.beta_nn)},
                {"percentages", std::move(pct)}};
}

Json to_json(const BetaFit& f) {
    return Json{{"beta", f.beta}, {"standard_error", f.standard_error}, {"curvature", f.curvature}, {"samples", f.samples}};
}

Json to_json(const std::vector<OracleCheck>& checks) {
    Json arr = Json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back(Json{{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
        all = all && c.passed;
    }
    return Json{{"passed", all}, {"checks", std::move(arr)}};
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : columns()) n.push_back(c.name);
        return n;
    }();
    return names;
}

std::string emit_csv(const std::vector<EnergyReport>& reports) {
    std::string out;
    const auto& cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i].name;
    out += '\n';
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i].get(r);
        out += '\n';
    }
    return out;
}

std::vector<EnergyReport> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty CSV");
    const auto& cols = columns();
    if (split(line) != csv_columns()) throw ConfigError("unexpected CSV header");
    std::vector<EnergyReport> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != cols.size()) throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells");
        EnergyReport r;
        for (std::size_t i = 0; i < cols.size(); ++i) cols[i].set(r, cells[i]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace casimir::report
