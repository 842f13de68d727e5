#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "casimir/asymptotics.hpp"
#include "casimir/errors.hpp"
#include "casimir/oracles.hpp"
#include "casimir/solver.hpp"
#include "report.hpp"

namespace {

using casimir::report::Json;

struct Options {
    double R = 0;
    double L = 1;
    std::string kernel = "wkb1";
    std::string format = "json";
    std::string out;
    std::optional<double> length_unit_m;
    std::optional<int> n_radial, n_azimuthal, n_xi, m_max, threads;
    std::vector<double> ratios{100, 200, 400, 800};
    std::string model = "quadratic";
    std::vector<double> u_list{0.5, 1, 2};
    int r_max = 5;
    bool convergence = false;
};

struct UsageError : casimir::Error {
    using casimir::Error::Error;
};

void add_geometry(CLI::App* cmd, Options& o) {
    cmd->add_option("--R", o.R, "sphere radius")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--L", o.L, "surface-to-surface distance (same unit as R)")->check(CLI::PositiveNumber);
    cmd->add_option("--length-unit-m", o.length_unit_m, "length unit in metres, adds SI energies")
        ->check(CLI::PositiveNumber);
}

void add_quadrature(CLI::App* cmd, Options& o) {
    cmd->add_option("--kernel", o.kernel, "round-trip kernel")
        ->check(CLI::IsMember({"exact-mie", "wkb0", "wkb1"}));
    cmd->add_option("--n-radial", o.n_radial, "radial nodes (default from R/L)");
    cmd->add_option("--n-azimuthal", o.n_azimuthal, "azimuthal FFT length, power of two (default from R/L)");
    cmd->add_option("--n-xi", o.n_xi, "frequency nodes");
    cmd->add_option("--m-max", o.m_max, "azimuthal index cutoff (default: automatic)");
    cmd->add_option("--threads", o.threads, "worker threads (default: $CASIMIR_THREADS or 1)");
}

void add_output(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output file (default: stdout)");
}

int default_threads() {
    if (const char* env = std::getenv("CASIMIR_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("CASIMIR_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

casimir::QuadratureConfig quadrature(const Options& o) {
    casimir::QuadratureConfig c;
    if (o.n_radial) c.n_radial = *o.n_radial;
    if (o.n_azimuthal) c.n_azimuthal = *o.n_azimuthal;
    if (o.n_xi) c.n_xi = *o.n_xi;
    if (o.m_max) c.m_max = *o.m_max;
    c.threads = o.threads ? *o.threads : default_threads();
    c.validate();
    return c;
}

void write(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + o.out + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + o.out + "' failed");
}

void write_json(const Options& o, const Json& j) { write(o, j.dump(2) + "\n"); }

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

int run_energy(const Options& o) {
    const casimir::Geometry g(o.R, o.L);
    const auto kind = casimir::parse_kernel_kind(o.kernel);
    const auto rep = casimir::energy(g, kind, quadrature(o));
    if (o.format == "csv") {
        write(o, casimir::report::emit_csv({rep}));
        return 0;
    }
    Json j{{"command", "energy"}, {"report", casimir::report::to_json(rep, o.length_unit_m)}};
    if (o.convergence) {
        Json conv = Json::array();
        for (const auto& c : casimir::convergence_study(g, kind, rep.config, rep))
            conv.push_back(Json{{"knob", c.knob}, {"value", c.value}, {"relative_change", c.relative_change}});
        j["convergence_study"] = std::move(conv);
    }
    write_json(o, j);
    return 0;
}

int run_pfa(const Options& o) {
    const casimir::Geometry g(o.R, o.L);
    const double e = casimir::e_pfa(g);
    if (o.format == "csv") {
        using casimir::report::format_double;
        write(o, csv_table({"R", "L", "energy"}, {{format_double(o.R), format_double(o.L), format_double(e)}}));
        return 0;
    }
    Json j{{"command", "pfa"}, {"R", o.R}, {"L", o.L}, {"energy", e}, {"units", "hbar c / L"}};
    if (o.length_unit_m) j["energy_J"] = e * casimir::report::hbar_c_si / (o.L * *o.length_unit_m);
    write_json(o, j);
    return 0;
}

int run_beta(const Options& o) {
    const auto b = casimir::beta_bundle();
    if (o.format == "csv") {
        using casimir::report::format_double;
        std::vector<std::vector<std::string>> rows;
        const std::pair<const char*, casimir::ExactBeta> items[] = {
            {"beta1", b.beta1},         {"beta_d", b.beta_d},   {"beta_go", b.beta_go},
            {"beta_d_TE", b.beta_d_te}, {"beta_d_TM", b.beta_d_tm}, {"beta_TE", b.beta_te},
            {"beta_TM", b.beta_tm},     {"beta_DD", b.beta_dd}, {"beta_NN", b.beta_nn}};
        for (const auto& [name, v] : items) rows.push_back({name, format_double(v.value()), v.str()});
        write(o, csv_table({"name", "value", "exact"}, rows));
        return 0;
    }
    write_json(o, Json{{"command", "beta"}, {"beta", casimir::report::to_json(b)}});
    return 0;
}

int run_beta_fit(const Options& o) {
    if (o.ratios.size() < 3) throw UsageError("--ratios needs at least three values");
    const auto kind = casimir::parse_kernel_kind(o.kernel);
    const auto model = o.model == "linear" ? casimir::FitModel::Linear : casimir::FitModel::Quadratic;
    std::vector<casimir::EnergyReport> reports;
    std::vector<std::pair<double, double>> samples;
    for (double ratio : o.ratios) {
        if (!(ratio > 0)) throw UsageError("--ratios must be positive");
        reports.push_back(casimir::energy(casimir::Geometry(ratio * o.L, o.L), kind, quadrature(o)));
        samples.emplace_back(ratio, reports.back().ratio_to_pfa);
    }
    const auto fit = casimir::beta_fit(samples, model);
    if (o.format == "csv") {
        write(o, casimir::report::emit_csv(reports));
        return 0;
    }
    Json reps = Json::array();
    for (const auto& r : reports) reps.push_back(casimir::report::to_json(r, o.length_unit_m));
    write_json(o, Json{{"command", "beta-fit"},
                       {"kernel", o.kernel},
                       {"model", o.model},
                       {"fit", casimir::report::to_json(fit)},
                       {"reports", std::move(reps)}});
    return 0;
}

int run_trace_terms(const Options& o) {
    if (o.r_max < 1) throw UsageError("--r-max must be >= 1");
    using casimir::Polarization;
    using casimir::report::format_double;
    std::vector<std::vector<std::string>> rows;
    Json arr = Json::array();
    for (double u : o.u_list) {
        if (!(u > 0)) throw UsageError("--u values must be positive");
        for (int r = 1; r <= o.r_max; ++r) {
            const auto te = casimir::trace_Mr_leading(r, u, Polarization::TE);
            const auto tm = casimir::trace_Mr_leading(r, u, Polarization::TM);
            const double ntlo = casimir::trace_Mr_ntlo(r, u);
            rows.push_back({std::to_string(r), format_double(u), format_double(te.r_over_l), format_double(te.constant),
                            format_double(tm.r_over_l), format_double(tm.constant), format_double(ntlo)});
            arr.push_back(Json{{"r", r},
                               {"u", u},
                               {"TE", Json{{"r_over_l", te.r_over_l}, {"constant", te.constant}}},
                               {"TM", Json{{"r_over_l", tm.r_over_l}, {"constant", tm.constant}}},
                               {"ntlo_per_polarization", ntlo}});
        }
    }
    if (o.format == "csv") {
        write(o, csv_table({"r", "u", "te_r_over_l", "te_constant", "tm_r_over_l", "tm_constant", "ntlo"}, rows));
        return 0;
    }
    write_json(o, Json{{"command", "trace-terms"}, {"terms", std::move(arr)}});
    return 0;
}

int run_verify(const Options& o) {
    const auto checks = casimir::verification_suite();
    bool passed = true;
    for (const auto& c : checks) passed = passed && c.passed;
    if (o.format == "csv") {
        using casimir::report::format_double;
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : checks)
            rows.push_back({c.name, format_double(c.residual), format_double(c.tolerance), c.passed ? "1" : "0"});
        write(o, csv_table({"name", "residual", "tolerance", "passed"}, rows));
    } else {
        write_json(o, Json{{"command", "verify"}, {"report", casimir::report::to_json(checks)}});
    }
    return passed ? 0 : 1;
}

void print_error(const std::string& kind, const std::string& message) {
    std::cout << Json{{"error", Json{{"kind", kind}, {"message", message}}}}.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir energy of a perfectly reflecting sphere in front of a plane"};
    app.require_subcommand(1);
    Options o;

    auto* energy = app.add_subcommand("energy", "energy from the round-trip determinant");
    add_geometry(energy, o);
    add_quadrature(energy, o);
    add_output(energy, o);
    energy->add_flag("--convergence", o.convergence, "refine each quadrature knob once and report the change");

    auto* pfa = app.add_subcommand("pfa", "proximity force approximation");
    add_geometry(pfa, o);
    add_output(pfa, o);

    auto* beta = app.add_subcommand("beta", "exact beta coefficients");
    add_output(beta, o);

    auto* fit = app.add_subcommand("beta-fit", "fit beta from energies over several R/L");
    fit->add_option("--L", o.L, "distance used for every sample")->check(CLI::PositiveNumber);
    fit->add_option("--ratios", o.ratios, "R/L values")->delimiter(',');
    fit->add_option("--model", o.model, "fit model")->check(CLI::IsMember({"linear", "quadratic"}));
    fit->add_option("--length-unit-m", o.length_unit_m, "length unit in metres, adds SI energies")
        ->check(CLI::PositiveNumber);
    add_quadrature(fit, o);
    add_output(fit, o);

    auto* terms = app.add_subcommand("trace-terms", "leading and NTLO round-trip traces");
    terms->add_option("--u", o.u_list, "u = 2 xi L r values")->delimiter(',');
    terms->add_option("--r-max", o.r_max, "largest round-trip number");
    add_output(terms, o);

    auto* verify = app.add_subcommand("verify", "run the oracle suite");
    add_output(verify, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (*energy) return run_energy(o);
        if (*pfa) return run_pfa(o);
        if (*beta) return run_beta(o);
        if (*fit) return run_beta_fit(o);
        if (*terms) return run_trace_terms(o);
        if (*verify) return run_verify(o);
    } catch (const UsageError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const casimir::ConfigError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const casimir::DomainError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const casimir::NonPhysicalKernel& e) {
        print_error("non_physical_kernel", e.what());
        return 1;
    } catch (const casimir::TruncationError& e) {
        print_error("truncation", e.what());
        return 1;
    } catch (const casimir::CapabilityError& e) {
        print_error("capability", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("failure", e.what());
        return 1;
    }
    return 2;
}
