#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Rows of tests/fixtures/special_values.csv:
// function, ell, x_or_z, mantissa, log_scale with value = mantissa * exp(log_scale).
struct FixtureRow {
    std::string function;
    int ell = 0;
    double arg = 0;
    double mantissa = 0;
    double log_scale = 0;
    double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
    int sign() const { return (mantissa > 0) - (mantissa < 0); }
};

inline std::vector<FixtureRow> load_fixtures(const std::string& function) {
    std::ifstream f(std::string(CASIMIR_FIXTURE_DIR) + "/special_values.csv");
    if (!f) throw std::runtime_error("cannot open fixture file");
    std::string line;
    std::getline(f, line);
    std::vector<FixtureRow> rows;
    while (std::getline(f, line)) {
        std::istringstream is(line);
        FixtureRow r;
        std::string cell;
        std::getline(is, r.function, ',');
        std::getline(is, cell, ',');
        r.ell = std::stoi(cell);
        std::getline(is, cell, ',');
        r.arg = std::stod(cell);
        std::getline(is, cell, ',');
        r.mantissa = std::stod(cell);
        std::getline(is, cell, ',');
        r.log_scale = std::stod(cell);
        if (r.function == function) rows.push_back(r);
    }
    return rows;
}
