#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/asymptotics.hpp"
#include "casimir/oracles.hpp"
#include "casimir/solver.hpp"

namespace casimir::report {

using Json = nlohmann::ordered_json;

// hbar c in J m.
inline constexpr double hbar_c_si = 3.16152677338e-26;

Json to_json(const QuadratureConfig& config);
// length_unit_m: size of the length unit of R and L in metres; adds SI energies.
Json to_json(const EnergyReport& report, std::optional<double> length_unit_m = {});
Json to_json(const BetaBundle& bundle);
Json to_json(const BetaFit& fit);
Json to_json(const std::vector<OracleCheck>& checks);

// Column order of the energy CSV, also the header line.
const std::vector<std::string>& csv_columns();

// One header line plus one line per report; floats at 17 significant digits.
// Per-frequency samples are not part of the CSV.
std::string emit_csv(const std::vector<EnergyReport>& reports);
std::vector<EnergyReport> parse_csv(const std::string& text);

// Fixed 17-significant-digit formatting used by all CSV output.
std::string format_double(double v);

}  // namespace casimir::report
