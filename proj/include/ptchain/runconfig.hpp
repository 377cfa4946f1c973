#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptchain/io.hpp"

namespace ptchain {

enum class Command {
    Spectrum,
    Eigenfunction,
    PhasePoint,
    PhaseScan,
    Trajectory,
    Poincare,
    OracleCheck
};

enum class OutputFormat { Csv, Json };

Command command_from_string(const std::string& s);
std::string to_string(Command c);

/// One batch run: exactly one command plus the parameters it needs.
/// Buildable from a JSON config file with individual flag overrides
/// (flags win).
struct RunConfig {
    Command command = Command::Spectrum;
    ChainSpec spec{2, {1.0, 1.0}, 0.0};

    // spectrum
    int max_quanta = 10;
    std::int64_t level_cap = kDefaultLevelCap;

    // eigenfunction
    OccupationVector occ;
    std::optional<double> grid_min, grid_max;
    int grid_count = 0;       ///< per-axis points of a product grid
    int random_points = 0;    ///< seeded uniform points instead of a grid
    double box = 3.0;         ///< half-width of the random-point box

    // phase
    double tol = kPhaseTol;
    std::vector<ScanAxis> axes;

    // classical
    std::vector<Complex> x0, v0;
    double dt = 1e-3;
    double t_end = 100.0;
    double dt_out = 0.05;
    SectionConfig section;

    // oracle
    int cutoff = 20;
    int max_sum = -1;
    std::int64_t dimension_cap = kDefaultFockDimensionCap;

    // io
    std::string output;
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;
    int threads = 0;  ///< 0 = hardware concurrency
};

/// Numeric literal that may be a rational like "1/12" or "2/3"; the two
/// integers are parsed exactly and divided once, avoiding decimal drift.
double parse_number(const std::string& text);

/// "wx:0:2:400" -> axis over the natural frequency of site x; "w2sq",
/// "gamma" etc. select other parameters.
ScanAxis parse_axis(const std::string& token, int n);

std::vector<Complex> parse_complex_list(const std::string& text, const char* what);

RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& config);

/// All rule violations (not just the first); empty iff run() would start.
std::vector<std::string> validate(const RunConfig& config);

/// Executes the command, writes the artifact plus a <output>.manifest.json
/// sidecar, and returns the process exit code (0 ok, 2 config error,
/// 3 numeric failure, 4 resource cap).  Failures emit one machine-readable
/// JSON object on err.
int run(const RunConfig& config, std::ostream& err);

}  // namespace ptchain
