#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ptchain/classical.hpp"
#include "ptchain/fock.hpp"
#include "ptchain/phase.hpp"
#include "ptchain/spectrum.hpp"

namespace ptchain {

using Json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double bit-exactly.
std::string format_double(double v);

/// Minimal RFC-4180 CSV accumulator: header row first, LF line endings,
/// numeric cells via format_double.
class CsvBuilder {
  public:
    explicit CsvBuilder(const std::vector<std::string>& header);
    void begin_row();
    void add(double v);
    void add_int(long long v);
    void add_raw(const std::string& cell);
    /// Full document with the final row terminated.
    std::string finish() const;

  private:
    std::string out_;
    bool row_open_ = false;
};

void write_text_file(const std::string& path, const std::string& content);

Json spec_to_json(const ChainSpec& spec);
Json complex_to_json(Complex z);

std::string levels_to_csv(const std::vector<EnergyLevel>& levels, int n);
Json levels_to_json(const ChainSpec& spec, const std::vector<EnergyLevel>& levels);

std::string sample_to_csv(const EigenfunctionSample& sample, int n);
Json sample_to_json(const ChainSpec& spec, const EigenfunctionSample& sample);

std::string phase_point_to_csv(const PhaseClass& cls, const ModeSet& modes);
Json phase_point_to_json(const ChainSpec& spec, const PhaseClass& cls, const ModeSet& modes);

std::string grid_to_csv(const PhaseGrid& grid);
Json grid_to_json(const PhaseGrid& grid);

std::string record_to_csv(const TrajectoryRecord& record);
Json record_to_json(const TrajectoryRecord& record);

std::string section_to_csv(const PoincareSection& section);
Json section_to_json(const TrajectoryRecord& record, const PoincareSection& section);

std::string comparison_to_csv(const SpectralComparison& cmp, int n);
Json comparison_to_json(const ChainSpec& spec, const SpectralComparison& cmp);

}  // namespace ptchain
