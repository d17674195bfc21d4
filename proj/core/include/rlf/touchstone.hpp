#pragma once

#include "rlf/csv.hpp"
#include "rlf/network.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rlf {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

struct TouchstoneOptions {
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::MA;
    double reference_ohms = 50.0;
};

struct TouchstoneFile {
    NetworkData network;
    TouchstoneOptions options;
    std::vector<std::string> comments;  // text after '!', in file order
};

/// Touchstone v1 S-parameter text. When `ports` is not given it is inferred
/// from the column layout (1, 2, 3 or 4 ports).
TouchstoneFile parse_touchstone(std::string_view text, std::optional<std::size_t> ports = std::nullopt);

/// Port count comes from the .sNp extension when present.
TouchstoneFile read_touchstone(const std::filesystem::path& path);

/// Writes with the network's own reference impedance; options.reference_ohms
/// is ignored. Mixed per-port z0 is rejected.
std::string write_touchstone(const NetworkData& n, const TouchstoneOptions& options = {},
                             const std::vector<std::string>& comments = {});

void save_touchstone(const std::filesystem::path& path, const NetworkData& n, const TouchstoneOptions& options = {});

struct SParamSelection {
    std::size_t to;
    std::size_t from;
};

struct CsvColumns {
    bool db = true;
    bool phase_deg = false;
    bool magnitude = false;
    bool real_imag = false;
};

/// "freq_hz" followed by S<to><from>_db / _deg / _mag / _re / _im columns (1-based names).
CsvTable response_table(const NetworkData& n, const std::vector<SParamSelection>& selection,
                        const CsvColumns& columns = {});
std::string write_response_csv(const NetworkData& n, const std::vector<SParamSelection>& selection,
                               const CsvColumns& columns = {});

std::string sparam_name(std::size_t to, std::size_t from);
double unit_scale(FrequencyUnit unit);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rlf
