#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "giantatom/types.hpp"

namespace giantatom {

// ---------------------------------------------------------------------------
// File formats: a structured-text (JSON) document for system
// descriptions, CSV for numeric results, and a JSON sidecar recording
// the fully resolved configuration of a run.
// ---------------------------------------------------------------------------

// Atom + waveguide + coupling layout, as read from / written to a
// system description file:
//   {
//     "atom":      {"levels": [0.0, 6.283, ...]},
//     "waveguide": {"v": 1.0, "J0": 0.0795775},
//     "points":    [{"x": 0.0, "strengths": [1.0, ...]}, ...],
//     "label":     "optional name"
//   }
struct SystemConfig {
    AtomSpec atom;
    WaveguideModel waveguide;
    Layout layout;
};

SystemConfig loadSystem(const std::string& path);
SystemConfig parseSystem(const std::string& jsonText);
std::string serializeSystem(const SystemConfig& config);  // canonical, sorted keys
void saveSystem(const SystemConfig& config, const std::string& path);

// Shortest decimal representation that round-trips to the same double.
std::string formatDouble(double value);

// One CSV cell: numeric, integral, or verbatim text.
using CsvCell = std::variant<double, long long, std::string>;

// Writes a header row and data rows; every row must match the header
// width. Doubles are emitted as shortest round-trip decimals, so equal
// inputs produce byte-identical files.
void writeCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<CsvCell>>& rows);
void writeCsvFile(const std::string& path, const std::vector<std::string>& header,
                  const std::vector<std::vector<CsvCell>>& rows);

// Writes `jsonText` (expected to be pre-rendered, sorted-key JSON)
// next to a result file: for "out.csv" the sidecar is "out.csv.json".
std::string sidecarPath(const std::string& resultPath);
void writeSidecar(const std::string& resultPath, const std::string& jsonText);

}  // namespace giantatom
