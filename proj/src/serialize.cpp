#include "giantatom/serialize.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace giantatom {
namespace {

using nlohmann::json;

json toJson(const SystemConfig& config) {
    json doc;
    doc["atom"]["levels"] = config.atom.levels;
    doc["waveguide"]["v"] = config.waveguide.v;
    doc["waveguide"]["J0"] = config.waveguide.J0;
    json pts = json::array();
    for (const auto& p : config.layout.points) {
        json point;
        point["x"] = p.x;
        point["strengths"] = p.strengths;
        pts.push_back(std::move(point));
    }
    doc["points"] = std::move(pts);
    if (!config.layout.label.empty()) doc["label"] = config.layout.label;
    return doc;
}

SystemConfig fromJson(const json& doc) {
    if (!doc.is_object()) throw ValidationError("system file: top level must be an object");
    SystemConfig out;
    try {
        if (!doc.contains("atom") || !doc["atom"].contains("levels"))
            throw ValidationError("system file: missing atom.levels");
        out.atom = AtomSpec(doc["atom"]["levels"].get<std::vector<double>>());

        if (doc.contains("waveguide")) {
            const auto& wgNode = doc["waveguide"];
            const double v = wgNode.value("v", 1.0);
            const double J0 = wgNode.value("J0", WaveguideModel{}.J0);
            out.waveguide = WaveguideModel(v, J0);
        }

        if (!doc.contains("points") || !doc["points"].is_array() || doc["points"].empty())
            throw ValidationError("system file: missing or empty points array");
        std::vector<CouplingPoint> pts;
        for (const auto& node : doc["points"]) {
            CouplingPoint p;
            if (!node.contains("x")) throw ValidationError("system file: point without x");
            p.x = node["x"].get<double>();
            if (!node.contains("strengths"))
                throw ValidationError("system file: point without strengths");
            p.strengths = node["strengths"].get<std::vector<double>>();
            if (p.strengths.empty())
                throw ValidationError("system file: point with empty strengths");
            pts.push_back(std::move(p));
        }
        out.layout = Layout(std::move(pts), doc.value("label", std::string{}));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("system file: malformed field: ") + e.what());
    }
    // Every transition of the atom needs a strength on every point.
    const std::size_t transitions = out.atom.numLevels() - 1;
    for (const auto& p : out.layout.points)
        if (p.strengths.size() < transitions)
            throw ValidationError(
                "system file: each point needs one strength per atomic transition");
    return out;
}

}  // namespace

SystemConfig parseSystem(const std::string& jsonText) {
    json doc = json::parse(jsonText, nullptr, false);
    if (doc.is_discarded()) throw ValidationError("system file: invalid JSON");
    return fromJson(doc);
}

SystemConfig loadSystem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open system file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseSystem(buf.str());
}

std::string serializeSystem(const SystemConfig& config) {
    return toJson(config).dump(2) + "\n";
}

void saveSystem(const SystemConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write system file: " + path);
    out << serializeSystem(config);
}

std::string formatDouble(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void writeCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<CsvCell>>& rows) {
    if (header.empty()) throw ValidationError("writeCsv: header must not be empty");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw ValidationError("writeCsv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& cell) {
                    using T = std::decay_t<decltype(cell)>;
                    if constexpr (std::is_same_v<T, double>)
                        out << formatDouble(cell);
                    else
                        out << cell;
                },
                row[i]);
        }
        out << '\n';
    }
}

void writeCsvFile(const std::string& path, const std::vector<std::string>& header,
                  const std::vector<std::vector<CsvCell>>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output file: " + path);
    writeCsv(out, header, rows);
    if (!out) throw ValidationError("write failed: " + path);
}

std::string sidecarPath(const std::string& resultPath) { return resultPath + ".json"; }

void writeSidecar(const std::string& resultPath, const std::string& jsonText) {
    const std::string path = sidecarPath(resultPath);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write sidecar file: " + path);
    out << jsonText;
    if (!jsonText.empty() && jsonText.back() != '\n') out << '\n';
}

}  // namespace giantatom
