#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "porolab/space.hpp"

namespace porolab {

inline constexpr const char* kManifestVersion = "porosity-lab/1";

// Single structured-text document describing a space plus named subsets and
// measures. Weights are stored as 17-significant-digit decimal strings so
// the file round-trips 64-bit floats exactly.
struct Manifest {
    std::string version = kManifestVersion;
    std::string metric = "euclidean";
    int dim = 1;
    double epsilon = 0.0;
    std::vector<double> points;  // point-major
    std::map<std::string, std::vector<PointId>> subsets;
    std::map<std::string, std::vector<double>> measures;
    nlohmann::json meta = nlohmann::json::object();

    MetricSpace to_space() const;
    SubsetRef subset(const std::string& name) const;
    WeightedMeasure measure(const std::string& name) const;

    static Manifest from_space(const MetricSpace& space);
};

std::string format_g17(double v);

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& m);
std::string manifest_to_string(const Manifest& m);
Manifest manifest_from_string(const std::string& text);

// RFC-4180 CSV, UTF-8, LF endings, header mandatory, numerics at 17
// significant digits.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void row(const std::vector<std::string>& fields);
    static std::string num(double v) { return format_g17(v); }
    static std::string num(std::size_t v) { return std::to_string(v); }

private:
    std::ostream& out_;
};

}  // namespace porolab
