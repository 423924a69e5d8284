#include "porolab/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "porolab/errors.hpp"

namespace porolab {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MetricSpace Manifest::to_space() const {
    return MetricSpace(dim, metric_from_name(metric), points, epsilon);
}

SubsetRef Manifest::subset(const std::string& name) const {
    const auto it = subsets.find(name);
    if (it == subsets.end()) throw FormatError("manifest has no subset '" + name + "'");
    return SubsetRef::of(it->second);
}

WeightedMeasure Manifest::measure(const std::string& name) const {
    const auto it = measures.find(name);
    if (it == measures.end()) throw FormatError("manifest has no measure '" + name + "'");
    if (it->second.size() * static_cast<std::size_t>(dim) != points.size())
        throw FormatError("measure '" + name + "' not aligned to points");
    return WeightedMeasure(it->second);
}

Manifest Manifest::from_space(const MetricSpace& space) {
    Manifest m;
    m.metric = metric_name(space.metric());
    m.dim = space.dim();
    m.epsilon = space.epsilon();
    m.points.reserve(space.size() * static_cast<std::size_t>(space.dim()));
    for (std::size_t p = 0; p < space.size(); ++p)
        for (int a = 0; a < space.dim(); ++a)
            m.points.push_back(space.coord(static_cast<PointId>(p), a));
    return m;
}

std::string manifest_to_string(const Manifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["metric"] = m.metric;
    j["dim"] = m.dim;
    j["epsilon"] = format_g17(m.epsilon);
    {
        nlohmann::json pts = nlohmann::json::array();
        const auto n = m.points.size() / static_cast<std::size_t>(m.dim);
        for (std::size_t p = 0; p < n; ++p) {
            nlohmann::json tuple = nlohmann::json::array();
            for (int a = 0; a < m.dim; ++a)
                tuple.push_back(format_g17(m.points[p * m.dim + a]));
            pts.push_back(std::move(tuple));
        }
        j["points"] = std::move(pts);
    }
    {
        nlohmann::json subs = nlohmann::json::object();
        for (const auto& [name, ids] : m.subsets) subs[name] = ids;
        j["subsets"] = std::move(subs);
    }
    {
        nlohmann::json meas = nlohmann::json::object();
        for (const auto& [name, w] : m.measures) {
            nlohmann::json arr = nlohmann::json::array();
            for (double v : w) arr.push_back(format_g17(v));
            meas[name] = std::move(arr);
        }
        j["measures"] = std::move(meas);
    }
    j["meta"] = m.meta;
    return j.dump(2) + "\n";
}

namespace {

double parse_double(const nlohmann::json& v, const char* what) {
    try {
        if (v.is_string()) return std::stod(v.get<std::string>());
        return v.get<double>();
    } catch (const std::exception&) {
        throw FormatError(std::string("bad numeric field: ") + what);
    }
}

}  // namespace

Manifest manifest_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    Manifest m;
    try {
        m.version = j.at("version").get<std::string>();
        if (m.version != kManifestVersion)
            throw FormatError("unrecognized manifest version '" + m.version + "'");
        m.metric = j.at("metric").get<std::string>();
        m.dim = j.at("dim").get<int>();
        m.epsilon = parse_double(j.at("epsilon"), "epsilon");
        for (const auto& tuple : j.at("points")) {
            if (static_cast<int>(tuple.size()) != m.dim)
                throw FormatError("point tuple arity does not match dim");
            for (const auto& c : tuple) m.points.push_back(parse_double(c, "point"));
        }
        if (j.contains("subsets"))
            for (const auto& [name, ids] : j.at("subsets").items())
                m.subsets[name] = ids.get<std::vector<PointId>>();
        if (j.contains("measures"))
            for (const auto& [name, arr] : j.at("measures").items()) {
                std::vector<double> w;
                w.reserve(arr.size());
                for (const auto& v : arr) w.push_back(parse_double(v, "weight"));
                m.measures[name] = std::move(w);
            }
        if (j.contains("meta")) m.meta = j.at("meta");
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest structure: ") + e.what());
    }
    return m;
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return manifest_from_string(ss.str());
}

void write_manifest(const std::string& path, const Manifest& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << manifest_to_string(m);
    if (!out) throw IoError("write to '" + path + "' failed");
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out_ << ',';
        first = false;
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char c : f) {
                if (c == '"') out_ << '"';
                out_ << c;
            }
            out_ << '"';
        } else {
            out_ << f;
        }
    }
    out_ << '\n';
}

}  // namespace porolab
