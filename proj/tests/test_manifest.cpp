#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "porolab/errors.hpp"
#include "porolab/manifest.hpp"

using namespace porolab;

namespace {

Manifest sample_manifest() {
    Manifest m;
    m.dim = 2;
    m.metric = "euclidean";
    m.epsilon = 0.125;
    m.points = {0.0, 0.0, 0.5, 0.25, 1.0 / 3.0, 0.7};
    m.subsets["A"] = {0, 2};
    m.measures["mu"] = {0.0, 0.25, 0.75};
    m.meta["note"] = "fixture";
    return m;
}

}  // namespace

TEST_CASE("manifest round-trips byte for byte") {
    const Manifest m = sample_manifest();
    const std::string once = manifest_to_string(m);
    const Manifest back = manifest_from_string(once);
    const std::string twice = manifest_to_string(back);
    CHECK(once == twice);

    CHECK(back.dim == 2);
    CHECK(back.epsilon == 0.125);
    CHECK(back.points == m.points);
    CHECK(back.subsets.at("A") == m.subsets.at("A"));
    CHECK(back.measures.at("mu") == m.measures.at("mu"));
}

TEST_CASE("weights round-trip exactly through decimal strings") {
    Manifest m = sample_manifest();
    m.measures["mu"] = {1.0 / 3.0, 0.1, 2.2250738585072014e-308};
    const Manifest back = manifest_from_string(manifest_to_string(m));
    CHECK(back.measures.at("mu") == m.measures.at("mu"));
    CHECK(back.points == m.points);
}

TEST_CASE("manifest accessors build validated objects") {
    const Manifest m = sample_manifest();
    const MetricSpace space = m.to_space();
    CHECK(space.size() == 3);
    CHECK(space.dim() == 2);
    const SubsetRef a = m.subset("A");
    CHECK(a.ids == std::vector<PointId>{0, 2});
    const WeightedMeasure mu = m.measure("mu");
    CHECK(mu.total() == 1.0);

    CHECK_THROWS_AS((void)m.subset("nope"), FormatError);
    CHECK_THROWS_AS((void)m.measure("nope"), FormatError);
}

TEST_CASE("malformed manifests are rejected") {
    CHECK_THROWS_AS((void)manifest_from_string("not json"), FormatError);
    CHECK_THROWS_AS((void)manifest_from_string("{}"), FormatError);
    CHECK_THROWS_AS(
        (void)manifest_from_string(R"({"version":"other/9","metric":"euclidean","dim":1,)"
                                   R"("epsilon":"0.1","points":[["0.5"]]})"),
        FormatError);
}

TEST_CASE("csv writer quotes per RFC 4180") {
    std::ostringstream out;
    CsvWriter csv(out);
    csv.row({"a", "b,c", "d\"e", "plain"});
    CHECK(out.str() == "a,\"b,c\",\"d\"\"e\",plain\n");
}

TEST_CASE("g17 formatting survives parse round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 3.0e-300, 123456.789, 5.9604644775390625e-08}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}
