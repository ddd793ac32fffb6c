#include <doctest.h>

#include <filesystem>

#include "apc/io.hpp"
#include "apc/suites.hpp"

using namespace apc;

namespace {

SuiteOptions small() {
    SuiteOptions o;
    o.seed = 7;
    o.scale = 0.02;
    return o;
}

const Check* find(const ExperimentReport& r, const std::string& id) {
    for (const Check& c : r.checks)
        if (c.id == id) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("suite registry") {
    auto ids = suite_ids();
    CHECK(ids.size() == 10);
    CHECK(ids.back() == "all");
    CHECK(suite_time_budget("fourier") == 30);
    CHECK(suite_time_budget("pipeline") == 1200);
    CHECK_THROWS_AS(suite_time_budget("nope"), ApcError);
    CHECK_THROWS_AS(run_suite("nope", small()), ApcError);
}

TEST_CASE("small suites pass") {
    for (const std::string id : {"fourier", "sifting", "spectral", "smoothing", "appendix", "pipeline"}) {
        CAPTURE(id);
        auto r = run_suite(id, small());
        CHECK(r.passed());
        CHECK(!r.checks.empty());
        for (const Check& c : r.checks) CHECK(c.instances > 0);
    }
}

TEST_CASE("bohr suite fails only on the two documented checks") {
    auto r = run_suite("bohr", small());
    CHECK_FALSE(r.passed());
    for (const Check& c : r.checks) {
        CAPTURE(c.id);
        if (c.id == "size_dilate" || c.id == "interval_sandwich") CHECK(c.failures > 0);
        else CHECK(c.holds());
    }
    // the smallest counterexample to the dilate bound is in every run
    CHECK(find(r, "size_dilate")->detail.rfind("Z_", 0) == 0);
}

TEST_CASE("reports are deterministic and timing-free in the payload") {
    auto a = run_suite("spectral", small());
    auto b = run_suite("spectral", small());
    CHECK(payload_hash(a) == payload_hash(b));
    b.wallclock += 5;
    b.timing["suite"] = 99.0;
    CHECK(payload_hash(a) == payload_hash(b));
    SuiteOptions other = small();
    other.seed = 8;
    CHECK(payload_hash(run_suite("spectral", other)) != payload_hash(a));
}

TEST_CASE("report shapes") {
    auto r = run_suite("fourier", small());
    auto j = report_json(r);
    for (const char* key : {"command", "config", "seed", "input_hashes", "checks", "stages", "passed", "wallclock", "timing"})
        CHECK(j.contains(key));
    CHECK_FALSE(report_json(r, false).contains("timing"));
    const auto& c = j["checks"][0];
    for (const char* key : {"id", "instances", "failures", "skipped", "assertable", "holds", "worst_margin", "detail"})
        CHECK(c.contains(key));
    std::string tsv = report_tsv(r);
    CHECK(tsv.rfind("check\tinstances\tfailures", 0) == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == static_cast<long>(r.checks.size()) + 1);
    CHECK_THROWS_AS(emit_report(r, "-", "xml"), ApcError);
}

TEST_CASE("results directory is content addressed and append-only") {
    auto dir = std::filesystem::temp_directory_path() / "apc_results_test";
    std::filesystem::remove_all(dir);
    auto r = run_suite("smoothing", small());
    std::string p1 = store_report(r, dir.string());
    CHECK(std::filesystem::path(p1).filename().string() == payload_hash(r) + ".json");
    auto first = read_file(p1);
    r.wallclock += 1;
    CHECK(store_report(r, dir.string()) == p1);
    CHECK(read_file(p1) == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("all aggregates with prefixes") {
    SuiteOptions o = small();
    o.scale = 0.01;
    auto r = run_suite("all", o);
    CHECK(r.config["summary"].size() == 9);
    bool prefixed = std::all_of(r.checks.begin(), r.checks.end(),
                                [](const Check& c) { return c.id.find('/') != std::string::npos; });
    CHECK(prefixed);
    CHECK(find(r, "bohr/size_dilate") != nullptr);
    CHECK_FALSE(r.passed());
}
