// Acceptance criteria 1-10: one line per criterion, then the failing checks.
#include <CLI11.hpp>

#include <cstdio>
#include <set>

#include "apc/suites.hpp"

using namespace apc;

namespace {

struct Criterion {
    int id;
    std::string suite;
    std::string tolerance;
};

const std::vector<Criterion> kCriteria{
    {1, "fourier", "tol 1e-9, exact adjoint in Q"},
    {2, "sifting", "exact in Q"},
    {3, "spectral", "margin >= 0 within 1e-9, moments exact"},
    {4, "bohr", "exact counts, regularize >= 95%"},
    {5, "freiman", "exhaustive"},
    {6, "smoothing", "exact in Q"},
    {7, "counting", "exact"},
    {8, "appendix", "tol 1e-9, rate >= 95%"},
    {9, "pipeline", "certified stages, 1e-9"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"apc_acceptance"};
    uint64_t seed = 1;
    double scale = 1;
    std::vector<int> expect_fail;
    app.add_option("--seed", seed, "root seed");
    app.add_option("--scale", scale, "instance-count multiplier");
    app.add_option("--expect-fail", expect_fail, "criteria known to fail; exit 0 iff exactly these fail");
    CLI11_PARSE(app, argc, argv);

    SuiteOptions opt;
    opt.seed = seed;
    opt.scale = scale;
    std::set<int> failed;
    std::vector<std::string> notes;
    std::vector<std::string> hashes;
    double total = 0;
    for (const Criterion& c : kCriteria) {
        ExperimentReport r;
        try {
            r = run_suite(c.suite, opt);
        } catch (const std::exception& e) {
            std::printf("criterion %2d  FAIL  %-9s  error: %s\n", c.id, c.suite.c_str(), e.what());
            failed.insert(c.id);
            hashes.emplace_back();
            continue;
        }
        const double budget = suite_time_budget(c.suite);
        const bool in_time = r.wallclock <= budget;
        long long instances = 0, bad = 0;
        for (const Check& k : r.checks) {
            instances += k.instances;
            if (!k.holds()) {
                ++bad;
                notes.push_back("  " + std::to_string(c.id) + " " + c.suite + "/" + k.id + ": " +
                                std::to_string(k.failures) + "/" + std::to_string(k.instances) + " failed, first: " +
                                k.detail);
            }
        }
        if (!in_time) notes.push_back("  " + std::to_string(c.id) + " over its time budget");
        const bool ok = r.passed() && in_time;
        if (!ok) failed.insert(c.id);
        total += r.wallclock;
        hashes.push_back(payload_hash(r));
        std::printf("criterion %2d  %s  %-9s  %zu checks, %lld instances, %lld failing  [%s]  %.1fs / %.0fs\n", c.id,
                    ok ? "PASS" : "FAIL", c.suite.c_str(), r.checks.size(), instances, bad, c.tolerance.c_str(),
                    r.wallclock, budget);
        std::fflush(stdout);
    }

    // determinism: a second run with the same seed must give the same payload
    bool same = true;
    std::string diff;
    double t10 = 0;
    for (size_t i = 0; i < kCriteria.size(); ++i) {
        if (hashes[i].empty()) continue;
        ExperimentReport r = run_suite(kCriteria[i].suite, opt);
        t10 += r.wallclock;
        if (payload_hash(r) != hashes[i]) {
            same = false;
            diff += " " + kCriteria[i].suite;
        }
    }
    if (!same) failed.insert(10);
    std::printf("criterion 10  %s  rerun      payload hashes %s across %zu suites%s  %.1fs\n", same ? "PASS" : "FAIL",
                same ? "identical" : "differ", kCriteria.size(), diff.c_str(), t10);

    if (!notes.empty()) {
        std::printf("failing checks:\n");
        for (const auto& n : notes) std::printf("%s\n", n.c_str());
    }
    std::printf("total %.1fs; %zu of 10 criteria pass\n", total + t10, 10 - failed.size());
    std::set<int> expected(expect_fail.begin(), expect_fail.end());
    if (failed == expected) return 0;
    for (int e : expected)
        if (!failed.count(e)) std::printf("criterion %d was expected to fail but passed\n", e);
    for (int f : failed)
        if (!expected.count(f)) std::printf("criterion %d failed unexpectedly\n", f);
    return 1;
}
