// Serial (one thread) versus OpenMP timings for the parallel kernels.
#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "apc/sifting.hpp"
#include "apc/spread.hpp"
#include "apc/threeap.hpp"

using namespace apc;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

struct Row {
    std::string kernel, size;
    std::function<std::string()> run;  // returns a digest of the output
};

Subset random_subset(const GroupSpec& G, double dens, uint64_t seed) {
    Rng rng(seed);
    std::bernoulli_distribution b(dens);
    Subset A;
    for (int x = 0; x < G.order(); ++x)
        if (b(rng)) A.push_back(x);
    return A;
}

std::string digest(const RealFn& f) {
    std::string s;
    for (double v : f.v) s += std::to_string(std::llround(v * 1e6)) + ",";
    return hex64(fnv1a(s));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"apc_bench: serial vs OpenMP kernels"};
    int threads = omp_get_max_threads(), reps = 3;
    double scale = 1;
    app.add_option("--threads", threads, "parallel thread count");
    app.add_option("--reps", reps, "repetitions, best time kept");
    app.add_option("--scale", scale, "problem-size multiplier");
    CLI11_PARSE(app, argc, argv);

    const long long N = std::llround(20000 * scale);
    std::vector<long long> ints;
    {
        Rng rng(1);
        for (long long x = 1; x <= N; ++x)
            if (rng() % 4 == 0) ints.push_back(x);
    }
    GroupSpec F37 = make_group({3, 3, 3, 3, 3, 3, 3});
    Subset capish = random_subset(F37, 0.3, 2);
    GroupSpec Z = make_group({1 << 12});
    GroupSpec F2_10 = make_group({2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    Subset dense10 = random_subset(F2_10, 0.4, 3);
    GroupSpec Z64 = make_group({64});
    Subset s64 = random_subset(Z64, 0.5, 4);
    RealFn f(Z), g(Z);
    {
        Rng rng(5);
        std::uniform_real_distribution<double> U(0, 1);
        for (int i = 0; i < Z.order(); ++i) f.v[i] = U(rng), g.v[i] = U(rng);
    }

    std::vector<Row> rows{
        {"count_3aps/int", std::to_string(ints.size()) + " in [" + std::to_string(N) + "]",
         [&] { return std::to_string(count_3aps(ints).total); }},
        {"count_3aps/group", F37.describe() + " |A|=" + std::to_string(capish.size()),
         [&] { return std::to_string(count_3aps(F37, capish).total); }},
        {"fourier", Z.describe(), [&] { return digest(inverse_fourier(fourier(f))); }},
        {"convolve_fast", Z.describe(), [&] { return digest(convolve_fast(f, g)); }},
        {"perp_norm", F2_10.describe() + " r=2", [&] { return perp_norm(F2_10, dense10, 2).gamma_exact; }},
        {"sift_self", Z64.describe() + " k=3",
         [&] {
             auto o = sift_self(Z64, s64, RealFn(Z64, 1.0), 3, SearchBudget{});
             return o.achieved_ratio_exact;
         }},
    };

    std::printf("kernel\tsize\tserial_s\tparallel_s\tthreads\tspeedup\tmatch\n");
    bool all = true;
    for (const Row& r : rows) {
        std::string a, b;
        omp_set_num_threads(1);
        double ts = best_of(reps, [&] { a = r.run(); });
        omp_set_num_threads(threads);
        double tp = best_of(reps, [&] { b = r.run(); });
        all = all && a == b;
        std::printf("%s\t%s\t%.4f\t%.4f\t%d\t%.2f\t%s\n", r.kernel.c_str(), r.size.c_str(), ts, tp, threads,
                    ts / std::max(tp, 1e-9), a == b ? "yes" : "NO");
    }
    // naive quadratic convolution is the independent reference for the fast path
    double tn = best_of(1, [&] { convolve_naive(f, g); });
    bool same = digest(convolve_naive(f, g)) == digest(convolve_fast(f, g));
    std::printf("convolve_naive\t%s\t%.4f\t-\t1\t-\t%s\n", Z.describe().c_str(), tn, same ? "yes" : "NO");
    return all && same ? 0 : 1;
}
