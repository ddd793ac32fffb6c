#include "apc/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace apc {

namespace {
long long g_size_budget = -1;
long long g_search_budget = 50'000'000;
}  // namespace

void fail_pre(const std::string& stage, const std::string& msg) {
    throw ApcError(Exit::Failure, stage, stage + ": " + msg);
}
void fail_budget(const std::string& stage, const std::string& msg) {
    throw ApcError(Exit::Budget, stage, stage + ": budget exceeded: " + msg);
}
void fail_usage(const std::string& msg) { throw ApcError(Exit::Usage, "usage", msg); }

long long size_budget() {
    if (g_size_budget < 0) {
        g_size_budget = 1 << 20;
        if (const char* env = std::getenv("APC_BUDGET")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end != env && v > 0) g_size_budget = v;
        }
    }
    return g_size_budget;
}
void set_size_budget(long long b) { g_size_budget = b; }
long long search_budget() { return g_search_budget; }
void set_search_budget(long long b) { g_search_budget = b; }

uint64_t fnv1a(std::string_view s, uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t stage_seed(uint64_t root, std::string_view stage) { return splitmix64(root ^ fnv1a(stage)); }

std::string hex64(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Rational exact(double x) {
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

double lg(double x) { return std::log2(x); }

}  // namespace apc

namespace apc {
Rational frac(const mpz_class& num, const mpz_class& den) {
    if (den == 0) fail_pre("frac", "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}
}  // namespace apc
