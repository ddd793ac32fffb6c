#pragma once
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace apc {

using Rational = mpq_class;
using cd = std::complex<double>;
using Rng = std::mt19937_64;

// Exit codes shared by the CLI and the suite runner.
enum class Exit : int { Pass = 0, Failure = 1, Usage = 2, Budget = 3 };

class ApcError : public std::runtime_error {
public:
    ApcError(Exit code, std::string stage, const std::string& msg)
        : std::runtime_error(msg), code_(code), stage_(std::move(stage)) {}
    Exit code() const { return code_; }
    const std::string& stage() const { return stage_; }

private:
    Exit code_;
    std::string stage_;
};

[[noreturn]] void fail_pre(const std::string& stage, const std::string& msg);
[[noreturn]] void fail_budget(const std::string& stage, const std::string& msg);
[[noreturn]] void fail_usage(const std::string& msg);

// Group-order cap. Read once from APC_BUDGET, overridable.
long long size_budget();
void set_size_budget(long long b);
// Cap on visited nodes / enumerated items in searches.
long long search_budget();
void set_search_budget(long long b);

uint64_t fnv1a(std::string_view s, uint64_t h = 1469598103934665603ULL);
uint64_t splitmix64(uint64_t x);
// Independent stream per (root, stage): stable across runs and platforms.
uint64_t stage_seed(uint64_t root, std::string_view stage);
std::string hex64(uint64_t h);

Rational exact(double x);  // exact binary value of a double
Rational frac(const mpz_class& num, const mpz_class& den);  // canonical num/den
double lg(double x);

constexpr double kTol = 1e-9;

}  // namespace apc
