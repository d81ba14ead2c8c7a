/// @file verify.hpp
/// @brief Randomized property suites behind `bgk verify` and the acceptance
///        tests. Reports are deterministic for a fixed seed: a private
///        splitmix64 stream and fixed-precision formatting, no timings.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bgk {

/// Deterministic RNG (splitmix64); distribution code is ours so results are
/// identical across platforms and standard libraries.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97f4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::string text;  // one line per property: PASS/FAIL, value, tolerance
};

SuiteResult suite_conservation(std::uint64_t seed);   // cancellation, drift, H-theorem
SuiteResult suite_linearization(std::uint64_t seed);  // identity, projection, P(Gamma)
SuiteResult suite_hessian(std::uint64_t seed);        // FD agreement, symmetry
SuiteResult suite_entropy(std::uint64_t seed);        // entropy split bound, monotonicity
SuiteResult suite_regimes(std::uint64_t seed);        // decay fit, crossing, moment bounds

bool known_suite(const std::string& name);

/// Run one suite or "all"; throws std::invalid_argument for unknown names.
std::vector<SuiteResult> run_suites(const std::string& which, std::uint64_t seed);

std::string suites_report(const std::vector<SuiteResult>& results);

}  // namespace bgk
