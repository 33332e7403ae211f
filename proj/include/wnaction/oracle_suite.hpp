#pragma once

// Per-realization verification battery: every exact identity and inequality
// the library implements, checked at tiny scale on a fixed seed list.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wnaction/net.hpp"
#include "wnaction/noise.hpp"
#include "wnaction/profile.hpp"

namespace wnaction {

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;        // largest discrepancy (or z-score) observed
    std::size_t instances = 0;
    std::string instance;      // reproducer of the worst (or first failing) instance
    std::string detail;
};

struct ValidationReport {
    std::string profile;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_json() const;
    std::string to_text() const;
};

enum class ValidationProfile { Quick, Full };

using FieldFactory = std::function<NoiseField(const FieldConfig&)>;

struct SuiteOptions {
    std::vector<std::uint64_t> seeds;
    FieldFactory make_field = generate_field;
    bool flip_dp_tie_break = false;     // negative control
    int calibration_replicas = 500;     // per seed
    int identity_instances = 10;        // random instances per seed
};

SuiteOptions suite_options(ValidationProfile profile);

// Profiles with grid values in [-amplitude, amplitude] at integer multiples of `scale`.
HeightProfile random_grid_profile(std::mt19937_64& rng, int L, int scale, double dy, double amplitude,
                                  bool zero_boundary);

// Independent count of the net ball by scanning a box of raw value vectors and
// testing every constraint through the profile module.
BigCount rectangle_scan_count(const NetBallSpec& spec);

CheckResult check_noise_calibration(const SuiteOptions& opt);
CheckResult check_decomposition(const SuiteOptions& opt);
CheckResult check_orthogonality(const SuiteOptions& opt);
CheckResult check_linear_pythagoras(const SuiteOptions& opt);
CheckResult check_oracle_equivalence(const SuiteOptions& opt);
CheckResult check_restriction_optimality(const SuiteOptions& opt);
CheckResult check_green_identity(const SuiteOptions& opt);
CheckResult check_green_perturbation(const SuiteOptions& opt);
CheckResult check_sandwich(const SuiteOptions& opt);
CheckResult check_two_scale_upper(const SuiteOptions& opt);   // A+_L <= coarse A+ + mean of bin sups
CheckResult check_two_scale_lower(const SuiteOptions& opt);   // pair-wise lower bound and pasted competitor
CheckResult check_projection(const SuiteOptions& opt);
CheckResult check_net_count(const SuiteOptions& opt);

ValidationReport run_suite(const SuiteOptions& opt, const std::string& profile_name = "custom");
ValidationReport validate_all(ValidationProfile profile);

} // namespace wnaction
