#pragma once

// Estimators on replica samples. Every function is a deterministic function
// of its inputs; the bootstrap takes an explicit seed.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wnaction/noise.hpp"
#include "wnaction/solver.hpp"

namespace wnaction {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;  // from the fourth central moment
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

Moments moments(std::span<const double> x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;  // asymptotic Kolmogorov distribution
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct OrliczEstimate {
    double s = 1.0;
    double norm = 0.0;
    std::size_t sample_size = 0;
    double lower = 0.0;
    double upper = 0.0;
};

// Smallest N with mean exp((|x|/N)^s) <= e on the empirical distribution.
OrliczEstimate orlicz_norm(std::span<const double> samples, double s);

// Standard error of the plug-in norm over `resamples` bootstrap draws.
double orlicz_bootstrap_se(std::span<const double> samples, double s, int resamples = 200, std::uint64_t seed = 1);

struct TailReport {
    double norm = 0.0;
    bool vacuous = false;        // no sample reaches 2 * norm
    double fitted_c = 0.0;       // min over sample nu >= 2 norm of -ln P(|X| >= nu) / (nu/norm)^s
    double tail_exponent = 0.0;  // slope of ln(-ln P(|X| >= nu)) on ln nu
    std::size_t fit_points = 0;
    bool consistent = true;
    std::optional<double> largest_violating_nu;
    std::string note;
};

// Checks that the empirical tail decays at least like exp(-c (nu/norm)^s):
// the fitted tail exponent must not fall below s/3.
TailReport tail_consistency(std::span<const double> samples, double s);

struct ScalingPoint {
    int L = 0;
    double mean = 0.0;
    double se = 0.0;
};

struct ScalingFit {
    std::vector<ScalingPoint> points;  // L <= 2 removed
    double a_star = 0.0;
    double intercept = 0.0;
    double a_star_se = 0.0;
    double intercept_se = 0.0;
    std::vector<double> residuals;
    std::vector<double> residual_se;   // sqrt(se_i^2 + var(fitted_i))
    std::vector<double> jackknife_slopes;
    std::vector<double> jackknife_se;
    double max_residual_ratio = 0.0;   // max |r_i| / residual_se_i
    double max_jackknife_ratio = 0.0;  // max |slope_-i - slope| / sqrt(se_-i^2 + se^2)
};

// Weighted least squares of mean A_L on ln L with weights 1/se^2 (equal
// weights if any se is zero). Points with L <= 2 are dropped.
ScalingFit fit_scaling(std::vector<ScalingPoint> points);

struct Band {
    int l_fine = 1;
    int l_coarse = 1;
    double mean = 0.0;  // mean of (W-D)(h*_{>=l_fine})/L - (W-D)(h*_{>=l_coarse})/L
    double se = 0.0;
    double predicted = 0.0;  // a_star * ln(l_coarse / l_fine)
};

struct BandReport {
    std::vector<Band> bands;
    double common_slope = 0.0;  // inverse-variance mean of mean / ln(l_coarse / l_fine)
    double common_slope_se = 0.0;
    double max_band_z = 0.0;    // max |slope_b - common| / sqrt(se_b^2 + se_common^2)
    double max_telescoping_error = 0.0;
    bool consistent = false;    // max_band_z <= 3
};

// coarse_actions[l][r] = (W - D)(h*_{>=l})/L of replica r, for the dyadic
// chain l = 1, 2, ..., L. Bands are consecutive pairs (l, 2l).
BandReport equipartition(const std::map<int, std::vector<double>>& coarse_actions, double a_star);

// One band between any two chain members.
Band band_increment(const std::map<int, std::vector<double>>& coarse_actions, int l_fine, int l_coarse, double a_star);

// H_L = max over swept pairs of |h*(L/2) - (y0 + y1)/2| / L.
double midpoint_deviation(const SweepResult& sweep);

// Per scale rho: Orlicz-1 norm over replicas of max-over-pairs D(h*_rho)/L.
std::map<int, double> dirichlet_equipartition(const std::vector<std::map<int, double>>& per_replica_max);

// max over the boundary grid of |W - D|(a_{y0,y1})/L.
double linear_action_statistic(const SweepResult& sweep);
double linear_action_statistic(const NoiseField& field, double window, double db);

} // namespace wnaction
