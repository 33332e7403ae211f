#include <cmath>
#include <random>

#include "doctest.h"
#include "wnaction/error.hpp"
#include "wnaction/stats.hpp"

using namespace wnaction;

TEST_CASE("moments of a small sample") {
    const std::vector<double> x{1, 2, 3, 4};
    const Moments m = moments(x);
    CHECK(m.mean == 2.5);
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
    CHECK(m.stderr_mean == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK_THROWS_AS(moments(std::vector<double>{}), Error);
}

TEST_CASE("orlicz norm basics") {
    const std::vector<double> c(10, 2.5);
    for (double s : {1.0, 1.5, 3.0}) CHECK(orlicz_norm(c, s).norm == doctest::Approx(2.5).epsilon(1e-5));
    CHECK(orlicz_norm(std::vector<double>(5, 0.0), 2.0).norm == 0.0);
    CHECK_THROWS_AS(orlicz_norm(std::vector<double>{}, 1.0), Error);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = g(rng);
        y[i] = 2.0 * x[i];
    }
    const OrliczEstimate ex = orlicz_norm(x, 2.0);
    CHECK(orlicz_norm(y, 2.0).norm == doctest::Approx(2.0 * ex.norm).epsilon(1e-5));
    CHECK(ex.norm >= std::fabs(moments(x).mean));
    CHECK(ex.lower <= ex.norm);
    CHECK(ex.norm <= ex.upper);
    // Pointwise domination.
    std::vector<double> z = x;
    z[0] = 10.0;
    CHECK(orlicz_norm(z, 2.0).norm >= ex.norm);
}

TEST_CASE("orlicz norm of rate-1 exponentials approaches e/(e-1)") {
    std::mt19937_64 rng(17);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(100000);
    for (double& v : x) v = e(rng);
    const double target = std::exp(1.0) / (std::exp(1.0) - 1.0);
    const double est = orlicz_norm(x, 1.0).norm;
    const double se = orlicz_bootstrap_se(x, 1.0, 40, 5);
    CHECK(se > 0.0);
    CHECK(std::fabs(est - target) <= 3.0 * se + 2e-6 * target);
}

TEST_CASE("tail diagnostics") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    std::vector<double> gauss(20000), cubed(20000);
    for (std::size_t i = 0; i < gauss.size(); ++i) {
        gauss[i] = g(rng);
        const double u = g(rng);
        cubed[i] = u * u * u;
    }
    const TailReport tg = tail_consistency(gauss, 2.0);
    CHECK(tg.consistent);
    CHECK(!tg.largest_violating_nu.has_value());
    CHECK(tg.fitted_c >= 0.1);
    CHECK(tg.fitted_c <= 2.0);

    const TailReport tc = tail_consistency(cubed, 2.0);
    CHECK_FALSE(tc.consistent);
    CHECK(tc.largest_violating_nu.has_value());

    const TailReport flat = tail_consistency(std::vector<double>(2000, 1.0), 2.0);
    CHECK(flat.vacuous);
    CHECK(flat.consistent);
    CHECK_THROWS_AS(tail_consistency(std::vector<double>(10, 1.0), 2.0), Error);
}

TEST_CASE("scaling fit recovers exact affine data") {
    std::vector<ScalingPoint> pts;
    for (int L : {2, 4, 8, 16, 32, 64}) pts.push_back({L, 0.7 * std::log(L) + 0.3, 0.01});
    const ScalingFit f = fit_scaling(pts);
    CHECK(f.points.size() == 5);  // L = 2 dropped
    CHECK(f.a_star == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.3).epsilon(1e-12));
    for (double r : f.residuals) CHECK(std::fabs(r) < 1e-12);
    CHECK(f.max_jackknife_ratio < 1e-6);
    CHECK_THROWS_AS(fit_scaling({{4, 1.0, 0.1}, {8, 2.0, 0.1}}), Error);
    CHECK_THROWS_AS(fit_scaling({{4, 1.0, 0.1}, {4, 2.0, 0.1}, {4, 1.5, 0.1}}), Error);
}

TEST_CASE("weighted fit follows inverse variances") {
    // The noisy middle point barely moves the slope.
    const ScalingFit f = fit_scaling({{4, std::log(4.0), 1e-3}, {8, std::log(8.0) + 5.0, 1e3}, {16, std::log(16.0), 1e-3}});
    CHECK(f.a_star == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("equipartition bands and telescoping") {
    std::map<int, std::vector<double>> coarse;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 0.05);
    const int L = 16;
    for (int r = 0; r < 300; ++r) {
        double v = 0.0;
        for (int l = L; l >= 1; l /= 2) {
            coarse[l].push_back(v);
            v += 0.5 * std::log(2.0) + g(rng);
        }
    }
    const BandReport rep = equipartition(coarse, 0.5);
    CHECK(rep.bands.size() == 4);
    CHECK(rep.common_slope == doctest::Approx(0.5).epsilon(0.02));
    CHECK(rep.consistent);
    CHECK(rep.max_telescoping_error <= 1e-9);
    CHECK(band_increment(coarse, 4, 4, 0.5).mean == 0.0);
    std::map<int, std::vector<double>> missing = coarse;
    missing.erase(4);
    CHECK_THROWS_AS(equipartition(missing, 0.5), Error);
}

TEST_CASE("two-sample KS") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<double> a(2000), b(2000), c(2000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = g(rng);
        b[i] = g(rng);
        c[i] = g(rng) + 0.3;
    }
    CHECK(ks_two_sample(a, b).p_value > 0.001);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
    CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("dirichlet equipartition aggregates per scale") {
    const std::vector<std::map<int, double>> reps(20, {{1, 0.0}, {2, 0.0}});
    const auto out = dirichlet_equipartition(reps);
    CHECK(out.at(1) == 0.0);
    CHECK(out.at(2) == 0.0);
}
