#include <cmath>
#include <random>

#include "doctest.h"
#include "wnaction/action.hpp"
#include "wnaction/oracle_suite.hpp"

using namespace wnaction;

namespace {

// Independent quadrature: freeze h at each column midpoint, snap to the grid
// rounding halves toward zero, and read the column's Brownian path there.
double noise_oracle(const NoiseField& f, const HeightProfile& h) {
    const int m = f.config().m;
    const double dy = f.config().dy;
    double w = 0.0;
    for (int col = 0; col < f.columns(); ++col) {
        const double u = h.at((col + 0.5) / m) / dy;
        const double mag = std::ceil(std::fabs(u) - 0.5);
        w += f.at(col, static_cast<int>(u < 0 ? -mag : mag));
    }
    return w;
}

NoiseField field(int L, std::uint64_t seed) {
    FieldConfig c;
    c.L = L;
    c.m = 4;
    c.dy = 0.25;
    c.y_cap = 8.0;
    c.seed = seed;
    return generate_field(c);
}

} // namespace

TEST_CASE("snapping rounds halves toward zero") {
    CHECK(snap_index(0.125, 0.25) == 0);
    CHECK(snap_index(-0.125, 0.25) == 0);
    CHECK(snap_index(0.375, 0.25) == 1);
    CHECK(snap_index(-0.375, 0.25) == -1);
    CHECK(snap_index(0.13, 0.25) == 1);
    CHECK(snap_index(-0.6, 0.25) == -2);
    CHECK(div_round_half_toward_zero(3, 2) == 1);
    CHECK(div_round_half_toward_zero(-3, 2) == -1);
    CHECK(div_round_half_toward_zero(5, 4) == 1);
    CHECK(div_round_half_toward_zero(-7, 4) == -2);
}

TEST_CASE("noise integral matches the direct quadrature") {
    const NoiseField f = field(8, 2);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 40; ++i) {
        const HeightProfile h = random_grid_profile(rng, 8, 1 << (i % 3), 0.25, 5.0, false);
        CHECK(noise_integral(f, h) == doctest::Approx(noise_oracle(f, h)).epsilon(1e-13));
    }
    CHECK(noise_integral(f, HeightProfile::zero(8)) == 0.0);
}

TEST_CASE("action breakdown and interval additivity") {
    const NoiseField f = field(8, 4);
    std::mt19937_64 rng(10);
    const HeightProfile h = random_grid_profile(rng, 8, 1, 0.25, 4.0, true);
    const ActionBreakdown b = action_of(f, h);
    CHECK(b.action == doctest::Approx(b.W - b.D));
    CHECK(b.action_per_length == doctest::Approx(b.action / 8));
    double per_scale = 0.0;
    for (const auto& [rho, d] : b.per_scale_D) per_scale += d;
    CHECK(per_scale == doctest::Approx(b.D / 8));
    CHECK(interval_action(f, h, 0, 3) + interval_action(f, h, 3, 8) == doctest::Approx(b.action).epsilon(1e-13));
    CHECK(noise_integral_on(f, h, 0, 8) == doctest::Approx(b.W));
}

TEST_CASE("decomposition residual vanishes") {
    const NoiseField f = field(16, 6);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        const int l = 1 << (i % 5);
        const HeightProfile h = random_grid_profile(rng, 16, 1, 0.25, 6.0, i % 2 == 0);
        const Decomposition d = decompose_action(f, h, l);
        CHECK(std::fabs(d.residual) <= 1e-9);
        CHECK(d.fine_terms.size() == static_cast<std::size_t>(16 / l));
    }
}

TEST_CASE("interval corrections vanish at the interval ends") {
    const HeightProfile h(8, 1, {0.0, 1.0, 2.0, 0.5, -1.0, 0.0, 0.25, 0.5, 0.0});
    const HeightProfile c = interval_correction(h, 2, 4);
    CHECK(c.length() == 4);
    CHECK(c.front() == 0.0);
    CHECK(c.back() == 0.0);
    CHECK(c.node(1) == doctest::Approx(0.75));
}

TEST_CASE("relative noise of a zero correction is zero") {
    const NoiseField f = field(8, 12);
    const HeightProfile base(8, 2, {0.0, 1.0, -0.5, 0.25, 0.0});
    for (int n = 1; n <= 4; ++n) CHECK(relative_interval_noise(f, base, n, 2, HeightProfile::zero(2)) == 0.0);
}
