#include <cmath>

#include "doctest.h"
#include "wnaction/action.hpp"
#include "wnaction/error.hpp"
#include "wnaction/solver.hpp"

using namespace wnaction;

namespace {

FieldConfig cfg(int L, int m, double dy, double cap, std::uint64_t seed) {
    FieldConfig c;
    c.L = L;
    c.m = m;
    c.dy = dy;
    c.y_cap = cap;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("dp agrees with exhaustive search") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const NoiseField f = generate_field(cfg(4, 2, 0.5, 2.0, seed));
        for (double y0 : {-1.0, 0.5, 2.0})
            for (double y1 : {-2.0, 0.0, 1.5}) {
                const DPSolution dp = maximize_fixed_bc(f, y0, y1);
                const DPSolution bf = brute_force_max(f, y0, y1);
                CHECK(dp.value == doctest::Approx(bf.value).epsilon(1e-12));
                CHECK(dp.argmax == bf.argmax);
                CHECK(dp.argmax.front() == y0);
                CHECK(dp.argmax.back() == y1);
                CHECK(action_of(f, dp.argmax).action_per_length == doctest::Approx(dp.value).epsilon(1e-12));
            }
    }
}

TEST_CASE("coarse node scale agrees with exhaustive search") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const NoiseField f = generate_field(cfg(8, 2, 0.5, 2.0, seed));
        SolverOptions o;
        o.node_scale = 2;
        const DPSolution dp = maximize_fixed_bc(f, 0.0, 1.0, o);
        const DPSolution bf = brute_force_max(f, 0.0, 1.0, o);
        CHECK(dp.argmax.scale() == 2);
        CHECK(dp.argmax == bf.argmax);
        CHECK(dp.value == doctest::Approx(bf.value).epsilon(1e-12));
    }
}

TEST_CASE("zero noise gives the flattest grid profile") {
    FieldConfig c = cfg(8, 4, 0.25, 4.0, 0);
    c.zero_noise = true;
    const NoiseField f = generate_field(c);
    const DPSolution z = maximize_fixed_bc(f, 0.0, 0.0);
    CHECK(z.value == 0.0);
    CHECK(z.argmax == HeightProfile::zero(8));
    const DPSolution s = maximize_fixed_bc(f, 0.0, 2.0);
    CHECK(s.value == doctest::Approx(-dirichlet(linear_part(0.0, 2.0, 8)) / 8));
}

TEST_CASE("value function ends at the optimum") {
    const NoiseField f = generate_field(cfg(8, 2, 0.25, 3.0, 1));
    SolverOptions o;
    o.keep_value_function = true;
    const DPSolution s = maximize_fixed_bc(f, 0.5, -0.25, o);
    REQUIRE(s.value_function.size() == 9);
    CHECK(s.value_function.back()[static_cast<std::size_t>(-1 + s.cap_steps)] == doctest::Approx(s.value * 8));
    CHECK(s.value_function.front()[static_cast<std::size_t>(2 + s.cap_steps)] == 0.0);
}

TEST_CASE("input errors") {
    const NoiseField f = generate_field(cfg(4, 2, 0.5, 2.0, 0));
    CHECK_THROWS_AS(maximize_fixed_bc(f, 0.3, 0.0), Error);
    CHECK_THROWS_AS(maximize_fixed_bc(f, 2.5, 0.0), Error);
    SolverOptions o;
    o.working_cap = 10;
    CHECK_THROWS_AS(maximize_fixed_bc(f, 0.0, 0.0, o), Error);
    o.working_cap = 0;
    o.node_scale = 3;
    CHECK_THROWS_AS(maximize_fixed_bc(f, 0.0, 0.0, o), Error);
    CHECK_THROWS_AS(brute_force_max(generate_field(cfg(32, 2, 0.5, 2.0, 0)), 0.0, 0.0), Error);
    CHECK(grid_index(-1.5, 0.5) == -3);
    CHECK_THROWS_AS(grid_index(0.2, 0.5), Error);
}

TEST_CASE("tight working cap is reported as saturation") {
    const NoiseField f = generate_field(cfg(16, 2, 0.25, 4.0, 3));
    SolverOptions o;
    o.working_cap = 1;
    CHECK(maximize_fixed_bc(f, 0.0, 0.0, o).cap_saturated);
}

TEST_CASE("boundary sweep is consistent with single solves") {
    const NoiseField f = generate_field(cfg(8, 4, 0.25, 8.0, 5));
    SweepOptions so;
    so.window = 4.0;
    so.db = 1.0;
    const SweepResult sw = boundary_sweep(f, so);
    CHECK(sw.grid.size() == 9);
    CHECK(sw.scales == std::vector<int>{1, 2, 4, 8});
    const ExtremalActions ex = extremal_actions(sw);
    const double a = sw.M_at(0.0, 0.0);
    CHECK(ex.a_minus <= a);
    CHECK(a <= ex.a_plus);
    CHECK(a == doctest::Approx(maximize_fixed_bc(f, 0.0, 0.0).value).epsilon(1e-12));
    REQUIRE(sw.zero_bc_argmax.has_value());
    for (double y0 : {-3.0, 1.0})
        for (double y1 : {-4.0, 2.0}) {
            const std::size_t p = sw.pair(sw.locate(y0), sw.locate(y1));
            const DPSolution s = maximize_fixed_bc(f, y0, y1);
            CHECK(sw.value[p] == doctest::Approx(s.value).epsilon(1e-12));
            const HeightProfile lin = linear_part(y0, y1, 8);
            CHECK(sw.linear_action[p] == doctest::Approx((noise_integral(f, lin) - dirichlet(lin)) / 8).epsilon(1e-12));
            CHECK(sw.midpoint[p] == s.argmax.at(4.0));
            double d = 0.0;
            for (std::size_t k = 0; k < sw.scales.size(); ++k) d += sw.per_scale_D[p * sw.scales.size() + k];
            CHECK(d == doctest::Approx(dirichlet(s.argmax) / 8).epsilon(1e-12));
        }
    CHECK_THROWS_AS(sw.locate(0.5), Error);
    CHECK(tilde_minus(ex.a_minus, sw) == ex.a_minus);
}

TEST_CASE("restricted interval problems") {
    const NoiseField f = generate_field(cfg(8, 2, 0.25, 4.0, 8));
    const DPSolution s = maximize_fixed_bc(f, 0.0, 0.0);
    const IntervalSolution whole = maximize_on_interval(f, 0, 8, 0.0, 0.0);
    CHECK(whole.value == doctest::Approx(s.value * 8).epsilon(1e-12));
    const IntervalSolution part = maximize_on_interval(f, 2, 6, s.argmax.node(2), s.argmax.node(6));
    CHECK(part.value == doctest::Approx(interval_action(f, s.argmax, 2, 6)).epsilon(1e-12));
    CHECK_THROWS_AS(maximize_on_interval(f, 4, 4, 0.0, 0.0), Error);
}

TEST_CASE("conditional interval maximum over explicit corrections") {
    // l = 2: one interior node, so every admissible correction is listed.
    const FieldConfig c = cfg(8, 4, 0.25, 3.0, 13);
    const NoiseField f = generate_field(c);
    const HeightProfile base(8, 2, {0.0, 0.75, -0.5, 1.0, 0.25});
    for (int n = 1; n <= 4; ++n) {
        const double mid = 0.5 * (base.node(n - 1) + base.node(n));
        double best = -INFINITY;
        for (int j = -f.cap_steps(); j <= f.cap_steps(); ++j) {
            const HeightProfile corr(2, 1, {0.0, j * c.dy - mid, 0.0});
            best = std::max(best, (relative_interval_noise(f, base, n, 2, corr) - dirichlet(corr)) / 2);
        }
        const IntervalSolution cm = conditional_interval_max(f, base, n);
        CHECK(cm.value == doctest::Approx(best).epsilon(1e-12));
        CHECK(cm.heights.front() == base.node(n - 1));
        CHECK(cm.heights.back() == base.node(n));
    }
}

TEST_CASE("pasted competitor decomposes into coarse and interval parts") {
    const NoiseField f = generate_field(cfg(16, 2, 0.25, 6.0, 21));
    for (int l : {2, 4, 8}) {
        SolverOptions o;
        o.node_scale = l;
        const HeightProfile coarse = maximize_fixed_bc(f, 0.0, 0.0, o).argmax;
        const HeightProfile pasted = paste_conditional_maximizers(f, coarse);
        CHECK(coarsen(pasted, l) == coarse);
        double expect = action_of(f, coarse).action_per_length;
        for (int n = 1; n <= 16 / l; ++n) expect += conditional_interval_max(f, coarse, n).value * l / 16;
        CHECK(action_of(f, pasted).action_per_length == doctest::Approx(expect).epsilon(1e-12));
        CHECK(action_of(f, pasted).action_per_length <= maximize_fixed_bc(f, 0.0, 0.0).value + 1e-12);
    }
}

TEST_CASE("bin extremes bracket the members") {
    const NoiseField f = generate_field(cfg(8, 4, 0.25, 6.0, 2));
    NetPoint bin{8, 2, {0, 2, 0, -2, 0}};
    const BinExtremes e = bin_extremal_interval(f, bin, 2);
    CHECK(e.members == 64);  // offsets -1, -0.75, ..., 0.75 at both ends
    CHECK(e.inf <= e.sup);
    const HeightProfile base(8, 2, {0.0, 2.0, 0.0, -2.0, 0.0});
    const double centre = conditional_interval_max(f, base, 2).value;
    CHECK(e.inf <= centre);
    CHECK(centre <= e.sup);
}
