#include <cmath>
#include <set>

#include "doctest.h"
#include "wnaction/error.hpp"
#include "wnaction/net.hpp"
#include "wnaction/oracle_suite.hpp"

using namespace wnaction;

namespace {

// Direct enumeration of the N = 4 ball (v(0) = 0), checking each level's sum of
// squared doubled midpoint offsets.
long long brute_four(const NetConstraints& c) {
    long long n = 0;
    const auto r = static_cast<long long>(std::sqrt(static_cast<double>(c.delta_sq_max))) + 1;
    for (long long v4 = -r; v4 <= r; ++v4) {
        if (v4 * v4 > c.delta_sq_max) continue;
        for (long long v2 = -4 * r; v2 <= 4 * r; ++v2) {
            const long long o = 2 * v2 - v4;
            if (o * o > c.level_T[0]) continue;
            for (long long v1 = -4 * r; v1 <= 4 * r; ++v1) {
                const long long o1 = 2 * v1 - v2;
                if (o1 * o1 > c.level_T[1]) continue;
                for (long long v3 = -4 * r; v3 <= 4 * r; ++v3) {
                    const long long o3 = 2 * v3 - v2 - v4;
                    if (o1 * o1 + o3 * o3 <= c.level_T[1]) ++n;
                }
            }
        }
    }
    return n * (2 * c.v0_max + 1);
}

} // namespace

TEST_CASE("projection uses half-open bins") {
    CHECK(project(HeightProfile(4, 4, {5.0, 6.0}), 4).values == std::vector<long long>{4, 8});
    CHECK(project(HeightProfile(4, 4, {2.0, -2.0}), 4).values == std::vector<long long>{4, 0});
    CHECK(project(HeightProfile(4, 4, {1.99, -2.01}), 4).values == std::vector<long long>{0, -4});
    const NetPoint p = project(HeightProfile(4, 1, {0.0, 1.0, 2.5, 1.0, -0.5}), 2);
    CHECK(p.values == std::vector<long long>{0, 2, 0});
    CHECK(p.to_profile().scale() == 2);
    CHECK_THROWS_AS(project(HeightProfile(4, 2, {0.0, 0.0, 0.0}), 1), Error);
}

TEST_CASE("constraint budgets") {
    const NetConstraints c = constraints_for({8, 2, 3.0});
    CHECK(c.N == 4);
    CHECK(c.v0_max == 12);
    CHECK(c.delta_sq_max == 1536);
    CHECK(c.level_T == std::vector<long long>{384, 48});
    CHECK_THROWS_AS(constraints_for({8, 2, 2.0}), Error);
    CHECK_THROWS_AS(constraints_for({64, 2, 3.0}), Error);
}

TEST_CASE("smallest ball matches the rectangle scan") {
    const NetBallSpec spec{2, 1, std::exp(1.0)};
    CHECK(enumerate_net_ball(spec) == rectangle_scan_count(spec));
    CHECK(enumerate_net_ball({4, 2, 3.0}) == rectangle_scan_count({4, 2, 3.0}));
}

TEST_CASE("residue count equals direct enumeration") {
    for (double nu : {3.0, 9.0}) {
        const NetConstraints c = constraints_for({4, 1, nu});
        CHECK(static_cast<long long>(count_constrained(c)) == brute_four(c));
    }
}

TEST_CASE("streamed members are distinct, in the ball, and counted") {
    const NetBallSpec spec{4, 1, 3.0};
    std::set<std::vector<long long>> seen;
    bool inside = true;
    const std::function<void(const NetPoint&)> sink = [&](const NetPoint& p) {
        seen.insert(p.values);
        const HeightProfile h = p.to_profile();
        if (std::fabs(h.front()) > spec.nu * 4) inside = false;
        for (int rho = 1; rho <= 4; rho *= 2)
            if (dirichlet(scale_component(h, rho)) / 4 > static_cast<double>(rho * rho) * spec.nu) inside = false;
    };
    const BigCount n = enumerate_net_ball(spec, &sink);
    CHECK(inside);
    CHECK(seen.size() == static_cast<std::size_t>(n));
    CHECK(n == enumerate_net_ball(spec));
}

TEST_CASE("count ratios and formatting") {
    CHECK(to_string(BigCount{0}) == "0");
    CHECK(to_string(BigCount{1} << 100) == "1267650600228229401496703205376");
    CHECK(log_count(BigCount{1} << 100) == doctest::Approx(100 * std::log(2.0)));
    const double r3 = count_bound_ratio({8, 1, 3.0});
    const double r9 = count_bound_ratio({8, 1, 9.0});
    CHECK(r3 > 0.0);
    CHECK(r9 > 0.0);
    CHECK(enumerate_net_ball({8, 1, 9.0}) > enumerate_net_ball({8, 1, 3.0}));
}
