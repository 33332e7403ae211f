#include <sstream>

#include "doctest.h"
#include "wnaction/error.hpp"
#include "wnaction/noise.hpp"
#include "wnaction/philox.hpp"
#include "wnaction/stats.hpp"

using namespace wnaction;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32(0)(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32(0xffffffffffffffffULL)(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32(0x299f31d0a4093822ULL)(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("config validation") {
    FieldConfig c;
    CHECK_NOTHROW(c.validate());
    FieldConfig bad = c;
    bad.L = 6;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = c;
    bad.dy = 0.3;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = c;
    bad.y_cap = 1.1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = c;
    bad.m = 3;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("paths start at zero and are reproducible") {
    FieldConfig c;
    c.L = 4;
    c.seed = 7;
    const NoiseField a = generate_field(c);
    const NoiseField b = generate_field(c);
    CHECK(a == b);
    for (int col = 0; col < a.columns(); ++col) CHECK(a.at(col, 0) == 0.0);
    CHECK_THROWS_AS(a.path_value(0, a.cap_steps() + 1), Error);
    CHECK(a.path_value(3, -5) == a.at(3, -5));

    const NoiseField other = generate_field(c.with_replica(1));
    CHECK_FALSE(a == other);
}

TEST_CASE("growing the cap keeps the inner window") {
    FieldConfig c;
    c.L = 4;
    c.y_cap = 2.0;
    const NoiseField small = generate_field(c);
    const NoiseField big = generate_field(c.with_cap(6.0));
    for (int col = 0; col < small.columns(); ++col)
        for (int j = -small.cap_steps(); j <= small.cap_steps(); ++j) CHECK(small.at(col, j) == big.at(col, j));
}

TEST_CASE("increments are the scaled unit normals") {
    FieldConfig c;
    c.L = 2;
    c.m = 2;
    c.dy = 0.5;
    c.y_cap = 2.0;
    c.seed = 11;
    const NoiseField f = generate_field(c);
    const double sigma = std::sqrt(c.dx() * c.dy);
    for (int col = 0; col < f.columns(); ++col)
        for (int j = 1; j <= f.cap_steps(); ++j) {
            CHECK(f.at(col, j) - f.at(col, j - 1) == doctest::Approx(sigma * unit_increment(11, 0, col, j)).epsilon(1e-12));
            CHECK(f.at(col, -j) - f.at(col, -j + 1) == doctest::Approx(sigma * unit_increment(11, 0, col, -j)).epsilon(1e-12));
        }
}

TEST_CASE("zero-noise debug field") {
    FieldConfig c;
    c.L = 4;
    c.zero_noise = true;
    const NoiseField f = generate_field(c);
    for (int col = 0; col < f.columns(); ++col)
        for (int j = -f.cap_steps(); j <= f.cap_steps(); ++j) CHECK(f.at(col, j) == 0.0);
}

TEST_CASE("dump and load round-trip") {
    FieldConfig c;
    c.L = 4;
    c.seed = 3;
    const NoiseField f = generate_field(c);
    std::stringstream ss;
    f.dump(ss);
    CHECK(NoiseField::load(ss) == f);
    std::stringstream junk("not a field");
    CHECK_THROWS_AS(NoiseField::load(junk), Error);
}

TEST_CASE("perturbed increment moves the outer tail only") {
    FieldConfig c;
    c.L = 2;
    const NoiseField f = generate_field(c);
    const NoiseField g = f.with_perturbed_increment(1, 3, 0.5);
    for (int j = -f.cap_steps(); j <= f.cap_steps(); ++j) {
        CHECK(g.at(0, j) == f.at(0, j));
        CHECK(g.at(1, j) == doctest::Approx(f.at(1, j) + (j >= 3 ? 0.5 : 0.0)));
    }
}

TEST_CASE("marginal variance is dx * |y|") {
    FieldConfig c;
    c.L = 2;
    c.m = 2;
    c.dy = 0.5;
    c.y_cap = 2.0;
    std::vector<double> top, bottom;
    for (std::uint64_t r = 0; r < 4000; ++r) {
        const NoiseField f = generate_field(c.with_replica(r));
        top.push_back(f.at(2, 4));
        bottom.push_back(f.at(1, -2));
    }
    const Moments mt = moments(top);
    const Moments mb = moments(bottom);
    CHECK(std::fabs(mt.variance - 1.0) < 5 * mt.stderr_variance);
    CHECK(std::fabs(mb.variance - 0.5) < 5 * mb.stderr_variance);
    CHECK(std::fabs(mt.mean) < 5 * mt.stderr_mean);
}
