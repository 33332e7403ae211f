#include "doctest.h"
#include "wnaction/oracle_suite.hpp"

using namespace wnaction;

namespace {

SuiteOptions tiny() {
    SuiteOptions o;
    o.seeds = {1, 2};
    o.calibration_replicas = 200;
    o.identity_instances = 3;
    return o;
}

const CheckResult& find(const ValidationReport& r, const std::string& name) {
    for (const CheckResult& c : r.checks)
        if (c.name == name) return c;
    FAIL("no check named " << name);
    return r.checks.front();
}

} // namespace

TEST_CASE("battery passes and keeps its order") {
    const ValidationReport r = run_suite(tiny());
    CHECK(r.all_pass());
    const std::vector<std::string> order = {
        "noise-calibration", "decomposition-residual", "dirichlet-orthogonality", "linear-part-pythagoras",
        "oracle-equivalence", "restriction-optimality", "green-reproducing", "green-perturbation",
        "sandwich", "two-scale-upper-bins", "two-scale-lower-competitor", "projection-bins", "net-count"};
    REQUIRE(r.checks.size() == order.size());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(r.checks[i].name == order[i]);
    CHECK(r.to_json().find("\"all_pass\": true") != std::string::npos);
    CHECK(run_suite(tiny()).to_json() == r.to_json());
}

TEST_CASE("broken tie-break fails oracle equivalence with a reproducer") {
    SuiteOptions o = tiny();
    o.flip_dp_tie_break = true;
    const CheckResult c = check_oracle_equivalence(o);
    CHECK_FALSE(c.pass);
    CHECK(c.instance.find("seed=") != std::string::npos);
    CHECK(c.instance.find("L=4") != std::string::npos);
}

TEST_CASE("corrupted increment fails calibration only") {
    SuiteOptions o = tiny();
    o.make_field = [](const FieldConfig& c) { return generate_field(c).with_perturbed_increment(0, 1, 3.0); };
    CHECK_FALSE(check_noise_calibration(o).pass);
    CHECK(check_decomposition(o).pass);
    const ValidationReport r = run_suite(o);
    CHECK_FALSE(find(r, "noise-calibration").pass);
    CHECK(find(r, "decomposition-residual").pass);
    CHECK_FALSE(r.all_pass());
}
