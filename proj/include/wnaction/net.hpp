#pragma once

// The integer net of coarse configurations, the nearest-point projection onto
// it, and exact counting of the energy-constrained ball.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wnaction/profile.hpp"

namespace wnaction {

using BigCount = unsigned __int128;

std::string to_string(BigCount n);
long double log_count(BigCount n);

struct NetPoint {
    int L = 1;
    int l = 1;
    std::vector<long long> values;  // h(n*l), each a multiple of l

    HeightProfile to_profile() const;
    bool operator==(const NetPoint&) const = default;
};

struct NetBallSpec {
    int L = 2;
    int l = 1;
    double nu = 3.0;

    void validate() const;
    int ratio() const noexcept { return L / l; }
};

// Pi(n*l) = l * floor(h(n*l)/l + 1/2); the bins are half-open [Pi - l/2, Pi + l/2).
// h must be sampled on a scale dividing l.
NetPoint project(const HeightProfile& h, int l);

// Constraints of the ball in units of l, with N = L/l nodes per side:
//   |v(0)| <= v0_max,
//   (v(N) - v(0))^2 <= delta_sq_max,
//   at bisection level k = 1..log2 N the doubled midpoint offsets O
//   (O = 2*v(mid) - v(left) - v(right)) satisfy sum O^2 <= level_T[k-1].
struct NetConstraints {
    int N = 2;
    long long v0_max = 0;
    long long delta_sq_max = 0;
    std::vector<long long> level_T;
};

NetConstraints constraints_for(const NetBallSpec& spec);

// Exact cardinality by residue-class recursion over the bisection levels.
BigCount count_constrained(const NetConstraints& c);

// Depth-first listing in a fixed order; values in units of l.
// Throws Error(InstanceTooLarge) once more than max_nodes search nodes are visited.
BigCount stream_constrained(const NetConstraints& c, const std::function<void(const std::vector<long long>&)>& sink,
                            std::uint64_t max_nodes = 100'000'000);

// Count of N_nu; with a sink, members are streamed (in physical units) by depth-first search.
BigCount enumerate_net_ball(const NetBallSpec& spec, const std::function<void(const NetPoint&)>* sink = nullptr);

// ln(count) / ((L/l) ln nu).
double count_bound_ratio(const NetBallSpec& spec);

} // namespace wnaction
