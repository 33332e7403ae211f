#pragma once

// Exact forward dynamic program over a chain of equal segments.
//
// States are grid indices j in [-J, J] at the segment endpoints. A segment of
// seg_len unit intervals covers seg_len*m columns; moving from index a to b
// collects sum_c B_c(snap(a + (b-a)(2c+1)/(2M))) - ((b-a)dy)^2 / (2 seg_len).
// Candidates are scanned outward from b and the scan stops once an upper
// bound on every remaining predecessor falls below the incumbent, so the
// result is the exact maximum.

#include <cstdint>
#include <limits>
#include <vector>

#include "wnaction/noise.hpp"

namespace wnaction::detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class ChainDP {
public:
    // Chain starts at lattice x0 and has `segments` pieces of length seg_len.
    ChainDP(const NoiseField& field, int x0, int segments, int seg_len, int cap, bool prefer_larger = false);

    int cap() const noexcept { return J_; }
    int segments() const noexcept { return segs_; }

    // Collected weight of one segment (0-based) from index a to index b.
    double weight(int segment, int a, int b) const noexcept;

    // Tabulates weight(s, a, b) for |b - a| <= radius; worthwhile when the
    // same chain is run from many starts.
    void cache_weights(int radius);

    // Forward pass from `start` at node 0. keep_layers retains every V layer.
    void run(int start, bool keep_layers = false);

    // Best accumulated value at the last node (-inf if unreachable).
    double value(int end) const noexcept { return last_[static_cast<std::size_t>(end + J_)]; }
    const std::vector<double>& last_layer() const noexcept { return last_; }
    const std::vector<std::vector<double>>& layers() const noexcept { return layers_; }

    // Node indices 0..segments of the optimal chain ending at `end`.
    std::vector<int> path(int end) const;

private:
    const double* column(int segment, int c) const noexcept {
        return cols_[static_cast<std::size_t>(segment * M_ + c)];
    }

    const NoiseField& field_;
    int segs_;
    int seg_len_;
    int M_;
    int J_;
    bool prefer_larger_;
    double dy_;
    std::vector<int> floor_off_;               // [(delta + 2J) * M + c]
    std::vector<std::uint8_t> frac_class_;     // 0 below half, 1 tie, 2 above half
    std::vector<const double*> cols_;          // pointer to j = 0 of each column
    // Tiered noise bounds: for tier t, local_[t][s * K + b + J] is the sum over
    // the columns of segment s of max B_c on [b - D_t, b + D_t].
    std::vector<int> tier_radius_;
    std::vector<std::vector<double>> local_;
    int cache_radius_ = -1;
    std::vector<double> cache_;                // [(s * K + b + J) * (2R + 1) + delta + R]
    std::vector<std::vector<int>> pred_;       // per segment, indexed by b + J
    std::vector<std::vector<double>> layers_;
    std::vector<double> last_;
};

} // namespace wnaction::detail
