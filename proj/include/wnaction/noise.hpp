#pragma once

// Discretized planar white noise: one two-sided Brownian path in y per
// sub-column of width dx = 1/m, sampled on the grid j*dy for |j*dy| <= y_cap.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wnaction {

struct FieldConfig {
    int L = 4;                 // system length, power of two
    int m = 4;                 // sub-columns per unit x-interval, power of two
    double dy = 0.25;          // y-grid step, 2^-k
    double y_cap = 8.0;        // half-height of the sampled window, multiple of dy
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    bool zero_noise = false;   // debug: every path identically zero

    // Throws Error(InvalidConfig) when an invariant fails.
    void validate() const;

    int columns() const noexcept { return L * m; }
    double dx() const noexcept { return 1.0 / m; }
    // y_cap / dy
    int cap_steps() const noexcept;

    FieldConfig with_cap(double cap) const {
        FieldConfig c = *this;
        c.y_cap = cap;
        return c;
    }
    FieldConfig with_replica(std::uint64_t r) const {
        FieldConfig c = *this;
        c.replica = r;
        return c;
    }

    bool operator==(const FieldConfig&) const = default;
};

// Smallest multiple of dy that is >= y.
double round_up_to_grid(double y, double dy);

class NoiseField {
public:
    const FieldConfig& config() const noexcept { return config_; }
    int cap_steps() const noexcept { return cap_steps_; }
    int columns() const noexcept { return config_.columns(); }

    // B_column(j*dy); throws Error(OutOfWindow) if |j| > cap_steps.
    double path_value(int column, int j) const;

    // Unchecked access, j in [-cap_steps, cap_steps].
    double at(int column, int j) const noexcept {
        return values_[static_cast<std::size_t>(column) * stride_ + static_cast<std::size_t>(j + cap_steps_)];
    }

    // Entire sampled path of one column, index 0 <-> j = -cap_steps.
    std::span<const double> column(int column) const noexcept {
        return {values_.data() + static_cast<std::size_t>(column) * stride_, stride_};
    }

    // Copy with one increment replaced (used for negative controls only).
    // The increment leading to index j (j != 0) is shifted by delta; all
    // values further from zero on that side move with it.
    NoiseField with_perturbed_increment(int column, int j, double delta) const;

    void dump(std::ostream& out) const;
    static NoiseField load(std::istream& in);

    friend NoiseField generate_field(const FieldConfig& cfg);

    bool operator==(const NoiseField& o) const { return config_ == o.config_ && values_ == o.values_; }

private:
    NoiseField(FieldConfig cfg, int cap_steps, std::vector<double> values)
        : config_(cfg), cap_steps_(cap_steps), stride_(2 * static_cast<std::size_t>(cap_steps) + 1),
          values_(std::move(values)) {}

    FieldConfig config_;
    int cap_steps_ = 0;
    std::size_t stride_ = 1;
    std::vector<double> values_;  // column-major
};

NoiseField generate_field(const FieldConfig& cfg);

// The Gaussian increment landing on grid index j (j != 0) of a column,
// before scaling by sqrt(dx*dy). Pure function of (seed, replica, column, j).
double unit_increment(std::uint64_t seed, std::uint64_t replica, int column, int j) noexcept;

} // namespace wnaction
