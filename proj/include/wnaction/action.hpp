#pragma once

// The action W(h) - D(h) of a profile against a discretized noise field.
//
// Quadrature: inside each sub-column the height is frozen at its value at the
// column midpoint and snapped to the y-grid (round half toward zero), so
//   W(h) = sum_i B_i(snap(h(x_i_mid))).

#include <map>
#include <vector>

#include "wnaction/noise.hpp"
#include "wnaction/profile.hpp"

namespace wnaction {

struct ActionBreakdown {
    double W = 0.0;
    double D = 0.0;
    double action = 0.0;             // W - D
    double action_per_length = 0.0;  // (W - D) / L
    std::map<int, double> per_scale_D;  // rho -> D(h_rho) / L
};

// Nearest grid index to y/dy, halves rounded toward zero.
int snap_index(double y, double dy);

// Same rounding on the exact rational num / den (den > 0).
inline long long div_round_half_toward_zero(long long num, long long den) noexcept {
    const long long q = num / den;
    const long long r = num % den;
    const long long twice = 2 * (r < 0 ? -r : r);
    if (twice > den) return num < 0 ? q - 1 : q + 1;
    return q;
}

double noise_integral(const NoiseField& field, const HeightProfile& h);

// W restricted to the columns of [x_begin, x_end), h given in global x.
double noise_integral_on(const NoiseField& field, const HeightProfile& h, int x_begin, int x_end);

ActionBreakdown action_of(const NoiseField& field, const HeightProfile& h);

// (W - D) restricted to [x_begin, x_end).
double interval_action(const NoiseField& field, const HeightProfile& h, int x_begin, int x_end);

// W_n(h_n) = W_I(base + h_n(. - (n-1)l)) - W_I(base), I = [(n-1)l, nl], n >= 1.
double relative_interval_noise(const NoiseField& field, const HeightProfile& base, int n, int l,
                               const HeightProfile& correction);

// h_n = (h - h_{>=l})(. + (n-1)l) as a profile on [0, l].
HeightProfile interval_correction(const HeightProfile& h, int n, int l);

struct Decomposition {
    ActionBreakdown coarse;          // of h_{>=l}
    std::vector<double> fine_terms;  // (W_n - D)(h_n) / l, n = 1..L/l
    double residual = 0.0;
};

// (W-D)(h)/L = (W-D)(h_{>=l})/L + (L/l)^-1 sum_n (W_n - D)(h_n)/l + residual.
Decomposition decompose_action(const NoiseField& field, const HeightProfile& h, int l);

} // namespace wnaction
