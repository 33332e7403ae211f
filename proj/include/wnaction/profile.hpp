#pragma once

// Piecewise-linear height profiles on [0, L] and the multiscale operators
// acting on them. Lengths are integers (x-units); heights are doubles that
// hold dyadic rationals, so every projection and scale split below is exact
// in binary floating point.

#include <cstdint>
#include <string>
#include <vector>

namespace wnaction {

class HeightProfile {
public:
    HeightProfile() = default;
    // values[n] = h(n * scale), n = 0..L/scale.
    HeightProfile(int L, int scale, std::vector<double> values);

    static HeightProfile zero(int L, int scale = 1);
    static HeightProfile constant(int L, double y, int scale = 1);

    int length() const noexcept { return L_; }
    int scale() const noexcept { return scale_; }
    int pieces() const noexcept { return L_ / scale_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double node(int n) const { return values_.at(static_cast<std::size_t>(n)); }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }

    // Linear interpolation at any x in [0, L].
    double at(double x) const;

    HeightProfile operator+(const HeightProfile& other) const;
    HeightProfile operator-(const HeightProfile& other) const;
    HeightProfile operator-() const;
    HeightProfile scaled(double factor) const;

    bool operator==(const HeightProfile&) const = default;

private:
    int L_ = 1;
    int scale_ = 1;
    std::vector<double> values_{0.0, 0.0};
};

struct RescaleSpec {
    int lambda = 1;   // x-scale factor, power of two
    double mu = 1.0;  // y-scale factor
};

// Same function sampled at the finer dyadic scale s (s divides h.scale()).
HeightProfile refine(const HeightProfile& h, int s);

// h_{>=l}: linear interpolation of h on the grid l*Z.
HeightProfile coarsen(const HeightProfile& h, int l);

// h_rho = h_{>=rho} - h_{>=2rho} for rho < L, and h_L = h_{>=L}.
HeightProfile scale_component(const HeightProfile& h, int rho);

// Dyadic scales h.scale(), 2*h.scale(), ..., L.
std::vector<int> dyadic_scales(const HeightProfile& h);

// a_{y0,y1}: affine profile on [0, L] (one piece).
HeightProfile linear_part(double y0, double y1, int L);

// (1/2) * integral of the squared slope.
double dirichlet(const HeightProfile& h);

// (1/2) * integral of h' g'; both profiles are refined to a common scale.
double dirichlet_bilinear(const HeightProfile& h, const HeightProfile& g);

// Tent G(x, .) with zero boundary values and dirichlet_bilinear(h, G) = h(x)
// for every h vanishing at 0 and L.
HeightProfile green_profile(int x, int L);

// h_hat(lambda * x) = mu * h(x). Every new value must be a multiple of dy.
HeightProfile rescale(const HeightProfile& h, const RescaleSpec& spec, double dy);

// CSV row: L,scale,dy,v0,v1,...
std::string to_csv_row(const HeightProfile& h, double dy);
HeightProfile profile_from_csv_row(const std::string& row, double* dy_out = nullptr);

} // namespace wnaction
