#include "wnaction/action.hpp"

#include <cmath>

#include "wnaction/error.hpp"

namespace wnaction {

int snap_index(double y, double dy) {
    const double u = y / dy;
    const double fl = std::floor(u);
    const double frac = u - fl;
    double r;
    if (frac > 0.5) {
        r = fl + 1.0;
    } else if (frac < 0.5) {
        r = fl;
    } else {
        r = u > 0.0 ? fl : fl + 1.0;
    }
    return static_cast<int>(r);
}

namespace {

void check_length(const NoiseField& field, const HeightProfile& h) {
    if (h.length() != field.config().L) throw Error(ErrorKind::InvalidArgument, "profile length does not match the field");
}

double column_value(const NoiseField& field, int col, double y) {
    const int j = snap_index(y, field.config().dy);
    if (j < -field.cap_steps() || j > field.cap_steps())
        throw Error(ErrorKind::OutOfWindow, "profile leaves the sampled y-window");
    return field.at(col, j);
}

double column_mid(int col, int m) { return (col + 0.5) / m; }

double interval_dirichlet(const HeightProfile& h, int x_begin, int x_end) {
    const HeightProfile u = refine(h, 1);
    double sum = 0.0;
    for (int x = x_begin; x < x_end; ++x) {
        const double d = u.node(x + 1) - u.node(x);
        sum += d * d;
    }
    return 0.5 * sum;
}

} // namespace

double noise_integral_on(const NoiseField& field, const HeightProfile& h, int x_begin, int x_end) {
    const int m = field.config().m;
    double sum = 0.0;
    for (int col = x_begin * m; col < x_end * m; ++col) sum += column_value(field, col, h.at(column_mid(col, m)));
    return sum;
}

double noise_integral(const NoiseField& field, const HeightProfile& h) {
    check_length(field, h);
    return noise_integral_on(field, h, 0, h.length());
}

ActionBreakdown action_of(const NoiseField& field, const HeightProfile& h) {
    check_length(field, h);
    ActionBreakdown out;
    out.W = noise_integral(field, h);
    out.D = dirichlet(h);
    out.action = out.W - out.D;
    out.action_per_length = out.action / h.length();
    for (int rho : dyadic_scales(h)) out.per_scale_D[rho] = dirichlet(scale_component(h, rho)) / h.length();
    return out;
}

double interval_action(const NoiseField& field, const HeightProfile& h, int x_begin, int x_end) {
    check_length(field, h);
    return noise_integral_on(field, h, x_begin, x_end) - interval_dirichlet(h, x_begin, x_end);
}

HeightProfile interval_correction(const HeightProfile& h, int n, int l) {
    if (n < 1 || n > h.length() / l) throw Error(ErrorKind::InvalidArgument, "interval index out of range");
    const HeightProfile diff = refine(h - coarsen(h, l), std::min(h.scale(), l));
    const int s = diff.scale();
    const int first = (n - 1) * l / s;
    std::vector<double> v(diff.values().begin() + first, diff.values().begin() + first + l / s + 1);
    return {l, s, std::move(v)};
}

double relative_interval_noise(const NoiseField& field, const HeightProfile& base, int n, int l,
                               const HeightProfile& correction) {
    check_length(field, base);
    if (n < 1 || n > base.length() / l) throw Error(ErrorKind::InvalidArgument, "interval index out of range");
    if (correction.length() != l) throw Error(ErrorKind::InvalidArgument, "correction must live on [0, l]");
    if (correction.front() != 0.0 || correction.back() != 0.0)
        throw Error(ErrorKind::InvalidArgument, "correction must vanish at both ends");
    const int m = field.config().m;
    const int x0 = (n - 1) * l;
    double sheared = 0.0;
    double plain = 0.0;
    for (int col = x0 * m; col < (x0 + l) * m; ++col) {
        const double x = column_mid(col, m);
        const double yb = base.at(x);
        sheared += column_value(field, col, yb + correction.at(x - x0));
        plain += column_value(field, col, yb);
    }
    return sheared - plain;
}

Decomposition decompose_action(const NoiseField& field, const HeightProfile& h, int l) {
    check_length(field, h);
    const int L = h.length();
    const HeightProfile coarse = coarsen(h, l);
    Decomposition out;
    out.coarse = action_of(field, coarse);
    double fine_sum = 0.0;
    for (int n = 1; n <= L / l; ++n) {
        const HeightProfile hn = interval_correction(h, n, l);
        const double wn = relative_interval_noise(field, coarse, n, l, hn);
        const double term = (wn - dirichlet(hn)) / l;
        out.fine_terms.push_back(term);
        fine_sum += term;
    }
    const double full = action_of(field, h).action_per_length;
    out.residual = full - out.coarse.action_per_length - fine_sum / (static_cast<double>(L) / l);
    return out;
}

} // namespace wnaction
