#include "wnaction/profile.hpp"

#include <cmath>
#include <sstream>

#include "wnaction/error.hpp"

namespace wnaction {

HeightProfile::HeightProfile(int L, int scale, std::vector<double> values)
    : L_(L), scale_(scale), values_(std::move(values)) {
    if (L <= 0 || scale <= 0 || L % scale != 0)
        throw Error(ErrorKind::InvalidScale, "scale must divide L");
    if (values_.size() != static_cast<std::size_t>(L / scale + 1))
        throw Error(ErrorKind::InvalidArgument, "profile needs L/scale + 1 values");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "profile values must be finite");
}

HeightProfile HeightProfile::zero(int L, int scale) { return constant(L, 0.0, scale); }

HeightProfile HeightProfile::constant(int L, double y, int scale) {
    if (scale <= 0 || L % scale != 0) throw Error(ErrorKind::InvalidScale, "scale must divide L");
    return HeightProfile(L, scale, std::vector<double>(static_cast<std::size_t>(L / scale + 1), y));
}

double HeightProfile::at(double x) const {
    if (x <= 0.0) return values_.front();
    if (x >= L_) return values_.back();
    const double u = x / scale_;
    const auto n = static_cast<std::size_t>(u);
    const double t = u - static_cast<double>(n);
    if (t == 0.0) return values_[n];
    return values_[n] + (values_[n + 1] - values_[n]) * t;
}

namespace {

// Brings two profiles to a common (finer) scale.
std::pair<HeightProfile, HeightProfile> common_grid(const HeightProfile& a, const HeightProfile& b) {
    if (a.length() != b.length()) throw Error(ErrorKind::InvalidArgument, "profiles have different L");
    const int s = std::min(a.scale(), b.scale());
    return {refine(a, s), refine(b, s)};
}

} // namespace

HeightProfile HeightProfile::operator+(const HeightProfile& other) const {
    auto [a, b] = common_grid(*this, other);
    std::vector<double> v = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
    return {a.length(), a.scale(), std::move(v)};
}

HeightProfile HeightProfile::operator-(const HeightProfile& other) const { return *this + (-other); }

HeightProfile HeightProfile::operator-() const { return scaled(-1.0); }

HeightProfile HeightProfile::scaled(double factor) const {
    std::vector<double> v = values_;
    for (double& x : v) x *= factor;
    return {L_, scale_, std::move(v)};
}

HeightProfile refine(const HeightProfile& h, int s) {
    if (s <= 0 || h.scale() % s != 0) throw Error(ErrorKind::InvalidScale, "refinement scale must divide the profile scale");
    if (s == h.scale()) return h;
    const int ratio = h.scale() / s;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(h.length() / s + 1));
    for (int n = 0; n < h.pieces(); ++n) {
        const double a = h.node(n);
        const double b = h.node(n + 1);
        for (int k = 0; k < ratio; ++k) v.push_back(a + (b - a) * (static_cast<double>(k) / ratio));
    }
    v.push_back(h.back());
    return {h.length(), s, std::move(v)};
}

HeightProfile coarsen(const HeightProfile& h, int l) {
    if (!is_power_of_two(l) || l % h.scale() != 0 || h.length() % l != 0)
        throw Error(ErrorKind::InvalidScale, "coarsening scale must be dyadic, a multiple of the profile scale and divide L");
    const int step = l / h.scale();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(h.length() / l + 1));
    for (int n = 0; n <= h.pieces(); n += step) v.push_back(h.node(n));
    return {h.length(), l, std::move(v)};
}

HeightProfile scale_component(const HeightProfile& h, int rho) {
    if (!is_power_of_two(rho) || rho < h.scale() || rho > h.length())
        throw Error(ErrorKind::InvalidScale, "rho must be dyadic with scale <= rho <= L");
    if (rho == h.length()) return coarsen(h, rho);
    const HeightProfile fine = coarsen(h, rho);
    const HeightProfile coarse = refine(coarsen(h, 2 * rho), rho);
    return fine - coarse;
}

std::vector<int> dyadic_scales(const HeightProfile& h) {
    std::vector<int> out;
    for (int rho = h.scale(); rho <= h.length(); rho *= 2) out.push_back(rho);
    return out;
}

HeightProfile linear_part(double y0, double y1, int L) { return {L, L, {y0, y1}}; }

double dirichlet(const HeightProfile& h) {
    double sum = 0.0;
    for (int n = 0; n < h.pieces(); ++n) {
        const double d = h.node(n + 1) - h.node(n);
        sum += d * d;
    }
    return sum / (2.0 * h.scale());
}

double dirichlet_bilinear(const HeightProfile& h, const HeightProfile& g) {
    auto [a, b] = common_grid(h, g);
    double sum = 0.0;
    for (int n = 0; n < a.pieces(); ++n) sum += (a.node(n + 1) - a.node(n)) * (b.node(n + 1) - b.node(n));
    return sum / (2.0 * a.scale());
}

HeightProfile green_profile(int x, int L) {
    if (x <= 0 || x >= L) throw Error(ErrorKind::InvalidArgument, "Green function pole must be an interior lattice point");
    std::vector<double> v(static_cast<std::size_t>(L + 1));
    for (int y = 0; y <= L; ++y) {
        v[static_cast<std::size_t>(y)] = y <= x ? 2.0 * y * (L - x) / L : 2.0 * x * (L - y) / L;
    }
    return {L, 1, std::move(v)};
}

HeightProfile rescale(const HeightProfile& h, const RescaleSpec& spec, double dy) {
    if (!is_power_of_two(spec.lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be a power of two >= 1");
    if (!(spec.mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    std::vector<double> v = h.values();
    for (double& y : v) {
        y *= spec.mu;
        const double steps = y / dy;
        if (steps != std::round(steps)) throw Error(ErrorKind::InvalidArgument, "rescaled heights leave the dy grid");
    }
    return {h.length() * spec.lambda, h.scale() * spec.lambda, std::move(v)};
}

std::string to_csv_row(const HeightProfile& h, double dy) {
    std::ostringstream os;
    os.precision(17);
    os << h.length() << ',' << h.scale() << ',' << dy;
    for (double v : h.values()) os << ',' << v;
    return os.str();
}

HeightProfile profile_from_csv_row(const std::string& row, double* dy_out) {
    std::istringstream is(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) throw Error(ErrorKind::SchemaMismatch, "profile row needs L,scale,dy and at least two values");
    try {
        const int L = std::stoi(cells[0]);
        const int scale = std::stoi(cells[1]);
        if (dy_out) *dy_out = std::stod(cells[2]);
        std::vector<double> v;
        for (std::size_t i = 3; i < cells.size(); ++i) v.push_back(std::stod(cells[i]));
        return {L, scale, std::move(v)};
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::SchemaMismatch, "unparsable profile row");
    }
}

} // namespace wnaction
