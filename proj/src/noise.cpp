#include "wnaction/noise.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "wnaction/error.hpp"
#include "wnaction/philox.hpp"

namespace wnaction {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'N', 'F', 'I', 'E', 'L', 'D', '\0'};
constexpr std::uint32_t kDumpVersion = 1;

bool is_dyadic_step(double dy) {
    if (!(dy > 0.0) || dy > 1.0) return false;
    int exp = 0;
    const double mant = std::frexp(dy, &exp);
    return mant == 0.5;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error(ErrorKind::Io, "truncated field dump");
    return v;
}

} // namespace

void FieldConfig::validate() const {
    if (!is_power_of_two(L)) throw Error(ErrorKind::InvalidConfig, "L must be a power of two, got " + std::to_string(L));
    if (!is_power_of_two(m)) throw Error(ErrorKind::InvalidConfig, "m must be a power of two, got " + std::to_string(m));
    if (!is_dyadic_step(dy)) throw Error(ErrorKind::InvalidConfig, "dy must be 2^-k with k >= 0");
    const double steps = y_cap / dy;
    if (!(y_cap > 0.0) || steps != std::floor(steps) || steps > 1.0e7)
        throw Error(ErrorKind::InvalidConfig, "y_cap must be a positive multiple of dy");
}

int FieldConfig::cap_steps() const noexcept { return static_cast<int>(std::llround(y_cap / dy)); }

double round_up_to_grid(double y, double dy) { return std::ceil(y / dy - 1e-12) * dy; }

double unit_increment(std::uint64_t seed, std::uint64_t replica, int column, int j) noexcept {
    const Philox4x32 prf(seed);
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(column), static_cast<std::uint32_t>(j),
                                     static_cast<std::uint32_t>(replica),
                                     static_cast<std::uint32_t>(replica >> 32)};
    return standard_normal(prf(ctr));
}

NoiseField generate_field(const FieldConfig& cfg) {
    cfg.validate();
    const int cap = cfg.cap_steps();
    const std::size_t stride = 2 * static_cast<std::size_t>(cap) + 1;
    std::vector<double> values(stride * static_cast<std::size_t>(cfg.columns()), 0.0);
    if (!cfg.zero_noise) {
        const double sigma = std::sqrt(cfg.dx() * cfg.dy);
        // Columns are independent; values are accumulated outward from j = 0
        // so a larger cap reproduces the inner window bit for bit.
        for (int col = 0; col < cfg.columns(); ++col) {
            double* path = values.data() + static_cast<std::size_t>(col) * stride + cap;
            double up = 0.0;
            double down = 0.0;
            for (int j = 1; j <= cap; ++j) {
                up += sigma * unit_increment(cfg.seed, cfg.replica, col, j);
                down += sigma * unit_increment(cfg.seed, cfg.replica, col, -j);
                path[j] = up;
                path[-j] = down;
            }
        }
    }
    return NoiseField(cfg, cap, std::move(values));
}

double NoiseField::path_value(int col, int j) const {
    if (col < 0 || col >= columns()) throw Error(ErrorKind::InvalidArgument, "column out of range");
    if (j < -cap_steps_ || j > cap_steps_)
        throw Error(ErrorKind::OutOfWindow, "|j*dy| exceeds y_cap; regenerate with a larger cap");
    return at(col, j);
}

NoiseField NoiseField::with_perturbed_increment(int col, int j, double delta) const {
    if (j == 0 || j < -cap_steps_ || j > cap_steps_ || col < 0 || col >= columns())
        throw Error(ErrorKind::InvalidArgument, "bad increment index");
    NoiseField copy = *this;
    double* path = copy.values_.data() + static_cast<std::size_t>(col) * stride_ + cap_steps_;
    if (j > 0) {
        for (int k = j; k <= cap_steps_; ++k) path[k] += delta;
    } else {
        for (int k = j; k >= -cap_steps_; --k) path[k] += delta;
    }
    return copy;
}

void NoiseField::dump(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    write_pod(out, kDumpVersion);
    write_pod(out, static_cast<std::int32_t>(config_.L));
    write_pod(out, static_cast<std::int32_t>(config_.m));
    write_pod(out, config_.dy);
    write_pod(out, config_.y_cap);
    write_pod(out, config_.seed);
    write_pod(out, config_.replica);
    write_pod(out, static_cast<std::uint8_t>(config_.zero_noise ? 1 : 0));
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!out) throw Error(ErrorKind::Io, "failed writing field dump");
}

NoiseField NoiseField::load(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw Error(ErrorKind::SchemaMismatch, "not a field dump");
    if (read_pod<std::uint32_t>(in) != kDumpVersion) throw Error(ErrorKind::SchemaMismatch, "unknown field dump version");
    FieldConfig cfg;
    cfg.L = read_pod<std::int32_t>(in);
    cfg.m = read_pod<std::int32_t>(in);
    cfg.dy = read_pod<double>(in);
    cfg.y_cap = read_pod<double>(in);
    cfg.seed = read_pod<std::uint64_t>(in);
    cfg.replica = read_pod<std::uint64_t>(in);
    cfg.zero_noise = read_pod<std::uint8_t>(in) != 0;
    cfg.validate();
    const int cap = cfg.cap_steps();
    std::vector<double> values((2 * static_cast<std::size_t>(cap) + 1) * static_cast<std::size_t>(cfg.columns()));
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw Error(ErrorKind::Io, "truncated field dump");
    return NoiseField(cfg, cap, std::move(values));
}

} // namespace wnaction
