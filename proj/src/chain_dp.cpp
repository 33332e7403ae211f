#include "chain_dp.hpp"

#include <algorithm>
#include <bit>

#include "wnaction/error.hpp"

namespace wnaction::detail {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

ChainDP::ChainDP(const NoiseField& field, int x0, int segments, int seg_len, int cap, bool prefer_larger)
    : field_(field), segs_(segments), seg_len_(seg_len), M_(seg_len * field.config().m), J_(cap),
      prefer_larger_(prefer_larger), dy_(field.config().dy) {
    if (segments < 1 || seg_len < 1 || x0 < 0 || x0 + segments * seg_len > field.config().L)
        throw Error(ErrorKind::InvalidArgument, "chain does not fit inside [0, L]");
    if (cap < 0 || cap > field.cap_steps()) throw Error(ErrorKind::OutOfWindow, "working cap exceeds the sampled window");

    const long long twoM = 2LL * M_;
    const std::size_t deltas = 4 * static_cast<std::size_t>(J_) + 1;
    floor_off_.resize(deltas * static_cast<std::size_t>(M_));
    frac_class_.resize(floor_off_.size());
    for (int delta = -2 * J_; delta <= 2 * J_; ++delta) {
        for (int c = 0; c < M_; ++c) {
            const long long num = static_cast<long long>(delta) * (2 * c + 1);
            const long long f = floor_div(num, twoM);
            const long long rem = num - f * twoM;
            const std::size_t k = static_cast<std::size_t>(delta + 2 * J_) * static_cast<std::size_t>(M_) + static_cast<std::size_t>(c);
            floor_off_[k] = static_cast<int>(f);
            frac_class_[k] = rem < M_ ? 0 : (rem == M_ ? 1 : 2);
        }
    }

    const int m = field.config().m;
    const int K = 2 * J_ + 1;
    cols_.resize(static_cast<std::size_t>(segs_ * M_));
    for (int s = 0; s < segs_; ++s)
        for (int c = 0; c < M_; ++c) {
            const int col = (x0 + s * seg_len_) * m + c;
            cols_[static_cast<std::size_t>(s * M_ + c)] = field.column(col).data() + field.cap_steps();
        }

    for (int r = 2; r < 2 * J_; r *= 2) tier_radius_.push_back(r);
    tier_radius_.push_back(std::max(2 * J_, 1));
    local_.assign(tier_radius_.size(), std::vector<double>(static_cast<std::size_t>(segs_) * static_cast<std::size_t>(K), 0.0));
    std::vector<int> window(static_cast<std::size_t>(K));
    for (std::size_t t = 0; t < tier_radius_.size(); ++t) {
        for (int s = 0; s < segs_; ++s) {
            double* out = local_[t].data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(K);
            for (int c = 0; c < M_; ++c) {
                const double* p = column(s, c);
                // Column c sits at fraction (2c+1)/(2M) of the segment, so its
                // snapped height is within (1 - (2c+1)/(2M)) * d + 1/2 of b.
                const long long twoM = 2LL * M_;
                const int r = static_cast<int>(std::min<long long>(
                    2LL * J_, ((twoM - 2 * c - 1) * tier_radius_[t] + twoM - 1) / twoM + 1));
                // Sliding maximum of p over [b - r, b + r] with a monotone deque.
                std::size_t head = 0, tail = 0;
                int next = -J_;
                for (int b = -J_; b <= J_; ++b) {
                    const int right = std::min(b + r, J_);
                    for (; next <= right; ++next) {
                        while (tail > head && p[window[tail - 1]] <= p[next]) --tail;
                        window[tail++] = next;
                    }
                    while (window[head] < b - r) ++head;
                    out[b + J_] += p[window[head]];
                }
            }
        }
    }
}

double ChainDP::weight(int segment, int a, int b) const noexcept {
    const int delta = b - a;
    const std::size_t base = static_cast<std::size_t>(delta + 2 * J_) * static_cast<std::size_t>(M_);
    double sum = 0.0;
    for (int c = 0; c < M_; ++c) {
        const int f = a + floor_off_[base + static_cast<std::size_t>(c)];
        const std::uint8_t fc = frac_class_[base + static_cast<std::size_t>(c)];
        // Half-way points are rounded toward zero.
        const int j = fc == 0 ? f : (fc == 2 ? f + 1 : (f < 0 ? f + 1 : f));
        sum += column(segment, c)[j];
    }
    const double step = delta * dy_;
    return sum - step * step / (2.0 * seg_len_);
}

void ChainDP::cache_weights(int radius) {
    const int R = std::min(radius, 2 * J_);
    const int K = 2 * J_ + 1;
    const auto width = static_cast<std::size_t>(2 * R + 1);
    cache_.assign(static_cast<std::size_t>(segs_) * static_cast<std::size_t>(K) * width, 0.0);
    for (int s = 0; s < segs_; ++s)
        for (int b = -J_; b <= J_; ++b) {
            double* row = cache_.data() + (static_cast<std::size_t>(s) * static_cast<std::size_t>(K) + static_cast<std::size_t>(b + J_)) * width;
            for (int d = -R; d <= R; ++d) {
                const int a = b - d;
                if (a >= -J_ && a <= J_) row[d + R] = weight(s, a, b);
            }
        }
    cache_radius_ = R;
}

void ChainDP::run(int start, bool keep_layers) {
    if (start < -J_ || start > J_) throw Error(ErrorKind::OutOfWindow, "start height outside the working window");
    const int K = 2 * J_ + 1;
    const auto Ks = static_cast<std::size_t>(K);
    std::vector<double> prev(Ks, kNegInf);
    prev[static_cast<std::size_t>(start + J_)] = 0.0;
    int lo = start;
    int hi = start;

    pred_.assign(static_cast<std::size_t>(segs_), std::vector<int>(Ks, 0));
    layers_.clear();
    if (keep_layers) layers_.push_back(prev);

    std::vector<double> next(Ks);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(std::bit_width(Ks)), std::vector<double>(Ks));
    std::vector<double> far(tier_radius_.size()), region(tier_radius_.size());
    constexpr double tol = 1e-9;

    for (int s = 0; s < segs_; ++s) {
        // Sparse table for range maxima of the previous layer.
        table[0] = prev;
        for (std::size_t k = 1; (std::size_t{1} << k) <= Ks; ++k) {
            const std::size_t half = std::size_t{1} << (k - 1);
            for (std::size_t i = 0; i + 2 * half <= Ks; ++i) table[k][i] = std::max(table[k - 1][i], table[k - 1][i + half]);
        }
        const auto range_max = [&](int first, int last) {
            first = std::max(first, lo);
            last = std::min(last, hi);
            if (first > last) return kNegInf;
            const auto i = static_cast<std::size_t>(first + J_);
            const auto len = static_cast<std::size_t>(last - first + 1);
            const int k = std::bit_width(len) - 1;
            return std::max(table[static_cast<std::size_t>(k)][i], table[static_cast<std::size_t>(k)][i + len - (std::size_t{1} << k)]);
        };
        std::vector<int>& pred = pred_[static_cast<std::size_t>(s)];
        const std::size_t tiers = tier_radius_.size();
        // Best V over predecessors at distance in [d_min, d_max] from b.
        const auto vmax_at = [&](int b, int d_min, int d_max) {
            return std::max(range_max(b - d_max, b - d_min), range_max(b + d_min, b + d_max));
        };
        const auto pen = [&](int d) {
            const double step = d * dy_;
            return step * step / (2.0 * seg_len_);
        };

        for (int b = -J_; b <= J_; ++b) {
            const std::size_t slot = static_cast<std::size_t>(s) * static_cast<std::size_t>(K) + static_cast<std::size_t>(b + J_);
            // region[t]: bound on V(a) + noise for predecessors in tier t's
            // distance band, before the penalty; far[t]: bound over all bands beyond t.
            for (std::size_t t = 0; t < tiers; ++t) {
                const int first = t == 0 ? 0 : tier_radius_[t - 1] + 1;
                region[t] = vmax_at(b, first, tier_radius_[t]) + local_[t][slot];
            }
            far[tiers - 1] = kNegInf;
            for (std::size_t t = tiers - 1; t-- > 0;)
                far[t] = std::max(far[t + 1], region[t + 1] - pen(tier_radius_[t] + 1));

            double best = kNegInf;
            int best_a = 0;
            const double* cached = cache_radius_ >= 0 ? cache_.data() + slot * static_cast<std::size_t>(2 * cache_radius_ + 1) + cache_radius_ : nullptr;
            const auto consider = [&](int a) {
                const int d = b - a;
                const double w = cached && std::abs(d) <= cache_radius_ ? cached[d] : weight(s, a, b);
                const double v = prev[static_cast<std::size_t>(a + J_)] + w;
                if (v > best || (v == best && (prefer_larger_ ? a > best_a : a < best_a))) {
                    best = v;
                    best_a = a;
                }
            };
            const int d0 = b < lo ? lo - b : (b > hi ? b - hi : 0);
            std::size_t t = 0;
            for (int d = d0;; ++d) {
                const int la = b - d;
                const int ra = b + d;
                const bool lok = la >= lo;
                const bool rok = ra <= hi;
                if (!lok && !rok) break;
                while (d > tier_radius_[t]) ++t;
                if (best != kNegInf) {
                    if (std::max(region[t] - pen(d), far[t]) + tol < best) break;
                }
                if (lok) consider(la);
                if (rok && d > 0) consider(ra);
            }
            next[static_cast<std::size_t>(b + J_)] = best;
            pred[static_cast<std::size_t>(b + J_)] = best_a;
        }
        prev.swap(next);
        lo = -J_;
        hi = J_;
        if (keep_layers) layers_.push_back(prev);
    }
    last_ = prev;
}

std::vector<int> ChainDP::path(int end) const {
    std::vector<int> nodes(static_cast<std::size_t>(segs_) + 1);
    nodes.back() = end;
    int cur = end;
    for (int s = segs_ - 1; s >= 0; --s) {
        cur = pred_[static_cast<std::size_t>(s)][static_cast<std::size_t>(cur + J_)];
        nodes[static_cast<std::size_t>(s)] = cur;
    }
    return nodes;
}

} // namespace wnaction::detail
