#include "wnaction/net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "wnaction/error.hpp"

namespace wnaction {

std::string to_string(BigCount n) {
    if (n == 0) return "0";
    std::string s;
    while (n > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(n % 10)));
        n /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

long double log_count(BigCount n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "log of an empty count");
    const auto hi = static_cast<std::uint64_t>(n >> 64);
    const auto lo = static_cast<std::uint64_t>(n);
    return std::log(static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo));
}

HeightProfile NetPoint::to_profile() const {
    std::vector<double> v(values.begin(), values.end());
    return {L, l, std::move(v)};
}

void NetBallSpec::validate() const {
    if (!is_power_of_two(L) || !is_power_of_two(l) || l > L)
        throw Error(ErrorKind::InvalidConfig, "L and l must be powers of two with l <= L");
    if (!(nu >= std::exp(1.0))) throw Error(ErrorKind::InvalidConfig, "nu must be at least e");
    if (L / l > 16) throw Error(ErrorKind::InstanceTooLarge, "L/l above 16 is not supported");
}

NetPoint project(const HeightProfile& h, int l) {
    if (!is_power_of_two(l) || l % h.scale() != 0 || h.length() % l != 0)
        throw Error(ErrorKind::InvalidScale, "projection scale must be dyadic, a multiple of the profile scale and divide L");
    NetPoint p{h.length(), l, {}};
    for (int x = 0; x <= h.length(); x += l) {
        const double y = h.node(x / h.scale());
        p.values.push_back(static_cast<long long>(l * std::floor(y / l + 0.5)));
    }
    return p;
}

NetConstraints constraints_for(const NetBallSpec& spec) {
    spec.validate();
    NetConstraints c;
    c.N = spec.ratio();
    const long double nu = spec.nu;
    const long double N = c.N;
    c.v0_max = static_cast<long long>(std::floor(nu * N));
    c.delta_sq_max = static_cast<long long>(std::floor(2.0L * N * N * N * N * nu));
    for (int half = c.N / 2; half >= 1; half /= 2) {
        const long double r = half;  // rho / l
        c.level_T.push_back(static_cast<long long>(std::floor(4.0L * r * r * r * N * nu)));
    }
    return c;
}

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long isqrt(long long t) {
    if (t < 0) return -1;
    auto r = static_cast<long long>(std::sqrt(static_cast<long double>(t)));
    while (r * r > t) --r;
    while ((r + 1) * (r + 1) <= t) ++r;
    return r;
}

long long mod(long long a, long long q) { return ((a % q) + q) % q; }

// Integers O == c (mod q) with |O| <= r.
long long count_in_class(long long r, long long c, long long q) {
    if (r < 0) return 0;
    return floor_div(r - c, q) - floor_div(-r - c - 1, q);
}

int log2_exact(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

// Vectors O with O_i == classes[i] (mod q) and sum O_i^2 <= T.
class BallCounter {
public:
    BigCount count(const std::vector<long long>& classes, long long q, long long T) {
        auto key = std::make_tuple(q, T, classes);
        {
            std::lock_guard lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        memo_.clear();
        const BigCount out = rec(classes, q, 0, T);
        std::lock_guard lock(mu_);
        cache_.emplace(std::move(key), out);
        return out;
    }

private:
    BigCount rec(const std::vector<long long>& classes, long long q, std::size_t i, long long t) {
        if (t < 0) return 0;
        if (i == classes.size()) return 1;
        if (i + 1 == classes.size()) return static_cast<BigCount>(count_in_class(isqrt(t), classes[i], q));
        const std::uint64_t key = (static_cast<std::uint64_t>(i) << 48) | static_cast<std::uint64_t>(t);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        BigCount sum = 0;
        const long long r = isqrt(t);
        const long long first = classes[i] - q * floor_div(classes[i] + r, q);
        for (long long o = first; o <= r; o += q) sum += rec(classes, q, i + 1, t - o * o);
        memo_.emplace(key, sum);
        return sum;
    }

    std::mutex mu_;
    std::map<std::tuple<long long, long long, std::vector<long long>>, BigCount> cache_;
    std::unordered_map<std::uint64_t, BigCount> memo_;
};

class LevelCounter {
public:
    explicit LevelCounter(const NetConstraints& c) : c_(c), n_(log2_exact(c.N)) {}

    // Ways to complete levels k..n given node residues mod 2^(n-k+1).
    BigCount count(int k, const std::vector<long long>& residues) {
        if (k > n_) return 1;
        auto key = std::make_pair(k, residues);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        const long long q = 1LL << (n_ - k + 1);
        const std::size_t mids = residues.size() - 1;
        std::vector<long long> classes(mids);
        BigCount total = 0;
        // Odometer over O classes; each class has the parity of r_left + r_right.
        std::vector<long long> digit(mids, 0);
        const long long per = q / 2;
        for (;;) {
            std::vector<long long> next;
            next.reserve(2 * mids + 1);
            const long long q_next = q / 2;
            for (std::size_t i = 0; i < mids; ++i) {
                const long long parity = mod(residues[i] + residues[i + 1], 2);
                classes[i] = parity + 2 * digit[i];
                next.push_back(mod(residues[i], q_next));
                next.push_back(mod((residues[i] + residues[i + 1] + classes[i]) / 2, q_next));
            }
            next.push_back(mod(residues.back(), q_next));
            std::vector<long long> sorted = classes;
            std::sort(sorted.begin(), sorted.end());
            const BigCount ball = balls_.count(sorted, q, c_.level_T[static_cast<std::size_t>(k - 1)]);
            if (ball != 0) total += ball * count(k + 1, next);

            std::size_t pos = 0;
            while (pos < mids && ++digit[pos] == per) digit[pos++] = 0;
            if (pos == mids) break;
        }
        memo_.emplace(std::move(key), total);
        return total;
    }

    int levels() const noexcept { return n_; }

private:
    const NetConstraints& c_;
    int n_;
    BallCounter balls_;
    std::map<std::pair<int, std::vector<long long>>, BigCount> memo_;
};

void check_constraints(const NetConstraints& c) {
    if (c.N < 1 || c.N > 16 || !is_power_of_two(c.N)) throw Error(ErrorKind::InstanceTooLarge, "N must be a power of two <= 16");
    if (static_cast<int>(c.level_T.size()) != log2_exact(c.N))
        throw Error(ErrorKind::InvalidArgument, "one level budget per bisection level is required");
    if (c.v0_max < 0 || c.delta_sq_max < 0) throw Error(ErrorKind::InvalidArgument, "negative bound");
}

} // namespace

BigCount count_constrained(const NetConstraints& c) {
    check_constraints(c);
    LevelCounter levels(c);
    const long long top = 1LL << levels.levels();
    const long long dmax = isqrt(c.delta_sq_max);
    BigCount inner = 0;
    for (long long r = 0; r < top; ++r) {
        const long long deltas = count_in_class(dmax, r, top);
        if (deltas == 0) continue;
        inner += static_cast<BigCount>(deltas) * levels.count(1, {0, r});
    }
    return static_cast<BigCount>(2 * c.v0_max + 1) * inner;
}

BigCount stream_constrained(const NetConstraints& c, const std::function<void(const std::vector<long long>&)>& sink,
                            std::uint64_t max_nodes) {
    check_constraints(c);
    const int n = log2_exact(c.N);
    std::vector<long long> v(static_cast<std::size_t>(c.N) + 1, 0);
    std::vector<long long> budget(c.level_T.begin(), c.level_T.end());
    std::uint64_t visited = 0;
    BigCount count = 0;

    // Slots in level order: (level, left, mid, right).
    struct Slot {
        int level, left, mid, right;
    };
    std::vector<Slot> slots;
    for (int k = 1; k <= n; ++k) {
        const int step = c.N >> (k - 1);
        for (int left = 0; left < c.N; left += step) slots.push_back({k, left, left + step / 2, left + step});
    }

    std::function<void(std::size_t)> fill = [&](std::size_t s) {
        if (++visited > max_nodes) throw Error(ErrorKind::InstanceTooLarge, "net ball search exceeds the node budget");
        if (s == slots.size()) {
            ++count;
            sink(v);
            return;
        }
        const Slot& sl = slots[s];
        long long& left_budget = budget[static_cast<std::size_t>(sl.level - 1)];
        const long long sum = v[static_cast<std::size_t>(sl.left)] + v[static_cast<std::size_t>(sl.right)];
        const long long r = isqrt(left_budget);
        for (long long o = -r; o <= r; ++o) {
            if (mod(o - sum, 2) != 0) continue;
            v[static_cast<std::size_t>(sl.mid)] = (sum + o) / 2;
            left_budget -= o * o;
            fill(s + 1);
            left_budget += o * o;
        }
    };

    const long long dmax = isqrt(c.delta_sq_max);
    for (long long v0 = -c.v0_max; v0 <= c.v0_max; ++v0) {
        for (long long d = -dmax; d <= dmax; ++d) {
            v.front() = v0;
            v.back() = v0 + d;
            fill(0);
        }
    }
    return count;
}

BigCount enumerate_net_ball(const NetBallSpec& spec, const std::function<void(const NetPoint&)>* sink) {
    const NetConstraints c = constraints_for(spec);
    if (sink == nullptr) return count_constrained(c);
    NetPoint p{spec.L, spec.l, {}};
    return stream_constrained(c, [&](const std::vector<long long>& units) {
        p.values.resize(units.size());
        for (std::size_t i = 0; i < units.size(); ++i) p.values[i] = units[i] * spec.l;
        (*sink)(p);
    });
}

double count_bound_ratio(const NetBallSpec& spec) {
    const BigCount n = enumerate_net_ball(spec);
    return static_cast<double>(log_count(n) / (spec.ratio() * std::log(static_cast<long double>(spec.nu))));
}

} // namespace wnaction
