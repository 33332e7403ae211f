#include "wnaction/solver.hpp"

#include <algorithm>
#include <cmath>

#include "chain_dp.hpp"
#include "wnaction/action.hpp"
#include "wnaction/error.hpp"

namespace wnaction {

using detail::ChainDP;

namespace {

// Transition distances tabulated once per sweep.
constexpr int kSweepCacheRadius = 32;

int working_cap(const NoiseField& field, const SolverOptions& opt) {
    if (opt.working_cap < 0) throw Error(ErrorKind::InvalidArgument, "negative working cap");
    if (opt.working_cap > field.cap_steps()) throw Error(ErrorKind::OutOfWindow, "working cap exceeds the sampled window");
    return opt.working_cap == 0 ? field.cap_steps() : opt.working_cap;
}

int checked_index(double y, double dy, int J) {
    const int j = grid_index(y, dy);
    if (j < -J || j > J) throw Error(ErrorKind::OutOfWindow, "boundary height outside the working window");
    return j;
}

bool touches_cap(const std::vector<int>& nodes, int J) {
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
        if (std::abs(nodes[i]) >= J - 1) return true;
    return false;
}

HeightProfile to_profile(const std::vector<int>& nodes, int L, int scale, double dy) {
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = nodes[i] * dy;
    return {L, scale, std::move(v)};
}

// (W - D) on [x0, x0 + l] of the straight segment from `left` to `right`.
double linear_interval_action(const NoiseField& field, int x0, int l, double left, double right) {
    const int m = field.config().m;
    const double dy = field.config().dy;
    double w = 0.0;
    for (int col = x0 * m; col < (x0 + l) * m; ++col) {
        const double t = ((col + 0.5) / m - x0) / l;
        const double y = t == 0.0 ? left : left + (right - left) * t;
        const int j = snap_index(y, dy);
        w += field.path_value(col, j);
    }
    const double d = right - left;
    return w - d * d / (2.0 * l);
}

int check_node_scale(const NoiseField& field, const SolverOptions& opt) {
    const int L = field.config().L;
    if (!is_power_of_two(opt.node_scale) || L % opt.node_scale != 0)
        throw Error(ErrorKind::InvalidScale, "node scale must be dyadic and divide L");
    return opt.node_scale;
}

} // namespace

int grid_index(double y, double dy) {
    const double u = y / dy;
    if (!std::isfinite(u) || u != std::round(u) || std::fabs(u) > 1e9)
        throw Error(ErrorKind::InvalidArgument, "height is not a multiple of dy");
    return static_cast<int>(u);
}

DPSolution maximize_fixed_bc(const NoiseField& field, double y0, double y1, const SolverOptions& opt) {
    const int L = field.config().L;
    const double dy = field.config().dy;
    const int s = check_node_scale(field, opt);
    const int J = working_cap(field, opt);
    const int i0 = checked_index(y0, dy, J);
    const int i1 = checked_index(y1, dy, J);

    ChainDP dp(field, 0, L / s, s, J, opt.prefer_larger_on_ties);
    dp.run(i0, opt.keep_value_function);
    const std::vector<int> nodes = dp.path(i1);

    DPSolution out;
    out.value = dp.value(i1) / L;
    out.argmax = to_profile(nodes, L, s, dy);
    out.cap_steps = J;
    out.cap_saturated = touches_cap(nodes, J);
    if (opt.keep_value_function) out.value_function = dp.layers();
    return out;
}

DPSolution brute_force_max(const NoiseField& field, double y0, double y1, const SolverOptions& opt) {
    const int L = field.config().L;
    const double dy = field.config().dy;
    const int s = check_node_scale(field, opt);
    const int J = working_cap(field, opt);
    const int i0 = checked_index(y0, dy, J);
    const int i1 = checked_index(y1, dy, J);
    const int free_nodes = L / s - 1;
    const int K = 2 * J + 1;

    double space = 1.0;
    for (int i = 0; i < free_nodes; ++i) space *= K;
    if (space > 1e7) throw Error(ErrorKind::InstanceTooLarge, "brute force needs K^(L-1) <= 1e7");

    std::vector<int> nodes(static_cast<std::size_t>(L / s) + 1, -J);
    nodes.front() = i0;
    nodes.back() = i1;
    std::vector<int> best_nodes;
    double best = detail::kNegInf;

    const auto preferred = [&](const std::vector<int>& a, const std::vector<int>& b) {
        for (int i = free_nodes; i >= 1; --i) {
            const auto k = static_cast<std::size_t>(i);
            if (a[k] != b[k]) return opt.prefer_larger_on_ties ? a[k] > b[k] : a[k] < b[k];
        }
        return false;
    };

    for (;;) {
        const HeightProfile h = to_profile(nodes, L, s, dy);
        const double v = (noise_integral(field, h) - dirichlet(h)) / L;
        if (v > best || (v == best && preferred(nodes, best_nodes))) {
            best = v;
            best_nodes = nodes;
        }
        int pos = 1;
        while (pos <= free_nodes && ++nodes[static_cast<std::size_t>(pos)] > J) nodes[static_cast<std::size_t>(pos++)] = -J;
        if (pos > free_nodes) break;
    }

    DPSolution out;
    out.value = best;
    out.argmax = to_profile(best_nodes, L, s, dy);
    out.cap_steps = J;
    out.cap_saturated = touches_cap(best_nodes, J);
    return out;
}

std::vector<double> boundary_grid(double window, double db) {
    if (!(db > 0.0) || !(window >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need db > 0 and window >= 0");
    const auto k = static_cast<long long>(std::floor(window / db + 1e-12));
    std::vector<double> grid;
    for (long long i = -k; i <= k; ++i) grid.push_back(static_cast<double>(i) * db);
    return grid;
}

std::size_t SweepResult::locate(double y) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    if (it == grid.end() || *it != y) throw Error(ErrorKind::InvalidArgument, "boundary height not on the sweep grid");
    return static_cast<std::size_t>(it - grid.begin());
}

std::vector<double> per_scale_dirichlet(const HeightProfile& h, std::vector<int>* scales) {
    const int L = h.length();
    const int s = h.scale();
    const std::vector<double>& v = h.values();
    std::vector<double> out;
    if (scales) scales->clear();
    for (int rho = s; rho < L; rho *= 2) {
        const int step = rho / s;
        double sum = 0.0;
        for (int k = 1; k * rho < L; k += 2) {
            const double e = v[static_cast<std::size_t>(k * step)] -
                             0.5 * (v[static_cast<std::size_t>((k - 1) * step)] + v[static_cast<std::size_t>((k + 1) * step)]);
            sum += e * e;
        }
        out.push_back(sum / rho / L);
        if (scales) scales->push_back(rho);
    }
    const double d = h.back() - h.front();
    out.push_back(d * d / (2.0 * L) / L);
    if (scales) scales->push_back(L);
    return out;
}

SweepResult boundary_sweep(const NoiseField& field, const SweepOptions& opt) {
    const int L = field.config().L;
    const double dy = field.config().dy;
    const int s = check_node_scale(field, opt.solver);
    const int J = working_cap(field, opt.solver);
    if (opt.db / dy != std::round(opt.db / dy) || opt.db < dy) throw Error(ErrorKind::InvalidArgument, "db must be a positive multiple of dy");

    SweepResult r;
    r.L = L;
    r.window = opt.window;
    r.db = opt.db;
    r.grid = boundary_grid(opt.window, opt.db);
    const std::size_t n = r.grid.size();
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = checked_index(r.grid[i], dy, J);

    per_scale_dirichlet(HeightProfile::zero(L, s), &r.scales);
    const std::size_t ns = r.scales.size();
    r.value.resize(n * n);
    r.linear_action.resize(n * n);
    r.M.resize(n * n);
    r.midpoint.resize(n * n);
    r.saturated.assign(n * n, 0);
    r.per_scale_D.resize(n * n * ns);

    ChainDP dp(field, 0, L / s, s, J, opt.solver.prefer_larger_on_ties);
    if (n > 4) dp.cache_weights(kSweepCacheRadius);
    for (std::size_t i0 = 0; i0 < n; ++i0) {
        dp.run(idx[i0]);
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const std::size_t p = r.pair(i0, i1);
            const std::vector<int> nodes = dp.path(idx[i1]);
            const HeightProfile h = to_profile(nodes, L, s, dy);
            r.value[p] = dp.value(idx[i1]) / L;
            r.linear_action[p] = linear_interval_action(field, 0, L, r.grid[i0], r.grid[i1]) / L;
            r.M[p] = r.value[p] - r.linear_action[p];
            r.midpoint[p] = h.at(L / 2.0);
            const std::vector<double> d = per_scale_dirichlet(h);
            std::copy(d.begin(), d.end(), r.per_scale_D.begin() + static_cast<std::ptrdiff_t>(p * ns));
            if (touches_cap(nodes, J)) {
                r.saturated[p] = 1;
                r.cap_saturated = true;
            }
            if (r.grid[i0] == 0.0 && r.grid[i1] == 0.0) r.zero_bc_argmax = h;
        }
    }
    for (std::size_t k = 0; k < ns; ++k) {
        double mx = 0.0;
        for (std::size_t p = 0; p < n * n; ++p) mx = std::max(mx, r.per_scale_D[p * ns + k]);
        r.per_scale_D_max[r.scales[k]] = mx;
    }
    return r;
}

ExtremalActions extremal_actions(const SweepResult& sweep) {
    if (sweep.M.empty()) throw Error(ErrorKind::MissingData, "empty sweep");
    const auto [lo, hi] = std::minmax_element(sweep.M.begin(), sweep.M.end());
    return {*hi, *lo};
}

double tilde_minus(double a_minus, const SweepResult& enlarged) {
    if (enlarged.M.empty()) throw Error(ErrorKind::MissingData, "empty sweep");
    return std::min(a_minus, *std::min_element(enlarged.M.begin(), enlarged.M.end()));
}

IntervalSolution maximize_on_interval(const NoiseField& field, int x_begin, int x_end, double y_begin, double y_end,
                                      const SolverOptions& opt) {
    const double dy = field.config().dy;
    if (x_begin < 0 || x_end <= x_begin || x_end > field.config().L) throw Error(ErrorKind::InvalidArgument, "bad interval");
    const int J = working_cap(field, opt);
    const int i0 = checked_index(y_begin, dy, J);
    const int i1 = checked_index(y_end, dy, J);
    ChainDP dp(field, x_begin, x_end - x_begin, 1, J, opt.prefer_larger_on_ties);
    dp.run(i0);
    const std::vector<int> nodes = dp.path(i1);
    IntervalSolution out;
    out.value = dp.value(i1);
    out.heights.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out.heights[i] = nodes[i] * dy;
    out.cap_saturated = touches_cap(nodes, J);
    return out;
}

IntervalSolution conditional_interval_max(const NoiseField& field, const HeightProfile& base, int n,
                                          const SolverOptions& opt) {
    const int L = field.config().L;
    const double dy = field.config().dy;
    if (base.length() != L) throw Error(ErrorKind::InvalidArgument, "base length does not match the field");
    const int l = base.scale();
    if (n < 1 || n > L / l) throw Error(ErrorKind::InvalidArgument, "interval index out of range");
    const int J = working_cap(field, opt);
    const double left = base.node(n - 1);
    const double right = base.node(n);
    const int il = checked_index(left, dy, J);
    const int ir = checked_index(right, dy, J);
    const int x0 = (n - 1) * l;

    ChainDP dp(field, x0, l, 1, J, opt.prefer_larger_on_ties);
    dp.run(il);
    const std::vector<int> nodes = dp.path(ir);

    IntervalSolution out;
    out.value = (dp.value(ir) - linear_interval_action(field, x0, l, left, right)) / l;
    out.heights.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out.heights[i] = nodes[i] * dy;
    out.cap_saturated = touches_cap(nodes, J);
    return out;
}

BinExtremes bin_extremal_interval(const NoiseField& field, const NetPoint& bin, int n, double half_width,
                                  const SolverOptions& opt) {
    const int L = field.config().L;
    const double dy = field.config().dy;
    const int l = bin.l;
    if (bin.L != L) throw Error(ErrorKind::InvalidArgument, "bin length does not match the field");
    if (n < 1 || n > L / l) throw Error(ErrorKind::InvalidArgument, "interval index out of range");
    const double hw = half_width < 0.0 ? l / 2.0 : half_width;
    const long long k = static_cast<long long>(std::ceil(hw / dy - 1e-12));
    if (2 * k > 64) throw Error(ErrorKind::InstanceTooLarge, "more than 64 offsets per endpoint");
    std::vector<double> offsets;
    for (long long i = -k; i < k; ++i) {
        const double o = static_cast<double>(i) * dy;
        if (o >= -hw && o < hw) offsets.push_back(o);
    }
    if (offsets.empty()) offsets.push_back(0.0);

    const int J = working_cap(field, opt);
    const int x0 = (n - 1) * l;
    const auto base_left = static_cast<double>(bin.values[static_cast<std::size_t>(n - 1)]);
    const auto base_right = static_cast<double>(bin.values[static_cast<std::size_t>(n)]);

    BinExtremes out;
    ChainDP dp(field, x0, l, 1, J, opt.prefer_larger_on_ties);
    for (double o1 : offsets) {
        const double left = base_left + o1;
        dp.run(checked_index(left, dy, J));
        for (double o2 : offsets) {
            const double right = base_right + o2;
            const double v = (dp.value(checked_index(right, dy, J)) - linear_interval_action(field, x0, l, left, right)) / l;
            out.sup = std::max(out.sup, v);
            out.inf = std::min(out.inf, v);
            ++out.members;
        }
    }
    return out;
}

HeightProfile paste_conditional_maximizers(const NoiseField& field, const HeightProfile& coarse,
                                           const SolverOptions& opt) {
    const int L = field.config().L;
    if (coarse.length() != L) throw Error(ErrorKind::InvalidArgument, "coarse length does not match the field");
    const int l = coarse.scale();
    std::vector<double> v(static_cast<std::size_t>(L) + 1);
    for (int n = 1; n <= L / l; ++n) {
        const IntervalSolution sol = conditional_interval_max(field, coarse, n, opt);
        std::copy(sol.heights.begin(), sol.heights.end(), v.begin() + (n - 1) * l);
    }
    return {L, 1, std::move(v)};
}

} // namespace wnaction
