#include "wnaction/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "wnaction/action.hpp"
#include "wnaction/error.hpp"
#include "wnaction/solver.hpp"
#include "wnaction/stats.hpp"

namespace wnaction {

namespace {

constexpr double kTol = 1e-9;

std::string describe(const FieldConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "seed=" << c.seed << " replica=" << c.replica << " L=" << c.L << " m=" << c.m << " dy=" << c.dy
       << " y_cap=" << c.y_cap << (c.zero_noise ? " zero_noise" : "");
    return os.str();
}

FieldConfig make_config(int L, int m, double dy, double y_cap, std::uint64_t seed) {
    FieldConfig c;
    c.L = L;
    c.m = m;
    c.dy = dy;
    c.y_cap = y_cap;
    c.seed = seed;
    return c;
}

// Tracks the worst discrepancy and the reproducer of the first failure.
class Tracker {
public:
    explicit Tracker(std::string name, double limit) : limit_(limit) { r_.name = std::move(name); }

    void observe(double discrepancy, const std::string& instance) {
        ++r_.instances;
        if (std::isnan(discrepancy)) discrepancy = INFINITY;
        if (r_.instances == 1 || discrepancy > r_.worst) {
            r_.worst = discrepancy;
            if (r_.pass) r_.instance = instance;
        }
        if (discrepancy > limit_ && r_.pass) {
            r_.pass = false;
            r_.instance = instance;
        }
    }
    void fail(const std::string& instance, const std::string& why) {
        ++r_.instances;
        r_.worst = INFINITY;
        if (r_.pass) {
            r_.pass = false;
            r_.instance = instance;
            r_.detail = why;
        }
    }
    CheckResult done(std::string detail = {}) {
        if (r_.detail.empty()) r_.detail = std::move(detail);
        return r_;
    }

private:
    double limit_;
    CheckResult r_;
};

double sweep_cap(int L, double dy) { return round_up_to_grid(8.0 * std::sqrt(static_cast<double>(L)), dy); }

} // namespace

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["profile"] = profile;
    j["all_pass"] = all_pass();
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["status"] = c.pass ? "pass" : "fail";
        e["worst"] = std::isfinite(c.worst) ? nlohmann::ordered_json(c.worst) : nlohmann::ordered_json("inf");
        e["instances"] = c.instances;
        e["instance"] = c.instance;
        e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    return j.dump(2);
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os.precision(3);
    for (const CheckResult& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name << "  worst=" << c.worst << "  instances=" << c.instances;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        if (!c.pass) os << "\n     reproducer: " << c.instance;
        os << '\n';
    }
    os << (all_pass() ? "all checks passed" : "some checks FAILED") << '\n';
    return os.str();
}

SuiteOptions suite_options(ValidationProfile profile) {
    SuiteOptions o;
    const int n = profile == ValidationProfile::Quick ? 10 : 100;
    for (int i = 0; i < n; ++i) o.seeds.push_back(static_cast<std::uint64_t>(1000 + i));
    return o;
}

HeightProfile random_grid_profile(std::mt19937_64& rng, int L, int scale, double dy, double amplitude, bool zero_boundary) {
    const auto K = static_cast<std::uint64_t>(std::floor(amplitude / dy));
    std::vector<double> v(static_cast<std::size_t>(L / scale) + 1);
    for (double& y : v) y = (static_cast<double>(rng() % (2 * K + 1)) - static_cast<double>(K)) * dy;
    if (zero_boundary) v.front() = v.back() = 0.0;
    return {L, scale, std::move(v)};
}

BigCount rectangle_scan_count(const NetBallSpec& spec) {
    const NetConstraints c = constraints_for(spec);
    if (c.N > 2) throw Error(ErrorKind::InstanceTooLarge, "rectangle scan is limited to L/l <= 2");
    const int L = spec.L;
    const int l = spec.l;
    // |v(n) - v(0)| <= |delta| + sum of the largest midpoint offsets.
    double reach = std::sqrt(static_cast<double>(c.delta_sq_max));
    for (long long T : c.level_T) reach += std::sqrt(static_cast<double>(T)) / 2.0;
    const auto R = static_cast<long long>(std::ceil(reach)) + 1;
    const auto v0max = static_cast<long long>(std::ceil(spec.nu * c.N)) + 1;

    BigCount count = 0;
    std::vector<double> v(static_cast<std::size_t>(c.N) + 1);
    const std::size_t nodes = v.size();
    std::vector<long long> off(nodes, -R);
    for (long long v0 = -v0max; v0 <= v0max; ++v0) {
        std::fill(off.begin(), off.end(), -R);
        for (;;) {
            v[0] = static_cast<double>(v0 * l);
            for (std::size_t i = 1; i < nodes; ++i) v[i] = static_cast<double>((v0 + off[i]) * l);
            const HeightProfile h(L, l, v);
            bool ok = std::fabs(h.front()) / L <= spec.nu;
            for (int rho = l; ok && rho <= L; rho *= 2) {
                const double r = static_cast<double>(rho) / l;
                ok = dirichlet(scale_component(h, rho)) / L <= r * r * spec.nu;
            }
            if (ok) ++count;
            std::size_t pos = 1;
            while (pos < nodes && ++off[pos] > R) off[pos++] = -R;
            if (pos == nodes) break;
        }
    }
    return count;
}

CheckResult check_noise_calibration(const SuiteOptions& opt) {
    const FieldConfig base = make_config(2, 2, 0.5, 2.0, 0);
    const int cols = base.columns();
    const int J = base.cap_steps();
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(cols * (2 * J + 1)));
    std::vector<double> w_fixed;
    const HeightProfile fixed = linear_part(0.0, 2.0, 2);
    for (std::uint64_t seed : opt.seeds) {
        for (int r = 0; r < opt.calibration_replicas; ++r) {
            FieldConfig c = base;
            c.seed = seed;
            c.replica = static_cast<std::uint64_t>(r);
            const NoiseField f = opt.make_field(c);
            for (int col = 0; col < cols; ++col)
                for (int j = -J; j <= J; ++j) samples[static_cast<std::size_t>(col * (2 * J + 1) + j + J)].push_back(f.at(col, j));
            w_fixed.push_back(noise_integral(f, fixed));
        }
    }
    Tracker t("noise-calibration", 5.0);
    const double dx = base.dx();
    const double dy = base.dy;
    const std::string inst = describe(base) + " seeds=" + std::to_string(opt.seeds.size()) + "x" + std::to_string(opt.calibration_replicas);
    for (int col = 0; col < cols; ++col) {
        for (int j = -J; j <= J; ++j) {
            const auto& s = samples[static_cast<std::size_t>(col * (2 * J + 1) + j + J)];
            if (j == 0) {
                const bool zero = std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; });
                t.observe(zero ? 0.0 : INFINITY, inst + " col=" + std::to_string(col) + " j=0");
                continue;
            }
            const Moments m = moments(s);
            const double var = dx * std::abs(j) * dy;
            const double n = static_cast<double>(s.size());
            const double z_mean = std::fabs(m.mean) / std::sqrt(var / n);
            const double z_var = std::fabs(m.variance - var) / (var * std::sqrt(2.0 / (n - 1)));
            t.observe(std::max(z_mean, z_var), inst + " col=" + std::to_string(col) + " j=" + std::to_string(j));
        }
    }
    // Independence of distinct columns at the window edge.
    {
        const auto& a = samples[static_cast<std::size_t>(0 * (2 * J + 1) + 2 * J)];
        const auto& b = samples[static_cast<std::size_t>(1 * (2 * J + 1) + 2 * J)];
        double cov = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) cov += a[i] * b[i];
        cov /= static_cast<double>(a.size());
        const double var = dx * J * dy;
        t.observe(std::fabs(cov) / (var / std::sqrt(static_cast<double>(a.size()))), inst + " covariance col0/col1");
    }
    // W of a fixed profile: variance dx * sum_i |snapped height|.
    {
        double expect = 0.0;
        for (int col = 0; col < cols; ++col) expect += dx * std::abs(snap_index(fixed.at((col + 0.5) / base.m), dy)) * dy;
        const Moments m = moments(w_fixed);
        const double n = static_cast<double>(w_fixed.size());
        const double z_var = std::fabs(m.variance - expect) / (expect * std::sqrt(2.0 / (n - 1)));
        const double z_mean = std::fabs(m.mean) / std::sqrt(expect / n);
        t.observe(std::max(z_var, z_mean), inst + " W(linear_part(0,2,2))");
    }
    return t.done("max z-score of means, variances and covariances; limit 5");
}

CheckResult check_decomposition(const SuiteOptions& opt) {
    Tracker t("decomposition-residual", kTol);
    for (std::uint64_t seed : opt.seeds) {
        const FieldConfig c = make_config(16, 2, 0.25, 8.0, seed);
        const NoiseField f = opt.make_field(c);
        std::mt19937_64 rng(seed);
        for (int i = 0; i < opt.identity_instances; ++i) {
            const int l = 1 << (rng() % 5);
            const HeightProfile h = random_grid_profile(rng, 16, 1, c.dy, 6.0, rng() % 2 == 0);
            const Decomposition d = decompose_action(f, h, l);
            t.observe(std::fabs(d.residual), describe(c) + " instance=" + std::to_string(i) + " l=" + std::to_string(l) + " h=" + to_csv_row(h, c.dy));
        }
    }
    return t.done("|residual| <= 1e-9");
}

CheckResult check_orthogonality(const SuiteOptions& opt) {
    Tracker t("dirichlet-orthogonality", kTol);
    for (std::uint64_t seed : opt.seeds) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        for (int i = 0; i < opt.identity_instances; ++i) {
            const HeightProfile h = random_grid_profile(rng, 32, 1, 0.25, 8.0, true);
            const ActionBreakdown dummy{};
            (void)dummy;
            double sum = 0.0;
            for (int rho : dyadic_scales(h)) sum += dirichlet(scale_component(h, rho));
            const double D = dirichlet(h);
            t.observe(std::fabs(sum - D) / std::max(1.0, D), "seed=" + std::to_string(seed) + " h=" + to_csv_row(h, 0.25));
        }
    }
    return t.done("relative error of D(h) - sum_rho D(h_rho)");
}

CheckResult check_linear_pythagoras(const SuiteOptions& opt) {
    Tracker t("linear-part-pythagoras", kTol);
    for (std::uint64_t seed : opt.seeds) {
        std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
        for (int i = 0; i < opt.identity_instances; ++i) {
            const HeightProfile h = random_grid_profile(rng, 32, 1, 0.25, 8.0, false);
            const HeightProfile a = linear_part(h.front(), h.back(), 32);
            const double D = dirichlet(h);
            const double err = std::fabs(D - dirichlet(a) - dirichlet(h - a));
            t.observe(err / std::max(1.0, D), "seed=" + std::to_string(seed) + " h=" + to_csv_row(h, 0.25));
        }
    }
    return t.done("relative error of D(h) - D(a_h) - D(h - a_h)");
}

CheckResult check_oracle_equivalence(const SuiteOptions& opt) {
    Tracker t("oracle-equivalence", kTol);
    SolverOptions dp_opt;
    dp_opt.prefer_larger_on_ties = opt.flip_dp_tie_break;
    const std::vector<double> ys = {-1.0, 0.0, 1.0};
    const auto compare = [&](const FieldConfig& c) {
        const NoiseField f = opt.make_field(c);
        for (double y0 : ys)
            for (double y1 : ys) {
                const DPSolution dp = maximize_fixed_bc(f, y0, y1, dp_opt);
                const DPSolution bf = brute_force_max(f, y0, y1);
                std::ostringstream inst;
                inst << describe(c) << " y0=" << y0 << " y1=" << y1;
                if (!(dp.argmax == bf.argmax)) {
                    t.fail(inst.str(), "argmax differs: dp=" + to_csv_row(dp.argmax, c.dy) + " brute=" + to_csv_row(bf.argmax, c.dy));
                    continue;
                }
                t.observe(std::fabs(dp.value - bf.value), inst.str());
            }
    };
    for (std::uint64_t seed : opt.seeds) compare(make_config(4, 2, 0.5, 2.0, seed));
    FieldConfig tied = make_config(4, 2, 0.5, 2.0, 0);
    tied.zero_noise = true;
    compare(tied);
    return t.done("L=4, dy=1/2, y_cap=2, m=2, 9 boundary pairs, plus a zero-noise instance with ties");
}

CheckResult check_restriction_optimality(const SuiteOptions& opt) {
    Tracker t("restriction-optimality", kTol);
    for (std::uint64_t seed : opt.seeds) {
        const FieldConfig c = make_config(16, 2, 0.25, 8.0, seed);
        const NoiseField f = opt.make_field(c);
        const DPSolution sol = maximize_fixed_bc(f, 0.0, 0.0);
        const HeightProfile& h = sol.argmax;
        for (int x1 = 0; x1 < 16; ++x1)
            for (int x2 = x1 + 1; x2 <= 16; ++x2) {
                const IntervalSolution sub = maximize_on_interval(f, x1, x2, h.node(x1), h.node(x2));
                const double own = interval_action(f, h, x1, x2);
                t.observe(std::fabs(sub.value - own),
                          describe(c) + " interval=[" + std::to_string(x1) + "," + std::to_string(x2) + "]");
            }
    }
    return t.done("re-solved sub-problem value vs restricted action of the zero-BC maximizer");
}

CheckResult check_green_identity(const SuiteOptions& opt) {
    Tracker t("green-reproducing", kTol);
    for (std::uint64_t seed : opt.seeds) {
        std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ULL);
        for (int i = 0; i < opt.identity_instances; ++i) {
            const int L = 16;
            const HeightProfile h = random_grid_profile(rng, L, 1, 0.25, 8.0, true);
            for (int x = 1; x < L; ++x)
                t.observe(std::fabs(dirichlet_bilinear(h, green_profile(x, L)) - h.node(x)),
                          "seed=" + std::to_string(seed) + " x=" + std::to_string(x) + " h=" + to_csv_row(h, 0.25));
        }
    }
    return t.done("|D(h; G_x) - h(x)|");
}

CheckResult check_green_perturbation(const SuiteOptions& opt) {
    Tracker t("green-perturbation", kTol);
    for (std::uint64_t seed : opt.seeds) {
        const int L = 16;
        const FieldConfig c = make_config(L, 2, 0.25, 8.0, seed);
        const NoiseField f = opt.make_field(c);
        const DPSolution sol = maximize_fixed_bc(f, 0.0, 0.0);
        const double best = action_of(f, sol.argmax).action_per_length;
        const auto probe = [&](const HeightProfile& cand, const std::string& what) {
            double a;
            try {
                a = action_of(f, cand).action_per_length;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::OutOfWindow) return;
                throw;
            }
            t.observe(a - best, describe(c) + " " + what);
        };
        for (int x = 1; x < L; ++x) {
            const HeightProfile g = green_profile(x, L);
            const double peak = g.node(x);
            for (int k = -8; k <= 8; ++k) {
                if (k == 0) continue;
                const double amp = k * c.dy;
                std::vector<double> v = sol.argmax.values();
                for (int y = 0; y <= L; ++y)
                    v[static_cast<std::size_t>(y)] += snap_index(amp * g.node(y) / peak, c.dy) * c.dy;
                probe(HeightProfile(L, 1, v), "green x=" + std::to_string(x) + " t=" + std::to_string(amp));
            }
            for (int sgn : {-1, 1}) {
                std::vector<double> v = sol.argmax.values();
                v[static_cast<std::size_t>(x)] += sgn * c.dy;
                probe(HeightProfile(L, 1, v), "site x=" + std::to_string(x) + " step=" + std::to_string(sgn));
            }
        }
    }
    return t.done("max of action(perturbed) - action(maximizer); must be <= 1e-9");
}

CheckResult check_sandwich(const SuiteOptions& opt) {
    Tracker t("sandwich", kTol);
    for (std::uint64_t seed : opt.seeds) {
        for (int L : {8, 16}) {
            const double dy = 0.25;
            const double cap = sweep_cap(L, dy);
            const double tcap = round_up_to_grid(2.0 * L + cap / 2.0, dy);
            const FieldConfig c = make_config(L, 4, dy, std::max(cap, tcap), seed);
            const NoiseField f = opt.make_field(c);
            SweepOptions so;
            so.window = L / 2.0;
            so.db = std::max(dy, L * dy / 32.0);
            so.solver.working_cap = static_cast<int>(cap / dy);
            const SweepResult sw = boundary_sweep(f, so);
            const ExtremalActions ex = extremal_actions(sw);
            const double a_l = sw.M_at(0.0, 0.0);
            SweepOptions st;
            st.window = 2.0 * L;
            st.db = L / 8.0;
            const double at = tilde_minus(ex.a_minus, boundary_sweep(f, st));
            const std::string inst = describe(c);
            t.observe(ex.a_minus - a_l, inst + " A- <= A_L");
            t.observe(a_l - ex.a_plus, inst + " A_L <= A+");
            t.observe(at - ex.a_minus, inst + " tilde A- <= A-");
        }
    }
    return t.done("A- <= A_L <= A+ and tilde A- <= A- at L = 8, 16");
}

namespace {

struct TwoScaleSetup {
    FieldConfig config;
    NoiseField field;
    SweepResult fine;
    SweepResult coarse;
};

constexpr int kTwoScaleL = 8;
constexpr int kTwoScaleScale = 2;

TwoScaleSetup two_scale_setup(const SuiteOptions& opt, std::uint64_t seed) {
    const double dy = 0.25;
    FieldConfig c = make_config(kTwoScaleL, 4, dy, sweep_cap(kTwoScaleL, dy), seed);
    NoiseField f = opt.make_field(c);
    SweepOptions so;
    so.window = kTwoScaleL / 2.0;
    so.db = 2 * dy;
    SweepResult fine = boundary_sweep(f, so);
    so.solver.node_scale = kTwoScaleScale;
    SweepResult coarse = boundary_sweep(f, so);
    return {c, std::move(f), std::move(fine), std::move(coarse)};
}

} // namespace

CheckResult check_two_scale_upper(const SuiteOptions& opt) {
    Tracker t("two-scale-upper-bins", kTol);
    for (std::uint64_t seed : opt.seeds) {
        const TwoScaleSetup s = two_scale_setup(opt, seed);
        const auto best = static_cast<std::size_t>(std::max_element(s.fine.M.begin(), s.fine.M.end()) - s.fine.M.begin());
        const double y0 = s.fine.grid[best / s.fine.side()];
        const double y1 = s.fine.grid[best % s.fine.side()];
        const DPSolution h = maximize_fixed_bc(s.field, y0, y1);
        const NetPoint bin = project(coarsen(h.argmax, kTwoScaleScale), kTwoScaleScale);
        double mean_sup = 0.0;
        const int N = kTwoScaleL / kTwoScaleScale;
        for (int n = 1; n <= N; ++n) mean_sup += bin_extremal_interval(s.field, bin, n).sup / N;
        const double coarse_plus = extremal_actions(s.coarse).a_plus;
        std::ostringstream inst;
        inst << describe(s.config) << " l=" << kTwoScaleScale << " pair=(" << y0 << "," << y1 << ")";
        t.observe(s.fine.M[best] - (coarse_plus + mean_sup), inst.str());
    }
    return t.done("A+_L - (coarse A+ + mean_n sup over the bin of Pi(h*_{>=l}))");
}

CheckResult check_two_scale_lower(const SuiteOptions& opt) {
    Tracker t("two-scale-lower-competitor", kTol);
    const int N = kTwoScaleL / kTwoScaleScale;
    for (std::uint64_t seed : opt.seeds) {
        const TwoScaleSetup s = two_scale_setup(opt, seed);
        SolverOptions coarse_opt;
        coarse_opt.node_scale = kTwoScaleScale;
        double min_rhs = INFINITY;
        double worst_pair = -INFINITY;
        std::string worst_inst;
        for (std::size_t i0 = 0; i0 < s.fine.side(); ++i0)
            for (std::size_t i1 = 0; i1 < s.fine.side(); ++i1) {
                const std::size_t p = s.fine.pair(i0, i1);
                const DPSolution hc = maximize_fixed_bc(s.field, s.fine.grid[i0], s.fine.grid[i1], coarse_opt);
                const NetPoint bin = project(hc.argmax, kTwoScaleScale);
                double mean_inf = 0.0;
                for (int n = 1; n <= N; ++n) mean_inf += bin_extremal_interval(s.field, bin, n).inf / N;
                const double rhs = s.coarse.M[p] + mean_inf;
                min_rhs = std::min(min_rhs, rhs);
                if (rhs - s.fine.M[p] > worst_pair) {
                    worst_pair = rhs - s.fine.M[p];
                    std::ostringstream inst;
                    inst << describe(s.config) << " pair=(" << s.fine.grid[i0] << "," << s.fine.grid[i1] << ")";
                    worst_inst = inst.str();
                }
            }
        t.observe(worst_pair, worst_inst + " M(p) >= coarse M(p) + mean inf");
        t.observe(min_rhs - extremal_actions(s.fine).a_minus, describe(s.config) + " A- >= min_p(...)");

        // Zero-boundary pasted competitor.
        const DPSolution hc = maximize_fixed_bc(s.field, 0.0, 0.0, coarse_opt);
        const HeightProfile pasted = paste_conditional_maximizers(s.field, hc.argmax);
        const double a_pasted = action_of(s.field, pasted).action_per_length;
        const double a_l = s.fine.M_at(0.0, 0.0);
        t.observe(a_pasted - a_l, describe(s.config) + " pasted <= A_L");
        double assembled = action_of(s.field, hc.argmax).action_per_length;
        for (int n = 1; n <= N; ++n) assembled += conditional_interval_max(s.field, hc.argmax, n).value / N;
        t.observe(std::fabs(assembled - a_pasted), describe(s.config) + " pasted decomposition");
    }
    return t.done("pair-wise lower bound, A- bound, pasted competitor <= A_L and its decomposition");
}

CheckResult check_projection(const SuiteOptions& opt) {
    Tracker t("projection-bins", 1e-12);
    // Fixed edge cases of the half-open convention.
    {
        const NetPoint a = project(HeightProfile(4, 4, {5.0, 6.0}), 4);
        const bool ok = a.values == std::vector<long long>{4, 8};
        t.observe(ok ? 0.0 : INFINITY, "l=4 values (5, 6) -> (4, 8)");
    }
    for (std::uint64_t seed : opt.seeds) {
        std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
        for (int i = 0; i < opt.identity_instances; ++i) {
            const int L = 32;
            const int l = 1 << (1 + rng() % 3);
            const HeightProfile h = random_grid_profile(rng, L, l, 0.5, 12.0, false);
            const NetPoint p = project(h, l);
            const std::string inst = "seed=" + std::to_string(seed) + " l=" + std::to_string(l) + " h=" + to_csv_row(h, 0.5);
            double worst = 0.0;
            for (std::size_t k = 0; k < p.values.size(); ++k) {
                const double diff = h.node(static_cast<int>(k)) - static_cast<double>(p.values[k]);
                if (diff >= l / 2.0 || diff < -l / 2.0) worst = INFINITY;
                if (p.values[k] % l != 0) worst = INFINITY;
            }
            if (!(project(p.to_profile(), l) == p)) worst = INFINITY;
            const std::vector<double> dh = per_scale_dirichlet(h);
            const std::vector<double> dp = per_scale_dirichlet(p.to_profile());
            int rho = l;
            for (std::size_t k = 0; k < dh.size(); ++k, rho *= 2) {
                const double excess = std::sqrt(dp[k]) - (std::sqrt(dh[k]) + l / (std::sqrt(2.0) * rho));
                worst = std::max(worst, excess);
            }
            t.observe(worst, inst);
        }
    }
    return t.done("bin membership, idempotence and the per-scale energy bound");
}

CheckResult check_net_count(const SuiteOptions&) {
    Tracker t("net-count", 0.0);
    const NetBallSpec small{2, 1, std::exp(1.0)};
    const BigCount engine = enumerate_net_ball(small);
    const BigCount scan = rectangle_scan_count(small);
    BigCount streamed = 0;
    const std::function<void(const NetPoint&)> sink = [&](const NetPoint&) { ++streamed; };
    enumerate_net_ball(small, &sink);
    t.observe(engine == scan && engine == streamed ? 0.0 : INFINITY,
              "L/l=2 nu=e engine=" + to_string(engine) + " scan=" + to_string(scan) + " stream=" + to_string(streamed));
    for (const NetBallSpec spec : {NetBallSpec{4, 1, 3.0}, NetBallSpec{8, 2, 9.0}}) {
        BigCount s = 0;
        const std::function<void(const NetPoint&)> count_sink = [&](const NetPoint&) { ++s; };
        const BigCount e = enumerate_net_ball(spec, nullptr);
        enumerate_net_ball(spec, &count_sink);
        t.observe(e == s ? 0.0 : INFINITY, "L=" + std::to_string(spec.L) + " l=" + std::to_string(spec.l) +
                                                " nu=" + std::to_string(spec.nu) + " engine=" + to_string(e) + " stream=" + to_string(s));
    }
    return t.done("residue-class count vs rectangle scan and depth-first stream");
}

ValidationReport run_suite(const SuiteOptions& opt, const std::string& profile_name) {
    ValidationReport rep;
    rep.profile = profile_name;
    using Check = CheckResult (*)(const SuiteOptions&);
    const Check checks[] = {
        check_noise_calibration, check_decomposition,    check_orthogonality,       check_linear_pythagoras,
        check_oracle_equivalence, check_restriction_optimality, check_green_identity, check_green_perturbation,
        check_sandwich,          check_two_scale_upper,      check_two_scale_lower,         check_projection,
        check_net_count,
    };
    static const char* const names[] = {
        "noise-calibration", "decomposition-residual", "dirichlet-orthogonality", "linear-part-pythagoras",
        "oracle-equivalence", "restriction-optimality", "green-reproducing", "green-perturbation",
        "sandwich", "two-scale-upper-bins", "two-scale-lower-competitor", "projection-bins", "net-count",
    };
    std::size_t k = 0;
    for (Check c : checks) {
        try {
            rep.checks.push_back(c(opt));
        } catch (const std::exception& e) {
            CheckResult r;
            r.name = names[k];
            r.pass = false;
            r.worst = INFINITY;
            r.instance = "seeds=" + std::to_string(opt.seeds.size());
            r.detail = std::string("exception: ") + e.what();
            rep.checks.push_back(r);
        }
        ++k;
    }
    return rep;
}

ValidationReport validate_all(ValidationProfile profile) {
    return run_suite(suite_options(profile), profile == ValidationProfile::Quick ? "quick" : "full");
}

} // namespace wnaction
