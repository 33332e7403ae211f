#include "wnaction/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wnaction/action.hpp"
#include "wnaction/error.hpp"

namespace wnaction {

namespace {

void require_nonempty(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorKind::EmptySample, "no samples");
}

// Weighted least squares of y on (1, x); returns intercept, slope and their covariance.
struct Wls {
    double intercept = 0.0, slope = 0.0;
    double var_intercept = 0.0, var_slope = 0.0, cov = 0.0;
};

Wls weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(std::fabs(det) > 1e-300)) throw Error(ErrorKind::DegenerateDesign, "all abscissae coincide");
    Wls f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    f.var_slope = sw / det;
    f.var_intercept = sxx / det;
    f.cov = -sx / det;
    return f;
}

} // namespace

Moments moments(std::span<const double> x) {
    require_nonempty(x);
    Moments m;
    m.n = x.size();
    const double n = static_cast<double>(m.n);
    double sum = 0.0;
    for (double v : x) sum += v;
    m.mean = sum / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = m.n > 1 ? m2 * n / (n - 1) : 0.0;
    m.stderr_mean = std::sqrt(m.variance / n);
    m.stderr_variance = std::sqrt(std::max(0.0, (m4 - m2 * m2) / n));
    if (m2 > 0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require_nonempty(a);
    require_nonempty(b);
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    const double ne = n * m / (n + m);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double q = 0.0;
    if (lambda < 0.2) {
        q = 1.0;
    } else {
        for (int k = 1; k <= 100; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            q += (k % 2 == 1 ? 2.0 : -2.0) * term;
            if (term < 1e-16) break;
        }
    }
    return {d, std::clamp(q, 0.0, 1.0)};
}

OrliczEstimate orlicz_norm(std::span<const double> samples, double s) {
    require_nonempty(samples);
    if (!(s >= 1.0)) throw Error(ErrorKind::InvalidArgument, "Orlicz exponent must be >= 1");
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double v) { return std::fabs(v); });
    std::sort(a.begin(), a.end());
    OrliczEstimate est;
    est.s = s;
    est.sample_size = a.size();
    const double mx = a.back();
    if (mx == 0.0) return est;

    const double e = std::exp(1.0);
    const double n = static_cast<double>(a.size());
    const auto feasible = [&](double N) {
        double sum = 0.0;
        for (double v : a) sum += std::exp(std::pow(v / N, s));
        return sum / n <= e;
    };
    double lo = mx / 50.0;
    double hi = mx * 50.0;
    while (feasible(lo)) {
        hi = lo;
        lo /= 50.0;
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    est.norm = hi;
    est.lower = lo;
    est.upper = hi;
    return est;
}

double orlicz_bootstrap_se(std::span<const double> samples, double s, int resamples, std::uint64_t seed) {
    require_nonempty(samples);
    if (resamples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two bootstrap resamples");
    std::mt19937_64 rng(seed);
    std::vector<double> draw(samples.size());
    std::vector<double> norms;
    for (int r = 0; r < resamples; ++r) {
        for (double& v : draw) v = samples[static_cast<std::size_t>(rng() % samples.size())];
        norms.push_back(orlicz_norm(draw, s).norm);
    }
    return std::sqrt(moments(norms).variance);
}

TailReport tail_consistency(std::span<const double> samples, double s) {
    if (samples.size() < 1000) throw Error(ErrorKind::InsufficientSamples, "tail diagnostics need at least 1000 samples");
    TailReport rep;
    rep.norm = orlicz_norm(samples, s).norm;
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double v) { return std::fabs(v); });
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    if (rep.norm == 0.0) {
        rep.vacuous = true;
        rep.note = "all samples are zero";
        return rep;
    }

    // Empirical survival P(|X| >= nu) at each distinct sample value.
    std::vector<double> lx, ly;
    bool any_far = false;
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i > 0 && a[i] == a[i - 1]) continue;
        const double nu = a[i];
        const double exceed = n - static_cast<double>(i);
        const double p = exceed / n;
        if (nu >= 2.0 * rep.norm) {
            any_far = true;
            c = std::min(c, -std::log(p) / std::pow(nu / rep.norm, s));
        }
        if (nu >= 0.5 * rep.norm && exceed >= 10 && p < 1.0) {
            lx.push_back(std::log(nu));
            ly.push_back(std::log(-std::log(p)));
        }
    }
    rep.vacuous = !any_far;
    rep.fitted_c = any_far ? c : 0.0;
    rep.fit_points = lx.size();
    if (lx.size() >= 3 && lx.front() < lx.back()) {
        const Wls f = weighted_line(lx, ly, std::vector<double>(lx.size(), 1.0));
        rep.tail_exponent = f.slope;
        rep.consistent = f.slope >= s / 3.0;
        if (!rep.consistent) rep.largest_violating_nu = a.back();
    } else {
        rep.note = "too few distinct tail points for an exponent fit";
    }
    if (rep.vacuous) rep.note += rep.note.empty() ? "vacuous: no sample reaches 2*norm" : "; vacuous: no sample reaches 2*norm";
    return rep;
}

ScalingFit fit_scaling(std::vector<ScalingPoint> points) {
    std::erase_if(points, [](const ScalingPoint& p) { return p.L <= 2; });
    std::sort(points.begin(), points.end(), [](const ScalingPoint& a, const ScalingPoint& b) { return a.L < b.L; });
    std::vector<int> distinct;
    for (const auto& p : points)
        if (distinct.empty() || distinct.back() != p.L) distinct.push_back(p.L);
    if (distinct.size() < 3) throw Error(ErrorKind::DegenerateDesign, "fit needs at least three distinct L > 2");

    const bool equal = std::any_of(points.begin(), points.end(), [](const ScalingPoint& p) { return !(p.se > 0.0); });
    const auto fit_subset = [&](std::size_t skip) {
        std::vector<double> x, y, w;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i == skip) continue;
            x.push_back(std::log(static_cast<double>(points[i].L)));
            y.push_back(points[i].mean);
            w.push_back(equal ? 1.0 : 1.0 / (points[i].se * points[i].se));
        }
        return weighted_line(x, y, w);
    };

    ScalingFit out;
    out.points = points;
    const Wls f = fit_subset(points.size());
    out.a_star = f.slope;
    out.intercept = f.intercept;
    out.a_star_se = equal ? 0.0 : std::sqrt(f.var_slope);
    out.intercept_se = equal ? 0.0 : std::sqrt(f.var_intercept);
    for (const auto& p : points) {
        const double x = std::log(static_cast<double>(p.L));
        const double r = p.mean - (f.intercept + f.slope * x);
        const double var_fit = equal ? 0.0 : f.var_intercept + 2.0 * x * f.cov + x * x * f.var_slope;
        const double se = std::sqrt(p.se * p.se + var_fit);
        out.residuals.push_back(r);
        out.residual_se.push_back(se);
        out.max_residual_ratio = std::max(out.max_residual_ratio, se > 0.0 ? std::fabs(r) / se : (r == 0.0 ? 0.0 : INFINITY));
    }
    if (distinct.size() >= 3) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Wls g = fit_subset(i);
            const double se = equal ? 0.0 : std::sqrt(g.var_slope);
            out.jackknife_slopes.push_back(g.slope);
            out.jackknife_se.push_back(se);
            const double comb = std::sqrt(se * se + out.a_star_se * out.a_star_se);
            const double diff = std::fabs(g.slope - out.a_star);
            out.max_jackknife_ratio = std::max(out.max_jackknife_ratio, comb > 0.0 ? diff / comb : (diff < 1e-12 ? 0.0 : INFINITY));
        }
    }
    return out;
}

Band band_increment(const std::map<int, std::vector<double>>& coarse_actions, int l_fine, int l_coarse, double a_star) {
    const auto f = coarse_actions.find(l_fine);
    const auto c = coarse_actions.find(l_coarse);
    if (f == coarse_actions.end() || c == coarse_actions.end())
        throw Error(ErrorKind::MissingData, "coarse actions missing for l = " + std::to_string(f == coarse_actions.end() ? l_fine : l_coarse));
    if (f->second.size() != c->second.size()) throw Error(ErrorKind::MissingData, "chain members have different replica counts");
    std::vector<double> inc(f->second.size());
    for (std::size_t r = 0; r < inc.size(); ++r) inc[r] = f->second[r] - c->second[r];
    const Moments m = moments(inc);
    Band b;
    b.l_fine = l_fine;
    b.l_coarse = l_coarse;
    b.mean = m.mean;
    b.se = m.stderr_mean;
    b.predicted = a_star * std::log(static_cast<double>(l_coarse) / l_fine);
    return b;
}

BandReport equipartition(const std::map<int, std::vector<double>>& coarse_actions, double a_star) {
    if (coarse_actions.empty()) throw Error(ErrorKind::MissingData, "no coarse actions");
    const int L = coarse_actions.rbegin()->first;
    if (!is_power_of_two(L)) throw Error(ErrorKind::InvalidScale, "chain must be dyadic");
    for (int l = 1; l <= L; l *= 2)
        if (!coarse_actions.count(l)) throw Error(ErrorKind::MissingData, "chain member l = " + std::to_string(l) + " missing");

    BandReport rep;
    for (int l = 1; l < L; l *= 2) rep.bands.push_back(band_increment(coarse_actions, l, 2 * l, a_star));

    const std::vector<double>& full = coarse_actions.at(1);
    const std::vector<double>& top = coarse_actions.at(L);
    for (std::size_t r = 0; r < full.size(); ++r) {
        double sum = 0.0;
        for (int l = 1; l < L; l *= 2) sum += coarse_actions.at(l)[r] - coarse_actions.at(2 * l)[r];
        rep.max_telescoping_error = std::max(rep.max_telescoping_error, std::fabs(sum - (full[r] - top[r])));
    }

    const double ln2 = std::log(2.0);
    double sw = 0.0, swx = 0.0;
    bool any_zero = false;
    for (const Band& b : rep.bands) any_zero = any_zero || !(b.se > 0.0);
    for (const Band& b : rep.bands) {
        const double w = any_zero ? 1.0 : 1.0 / ((b.se / ln2) * (b.se / ln2));
        sw += w;
        swx += w * b.mean / ln2;
    }
    rep.common_slope = swx / sw;
    rep.common_slope_se = any_zero ? 0.0 : std::sqrt(1.0 / sw);
    for (const Band& b : rep.bands) {
        const double se = b.se / ln2;
        const double comb = std::sqrt(se * se + rep.common_slope_se * rep.common_slope_se);
        const double diff = std::fabs(b.mean / ln2 - rep.common_slope);
        rep.max_band_z = std::max(rep.max_band_z, comb > 0.0 ? diff / comb : (diff < 1e-12 ? 0.0 : INFINITY));
    }
    rep.consistent = rep.max_band_z <= 3.0;
    return rep;
}

double midpoint_deviation(const SweepResult& sweep) {
    double h = 0.0;
    for (std::size_t i0 = 0; i0 < sweep.side(); ++i0)
        for (std::size_t i1 = 0; i1 < sweep.side(); ++i1) {
            const double mid = sweep.midpoint[sweep.pair(i0, i1)];
            h = std::max(h, std::fabs(mid - 0.5 * (sweep.grid[i0] + sweep.grid[i1])) / sweep.L);
        }
    return h;
}

std::map<int, double> dirichlet_equipartition(const std::vector<std::map<int, double>>& per_replica_max) {
    if (per_replica_max.empty()) throw Error(ErrorKind::EmptySample, "no replicas");
    std::map<int, std::vector<double>> by_scale;
    for (const auto& rep : per_replica_max)
        for (const auto& [rho, v] : rep) by_scale[rho].push_back(v);
    std::map<int, double> out;
    for (const auto& [rho, v] : by_scale) out[rho] = orlicz_norm(v, 1.0).norm;
    return out;
}

double linear_action_statistic(const SweepResult& sweep) {
    double mx = 0.0;
    for (double v : sweep.linear_action) mx = std::max(mx, std::fabs(v));
    return mx;
}

double linear_action_statistic(const NoiseField& field, double window, double db) {
    const int L = field.config().L;
    const std::vector<double> grid = boundary_grid(window, db);
    double mx = 0.0;
    for (double y0 : grid)
        for (double y1 : grid) {
            const HeightProfile a = linear_part(y0, y1, L);
            mx = std::max(mx, std::fabs(noise_integral(field, a) - dirichlet(a)) / L);
        }
    return mx;
}

} // namespace wnaction
