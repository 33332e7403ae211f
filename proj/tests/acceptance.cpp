// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--work-dir DIR] [--reuse] [--replicas N] [--only 1,2,...]
//
// Criteria 5-7 share one default simulation written to DIR/main; --reuse
// skips it when DIR/main already holds a complete run with the same config hash.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wnaction/harness.hpp"
#include "wnaction/net.hpp"
#include "wnaction/oracle_suite.hpp"
#include "wnaction/stats.hpp"

using namespace wnaction;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Clock {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int n) {
    std::vector<std::uint64_t> s;
    for (int i = 0; i < n; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
    return s;
}

std::string summarize(const CheckResult& c) {
    std::string s = c.name + " worst=" + fmt("%.3g", c.worst) + " n=" + std::to_string(c.instances);
    if (!c.pass) s += " reproducer: " + c.instance + (c.detail.empty() ? "" : " (" + c.detail + ")");
    return s;
}

bool run_complete(const fs::path& dir, const RunConfig& cfg) {
    const fs::path echo = dir / "config.json";
    if (!fs::exists(echo)) return false;
    try {
        if (nlohmann::json::parse(read_text_file(echo)).value("config_hash", "") != config_hash(cfg)) return false;
        for (int L : cfg.Ls) {
            const RunTable t = read_run_csv(dir / ("run_L" + std::to_string(L) + ".csv"));
            if (static_cast<int>(t.rows.size()) != cfg.replicas) return false;
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

double max_over_min(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo : INFINITY;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string work = "acceptance_run";
    bool reuse = false;
    int replicas = 200;
    std::vector<int> only;
    app.add_option("--work-dir", work, "scratch directory for run files");
    app.add_flag("--reuse", reuse, "reuse a complete main run with a matching config hash");
    app.add_option("--replicas", replicas, "replicas per L for the main run (default 200)");
    app.add_option("--only", only, "subset of criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const fs::path root = work;
    fs::create_directories(root);
    const auto wanted = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };

    RunConfig main_cfg;  // desk-scale defaults
    main_cfg.replicas = replicas;
    const fs::path main_dir = root / "main";
    std::map<int, RunTable> runs;
    double main_seconds = 0.0;
    bool main_ready = false;
    std::string main_note;
    const auto ensure_main = [&]() {
        if (main_ready) return;
        main_ready = true;
        Clock c;
        if (reuse && run_complete(main_dir, main_cfg)) {
            main_note = "reused run " + config_hash(main_cfg);
        } else {
            fs::remove_all(main_dir);
            simulate(main_cfg, main_dir);
            main_seconds = c.seconds();
            main_note = "simulated in " + fmt("%.0f", main_seconds) + " s";
        }
        runs = load_run_dir(main_dir);
    };

    std::vector<std::pair<int, std::function<Outcome()>>> criteria;

    criteria.emplace_back(1, [&] {
        Clock c;
        SuiteOptions o;
        o.seeds = seed_range(1, 50);
        const CheckResult r = check_oracle_equivalence(o);
        const double t = c.seconds();
        return Outcome{r.pass && t < 10.0, summarize(r) + " time=" + fmt("%.2f", t) + " s (limit 10 s)"};
    });

    criteria.emplace_back(2, [&] {
        Clock c;
        SuiteOptions o;
        o.seeds = seed_range(1, 100);
        o.identity_instances = 10;  // 100 seeds x 10 = 1000 instances per identity
        const std::vector<CheckResult> rs = {check_decomposition(o), check_orthogonality(o), check_linear_pythagoras(o),
                                             check_green_identity(o)};
        const double t = c.seconds();
        bool ok = t < 30.0;
        std::string d;
        for (const CheckResult& r : rs) {
            ok = ok && r.pass && r.instances >= 1000;
            d += summarize(r) + "; ";
        }
        return Outcome{ok, d + "time=" + fmt("%.1f", t) + " s (limit 30 s)"};
    });

    criteria.emplace_back(3, [&] {
        Clock c;
        SuiteOptions o;
        o.seeds = seed_range(1, 20);
        o.calibration_replicas = 500;  // 10^4 replicas
        const CheckResult r = check_noise_calibration(o);
        const double t = c.seconds();
        return Outcome{r.pass && t < 120.0, summarize(r) + " (max z, limit 5) time=" + fmt("%.1f", t) + " s (limit 120 s)"};
    });

    criteria.emplace_back(4, [&] {
        ensure_main();
        Clock c;
        std::size_t rows = 0, bad = 0;
        double worst = -INFINITY;
        std::string first_bad;
        for (const auto& [L, t] : runs) {
            const auto a = t.column("A_L"), ap = t.column("A_plus"), am = t.column("A_minus"), id = t.column("replica");
            std::vector<std::vector<double>> pastes;
            for (int l = 2; l < L; l *= 2) pastes.push_back(t.column("paste_l" + std::to_string(l)));
            for (std::size_t i = 0; i < a.size(); ++i) {
                ++rows;
                double w = std::max(am[i] - a[i], a[i] - ap[i]);
                for (const auto& p : pastes) w = std::max(w, p[i] - a[i]);
                worst = std::max(worst, w);
                if (w > 1e-9) {
                    if (bad++ == 0) first_bad = "L=" + std::to_string(L) + " replica=" + fmt("%.0f", id[i]);
                }
            }
        }
        SuiteOptions o;
        o.seeds = seed_range(1, 20);
        const CheckResult up = check_two_scale_upper(o);
        const CheckResult low = check_two_scale_lower(o);
        const double t = c.seconds();
        std::string d = "rows=" + std::to_string(rows) + " violations=" + std::to_string(bad) + " worst=" + fmt("%.3g", worst);
        if (bad) d += " first: " + first_bad;
        d += "; " + summarize(up) + "; " + summarize(low) + "; check time=" + fmt("%.1f", t) + " s (limit 300 s)";
        return Outcome{rows > 0 && bad == 0 && up.pass && low.pass && t < 300.0, d};
    });

    ScalingFit fit;
    bool have_fit = false;
    criteria.emplace_back(5, [&] {
        ensure_main();
        fit = fit_scaling(scaling_points(runs));
        have_fit = true;
        std::size_t saturated = 0;
        for (const auto& [L, t] : runs)
            for (double s : t.column("cap_saturated")) saturated += s != 0.0;
        std::string d = "a_star=" + fmt("%.5f", fit.a_star) + " +- " + fmt("%.5f", fit.a_star_se) +
                        " intercept=" + fmt("%.5f", fit.intercept) + " max|res|/se=" + fmt("%.2f", fit.max_residual_ratio) +
                        " max jackknife z=" + fmt("%.2f", fit.max_jackknife_ratio) + " (limits 3); means:";
        for (const ScalingPoint& p : fit.points) d += " L" + std::to_string(p.L) + "=" + fmt("%.4f", p.mean);
        d += "; saturated rows=" + std::to_string(saturated) + "; " + main_note;
        const bool time_ok = main_seconds <= 1800.0;
        if (!time_ok) d += " (over the 30 min limit)";
        return Outcome{fit.a_star > 0.0 && fit.max_residual_ratio <= 3.0 && fit.max_jackknife_ratio <= 3.0 && time_ok, d};
    });

    criteria.emplace_back(6, [&] {
        ensure_main();
        if (!have_fit) fit = fit_scaling(scaling_points(runs));
        const RunTable& top = runs.at(64);
        const BandReport rep = equipartition(coarse_action_table(top), fit.a_star);
        const double z = std::fabs(rep.common_slope - fit.a_star) /
                         std::sqrt(rep.common_slope_se * rep.common_slope_se + fit.a_star_se * fit.a_star_se);
        std::string d = "L=64 common slope=" + fmt("%.5f", rep.common_slope) + " +- " + fmt("%.5f", rep.common_slope_se) +
                        " max band z=" + fmt("%.2f", rep.max_band_z) + " slope vs a_star z=" + fmt("%.2f", z) + " (limits 3); bands:";
        for (const Band& b : rep.bands)
            d += " (" + std::to_string(b.l_fine) + "," + std::to_string(b.l_coarse) + ")=" + fmt("%.4f", b.mean);
        d += " telescoping err=" + fmt("%.2g", rep.max_telescoping_error);
        return Outcome{rep.consistent && z <= 3.0 && rep.max_telescoping_error <= 1e-9, d};
    });

    criteria.emplace_back(7, [&] {
        ensure_main();
        std::vector<double> a, h, m, dd;
        std::string d;
        for (int L : {8, 16, 32, 64}) {
            const ConcentrationRow c = concentration(runs.at(L));
            a.push_back(c.centered_A_32);
            h.push_back(c.H_3);
            m.push_back(c.m40_2);
            dd.push_back(c.D_1);
        }
        const double ra = max_over_min(a), rh = max_over_min(h), rm = max_over_min(m), rd = max_over_min(dd);
        const auto list = [](const std::vector<double>& v) {
            std::string s;
            for (double x : v) s += (s.empty() ? "" : "/") + fmt("%.4g", x);
            return s;
        };
        d = "max/min over L=8..64: |A-mean|_3/2 " + fmt("%.2f", ra) + " [" + list(a) + "], |H|_3 " + fmt("%.2f", rh) + " [" +
            list(h) + "], |m40|_2 " + fmt("%.2f", rm) + " [" + list(m) + "], |Dmax|_1 " + fmt("%.2f", rd) + " [" + list(dd) +
            "] (limit < 2)";
        return Outcome{ra < 2.0 && rh < 2.0 && rm < 2.0 && rd < 2.0, d};
    });

    criteria.emplace_back(8, [&] {
        Clock c;
        const std::vector<CountRow> rows = count_net_grid({2, 4, 8}, {3.0, 9.0, 27.0});
        double c0 = 0.0;
        for (const CountRow& r : rows) c0 = std::max(c0, r.ratio);
        bool ok = true;
        for (const CountRow& r : rows)
            ok = ok && static_cast<double>(log_count(r.count)) <= c0 * (r.L / r.l) * std::log(r.nu) + 1e-12;
        const NetBallSpec smallest{2, 1, 3.0};
        const BigCount engine = enumerate_net_ball(smallest);
        const BigCount scan = rectangle_scan_count(smallest);
        const double t = c.seconds();
        std::string d = "C0=" + fmt("%.4f", c0) + " ratios:";
        for (const CountRow& r : rows) d += " (" + std::to_string(r.L) + "," + fmt("%g", r.nu) + ")=" + fmt("%.3f", r.ratio);
        d += "; L/l=2 nu=3 engine=" + to_string(engine) + " scan=" + to_string(scan) + " time=" + fmt("%.1f", t) + " s (limit 300 s)";
        return Outcome{ok && engine == scan && t < 300.0, d};
    });

    criteria.emplace_back(9, [&] {
        RunConfig cfg;
        cfg.Ls = {8, 16};
        cfg.replicas = 6;
        cfg.seed = 7;
        std::vector<std::string> diffs;
        const auto compare = [&](const fs::path& a, const fs::path& b, const std::string& name) {
            if (read_text_file(a) != read_text_file(b)) diffs.push_back(name);
        };
        const fs::path d1 = root / "det1", d2 = root / "det2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        cfg.threads = 1;
        simulate(cfg, d1);
        cfg.threads = 3;
        simulate(cfg, d2);
        for (const char* f : {"config.json", "run_L8.csv", "run_L16.csv"}) compare(d1 / f, d2 / f, f);

        SuiteOptions o;
        o.seeds = {1, 2};
        o.calibration_replicas = 100;
        o.identity_instances = 2;
        if (run_suite(o).to_json() != run_suite(o).to_json()) diffs.push_back("validation report");
        if (count_net_csv(count_net_grid({2, 4}, {3.0, 9.0})) != count_net_csv(count_net_grid({2, 4}, {3.0, 9.0})))
            diffs.push_back("count-net csv");

        // Rows of the main run are reproducible from (config, replica) alone.
        std::size_t rechecked = 0;
        if (main_ready) {
            for (int L : {16, 64}) {
                const std::string text = read_text_file(main_dir / ("run_L" + std::to_string(L) + ".csv"));
                for (std::uint64_t r : {0ULL, 1ULL}) {
                    ++rechecked;
                    const std::string line = run_csv_line(run_replica(main_cfg, L, r), L) + "\n";
                    if (text.find("\n" + line) == std::string::npos)
                        diffs.push_back("main L=" + std::to_string(L) + " replica " + std::to_string(r));
                }
            }
        }
        std::string d = "compared simulate (threads 1 vs 3), validation JSON, count-net CSV, " + std::to_string(rechecked) +
                        " recomputed main-run rows";
        for (const std::string& x : diffs) d += "; differs: " + x;
        return Outcome{diffs.empty(), d};
    });

    bool all = true;
    for (auto& [k, fn] : criteria) {
        if (!wanted(k)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.detail << std::endl;
    }
    std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
    return all ? 0 : 1;
}
